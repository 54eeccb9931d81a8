mod common;

use std::process::Command;

use common::{build_into, code, fixture, odkg, stderr, stdout};

#[test]
fn help_exits_zero_and_documents_flags() {
    let cases: [(&[&str], &[&str]); 7] = [
        (
            &["build"],
            &[
                "--atc",
                "--concepts",
                "--relations",
                "--rrf-conso",
                "--rrf-rel",
                "--config",
                "--seed",
                "--relation-whitelist",
                "--allow-cycles",
                "--max-expansion-rounds",
                "--out",
            ],
        ),
        (
            &["query", "descendants"],
            &["--graph", "--node", "--code", "--json"],
        ),
        (
            &["query", "hops"],
            &["--graph", "--node", "--code", "--rel", "--json"],
        ),
        (
            &["query", "rollup"],
            &["--graph", "--node", "--code", "--json"],
        ),
        (&["query", "stats"], &["--graph", "--json"]),
        (&["normalize"], &["--graph", "--input", "--out"]),
        (
            &["stats"],
            &[
                "--graph",
                "--emr",
                "--group-by",
                "--min-count",
                "--trend",
                "--format",
                "--out",
            ],
        ),
    ];
    for (cmd, flags) in cases {
        let mut args = cmd.to_vec();
        args.push("--help");
        let out = odkg(&args);
        assert_eq!(code(&out), 0, "{cmd:?}");
        let help = stdout(&out);
        for f in flags {
            assert!(help.contains(f), "{cmd:?} help lacks {f}");
        }
    }
    assert_eq!(code(&odkg(["--help"])), 0);
    assert_eq!(code(&odkg(["query", "--help"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&odkg(["frobnicate"])), 1);
    assert_eq!(code(&odkg(["build", "--atc", "x", "--out", "y"])), 1);
    assert_eq!(code(&odkg(["query", "hops", "--graph", "g.json"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let g = build_into(dir.path());
    let g = g.to_str().unwrap();
    let emr = fixture("emr.csv");
    let out = odkg(["stats", "--graph", g, "--emr", &emr, "--group-by", "county"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("county"));
    let out = odkg([
        "stats",
        "--graph",
        g,
        "--emr",
        &emr,
        "--group-by",
        "state",
        "--trend",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        code(&odkg([
            "stats", "--graph", g, "--emr", &emr, "--format", "xml"
        ])),
        1
    );
}

#[test]
fn rrf_build_matches_tsv_build() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = std::fs::read(build_into(dir.path())).unwrap();
    let rrf = dir.path().join("rrf.json");
    let out = odkg([
        "build",
        "--rrf-conso",
        &fixture("rrf/MRCONSO.RRF"),
        "--rrf-rel",
        &fixture("rrf/MRREL.RRF"),
        "--out",
        rrf.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(std::fs::read(rrf).unwrap(), tsv);
    assert!(stderr(&out).contains("expansion rounds"));
}

#[test]
fn build_config_and_flag_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("g.json");
    let base = |extra: &[&str]| {
        let (atc, concepts, relations) = (
            fixture("atc.tsv"),
            fixture("concepts.tsv"),
            fixture("relations.tsv"),
        );
        let mut args = vec![
            "build".to_string(),
            "--atc".into(),
            atc,
            "--concepts".into(),
            concepts,
            "--relations".into(),
            relations,
        ];
        args.extend(extra.iter().map(|s| s.to_string()));
        odkg(args)
    };
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "seed_atc_codes = [\"N02A\", \"N99ZZ\"]\n").unwrap();
    let out = base(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("N99ZZ"));
    assert!(!out_path.exists());

    std::fs::write(&cfg, "seeds = [\"N02A\"]\n").unwrap();
    let out = base(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2, "unknown config keys are rejected");

    let out = base(&[
        "--seed",
        "N02A",
        "--relation-whitelist",
        "has_tradename",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let graph = odkg::graph::import_graph(&out_path).unwrap();
    assert!(graph
        .edges()
        .iter()
        .all(|e| !e.rel.is_property() || e.rel == odkg::EdgeKind::HasTradename));

    let out = base(&["--out", dir.path().join("missing/g.json").to_str().unwrap()]);
    assert_eq!(code(&out), 4);

    let out = odkg([
        "build",
        "--atc",
        "/nonexistent/atc.tsv",
        "--concepts",
        "c",
        "--relations",
        "r",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);

    let bad = dir.path().join("atc.tsv");
    std::fs::write(&bad, "code\tparent\tlabel\nN02A\tN99\tOpioids\n").unwrap();
    let out = odkg([
        "build",
        "--atc",
        bad.to_str().unwrap(),
        "--concepts",
        &fixture("concepts.tsv"),
        "--relations",
        &fixture("relations.tsv"),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn queries() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_into(dir.path());
    let g = g.to_str().unwrap();

    let out = odkg(["query", "descendants", "--graph", g, "--code", "N02AA01"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());

    let out = odkg([
        "query",
        "descendants",
        "--graph",
        g,
        "--code",
        "ATC:N02AA",
        "--json",
    ]);
    let nodes: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(nodes.iter().any(|n| n["label"] == "morphine"));
    assert!(nodes.iter().all(|n| n["kind"] == "AtcClass"));

    let out = odkg(["query", "rollup", "--graph", g, "--node", "embeda"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let labels: Vec<String> = stdout(&out)
        .lines()
        .map(|l| l.rsplit('\t').next().unwrap().to_string())
        .collect();
    assert_eq!(labels, ["Morphine", "Naltrexone"]);

    let out = odkg([
        "query",
        "hops",
        "--graph",
        g,
        "--code",
        "RXNORM:7052",
        "--rel",
        "has_tradename",
    ]);
    assert_eq!(stdout(&out).lines().count(), 6);
    assert!(stdout(&out)
        .lines()
        .all(|l| l.starts_with("has_tradename\t")));

    let out = odkg(["query", "hops", "--graph", g, "--node", "No Such Drug"]);
    assert_eq!(code(&out), 2);
    let out = odkg(["query", "descendants", "--graph", g, "--node", "Morphine"]);
    assert_eq!(code(&out), 2, "an RxNorm node has no ATC descendants");
    let out = odkg(["query", "stats", "--graph", "/nonexistent/g.json"]);
    assert_eq!(code(&out), 4);

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"nodes\": [").unwrap();
    assert_eq!(
        code(&odkg([
            "query",
            "stats",
            "--graph",
            broken.to_str().unwrap()
        ])),
        2
    );
    std::fs::write(
        &broken,
        r#"{"nodes":[],"edges":[{"src":0,"rel":"has_form","dst":1}]}"#,
    )
    .unwrap();
    assert_eq!(
        code(&odkg([
            "query",
            "stats",
            "--graph",
            broken.to_str().unwrap()
        ])),
        3
    );

    let text = stdout(&odkg(["query", "stats", "--graph", g]));
    assert!(text.contains("total edges") && text.contains("382"));
}

#[test]
fn normalize_streams_line_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_into(dir.path());
    let g = g.to_str().unwrap();
    let input = dir.path().join("in.txt");

    std::fs::write(
        &input,
        "Duramorph 10mg/10ml EA\nXYZZY 5\nRoxanol Liquid 120ml\n",
    )
    .unwrap();
    let out = odkg([
        "normalize",
        "--graph",
        g,
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1]["status"], "Unmapped");
    assert_eq!(lines[2]["form"], "liquid");

    std::fs::write(&input, "").unwrap();
    let out = odkg([
        "normalize",
        "--graph",
        g,
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());

    std::fs::write(&input, b"Kadian 20mg\r\n\xff\xfe\n\nMS Contin 30mg").unwrap();
    let out = odkg([
        "normalize",
        "--graph",
        g,
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["raw"], "Kadian 20mg");
    assert_eq!(lines[1]["status"], "Unmapped");
    assert_eq!(lines[2]["raw"], "");
    assert_eq!(lines[3]["status"], "Mapped");

    let out = odkg(["normalize", "--graph", g, "--input", "/nonexistent/in.txt"]);
    assert_eq!(code(&out), 4);
    let out = odkg([
        "normalize",
        "--graph",
        g,
        "--input",
        input.to_str().unwrap(),
        "--out",
        "/nonexistent/o.jsonl",
    ]);
    assert_eq!(code(&out), 4);
}

#[test]
fn normalize_parallel_and_sequential_agree() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_into(dir.path());
    let g = g.to_str().unwrap();
    let corpus = fixture("drug_strings.txt");
    let text = std::fs::read_to_string(&corpus).unwrap().repeat(400);
    let input = dir.path().join("in.txt");
    std::fs::write(&input, &text).unwrap();
    let par = odkg([
        "normalize",
        "--graph",
        g,
        "--input",
        input.to_str().unwrap(),
    ]);
    let seq = odkg([
        "normalize",
        "--graph",
        g,
        "--input",
        input.to_str().unwrap(),
        "--sequential",
    ]);
    assert_eq!(par.stdout, seq.stdout);
    assert_eq!(stdout(&par).lines().count(), 20_000);
}

#[test]
fn vocab_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_into(dir.path());
    let vocab = dir.path().join("vocab");
    std::fs::create_dir(&vocab).unwrap();
    std::fs::write(vocab.join("forms.txt"), "vial\n").unwrap();
    std::fs::write(vocab.join("routes.txt"), "oral\n").unwrap();
    let input = dir.path().join("in.txt");
    std::fs::write(&input, "Duramorph 10 mg vial\nDuramorph 10 mg tab\n").unwrap();
    let out = Command::new(common::bin())
        .args([
            "normalize",
            "--graph",
            g.to_str().unwrap(),
            "--input",
            input.to_str().unwrap(),
        ])
        .env("ODKG_VOCAB_DIR", &vocab)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["form"], "vial");
    assert!(lines[1]["form"].is_null());

    let out = Command::new(common::bin())
        .args([
            "normalize",
            "--graph",
            g.to_str().unwrap(),
            "--input",
            input.to_str().unwrap(),
        ])
        .env("ODKG_VOCAB_DIR", dir.path().join("nope"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 4);
}

#[test]
fn stats_exports() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_into(dir.path());
    let g = g.to_str().unwrap();
    let emr = fixture("emr.csv");

    let out = odkg([
        "stats",
        "--graph",
        g,
        "--emr",
        &emr,
        "--group-by",
        "ingredient,state,year",
    ]);
    assert_eq!(code(&out), 0);
    let (_, rows) = common::parse_export(&stdout(&out));
    assert_eq!(rows, common::group_by_oracle("ingredient,state,year"));
    assert!(stderr(&out).contains("mapped to >=1 CUI"));

    let path = dir.path().join("empty.json");
    let out = odkg([
        "stats",
        "--graph",
        g,
        "--emr",
        &emr,
        "--min-count",
        "10000",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "[]");
    let out = odkg(["stats", "--graph", g, "--emr", &emr, "--min-count", "10000"]);
    assert_eq!(stdout(&out), "ingredient,state,year,unique_prescriptions\n");

    let out = odkg([
        "stats",
        "--graph",
        g,
        "--emr",
        &emr,
        "--group-by",
        "ingredient,state,subregion,year",
        "--format",
        "json",
    ]);
    let cells: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    let miami = cells
        .iter()
        .find(|c| {
            c["ingredient"] == "Fentanyl"
                && c["state"] == "FL"
                && c["subregion"] == "Miami"
                && c["year"] == 2012
        })
        .unwrap();
    let m = common::read_json(common::fixtures().join("emr_manifest.json"));
    assert_eq!(miami["unique_prescriptions"], m["fentanyl_fl_miami_2012"]);

    let out = odkg([
        "stats",
        "--graph",
        g,
        "--emr",
        &emr,
        "--out",
        "/nonexistent/s.csv",
    ]);
    assert_eq!(code(&out), 4);
}

#[test]
fn stats_input_errors_name_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_into(dir.path());
    let g = g.to_str().unwrap();
    let emr = dir.path().join("emr.csv");
    let header = "record_id,drug_string,state,subregion,year\n";
    let cases = [
        format!("{header}r1,Kadian 20mg,FL,Miami,2012\nr2,Kadian 20mg,ZZ,Nowhere,2012\n"),
        format!("{header}r1,Kadian 20mg,FL,Miami,2012\nr1,Kadian 20mg,FL,Miami,2013\n"),
        format!("{header}r1,Kadian 20mg,FL,Miami,twenty\n"),
        "id,drug,state\n".to_string(),
    ];
    for body in cases {
        std::fs::write(&emr, &body).unwrap();
        let out = odkg(["stats", "--graph", g, "--emr", emr.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{body}");
        assert!(stderr(&out).contains("emr.csv"), "{}", stderr(&out));
    }
    std::fs::write(
        &emr,
        format!("{header}r1,Kadian 20mg,FL,Miami,2012\nr2,Kadian 20mg,ZZ,Nowhere,2012\n"),
    )
    .unwrap();
    let out = odkg(["stats", "--graph", g, "--emr", emr.to_str().unwrap()]);
    assert!(stderr(&out).contains(":3:"), "{}", stderr(&out));
    assert_eq!(
        code(&odkg(["stats", "--graph", g, "--emr", "/nonexistent.csv"])),
        4
    );
}

#[test]
fn writes_only_named_paths() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_into(dir.path());
    let out_path = dir.path().join("cells.csv");
    let run = Command::new(common::bin())
        .current_dir(dir.path())
        .args([
            "stats",
            "--graph",
            g.to_str().unwrap(),
            "--emr",
            &fixture("emr.csv"),
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(code(&run), 0);
    assert!(run.stdout.is_empty());
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["cells.csv", "graph.json"]);
}
