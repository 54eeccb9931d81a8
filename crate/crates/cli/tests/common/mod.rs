#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_odkg")
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

pub fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden")
}

pub fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

pub fn read_json(path: impl AsRef<Path>) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn odkg<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(bin())
        .args(args)
        .env_remove("ODKG_VOCAB_DIR")
        .output()
        .expect("odkg runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Builds the fixture graph into `dir/graph.json` and returns its path.
pub fn build_into(dir: &Path) -> PathBuf {
    let out = dir.join("graph.json");
    let o = odkg([
        "build",
        "--atc",
        &fixture("atc.tsv"),
        "--concepts",
        &fixture("concepts.tsv"),
        "--relations",
        &fixture("relations.tsv"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    out
}

/// Hand-labeled ingredient labels for each corpus string.
pub fn labeled_ingredients() -> std::collections::HashMap<String, Vec<String>> {
    let text = std::fs::read_to_string(fixtures().join("parse_labels.tsv")).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            let ing = f[5]
                .split(';')
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            (f[0].to_string(), ing)
        })
        .collect()
}

/// Unique-record counts per group, computed in one pass over the EMR CSV.
/// Keys are rendered the way the CSV export renders them.
pub fn group_by_oracle(keys: &str) -> std::collections::BTreeMap<Vec<String>, usize> {
    use std::collections::{BTreeMap, BTreeSet};
    let labels = labeled_ingredients();
    let keys: Vec<&str> = keys.split(',').collect();
    let mut rdr = csv::Reader::from_path(fixtures().join("emr.csv")).unwrap();
    let mut groups: BTreeMap<Vec<String>, BTreeSet<String>> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let ingredients = &labels[&rec[1]];
        let per: Vec<Option<&String>> = if keys.contains(&"ingredient") {
            ingredients.iter().map(Some).collect()
        } else if ingredients.is_empty() {
            vec![]
        } else {
            vec![None]
        };
        for ing in per {
            let row = keys
                .iter()
                .map(|k| match *k {
                    "ingredient" => ing.unwrap().clone(),
                    "state" => rec[2].to_string(),
                    "subregion" => rec[3].to_string(),
                    "census_region" => region(&rec[2]).to_string(),
                    "year" => rec[4].to_string(),
                    other => panic!("unknown key {other}"),
                })
                .collect();
            groups.entry(row).or_default().insert(rec[0].to_string());
        }
    }
    groups.into_iter().map(|(k, v)| (k, v.len())).collect()
}

fn region(state: &str) -> &'static str {
    const NORTHEAST: [&str; 9] = ["CT", "ME", "MA", "NH", "RI", "VT", "NJ", "NY", "PA"];
    const MIDWEST: [&str; 12] = [
        "IL", "IN", "MI", "OH", "WI", "IA", "KS", "MN", "MO", "NE", "ND", "SD",
    ];
    const WEST: [&str; 13] = [
        "AZ", "CO", "ID", "MT", "NV", "NM", "UT", "WY", "AK", "CA", "HI", "OR", "WA",
    ];
    if NORTHEAST.contains(&state) {
        "Northeast"
    } else if MIDWEST.contains(&state) {
        "Midwest"
    } else if WEST.contains(&state) {
        "West"
    } else {
        "South"
    }
}

/// Parses CSV export text into its header and key rows with their final count column.
pub fn parse_export(text: &str) -> (Vec<String>, std::collections::BTreeMap<Vec<String>, usize>) {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let mut rows = std::collections::BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let n = rec.len();
        let key: Vec<String> = rec.iter().take(n - 1).map(String::from).collect();
        assert!(rows.insert(key, rec[n - 1].parse().unwrap()).is_none());
    }
    (header, rows)
}
