//! The 50-string corpus: hand labels and the committed golden JSONL.

mod common;

use std::collections::BTreeSet;

use odkg::emr::ingredients_of;
use odkg::par::Execution;
use odkg::parser::{MatchStatus, Normalizer};

fn corpus() -> Vec<String> {
    std::fs::read_to_string(common::fixtures().join("drug_strings.txt"))
        .unwrap()
        .lines()
        .map(String::from)
        .collect()
}

#[test]
fn corpus_and_labels_line_up() {
    let labels = common::labels();
    let corpus = corpus();
    assert_eq!(corpus.len(), 50);
    assert_eq!(labels.len(), 50);
    for (l, raw) in labels.iter().zip(&corpus) {
        assert_eq!(&l.raw, raw);
    }
    for s in [
        "Duramorph 10mg/10ml EA",
        "Morphine Sulfate (Concentrate) 10 mg/0.5ml OR Soln",
        "Roxanol Liquid 120ml",
    ] {
        assert!(corpus.iter().any(|c| c == s), "{s}");
    }
}

#[test]
fn parses_match_hand_labels() {
    let p = common::pipeline();
    let n = Normalizer::new(&p.graph, &p.lexicon, &p.vocab);
    let mut failures = Vec::new();
    for l in common::labels() {
        let line = n.run(&l.raw);
        let names: Vec<String> = line.name_matches.iter().map(|m| m.name.clone()).collect();
        let strength = line
            .strength
            .as_ref()
            .map(|s| s.to_string())
            .unwrap_or_default();
        let ingredients: BTreeSet<String> = ingredients_of(&p.graph, &line.matched_nodes)
            .into_iter()
            .map(|id| p.graph.node(id).unwrap().label.clone())
            .collect();
        let got = (
            names,
            strength,
            line.form.clone().unwrap_or_default(),
            line.route.clone().unwrap_or_default(),
            ingredients,
            !line.cuis.is_empty(),
            !line.rxcuis.is_empty(),
        );
        let want = (
            l.names.clone(),
            l.strength.clone(),
            l.form.clone(),
            l.route.clone(),
            l.ingredients.iter().cloned().collect::<BTreeSet<_>>(),
            l.cui_mapped,
            l.rxcui_mapped,
        );
        if got != want {
            failures.push(format!("{}\n  got  {got:?}\n  want {want:?}", l.raw));
        }
        assert_eq!(
            line.status == MatchStatus::Mapped,
            l.cui_mapped || l.rxcui_mapped
        );
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn golden_jsonl_is_byte_identical() {
    let p = common::pipeline();
    let n = Normalizer::new(&p.graph, &p.lexicon, &p.vocab);
    let mut out = String::new();
    for line in n.run_batch(&corpus(), Execution::Parallel) {
        out.push_str(&line.to_json());
        out.push('\n');
    }
    let path = common::golden().join("normalize.jsonl");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out).unwrap();
    }
    let golden = std::fs::read_to_string(&path).expect("golden jsonl present");
    for (i, (a, b)) in out.lines().zip(golden.lines()).enumerate() {
        assert_eq!(a, b, "line {}", i + 1);
    }
    assert_eq!(out, golden);
}

#[test]
fn name_spans_slice_the_raw_string() {
    let p = common::pipeline();
    let n = Normalizer::new(&p.graph, &p.lexicon, &p.vocab);
    for raw in corpus() {
        let line = n.run(&raw);
        for m in &line.name_matches {
            assert_eq!(&raw[m.start..m.end], m.text);
            assert!(p.lexicon.get(&m.name).is_some());
        }
        let upper = n.run(&raw.to_uppercase());
        assert_eq!(upper.cuis, line.cuis, "{raw}");
        assert_eq!(upper.rxcuis, line.rxcuis, "{raw}");
        assert_eq!(upper.matched_nodes, line.matched_nodes, "{raw}");
    }
}
