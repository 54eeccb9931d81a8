#![allow(dead_code)]

use std::path::PathBuf;

use odkg::parser::{lexicon_from_graph, Vocabularies};
use odkg::{build_odkg, BuildConfig, BuildReport, NameLexicon, OdkgGraph, TerminologyStore};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn golden() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn store() -> TerminologyStore {
    let f = fixtures();
    TerminologyStore::from_tsv(
        f.join("atc.tsv"),
        f.join("concepts.tsv"),
        f.join("relations.tsv"),
    )
    .expect("fixture loads")
}

pub fn build() -> (OdkgGraph, BuildReport) {
    build_odkg(&store(), &BuildConfig::default()).expect("fixture builds")
}

pub fn manifest() -> serde_json::Value {
    read_json("manifest.json")
}

pub fn emr_manifest() -> serde_json::Value {
    read_json("emr_manifest.json")
}

fn read_json(name: &str) -> serde_json::Value {
    let s = std::fs::read_to_string(fixtures().join(name)).unwrap();
    serde_json::from_str(&s).unwrap()
}

pub struct Pipeline {
    pub graph: OdkgGraph,
    pub lexicon: NameLexicon,
    pub vocab: Vocabularies,
}

pub fn pipeline() -> Pipeline {
    let (graph, _) = build();
    let lexicon = lexicon_from_graph(&graph);
    Pipeline {
        graph,
        lexicon,
        vocab: Vocabularies::default(),
    }
}

/// Rows of `parse_labels.tsv`, header dropped.
pub struct Label {
    pub raw: String,
    pub names: Vec<String>,
    pub strength: String,
    pub form: String,
    pub route: String,
    pub ingredients: Vec<String>,
    pub cui_mapped: bool,
    pub rxcui_mapped: bool,
}

pub fn labels() -> Vec<Label> {
    let s = std::fs::read_to_string(fixtures().join("parse_labels.tsv")).unwrap();
    let split = |f: &str| -> Vec<String> {
        f.split(';')
            .filter(|x| !x.is_empty())
            .map(String::from)
            .collect()
    };
    s.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split('\t').collect();
            assert_eq!(f.len(), 8, "{line}");
            Label {
                raw: f[0].into(),
                names: split(f[1]),
                strength: f[2].into(),
                form: f[3].into(),
                route: f[4].into(),
                ingredients: split(f[5]),
                cui_mapped: f[6] == "1",
                rxcui_mapped: f[7] == "1",
            }
        })
        .collect()
}
