use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{parse, NameMatch, ParsedDrugString, Span, StrengthSpec, Vocabularies};
use crate::graph::{NodeId, NodeKind, OdkgGraph};
use crate::par::Execution;
use crate::terminology::{NameLexicon, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatchStatus {
    Mapped,
    Unmapped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationResult {
    pub raw: String,
    pub cuis: BTreeSet<String>,
    pub rxcuis: BTreeSet<String>,
    pub matched_nodes: BTreeSet<NodeId>,
    pub status: MatchStatus,
}

/// Maps a parsed string to identifiers.
///
/// Every code the lexicon lists under a matched name contributes: its CUI (if
/// known) to `cuis`, RxNorm codes to `rxcuis`, and the graph node carrying the
/// code, when there is one, to `matched_nodes`.
pub fn normalize(
    parsed: &ParsedDrugString,
    lexicon: &NameLexicon,
    graph: &OdkgGraph,
) -> NormalizationResult {
    let mut cuis = BTreeSet::new();
    let mut rxcuis = BTreeSet::new();
    let mut matched_nodes = BTreeSet::new();
    for m in &parsed.name_matches {
        for code in lexicon.get(&m.name).into_iter().flatten() {
            if let Some(cui) = lexicon.cui_of(code) {
                cuis.insert(cui.to_string());
            }
            if code.source == Source::RxNorm {
                rxcuis.insert(code.code.clone());
            }
            if let Some(id) = graph.node_by_code(code) {
                matched_nodes.insert(id);
            }
        }
    }
    let status = if cuis.is_empty() && rxcuis.is_empty() {
        MatchStatus::Unmapped
    } else {
        MatchStatus::Mapped
    };
    NormalizationResult {
        raw: parsed.raw.clone(),
        cuis,
        rxcuis,
        matched_nodes,
        status,
    }
}

/// A lexicon over the labels of every coded node in the graph.
pub fn lexicon_from_graph(graph: &OdkgGraph) -> NameLexicon {
    let mut lex = NameLexicon::new();
    for n in graph.nodes().iter().filter(|n| n.kind != NodeKind::CuiHub) {
        for code in &n.codes {
            lex.insert(&n.label, code.clone(), n.cui.as_deref());
        }
    }
    lex
}

/// One line of batch output: the parse and its normalization side by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedLine {
    pub raw: String,
    pub name_matches: Vec<NameMatch>,
    pub strength: Option<StrengthSpec>,
    pub form: Option<String>,
    pub route: Option<String>,
    pub residue: Vec<Span>,
    pub cuis: BTreeSet<String>,
    pub rxcuis: BTreeSet<String>,
    pub matched_nodes: BTreeSet<NodeId>,
    pub status: MatchStatus,
}

impl NormalizedLine {
    pub fn new(parsed: ParsedDrugString, result: NormalizationResult) -> Self {
        NormalizedLine {
            raw: parsed.raw,
            name_matches: parsed.name_matches,
            strength: parsed.strength,
            form: parsed.form,
            route: parsed.route,
            residue: parsed.residue,
            cuis: result.cuis,
            rxcuis: result.rxcuis,
            matched_nodes: result.matched_nodes,
            status: result.status,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("line serializes")
    }
}

/// Parser and normalizer bound to one graph, lexicon and vocabulary set.
#[derive(Debug, Clone, Copy)]
pub struct Normalizer<'a> {
    pub graph: &'a OdkgGraph,
    pub lexicon: &'a NameLexicon,
    pub vocab: &'a Vocabularies,
}

impl<'a> Normalizer<'a> {
    pub fn new(graph: &'a OdkgGraph, lexicon: &'a NameLexicon, vocab: &'a Vocabularies) -> Self {
        Normalizer {
            graph,
            lexicon,
            vocab,
        }
    }

    pub fn run(&self, raw: &str) -> NormalizedLine {
        let parsed = parse(raw, self.lexicon, self.vocab);
        let result = normalize(&parsed, self.lexicon, self.graph);
        NormalizedLine::new(parsed, result)
    }

    /// Normalizes a batch. Output order equals input order.
    pub fn run_batch<S: AsRef<str> + Sync>(
        &self,
        raws: &[S],
        exec: Execution,
    ) -> Vec<NormalizedLine> {
        exec.map(raws, |s| self.run(s.as_ref()))
    }
}
