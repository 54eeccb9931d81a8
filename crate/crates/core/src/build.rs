//! Graph construction: ATC seed closure, CUI bridge into RxNorm, fixpoint
//! expansion over the property relations, then materialization.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    graph_stats, Edge, EdgeKind, GraphError, Node, NodeId, NodeKind, OdkgGraph, Violation,
};
use crate::terminology::{RelationRecord, RelationType, Source, SourceCode, TerminologyStore};

pub const DEFAULT_SEEDS: [&str; 5] = ["N02A", "N01AH", "R05DA", "N07BC", "A06AH"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildConfig {
    pub seed_atc_codes: Vec<String>,
    pub relation_whitelist: BTreeSet<EdgeKind>,
    pub allow_cycles: bool,
    pub max_expansion_rounds: u32,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            seed_atc_codes: DEFAULT_SEEDS.iter().map(|s| s.to_string()).collect(),
            relation_whitelist: EdgeKind::PROPERTIES.into_iter().collect(),
            allow_cycles: false,
            max_expansion_rounds: 32,
        }
    }
}

impl BuildConfig {
    fn check(&self) -> Result<(), BuildError> {
        if self.seed_atc_codes.is_empty() {
            return Err(BuildError::InvalidConfig("seed list is empty".into()));
        }
        if self.max_expansion_rounds == 0 {
            return Err(BuildError::InvalidConfig(
                "max_expansion_rounds must be positive".into(),
            ));
        }
        if let Some(k) = self.relation_whitelist.iter().find(|k| !k.is_property()) {
            return Err(BuildError::InvalidConfig(format!(
                "{k} cannot appear in the relation whitelist"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("seed ATC code {0} is not in the loaded ATC data")]
    MissingSeed(String),
    #[error("invalid build configuration: {0}")]
    InvalidConfig(String),
    #[error("expansion still growing after {rounds} rounds")]
    ExpansionBudgetExceeded { rounds: u32 },
    #[error("graph validation failed with {} violation(s): {}", .violations.len(), first(.violations))]
    ValidationFailed { violations: Vec<Violation> },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn first(v: &[Violation]) -> String {
    v.first().map(ToString::to_string).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub seeds_resolved: usize,
    pub atc_closure_size: usize,
    /// Closure classes with no CUI, which bridge nothing.
    pub atc_without_cui: usize,
    pub cui_bridged_ingredients: usize,
    /// Every RxNorm concept reached through the CUI bridge, ingredients or not.
    pub bridged_concepts: usize,
    pub expansion_rounds: u32,
    pub adopted_concepts: usize,
    pub adopted_relation_edges: usize,
    pub dropped_relations: usize,
    pub duplicate_relation_rows: usize,
    pub nodes_by_kind: BTreeMap<NodeKind, usize>,
    pub edges_by_kind: BTreeMap<EdgeKind, usize>,
}

impl std::fmt::Display for BuildReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: [(&str, String); 10] = [
            ("seeds resolved", self.seeds_resolved.to_string()),
            ("atc closure", self.atc_closure_size.to_string()),
            ("atc without cui", self.atc_without_cui.to_string()),
            (
                "generic ingredients",
                self.cui_bridged_ingredients.to_string(),
            ),
            ("bridged concepts", self.bridged_concepts.to_string()),
            ("expansion rounds", self.expansion_rounds.to_string()),
            ("adopted concepts", self.adopted_concepts.to_string()),
            ("adopted edges", self.adopted_relation_edges.to_string()),
            ("dropped relations", self.dropped_relations.to_string()),
            ("duplicate rows", self.duplicate_relation_rows.to_string()),
        ];
        for (k, v) in rows {
            writeln!(f, "{k:<28}{v:>8}")?;
        }
        for (k, v) in &self.nodes_by_kind {
            writeln!(f, "{:<28}{v:>8}", format!("nodes {k}"))?;
        }
        let mut it = self.edges_by_kind.iter().peekable();
        while let Some((k, v)) = it.next() {
            write!(f, "{:<28}{v:>8}", format!("edges {k}"))?;
            if it.peek().is_some() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// The seeds and all their transitive ATC subclasses.
pub fn seed_closure(
    store: &TerminologyStore,
    config: &BuildConfig,
) -> Result<BTreeSet<String>, BuildError> {
    let mut closure = BTreeSet::new();
    for seed in &config.seed_atc_codes {
        if !store.has_atc(seed) {
            return Err(BuildError::MissingSeed(seed.clone()));
        }
        let mut queue = VecDeque::from([seed.clone()]);
        while let Some(code) = queue.pop_front() {
            if closure.insert(code.clone()) {
                queue.extend(store.atc_children(&code).iter().cloned());
            }
        }
    }
    Ok(closure)
}

/// RxNorm concepts sharing a CUI with any class in the closure.
pub fn bridge_via_cui(
    store: &TerminologyStore,
    closure: &BTreeSet<String>,
) -> BTreeSet<SourceCode> {
    let cuis: HashSet<&str> = closure
        .iter()
        .filter_map(|code| store.concept(&SourceCode::atc(code)))
        .map(|c| c.cui.as_str())
        .filter(|c| !c.is_empty())
        .collect();
    store
        .concepts()
        .iter()
        .filter(|c| c.source_code.source == Source::RxNorm && cuis.contains(c.cui.as_str()))
        .map(|c| c.source_code.clone())
        .collect()
}

/// Round-by-round fixpoint expansion from the bridged concepts.
///
/// Each round scans every whitelisted property relation against a snapshot of
/// the adopted set taken at the start of the round, and adopts the relation
/// and both endpoints when either endpoint is already adopted. RxNorm
/// ingredient (`IN`) concepts that were not bridged are never adopted and
/// relations touching them are skipped, so expansion cannot walk through a
/// non-opioid ingredient into unrelated products.
pub struct Expander<'a> {
    candidates: Vec<&'a RelationRecord>,
    adopted: HashSet<SourceCode>,
    edges: BTreeSet<RelationRecord>,
    rounds: u32,
    settled: bool,
}

impl<'a> Expander<'a> {
    pub fn new(
        store: &'a TerminologyStore,
        bridged: &BTreeSet<SourceCode>,
        whitelist: &BTreeSet<EdgeKind>,
    ) -> Self {
        let blocked: HashSet<&SourceCode> = store
            .concepts()
            .iter()
            .filter(|c| {
                c.source_code.source == Source::RxNorm
                    && c.tty == "IN"
                    && !bridged.contains(&c.source_code)
            })
            .map(|c| &c.source_code)
            .collect();
        let candidates = store
            .relations()
            .iter()
            .filter(|r| r.rel.is_property() && whitelist.contains(&EdgeKind::from(r.rel)))
            .filter(|r| !blocked.contains(&r.src) && !blocked.contains(&r.dst))
            .collect();
        Expander {
            candidates,
            adopted: bridged.iter().cloned().collect(),
            edges: BTreeSet::new(),
            rounds: 0,
            settled: false,
        }
    }

    /// Runs one round. Returns whether anything was added.
    pub fn step(&mut self) -> bool {
        if self.settled {
            return false;
        }
        self.rounds += 1;
        let before = (self.adopted.len(), self.edges.len());
        let mut new_nodes = Vec::new();
        for r in &self.candidates {
            let touches = self.adopted.contains(&r.src) || self.adopted.contains(&r.dst);
            if touches && self.edges.insert((*r).clone()) {
                new_nodes.push(r.src.clone());
                new_nodes.push(r.dst.clone());
            }
        }
        self.adopted.extend(new_nodes);
        let changed = (self.adopted.len(), self.edges.len()) != before;
        self.settled = !changed;
        changed
    }

    pub fn adopted(&self) -> &HashSet<SourceCode> {
        &self.adopted
    }

    pub fn edges(&self) -> &BTreeSet<RelationRecord> {
        &self.edges
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn is_settled(&self) -> bool {
        self.settled
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub nodes: BTreeSet<SourceCode>,
    pub edges: BTreeSet<RelationRecord>,
    /// Rounds run, including the final round that added nothing.
    pub rounds: u32,
}

pub fn expand_relations(
    store: &TerminologyStore,
    bridged: &BTreeSet<SourceCode>,
    config: &BuildConfig,
) -> Result<Expansion, BuildError> {
    let mut ex = Expander::new(store, bridged, &config.relation_whitelist);
    while ex.step() {
        if ex.rounds() >= config.max_expansion_rounds {
            return Err(BuildError::ExpansionBudgetExceeded {
                rounds: ex.rounds(),
            });
        }
    }
    Ok(Expansion {
        nodes: ex.adopted.into_iter().collect(),
        edges: ex.edges,
        rounds: ex.rounds,
    })
}

pub fn build_odkg(
    store: &TerminologyStore,
    config: &BuildConfig,
) -> Result<(OdkgGraph, BuildReport), BuildError> {
    config.check()?;
    let closure = seed_closure(store, config)?;
    let bridged = bridge_via_cui(store, &closure);
    let expansion = expand_relations(store, &bridged, config)?;

    let mut nodes: Vec<Node> = Vec::new();
    let mut ids: HashMap<SourceCode, NodeId> = HashMap::new();
    let mut push = |nodes: &mut Vec<Node>, kind, label: &str, codes: Vec<SourceCode>, cui: &str| {
        let id = NodeId(nodes.len() as u32);
        for c in &codes {
            ids.insert(c.clone(), id);
        }
        nodes.push(Node {
            id,
            kind,
            label: label.to_string(),
            codes,
            cui: (!cui.is_empty()).then(|| cui.to_string()),
        });
    };

    let mut atc_without_cui = 0;
    for row in store.atc().iter().filter(|r| closure.contains(&r.code)) {
        let code = SourceCode::atc(&row.code);
        let cui = store.concept(&code).map(|c| c.cui.as_str()).unwrap_or("");
        if cui.is_empty() {
            atc_without_cui += 1;
        }
        push(&mut nodes, NodeKind::AtcClass, &row.name, vec![code], cui);
    }

    let mut violations = Vec::new();
    for e in &expansion.edges {
        for end in [&e.src, &e.dst] {
            if store.concept(end).is_none() || end.source != Source::RxNorm {
                violations.push(Violation::DanglingRelation {
                    src: e.src.to_string(),
                    rel: e.rel.as_str().to_string(),
                    dst: e.dst.to_string(),
                });
            }
        }
    }
    if !violations.is_empty() {
        violations.dedup();
        return Err(BuildError::ValidationFailed { violations });
    }

    let mut ingredients = 0;
    for c in store.concepts() {
        if c.source_code.source != Source::RxNorm || !expansion.nodes.contains(&c.source_code) {
            continue;
        }
        let kind = if c.tty == "IN" && bridged.contains(&c.source_code) {
            ingredients += 1;
            NodeKind::RxGenericIngredient
        } else {
            NodeKind::RxClass
        };
        push(
            &mut nodes,
            kind,
            &c.name,
            vec![c.source_code.clone()],
            &c.cui,
        );
    }

    let mut hubs: HashMap<String, NodeId> = HashMap::new();
    let mut edges = Vec::new();
    let coded = nodes.len();
    for i in 0..coded {
        let Some(cui) = nodes[i].cui.clone() else {
            continue;
        };
        let hub = match hubs.get(&cui) {
            Some(&h) => h,
            None => {
                let h = NodeId(nodes.len() as u32);
                nodes.push(Node {
                    id: h,
                    kind: NodeKind::CuiHub,
                    label: cui.clone(),
                    codes: Vec::new(),
                    cui: Some(cui.clone()),
                });
                hubs.insert(cui, h);
                h
            }
        };
        edges.push(Edge {
            src: NodeId(i as u32),
            rel: EdgeKind::HasCui,
            dst: hub,
        });
    }

    for r in store.relations() {
        if r.rel != RelationType::SubclassOf {
            continue;
        }
        if let (Some(&s), Some(&d)) = (ids.get(&r.src), ids.get(&r.dst)) {
            edges.push(Edge {
                src: s,
                rel: EdgeKind::SubClassOf,
                dst: d,
            });
        }
    }
    for r in &expansion.edges {
        edges.push(Edge {
            src: ids[&r.src],
            rel: EdgeKind::from(r.rel),
            dst: ids[&r.dst],
        });
    }

    let graph = OdkgGraph::from_parts(nodes, edges)?;
    let violations: Vec<Violation> = graph
        .validate()
        .into_iter()
        .filter(|v| !(config.allow_cycles && matches!(v, Violation::SubclassCycle { .. })))
        .collect();
    if !violations.is_empty() {
        return Err(BuildError::ValidationFailed { violations });
    }

    let dropped = store
        .relations()
        .iter()
        .filter(|r| r.rel.is_property() && !expansion.edges.contains(*r))
        .count();
    let stats = graph_stats(&graph);
    let report = BuildReport {
        seeds_resolved: config.seed_atc_codes.len(),
        atc_closure_size: closure.len(),
        atc_without_cui,
        cui_bridged_ingredients: ingredients,
        bridged_concepts: bridged.len(),
        expansion_rounds: expansion.rounds,
        adopted_concepts: expansion.nodes.len(),
        adopted_relation_edges: expansion.edges.len(),
        dropped_relations: dropped,
        duplicate_relation_rows: store.duplicate_relations(),
        nodes_by_kind: stats.nodes_by_kind,
        edges_by_kind: stats.edges_by_kind,
    };
    Ok((graph, report))
}
