//! Prescription records: loading, instantiation of graph classes with their
//! drug strings, and coverage reporting.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::census_region;
use crate::graph::{NodeId, OdkgGraph};
use crate::par::Execution;
use crate::parser::{NormalizedLine, Normalizer};

pub const EMR_HEADER: [&str; 5] = ["record_id", "drug_string", "state", "subregion", "year"];

#[derive(Debug, Error)]
pub enum EmrError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed row: {detail}")]
    MalformedRow {
        path: PathBuf,
        line: u64,
        detail: String,
    },
    #[error("{path}:{line}: duplicate record_id {id:?}")]
    DuplicateRecordId {
        path: PathBuf,
        line: u64,
        id: String,
    },
    #[error("{path}:{line}: bad state code {state:?}")]
    BadState {
        path: PathBuf,
        line: u64,
        state: String,
    },
    #[error("{path}:{line}: bad year {year:?} (expected 1990..=2100)")]
    BadYear {
        path: PathBuf,
        line: u64,
        year: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmrRecord {
    pub record_id: String,
    pub drug_string: String,
    pub state: String,
    pub subregion: String,
    pub year: i32,
}

/// Reads `record_id,drug_string,state,subregion,year` CSV. An empty file
/// yields no records.
pub fn load_emr(path: impl AsRef<Path>) -> Result<Vec<EmrRecord>, EmrError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| EmrError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bytes = bytes.strip_prefix(b"\xef\xbb\xbf").unwrap_or(&bytes);
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(bytes);
    let malformed = |line: u64, detail: String| EmrError::MalformedRow {
        path: path.to_path_buf(),
        line,
        detail,
    };
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = rec.position().map_or(i as u64 + 1, |p| p.line());
        if i == 0 {
            if rec.iter().ne(EMR_HEADER) {
                return Err(malformed(
                    line,
                    format!("expected header {}", EMR_HEADER.join(",")),
                ));
            }
            continue;
        }
        if rec.len() != EMR_HEADER.len() {
            return Err(malformed(
                line,
                format!("expected 5 fields, found {}", rec.len()),
            ));
        }
        let record_id = rec[0].to_string();
        if record_id.is_empty() {
            return Err(malformed(line, "empty record_id".into()));
        }
        let state = rec[2].to_string();
        if census_region(&state).is_none() {
            return Err(EmrError::BadState {
                path: path.to_path_buf(),
                line,
                state,
            });
        }
        let year = match rec[4].parse::<i32>() {
            Ok(y) if (1990..=2100).contains(&y) => y,
            _ => {
                return Err(EmrError::BadYear {
                    path: path.to_path_buf(),
                    line,
                    year: rec[4].to_string(),
                })
            }
        };
        if !ids.insert(record_id.clone()) {
            return Err(EmrError::DuplicateRecordId {
                path: path.to_path_buf(),
                line,
                id: record_id,
            });
        }
        out.push(EmrRecord {
            record_id,
            drug_string: rec[1].to_string(),
            state,
            subregion: rec[3].to_string(),
            year,
        });
    }
    Ok(out)
}

/// Distinct drug strings attached to graph nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceTable {
    /// Strings under every node they matched.
    pub by_node: BTreeMap<NodeId, BTreeSet<String>>,
    /// Strings under every generic ingredient their matches roll up to.
    pub by_ingredient: BTreeMap<NodeId, BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instantiation {
    pub table: InstanceTable,
    /// Normalization of each distinct string, in first-appearance order.
    pub lines: Vec<NormalizedLine>,
    /// Ingredient node ids per record.
    pub record_ingredients: BTreeMap<String, BTreeSet<NodeId>>,
}

/// Generic ingredients of a set of matched nodes. Non-RxNorm nodes roll up to
/// nothing.
pub fn ingredients_of(graph: &OdkgGraph, nodes: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
    nodes
        .iter()
        .filter(|&&n| graph.node(n).is_ok_and(|n| n.kind.is_rxnorm()))
        .flat_map(|&n| graph.roll_up_to_ingredients(n).unwrap_or_default())
        .collect()
}

/// Normalizes each distinct drug string once and attaches it to the graph.
pub fn instantiate(
    records: &[EmrRecord],
    normalizer: &Normalizer,
    exec: Execution,
) -> Instantiation {
    let mut seen = HashSet::new();
    let distinct: Vec<&str> = records
        .iter()
        .map(|r| r.drug_string.as_str())
        .filter(|s| seen.insert(*s))
        .collect();
    let lines = normalizer.run_batch(&distinct, exec);

    let mut table = InstanceTable::default();
    let mut per_string: HashMap<&str, BTreeSet<NodeId>> = HashMap::with_capacity(lines.len());
    for line in &lines {
        let ingredients = ingredients_of(normalizer.graph, &line.matched_nodes);
        for &n in &line.matched_nodes {
            table.by_node.entry(n).or_default().insert(line.raw.clone());
        }
        for &g in &ingredients {
            table
                .by_ingredient
                .entry(g)
                .or_default()
                .insert(line.raw.clone());
        }
        per_string.insert(line.raw.as_str(), ingredients);
    }
    let record_ingredients = records
        .iter()
        .map(|r| {
            (
                r.record_id.clone(),
                per_string[r.drug_string.as_str()].clone(),
            )
        })
        .collect();
    Instantiation {
        table,
        lines,
        record_ingredients,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fraction {
    pub numerator: usize,
    pub denominator: usize,
    /// `numerator / denominator`, or 0 when the denominator is zero.
    pub value: f64,
    pub zero_denominator: bool,
}

impl Fraction {
    pub fn new(numerator: usize, denominator: usize) -> Self {
        Fraction {
            numerator,
            denominator,
            value: if denominator == 0 {
                0.0
            } else {
                numerator as f64 / denominator as f64
            },
            zero_denominator: denominator == 0,
        }
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} ({:.2})",
            self.numerator, self.denominator, self.value
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngredientCount {
    pub ingredient: NodeId,
    pub label: String,
    pub strings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub total_unique_strings: usize,
    pub mapped_cui: Fraction,
    pub mapped_rxcui: Fraction,
    /// Ingredients with strictly more than 10 distinct strings.
    pub ingredients_over_10_strings: usize,
    pub per_ingredient_string_counts: Vec<IngredientCount>,
}

/// Coverage over distinct strings, never over records.
pub fn coverage_report(inst: &Instantiation, graph: &OdkgGraph) -> CoverageReport {
    let total = inst.lines.len();
    let cui = inst.lines.iter().filter(|l| !l.cuis.is_empty()).count();
    let rxcui = inst.lines.iter().filter(|l| !l.rxcuis.is_empty()).count();
    let mut per: Vec<IngredientCount> = inst
        .table
        .by_ingredient
        .iter()
        .map(|(&id, strings)| IngredientCount {
            ingredient: id,
            label: graph.node(id).map(|n| n.label.clone()).unwrap_or_default(),
            strings: strings.len(),
        })
        .collect();
    per.sort_by(|a, b| (&a.label, a.ingredient).cmp(&(&b.label, b.ingredient)));
    CoverageReport {
        total_unique_strings: total,
        mapped_cui: Fraction::new(cui, total),
        mapped_rxcui: Fraction::new(rxcui, total),
        ingredients_over_10_strings: per.iter().filter(|c| c.strings > 10).count(),
        per_ingredient_string_counts: per,
    }
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<28}{:>16}",
            "unique drug strings", self.total_unique_strings
        )?;
        writeln!(
            f,
            "{:<28}{:>16}",
            "mapped to >=1 CUI",
            self.mapped_cui.to_string()
        )?;
        writeln!(
            f,
            "{:<28}{:>16}",
            "mapped to >=1 RxCUI",
            self.mapped_rxcui.to_string()
        )?;
        write!(
            f,
            "{:<28}{:>16}",
            "ingredients with >10 strings", self.ingredients_over_10_strings
        )?;
        for c in &self.per_ingredient_string_counts {
            write!(f, "\n  {:<26}{:>16}", c.label, c.strings)?;
        }
        Ok(())
    }
}
