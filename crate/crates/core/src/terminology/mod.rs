//! Terminology tables: ATC hierarchy, concept table, relation table.
//!
//! Two input formats are supported. The TSV trio (`atc.tsv`, `concepts.tsv`,
//! `relations.tsv`) is the native format; [`rrf`] reads a pipe-delimited
//! MRCONSO/MRREL subset so licensed UMLS extracts can be used directly. Both
//! produce the same [`TerminologyStore`].

mod lexicon;
pub mod rrf;
mod tsv;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use lexicon::{build_name_lexicon, normalize_name, NameLexicon};
pub use rrf::{load_rrf_subset, RrfSubset};
pub use tsv::{load_atc, load_concepts, load_relations, AtcRow, RelationLoad};

#[derive(Debug, Error)]
pub enum TerminologyError {
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
    #[error("{path}:{line}: parent code {parent:?} of {code:?} is never defined")]
    DanglingParent {
        path: PathBuf,
        line: u64,
        code: String,
        parent: String,
    },
    #[error("{path}:{line}: duplicate code {code}")]
    DuplicateCode {
        path: PathBuf,
        line: u64,
        code: String,
    },
    #[error("{path}:{line}: bad CUI {cui:?} (expected C followed by digits)")]
    BadCuiFormat {
        path: PathBuf,
        line: u64,
        cui: String,
    },
    #[error("{path}:{line}: unknown relation type {rel:?}")]
    UnknownRelationType {
        path: PathBuf,
        line: u64,
        rel: String,
    },
    #[error("ATC code {code} has more than one parent ({first}, {second})")]
    MultipleParents {
        code: String,
        first: String,
        second: String,
    },
}

/// Terminology a code belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Atc,
    RxNorm,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Atc => "ATC",
            Source::RxNorm => "RXNORM",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ATC" => Ok(Source::Atc),
            "RXNORM" => Ok(Source::RxNorm),
            other => Err(format!("unknown source {other:?}")),
        }
    }
}

/// A code qualified by its terminology, e.g. `ATC:N02A` or `RXNORM:7052`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceCode {
    pub source: Source,
    pub code: String,
}

impl SourceCode {
    pub fn new(source: Source, code: impl Into<String>) -> Result<Self, String> {
        let code = code.into();
        if code.is_empty() {
            return Err("empty code".into());
        }
        if code.chars().any(char::is_whitespace) {
            return Err(format!("code {code:?} contains whitespace"));
        }
        Ok(SourceCode { source, code })
    }

    pub fn atc(code: &str) -> Self {
        SourceCode::new(Source::Atc, code).expect("valid ATC code")
    }

    pub fn rxnorm(code: &str) -> Self {
        SourceCode::new(Source::RxNorm, code).expect("valid RxCUI")
    }
}

impl fmt::Display for SourceCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.source, self.code)
    }
}

impl FromStr for SourceCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (source, code) = s
            .split_once(':')
            .ok_or_else(|| format!("expected SOURCE:code, got {s:?}"))?;
        SourceCode::new(source.parse()?, code)
    }
}

impl Serialize for SourceCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SourceCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One terminology class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConceptRecord {
    pub source_code: SourceCode,
    /// UMLS CUI, empty when the class has no UMLS mapping.
    pub cui: String,
    /// Term type (IN, PIN, BN, SCD, ...). Required for RxNorm rows.
    pub tty: String,
    pub name: String,
}

pub(crate) fn is_valid_cui(cui: &str) -> bool {
    cui.len() > 1 && cui.starts_with('C') && cui[1..].bytes().all(|b| b.is_ascii_digit())
}

/// Relation labels accepted in relation tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationType {
    SubclassOf,
    IngredientsOf,
    HasForm,
    FormOf,
    PartOf,
    IngredientOf,
    ConsistsOf,
    Constitutes,
    HasTradename,
    PreciseIngredientOf,
}

impl RelationType {
    /// The nine RxNorm properties followed during graph expansion.
    pub const PROPERTIES: [RelationType; 9] = [
        RelationType::IngredientsOf,
        RelationType::HasForm,
        RelationType::FormOf,
        RelationType::PartOf,
        RelationType::IngredientOf,
        RelationType::ConsistsOf,
        RelationType::Constitutes,
        RelationType::HasTradename,
        RelationType::PreciseIngredientOf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationType::SubclassOf => "subclass_of",
            RelationType::IngredientsOf => "ingredients_of",
            RelationType::HasForm => "has_form",
            RelationType::FormOf => "form_of",
            RelationType::PartOf => "part_of",
            RelationType::IngredientOf => "ingredient_of",
            RelationType::ConsistsOf => "consists_of",
            RelationType::Constitutes => "constitutes",
            RelationType::HasTradename => "has_tradename",
            RelationType::PreciseIngredientOf => "precise_ingredient_of",
        }
    }

    pub fn is_property(self) -> bool {
        self != RelationType::SubclassOf
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        std::iter::once(RelationType::SubclassOf)
            .chain(RelationType::PROPERTIES)
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown relation type {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationRecord {
    pub src: SourceCode,
    pub rel: RelationType,
    pub dst: SourceCode,
}

/// Loaded and indexed terminology content. Immutable once built.
#[derive(Debug, Clone)]
pub struct TerminologyStore {
    atc: Vec<AtcRow>,
    concepts: Vec<ConceptRecord>,
    relations: Vec<RelationRecord>,
    index: HashMap<SourceCode, usize>,
    children: HashMap<String, Vec<String>>,
    duplicate_relations: usize,
}

impl TerminologyStore {
    /// Assembles a store from already-parsed tables.
    ///
    /// ATC rows become `subclass_of` relations (child to parent). ATC codes
    /// without a concept row get one synthesized from the ATC name with no
    /// CUI. Identical relation rows are collapsed and counted.
    pub fn new(
        atc: Vec<AtcRow>,
        mut concepts: Vec<ConceptRecord>,
        relations: Vec<RelationRecord>,
    ) -> Result<Self, TerminologyError> {
        let mut index = HashMap::with_capacity(concepts.len() + atc.len());
        for (i, c) in concepts.iter().enumerate() {
            if index.insert(c.source_code.clone(), i).is_some() {
                return Err(TerminologyError::DuplicateCode {
                    path: PathBuf::from("<concepts>"),
                    line: 0,
                    code: c.source_code.to_string(),
                });
            }
        }
        for row in &atc {
            let sc = SourceCode::atc(&row.code);
            if !index.contains_key(&sc) {
                index.insert(sc.clone(), concepts.len());
                concepts.push(ConceptRecord {
                    source_code: sc,
                    cui: String::new(),
                    tty: String::new(),
                    name: row.name.clone(),
                });
            }
        }

        let mut seen = HashSet::new();
        let mut deduped = Vec::new();
        let hierarchy = atc.iter().filter_map(|row| {
            row.parent.as_ref().map(|p| RelationRecord {
                src: SourceCode::atc(&row.code),
                rel: RelationType::SubclassOf,
                dst: SourceCode::atc(p),
            })
        });
        let mut duplicates = 0;
        for r in hierarchy.chain(relations) {
            if seen.insert(r.clone()) {
                deduped.push(r);
            } else {
                duplicates += 1;
            }
        }

        let mut children: HashMap<String, Vec<String>> = HashMap::new();
        for row in &atc {
            if let Some(p) = &row.parent {
                children
                    .entry(p.clone())
                    .or_default()
                    .push(row.code.clone());
            }
        }

        Ok(TerminologyStore {
            atc,
            concepts,
            relations: deduped,
            index,
            children,
            duplicate_relations: duplicates,
        })
    }

    /// Loads the TSV trio.
    pub fn from_tsv(
        atc: impl AsRef<Path>,
        concepts: impl AsRef<Path>,
        relations: impl AsRef<Path>,
    ) -> Result<Self, TerminologyError> {
        let atc = load_atc(atc)?;
        let concepts = load_concepts(concepts)?;
        let rels = load_relations(relations)?;
        let mut store = TerminologyStore::new(atc, concepts, rels.records)?;
        store.duplicate_relations += rels.duplicates;
        Ok(store)
    }

    /// Loads an MRCONSO/MRREL-style subset. The ATC hierarchy is taken from
    /// `subclass_of` relations between ATC codes.
    pub fn from_rrf(
        conso: impl AsRef<Path>,
        rel: impl AsRef<Path>,
    ) -> Result<Self, TerminologyError> {
        let subset = load_rrf_subset(conso, rel)?;
        let duplicates = subset.duplicates;
        let (atc, relations) = atc_rows_from_relations(&subset.concepts, subset.relations)?;
        let mut store = TerminologyStore::new(atc, subset.concepts, relations)?;
        store.duplicate_relations += duplicates;
        Ok(store)
    }

    pub fn atc(&self) -> &[AtcRow] {
        &self.atc
    }

    pub fn concepts(&self) -> &[ConceptRecord] {
        &self.concepts
    }

    /// All distinct relations, including `subclass_of` rows derived from the
    /// ATC hierarchy.
    pub fn relations(&self) -> &[RelationRecord] {
        &self.relations
    }

    pub fn concept(&self, code: &SourceCode) -> Option<&ConceptRecord> {
        self.index.get(code).map(|&i| &self.concepts[i])
    }

    /// Position of a concept in load order.
    pub fn concept_position(&self, code: &SourceCode) -> Option<usize> {
        self.index.get(code).copied()
    }

    pub fn atc_children(&self, code: &str) -> &[String] {
        self.children.get(code).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_atc(&self, code: &str) -> bool {
        self.atc.iter().any(|r| r.code == code)
    }

    /// Identical relation rows dropped while loading.
    pub fn duplicate_relations(&self) -> usize {
        self.duplicate_relations
    }
}

/// Splits `subclass_of` edges between ATC codes out of a relation list and
/// turns them into parent-pointer rows, in concept order.
fn atc_rows_from_relations(
    concepts: &[ConceptRecord],
    relations: Vec<RelationRecord>,
) -> Result<(Vec<AtcRow>, Vec<RelationRecord>), TerminologyError> {
    let mut parent: BTreeMap<String, String> = BTreeMap::new();
    let mut rest = Vec::with_capacity(relations.len());
    for r in relations {
        if r.rel == RelationType::SubclassOf
            && r.src.source == Source::Atc
            && r.dst.source == Source::Atc
        {
            if let Some(prev) = parent.get(&r.src.code) {
                if *prev != r.dst.code {
                    return Err(TerminologyError::MultipleParents {
                        code: r.src.code.clone(),
                        first: prev.clone(),
                        second: r.dst.code.clone(),
                    });
                }
            }
            parent.insert(r.src.code, r.dst.code);
        } else {
            rest.push(r);
        }
    }
    let atc = concepts
        .iter()
        .filter(|c| c.source_code.source == Source::Atc)
        .map(|c| AtcRow {
            code: c.source_code.code.clone(),
            parent: parent.get(&c.source_code.code).cloned(),
            name: c.name.clone(),
        })
        .collect();
    Ok((atc, rest))
}
