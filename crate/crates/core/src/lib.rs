//! Opioid drug knowledge graph toolkit.
//!
//! The crate is organised along the pipeline it implements:
//!
//! - [`terminology`] loads ATC / RxNorm style terminology tables (TSV or an
//!   RRF subset) and builds the name lexicon.
//! - [`build`] derives the opioid subgraph: ATC seed closure, CUI bridge into
//!   RxNorm, fixpoint expansion over the RxNorm property relations.
//! - [`graph`] is the frozen graph with its queries, statistics and JSON export.
//! - [`parser`] is the rule-based drug string parser and normalizer.
//! - [`emr`] ingests prescription records, instantiates graph classes with
//!   their drug strings and reports coverage.
//! - [`analytics`] produces region/time aggregates, trends and exports.
//!
//! Batch work (normalizing distinct strings, aggregating records) runs on
//! rayon when the `parallel` feature is enabled (the default) and falls back
//! to plain iterators otherwise. Results are identical either way.

pub mod analytics;
pub mod build;
pub mod emr;
pub mod graph;
pub mod par;
pub mod parser;
pub mod terminology;

pub use build::{build_odkg, BuildConfig, BuildError, BuildReport};
pub use graph::{EdgeKind, GraphError, Node, NodeId, NodeKind, OdkgGraph};
pub use parser::{NormalizationResult, ParsedDrugString, Vocabularies};
pub use terminology::{NameLexicon, SourceCode, TerminologyStore};
