//! Adapter for pipe-delimited MRCONSO / MRREL style files.
//!
//! Only the columns below are read; everything else is ignored. Files have no
//! header and every line ends with a trailing `|`.
//!
//! MRCONSO: `0 CUI`, `7 AUI`, `11 SAB`, `12 TTY`, `13 CODE`, `14 STR`.
//! Only atoms with `SAB` of `ATC` or `RXNORM` are kept. The first atom seen
//! for a `(SAB, CODE)` pair defines the concept; later atoms for the same
//! code (synonyms) are counted and skipped.
//!
//! MRREL: `1 AUI1`, `3 REL`, `5 AUI2`, `7 RELA`. A row reads "AUI2 RELA
//! AUI1", so it becomes `AUI2 -rel-> AUI1`. `RELA = isa` yields `subclass_of`
//! (and `inverse_isa` the reversed edge); other labels must be in the fixed
//! property set. Rows with other labels, or referencing atoms that were not
//! kept, are skipped and counted.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::path::Path;

use super::tsv::{concept_from_fields, csv_error, FieldError};
use super::{ConceptRecord, RelationRecord, RelationType, SourceCode, TerminologyError};

const CONSO_CUI: usize = 0;
const CONSO_AUI: usize = 7;
const CONSO_SAB: usize = 11;
const CONSO_TTY: usize = 12;
const CONSO_CODE: usize = 13;
const CONSO_STR: usize = 14;

const REL_AUI1: usize = 1;
const REL_AUI2: usize = 5;
const REL_RELA: usize = 7;

#[derive(Debug, Clone, Default)]
pub struct RrfSubset {
    pub concepts: Vec<ConceptRecord>,
    pub relations: Vec<RelationRecord>,
    /// Atoms from other vocabularies.
    pub foreign_atoms: usize,
    /// Additional atoms for an already-seen code.
    pub synonym_atoms: usize,
    /// Relation rows with labels outside the fixed set or unknown atoms.
    pub skipped_relations: usize,
    /// Identical relation rows dropped.
    pub duplicates: usize,
}

fn reader(path: &Path) -> Result<csv::Reader<File>, TerminologyError> {
    let file = File::open(path).map_err(|source| TerminologyError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new()
        .delimiter(b'|')
        .quoting(false)
        .has_headers(false)
        .flexible(true)
        .from_reader(file))
}

fn min_columns(
    path: &Path,
    rec: &csv::StringRecord,
    needed: usize,
) -> Result<u64, TerminologyError> {
    let line = rec.position().map(|p| p.line()).unwrap_or(0);
    if rec.len() < needed {
        return Err(TerminologyError::MalformedRow {
            path: path.to_path_buf(),
            line,
            detail: format!("expected at least {needed} fields, found {}", rec.len()),
        });
    }
    Ok(line)
}

pub fn load_rrf_subset(
    conso_path: impl AsRef<Path>,
    rel_path: impl AsRef<Path>,
) -> Result<RrfSubset, TerminologyError> {
    let conso_path = conso_path.as_ref();
    let rel_path = rel_path.as_ref();
    let mut out = RrfSubset::default();

    let mut atoms: HashMap<String, SourceCode> = HashMap::new();
    let mut seen_codes = HashSet::new();
    let mut rdr = reader(conso_path)?;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(conso_path, e))?;
        let line = min_columns(conso_path, &rec, CONSO_STR + 1)?;
        let sab = &rec[CONSO_SAB];
        if sab != "ATC" && sab != "RXNORM" {
            out.foreign_atoms += 1;
            continue;
        }
        let concept = concept_from_fields(
            sab,
            &rec[CONSO_CODE],
            &rec[CONSO_CUI],
            &rec[CONSO_TTY],
            &rec[CONSO_STR],
        )
        .map_err(|e| match e {
            FieldError::Cui(cui) => TerminologyError::BadCuiFormat {
                path: conso_path.to_path_buf(),
                line,
                cui,
            },
            FieldError::Other(detail) => TerminologyError::MalformedRow {
                path: conso_path.to_path_buf(),
                line,
                detail,
            },
        })?;
        atoms.insert(rec[CONSO_AUI].to_string(), concept.source_code.clone());
        if seen_codes.insert(concept.source_code.clone()) {
            out.concepts.push(concept);
        } else {
            out.synonym_atoms += 1;
        }
    }

    let mut seen = HashSet::new();
    let mut rdr = reader(rel_path)?;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(rel_path, e))?;
        min_columns(rel_path, &rec, REL_RELA + 1)?;
        let (Some(a1), Some(a2)) = (atoms.get(&rec[REL_AUI1]), atoms.get(&rec[REL_AUI2])) else {
            out.skipped_relations += 1;
            continue;
        };
        let record = match &rec[REL_RELA] {
            "isa" => RelationRecord {
                src: a2.clone(),
                rel: RelationType::SubclassOf,
                dst: a1.clone(),
            },
            "inverse_isa" => RelationRecord {
                src: a1.clone(),
                rel: RelationType::SubclassOf,
                dst: a2.clone(),
            },
            label => match label.parse::<RelationType>() {
                Ok(rel) if rel.is_property() => RelationRecord {
                    src: a2.clone(),
                    rel,
                    dst: a1.clone(),
                },
                _ => {
                    out.skipped_relations += 1;
                    continue;
                }
            },
        };
        if seen.insert(record.clone()) {
            out.relations.push(record);
        } else {
            out.duplicates += 1;
        }
    }
    Ok(out)
}
