use std::collections::HashSet;
use std::fs::File;
use std::path::Path;

use super::{
    is_valid_cui, ConceptRecord, RelationRecord, RelationType, Source, SourceCode, TerminologyError,
};

/// One row of `atc.tsv`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtcRow {
    pub code: String,
    pub parent: Option<String>,
    pub name: String,
}

/// Result of [`load_relations`]: distinct rows plus how many identical rows
/// were dropped.
#[derive(Debug, Clone, Default)]
pub struct RelationLoad {
    pub records: Vec<RelationRecord>,
    pub duplicates: usize,
}

struct TsvRows {
    path: std::path::PathBuf,
    reader: csv::Reader<File>,
}

impl TsvRows {
    fn open(path: &Path, header: &[&str]) -> Result<Self, TerminologyError> {
        let file = File::open(path).map_err(|source| TerminologyError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .quoting(false)
            .has_headers(false)
            .flexible(true)
            .from_reader(file);
        let mut first = csv::StringRecord::new();
        let got = reader
            .read_record(&mut first)
            .map_err(|e| csv_error(path, e))?;
        let matches = got
            && first.len() == header.len()
            && first
                .iter()
                .zip(header)
                .all(|(a, b)| a.trim_start_matches('\u{feff}') == *b);
        if !matches {
            return Err(TerminologyError::MalformedRow {
                path: path.to_path_buf(),
                line: 1,
                detail: format!("expected header {:?}", header.join("\t")),
            });
        }
        Ok(TsvRows {
            path: path.to_path_buf(),
            reader,
        })
    }

    /// Next data row with its 1-based line number, checked for column count.
    fn next_row(
        &mut self,
        columns: usize,
    ) -> Option<Result<(u64, csv::StringRecord), TerminologyError>> {
        let mut rec = csv::StringRecord::new();
        match self.reader.read_record(&mut rec) {
            Ok(false) => None,
            Err(e) => Some(Err(csv_error(&self.path, e))),
            Ok(true) => {
                let line = rec.position().map(|p| p.line()).unwrap_or(0);
                if rec.len() != columns {
                    return Some(Err(self.malformed(
                        line,
                        format!("expected {columns} columns, found {}", rec.len()),
                    )));
                }
                Some(Ok((line, rec)))
            }
        }
    }

    fn malformed(&self, line: u64, detail: impl Into<String>) -> TerminologyError {
        TerminologyError::MalformedRow {
            path: self.path.clone(),
            line,
            detail: detail.into(),
        }
    }
}

pub(super) fn csv_error(path: &Path, e: csv::Error) -> TerminologyError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => TerminologyError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => TerminologyError::MalformedRow {
            path: path.to_path_buf(),
            line,
            detail: format!("{other:?}"),
        },
    }
}

/// Reads `atc.tsv` (`code, parent_code, name`).
pub fn load_atc(path: impl AsRef<Path>) -> Result<Vec<AtcRow>, TerminologyError> {
    let path = path.as_ref();
    let mut rows = TsvRows::open(path, &["code", "parent_code", "name"])?;
    let mut out: Vec<AtcRow> = Vec::new();
    let mut lines = Vec::new();
    let mut seen = HashSet::new();
    while let Some(row) = rows.next_row(3) {
        let (line, rec) = row?;
        let code = rec[0].trim();
        if let Err(e) = SourceCode::new(Source::Atc, code) {
            return Err(rows.malformed(line, e));
        }
        if rec[2].trim().is_empty() {
            return Err(rows.malformed(line, "empty name"));
        }
        if !seen.insert(code.to_string()) {
            return Err(TerminologyError::DuplicateCode {
                path: path.to_path_buf(),
                line,
                code: code.to_string(),
            });
        }
        let parent = rec[1].trim();
        out.push(AtcRow {
            code: code.to_string(),
            parent: (!parent.is_empty()).then(|| parent.to_string()),
            name: rec[2].to_string(),
        });
        lines.push(line);
    }
    for (row, line) in out.iter().zip(lines) {
        if let Some(p) = &row.parent {
            if !seen.contains(p) {
                return Err(TerminologyError::DanglingParent {
                    path: path.to_path_buf(),
                    line,
                    code: row.code.clone(),
                    parent: p.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Reads `concepts.tsv` (`source, code, cui, tty, name`).
pub fn load_concepts(path: impl AsRef<Path>) -> Result<Vec<ConceptRecord>, TerminologyError> {
    let path = path.as_ref();
    let mut rows = TsvRows::open(path, &["source", "code", "cui", "tty", "name"])?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    while let Some(row) = rows.next_row(5) {
        let (line, rec) = row?;
        let record = concept_from_fields(&rec[0], &rec[1], &rec[2], &rec[3], &rec[4]).map_err(
            |e| match e {
                FieldError::Cui(cui) => TerminologyError::BadCuiFormat {
                    path: path.to_path_buf(),
                    line,
                    cui,
                },
                FieldError::Other(detail) => rows.malformed(line, detail),
            },
        )?;
        if !seen.insert(record.source_code.clone()) {
            return Err(TerminologyError::DuplicateCode {
                path: path.to_path_buf(),
                line,
                code: record.source_code.to_string(),
            });
        }
        out.push(record);
    }
    Ok(out)
}

pub(super) enum FieldError {
    Cui(String),
    Other(String),
}

pub(super) fn concept_from_fields(
    source: &str,
    code: &str,
    cui: &str,
    tty: &str,
    name: &str,
) -> Result<ConceptRecord, FieldError> {
    let source: Source = source.trim().parse().map_err(FieldError::Other)?;
    let source_code = SourceCode::new(source, code.trim()).map_err(FieldError::Other)?;
    let cui = cui.trim();
    if !cui.is_empty() && !is_valid_cui(cui) {
        return Err(FieldError::Cui(cui.to_string()));
    }
    let tty = tty.trim();
    if source == Source::RxNorm && tty.is_empty() {
        return Err(FieldError::Other("RXNORM row without term type".into()));
    }
    if name.trim().is_empty() {
        return Err(FieldError::Other("empty name".into()));
    }
    Ok(ConceptRecord {
        source_code,
        cui: cui.to_string(),
        tty: tty.to_string(),
        name: name.to_string(),
    })
}

/// Reads `relations.tsv` (`src_source, src_code, rel, dst_source, dst_code`).
/// Identical rows after the first are dropped and counted.
pub fn load_relations(path: impl AsRef<Path>) -> Result<RelationLoad, TerminologyError> {
    let path = path.as_ref();
    let mut rows = TsvRows::open(
        path,
        &["src_source", "src_code", "rel", "dst_source", "dst_code"],
    )?;
    let mut out = RelationLoad::default();
    let mut seen = HashSet::new();
    while let Some(row) = rows.next_row(5) {
        let (line, rec) = row?;
        let code = |s: &str, c: &str| -> Result<SourceCode, TerminologyError> {
            let source: Source = s.trim().parse().map_err(|e| rows.malformed(line, e))?;
            SourceCode::new(source, c.trim()).map_err(|e| rows.malformed(line, e))
        };
        let src = code(&rec[0], &rec[1])?;
        let dst = code(&rec[3], &rec[4])?;
        let rel: RelationType =
            rec[2]
                .trim()
                .parse()
                .map_err(|_| TerminologyError::UnknownRelationType {
                    path: path.to_path_buf(),
                    line,
                    rel: rec[2].trim().to_string(),
                })?;
        let record = RelationRecord { src, rel, dst };
        if !seen.insert(record.clone()) {
            out.duplicates += 1;
        } else {
            out.records.push(record);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn atc_row_without_parent() {
        let f = file("code\tparent_code\tname\nN02A\t\tOpioid analgesics\n");
        let rows = load_atc(f.path()).unwrap();
        assert_eq!(
            rows,
            vec![AtcRow {
                code: "N02A".into(),
                parent: None,
                name: "Opioid analgesics".into()
            }]
        );
    }

    #[test]
    fn atc_header_only_is_empty() {
        let f = file("code\tparent_code\tname\n");
        assert!(load_atc(f.path()).unwrap().is_empty());
    }

    #[test]
    fn atc_accepts_crlf() {
        let f = file(
            "code\tparent_code\tname\r\nN02\t\tANALGESICS\r\nN02A\tN02\tOpioid analgesics\r\n",
        );
        let rows = load_atc(f.path()).unwrap();
        assert_eq!(rows[1].parent.as_deref(), Some("N02"));
        assert_eq!(rows[1].name, "Opioid analgesics");
    }

    #[test]
    fn atc_errors() {
        let f = file("code\tparent_code\tname\nN02A\tN02\tOpioid analgesics\n");
        assert!(matches!(
            load_atc(f.path()),
            Err(TerminologyError::DanglingParent { .. })
        ));
        let f = file("code\tparent_code\tname\nN02A\t\tx\nN02A\t\ty\n");
        assert!(matches!(
            load_atc(f.path()),
            Err(TerminologyError::DuplicateCode { line: 3, .. })
        ));
        let f = file("code\tparent_code\tname\nN02A\tOpioid analgesics\n");
        assert!(matches!(
            load_atc(f.path()),
            Err(TerminologyError::MalformedRow { line: 2, .. })
        ));
        let f = file("");
        assert!(matches!(
            load_atc(f.path()),
            Err(TerminologyError::MalformedRow { line: 1, .. })
        ));
    }

    #[test]
    fn concept_row() {
        let f = file("source\tcode\tcui\ttty\tname\nRXNORM\t7052\tC0026549\tIN\tMorphine\n");
        let rows = load_concepts(f.path()).unwrap();
        assert_eq!(
            rows,
            vec![ConceptRecord {
                source_code: SourceCode::rxnorm("7052"),
                cui: "C0026549".into(),
                tty: "IN".into(),
                name: "Morphine".into(),
            }]
        );
    }

    #[test]
    fn concept_errors() {
        let f = file("source\tcode\tcui\ttty\tname\nRXNORM\t7052\tX123\tIN\tMorphine\n");
        assert!(matches!(
            load_concepts(f.path()),
            Err(TerminologyError::BadCuiFormat { .. })
        ));
        let f = file(
            "source\tcode\tcui\ttty\tname\nRXNORM\t7052\tC1\tIN\tMorphine\nRXNORM\t7052\tC2\tIN\tMorphine\n",
        );
        assert!(matches!(
            load_concepts(f.path()),
            Err(TerminologyError::DuplicateCode { .. })
        ));
        let f = file("source\tcode\tcui\ttty\tname\nRXNORM\t7052\tC1\t\tMorphine\n");
        assert!(matches!(
            load_concepts(f.path()),
            Err(TerminologyError::MalformedRow { .. })
        ));
    }

    #[test]
    fn names_keep_case() {
        let f = file("source\tcode\tcui\ttty\tname\nRXNORM\t9000\t\tBN\tEMbeda\n");
        assert_eq!(load_concepts(f.path()).unwrap()[0].name, "EMbeda");
    }

    #[test]
    fn relation_row_and_dedup() {
        let row = "RXNORM\t7052\thas_tradename\tRXNORM\t9000\n";
        let f = file(&format!(
            "src_source\tsrc_code\trel\tdst_source\tdst_code\n{row}{row}{row}"
        ));
        let loaded = load_relations(f.path()).unwrap();
        assert_eq!(loaded.records.len(), 1);
        assert_eq!(loaded.duplicates, 2);
        assert_eq!(
            loaded.records[0],
            RelationRecord {
                src: SourceCode::rxnorm("7052"),
                rel: RelationType::HasTradename,
                dst: SourceCode::rxnorm("9000"),
            }
        );
    }

    #[test]
    fn relation_unknown_type() {
        let f = file(
            "src_source\tsrc_code\trel\tdst_source\tdst_code\nRXNORM\t7052\ttreats\tRXNORM\t1\n",
        );
        assert!(matches!(
            load_relations(f.path()),
            Err(TerminologyError::UnknownRelationType { .. })
        ));
    }
}
