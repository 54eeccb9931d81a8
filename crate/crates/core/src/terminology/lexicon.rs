use std::collections::{BTreeSet, HashMap};

use super::{ConceptRecord, SourceCode};

/// Lowercases, turns every character that is not a letter or digit into a
/// space, splits letter/digit boundaries ("30MG" becomes "30 mg"), collapses
/// runs of spaces and trims.
pub fn normalize_name(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut gap = false;
    let mut prev_digit = None;
    for ch in s.chars() {
        if ch.is_alphanumeric() {
            let digit = ch.is_numeric();
            if (gap || prev_digit.is_some_and(|d| d != digit)) && !out.is_empty() {
                out.push(' ');
            }
            gap = false;
            prev_digit = Some(digit);
            out.extend(ch.to_lowercase());
        } else {
            gap = true;
        }
    }
    out
}

/// Normalized name to the set of codes carrying that name.
///
/// Also remembers the CUI of every indexed code so normalization can report
/// CUIs for codes that are not part of the graph.
#[derive(Debug, Clone, Default)]
pub struct NameLexicon {
    entries: HashMap<String, BTreeSet<SourceCode>>,
    cuis: HashMap<SourceCode, String>,
    max_token_len: usize,
}

impl NameLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one name. Names that normalize to nothing are ignored.
    pub fn insert(&mut self, name: &str, code: SourceCode, cui: Option<&str>) {
        let key = normalize_name(name);
        if key.is_empty() {
            return;
        }
        self.max_token_len = self.max_token_len.max(key.split(' ').count());
        if let Some(cui) = cui.filter(|c| !c.is_empty()) {
            self.cuis.insert(code.clone(), cui.to_string());
        }
        self.entries.entry(key).or_default().insert(code);
    }

    /// Codes for an already-normalized name.
    pub fn get(&self, normalized: &str) -> Option<&BTreeSet<SourceCode>> {
        self.entries.get(normalized)
    }

    /// Codes for a raw name.
    pub fn lookup(&self, name: &str) -> Option<&BTreeSet<SourceCode>> {
        self.get(&normalize_name(name))
    }

    pub fn cui_of(&self, code: &SourceCode) -> Option<&str> {
        self.cuis.get(code).map(String::as_str)
    }

    /// Longest entry, in normalized words.
    pub fn max_token_len(&self) -> usize {
        self.max_token_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BTreeSet<SourceCode>)> {
        self.entries.iter()
    }
}

pub fn build_name_lexicon(concepts: &[ConceptRecord]) -> NameLexicon {
    let mut lex = NameLexicon::new();
    for c in concepts {
        lex.insert(&c.name, c.source_code.clone(), Some(&c.cui));
    }
    lex
}
