use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::terminology::normalize_name;

pub const VOCAB_DIR_ENV: &str = "ODKG_VOCAB_DIR";

const FORMS: &str = include_str!("../../vocab/forms.txt");
const ROUTES: &str = include_str!("../../vocab/routes.txt");

#[derive(Debug, Error)]
#[error("{path}: {source}")]
pub struct VocabError {
    pub path: PathBuf,
    #[source]
    pub source: std::io::Error,
}

/// Dose form and route vocabularies. Entries are stored normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabularies {
    forms: BTreeSet<String>,
    routes: BTreeSet<String>,
    max_words: usize,
}

impl Default for Vocabularies {
    /// The vocabularies shipped with the crate.
    fn default() -> Self {
        Vocabularies::from_lines(FORMS, ROUTES)
    }
}

fn entries(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(normalize_name)
        .filter(|l| !l.is_empty())
        .collect()
}

impl Vocabularies {
    pub fn from_lines(forms: &str, routes: &str) -> Self {
        let forms = entries(forms);
        let routes = entries(routes);
        let max_words = forms
            .iter()
            .chain(&routes)
            .map(|e| e.split(' ').count())
            .max()
            .unwrap_or(0);
        Vocabularies {
            forms,
            routes,
            max_words,
        }
    }

    /// Reads `forms.txt` and `routes.txt` from a directory.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self, VocabError> {
        let read = |name: &str| {
            let path = dir.as_ref().join(name);
            std::fs::read_to_string(&path).map_err(|source| VocabError { path, source })
        };
        Ok(Vocabularies::from_lines(
            &read("forms.txt")?,
            &read("routes.txt")?,
        ))
    }

    /// The directory named by `ODKG_VOCAB_DIR` if set, else the shipped lists.
    pub fn from_env() -> Result<Self, VocabError> {
        match std::env::var_os(VOCAB_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Vocabularies::from_dir(dir),
            _ => Ok(Vocabularies::default()),
        }
    }

    pub fn is_form(&self, normalized: &str) -> bool {
        self.forms.contains(normalized)
    }

    pub fn is_route(&self, normalized: &str) -> bool {
        self.routes.contains(normalized)
    }

    pub fn forms(&self) -> &BTreeSet<String> {
        &self.forms
    }

    pub fn routes(&self) -> &BTreeSet<String> {
        &self.routes
    }

    /// Longest entry in words, across both lists.
    pub fn max_words(&self) -> usize {
        self.max_words
    }
}
