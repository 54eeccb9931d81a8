//! Rule-based drug string parser.
//!
//! Parsing runs in a fixed order over the token list:
//!
//! 1. names, by greedy longest match against the name lexicon, left to right;
//! 2. the first strength expression `Number Unit [/ [Number] Unit]` among the
//!    tokens not taken by a name;
//! 3. dose form and route, by longest match against the vocabularies (a form
//!    wins a tie). Only the first form and the first route are kept.
//!
//! Whatever is left over is reported as residue, one span per token.

mod normalize;
mod tokenize;
mod vocab;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::terminology::{normalize_name, NameLexicon};

pub use normalize::{
    lexicon_from_graph, normalize, MatchStatus, NormalizationResult, NormalizedLine, Normalizer,
};
pub use tokenize::{canonical_decimal, tokenize, Token, TokenClass, Unit};
pub use vocab::{VocabError, Vocabularies, VOCAB_DIR_ENV};

/// A byte range of the raw string and the text it covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameMatch {
    pub start: usize,
    pub end: usize,
    pub text: String,
    /// The normalized lexicon key that matched.
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrengthSpec {
    pub value: String,
    pub unit: Unit,
    pub per_value: Option<String>,
    pub per_unit: Option<Unit>,
}

impl fmt::Display for StrengthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)?;
        if let (Some(v), Some(u)) = (&self.per_value, self.per_unit) {
            write!(f, "/{v} {u}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedDrugString {
    pub raw: String,
    pub name_matches: Vec<NameMatch>,
    pub strength: Option<StrengthSpec>,
    pub form: Option<String>,
    pub route: Option<String>,
    pub residue: Vec<Span>,
}

/// Normalized key of a token window that grows one token at a time.
struct Window<'t> {
    tokens: &'t [Token],
    key: String,
    words: usize,
}

impl<'t> Window<'t> {
    fn new(tokens: &'t [Token]) -> Self {
        Window {
            tokens,
            key: String::new(),
            words: 0,
        }
    }

    fn extend(&mut self, j: usize) {
        let piece = normalize_name(&self.tokens[j].text);
        if piece.is_empty() {
            return;
        }
        self.words += piece.split(' ').count();
        if !self.key.is_empty() {
            self.key.push(' ');
        }
        self.key.push_str(&piece);
    }
}

fn match_names(tokens: &[Token], lexicon: &NameLexicon, taken: &mut [bool]) -> Vec<NameMatch> {
    let max = lexicon.max_token_len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !tokens[i].is_alnum() {
            i += 1;
            continue;
        }
        let mut w = Window::new(tokens);
        let mut best = None;
        for (j, tok) in tokens.iter().enumerate().skip(i) {
            w.extend(j);
            if w.words > max {
                break;
            }
            if tok.is_alnum() && lexicon.get(&w.key).is_some() {
                best = Some((j, w.key.clone()));
            }
        }
        match best {
            Some((j, name)) => {
                let (start, end) = (tokens[i].start, tokens[j].end);
                out.push(NameMatch {
                    start,
                    end,
                    text: String::new(),
                    name,
                });
                taken[i..=j].iter_mut().for_each(|t| *t = true);
                i = j + 1;
            }
            None => i += 1,
        }
    }
    out
}

fn match_strength(tokens: &[Token], taken: &mut [bool]) -> Option<StrengthSpec> {
    let free =
        |k: usize, class: TokenClass| tokens.get(k).is_some_and(|t| t.class == class) && !taken[k];
    let unit = |k: usize| Unit::parse(&tokens[k].text).expect("unit token");
    for i in 0..tokens.len() {
        if !(free(i, TokenClass::Number) && free(i + 1, TokenClass::Unit)) {
            continue;
        }
        let Some(value) = canonical_decimal(&tokens[i].text) else {
            continue;
        };
        let mut spec = StrengthSpec {
            value,
            unit: unit(i + 1),
            per_value: None,
            per_unit: None,
        };
        let mut last = i + 1;
        if free(i + 2, TokenClass::Slash) {
            if free(i + 3, TokenClass::Unit) {
                spec.per_value = Some("1".into());
                spec.per_unit = Some(unit(i + 3));
                last = i + 3;
            } else if free(i + 3, TokenClass::Number) && free(i + 4, TokenClass::Unit) {
                if let Some(per) = canonical_decimal(&tokens[i + 3].text) {
                    spec.per_value = Some(per);
                    spec.per_unit = Some(unit(i + 4));
                    last = i + 4;
                }
            }
        }
        taken[i..=last].iter_mut().for_each(|t| *t = true);
        return Some(spec);
    }
    None
}

fn match_form_route(
    tokens: &[Token],
    vocab: &Vocabularies,
    taken: &mut [bool],
) -> (Option<String>, Option<String>) {
    let (mut form, mut route) = (None, None);
    let mut i = 0;
    while i < tokens.len() {
        if taken[i] || !tokens[i].is_alnum() {
            i += 1;
            continue;
        }
        let mut w = Window::new(tokens);
        let mut best: Option<(usize, String, bool)> = None;
        for j in i..tokens.len() {
            if taken[j] {
                break;
            }
            w.extend(j);
            if w.words > vocab.max_words() {
                break;
            }
            if !tokens[j].is_alnum() {
                continue;
            }
            if vocab.is_form(&w.key) {
                best = Some((j, w.key.clone(), true));
            } else if vocab.is_route(&w.key) {
                best = Some((j, w.key.clone(), false));
            }
        }
        let Some((j, entry, is_form)) = best else {
            i += 1;
            continue;
        };
        let slot = if is_form { &mut form } else { &mut route };
        if slot.is_none() {
            *slot = Some(entry);
            taken[i..=j].iter_mut().for_each(|t| *t = true);
        }
        i = j + 1;
    }
    (form, route)
}

/// Parses one raw drug string. Never fails: unmatched text ends up in the
/// residue.
pub fn parse(raw: &str, lexicon: &NameLexicon, vocab: &Vocabularies) -> ParsedDrugString {
    let tokens = tokenize(raw);
    let mut taken = vec![false; tokens.len()];
    let mut name_matches = match_names(&tokens, lexicon, &mut taken);
    for m in &mut name_matches {
        m.text = raw[m.start..m.end].to_string();
    }
    let strength = match_strength(&tokens, &mut taken);
    let (form, route) = match_form_route(&tokens, vocab, &mut taken);
    let residue = tokens
        .iter()
        .zip(&taken)
        .filter(|(_, &t)| !t)
        .map(|(t, _)| Span {
            start: t.start,
            end: t.end,
            text: t.text.clone(),
        })
        .collect();
    ParsedDrugString {
        raw: raw.to_string(),
        name_matches,
        strength,
        form,
        route,
        residue,
    }
}
