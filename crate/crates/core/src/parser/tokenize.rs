use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenClass {
    Word,
    Number,
    Unit,
    Slash,
    Punct,
}

/// A strength unit from the closed unit table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Mg,
    Mcg,
    G,
    Ml,
    L,
    Units,
    Pct,
    Hr,
}

impl Unit {
    /// Looks a unit spelling up in the table. Case-insensitive.
    pub fn parse(s: &str) -> Option<Unit> {
        Some(match s.to_ascii_lowercase().as_str() {
            "mg" => Unit::Mg,
            "mcg" | "ug" => Unit::Mcg,
            "g" | "gm" => Unit::G,
            "ml" => Unit::Ml,
            "l" => Unit::L,
            "unit" | "units" => Unit::Units,
            "%" => Unit::Pct,
            "hr" | "hour" => Unit::Hr,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Mg => "mg",
            Unit::Mcg => "mcg",
            Unit::G => "g",
            Unit::Ml => "ml",
            Unit::L => "l",
            Unit::Units => "units",
            Unit::Pct => "pct",
            Unit::Hr => "hr",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
    pub class: TokenClass,
}

impl Token {
    /// Whether the token carries a letter or digit. Name and vocabulary
    /// matches must start and end on such tokens.
    pub fn is_alnum(&self) -> bool {
        matches!(self.class, TokenClass::Word | TokenClass::Number)
            || (self.class == TokenClass::Unit && self.text != "%")
    }
}

/// Splits a raw string into tokens covering all of its non-whitespace text.
///
/// Letter runs become `Word` (or `Unit` when in the unit table). Digit runs
/// become `Number`, including one decimal part and `,ddd` digit groups. `/` is
/// `Slash`, `%` is a `Unit`, and any other character is a one-character
/// `Punct`.
pub fn tokenize(raw: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = raw.char_indices().collect();
    let end_of = |i: usize| chars.get(i).map_or(raw.len(), |&(b, _)| b);
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let j;
        let class;
        if c.is_whitespace() {
            i += 1;
            continue;
        } else if c.is_ascii_digit() {
            let mut k = i;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            // ,ddd groups: exactly three digits not followed by a fourth
            loop {
                let group = k + 4 <= chars.len()
                    && chars[k].1 == ','
                    && chars[k + 1..k + 4].iter().all(|(_, d)| d.is_ascii_digit())
                    && chars.get(k + 4).is_none_or(|(_, d)| !d.is_ascii_digit());
                if !group {
                    break;
                }
                k += 4;
            }
            if k + 1 < chars.len() && chars[k].1 == '.' && chars[k + 1].1.is_ascii_digit() {
                k += 1;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
            }
            j = k;
            class = TokenClass::Number;
        } else if c.is_alphabetic() {
            let mut k = i;
            while k < chars.len() && chars[k].1.is_alphabetic() {
                k += 1;
            }
            j = k;
            class = if Unit::parse(&raw[start..end_of(k)]).is_some() {
                TokenClass::Unit
            } else {
                TokenClass::Word
            };
        } else {
            j = i + 1;
            class = match c {
                '/' => TokenClass::Slash,
                '%' => TokenClass::Unit,
                _ => TokenClass::Punct,
            };
        }
        let end = end_of(j);
        out.push(Token {
            text: raw[start..end].to_string(),
            start,
            end,
            class,
        });
        i = j;
    }
    out
}

/// Canonical form of a number token: grouping commas dropped, leading
/// integer zeros and trailing fractional zeros trimmed. `None` for zero.
pub fn canonical_decimal(s: &str) -> Option<String> {
    let s: String = s.chars().filter(|&c| c != ',').collect();
    let (int, frac) = s.split_once('.').unwrap_or((&s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let int = int.trim_start_matches('0');
    let frac = frac.trim_end_matches('0');
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let int = if int.is_empty() { "0" } else { int };
    Some(if frac.is_empty() {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    })
}
