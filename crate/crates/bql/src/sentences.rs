//! Sentence lists, either one per line with `#` comments or a single
//! comma-separated list. Commas inside parentheses do not separate.

use bql_core::syntax::{parse_formula, parse_formula_extending, parse_term, parse_term_extending, ParseError};
use bql_core::{Formula, Signature, Term};
use thiserror::Error;

/// Where symbols come from: a declared signature, or one grown while parsing.
pub enum Symbols<'a> {
    Fixed(&'a Signature),
    Infer(&'a mut Signature),
}

impl Symbols<'_> {
    pub fn formula(&mut self, text: &str) -> Result<Formula, ParseError> {
        match self {
            Symbols::Fixed(sig) => parse_formula(text, sig),
            Symbols::Infer(sig) => parse_formula_extending(text, sig),
        }
    }

    pub fn term(&mut self, text: &str) -> Result<Term, ParseError> {
        match self {
            Symbols::Fixed(sig) => parse_term(text, sig),
            Symbols::Infer(sig) => parse_term_extending(text, sig),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("sentence {index} `{text}`: {source}")]
pub struct SentenceError {
    /// 1-based line number for files, position in the list otherwise.
    pub index: usize,
    pub text: String,
    pub source: ParseError,
}

/// One sentence per nonblank line; `#` starts a comment.
pub fn read_sentence_lines(text: &str, symbols: &mut Symbols<'_>) -> Result<Vec<Formula>, SentenceError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f =
            symbols.formula(line).map_err(|source| SentenceError { index: i + 1, text: line.to_string(), source })?;
        out.push(f);
    }
    Ok(out)
}

/// Splits at commas outside parentheses and parses each piece. Blank input
/// is the empty list.
pub fn read_sentence_list(text: &str, symbols: &mut Symbols<'_>) -> Result<Vec<Formula>, SentenceError> {
    split_top_level(text)
        .into_iter()
        .enumerate()
        .map(|(i, piece)| {
            symbols.formula(piece).map_err(|source| SentenceError { index: i + 1, text: piece.to_string(), source })
        })
        .collect()
}

fn split_top_level(text: &str) -> Vec<&str> {
    if text.trim().is_empty() {
        return Vec::new();
    }
    let mut pieces = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                pieces.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(text[start..].trim());
    pieces
}

pub fn write_sentence_lines(fs: &[Formula]) -> String {
    fs.iter().map(|f| format!("{f}\n")).collect()
}
