//! Proofs as S-expressions.
//!
//! ```text
//! (arrow-int "P -> P & P" :discharge h
//!   (and-int "P & P"
//!     (assume h "P")
//!     (assume h "P")))
//! ```
//!
//! A node is `(assume <label> "<formula>")` or
//! `(<rule> "<formula>" [:discharge <label>] [:witness <n>] [:term "<term>"] <child>*)`.
//! The second premise of a detour is wrapped as `(embedded <proof>)`.
//! [`write_proof`] puts each child on its own line, indented two spaces past
//! its parent, and reading then writing that layout is the identity.

use bql_core::proofs::{Proof, Rule};
use bql_core::{Formula, Signature};
use thiserror::Error;

use crate::sentences::Symbols;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ProofFileError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Str(String),
    Key(String),
    Atom(String),
    Eof,
}

struct Reader<'a, 's> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    text: &'a str,
    symbols: Symbols<'s>,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, (usize, String)> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            ';' => {
                while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                    chars.next();
                }
            }
            '(' | ')' => {
                chars.next();
                out.push((i, if c == '(' { Tok::Open } else { Tok::Close }));
            }
            '"' => {
                chars.next();
                let start = i + 1;
                loop {
                    match chars.next() {
                        Some((j, '"')) => {
                            out.push((i, Tok::Str(text[start..j].to_string())));
                            break;
                        }
                        Some(_) => {}
                        None => return Err((i, "unterminated string".into())),
                    }
                }
            }
            _ => {
                let start = i;
                let mut end = text.len();
                while let Some(&(j, c)) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        end = j;
                        break;
                    }
                    chars.next();
                }
                let word = &text[start..end];
                let tok = match word.strip_prefix(':') {
                    Some(k) => Tok::Key(k.to_string()),
                    None => Tok::Atom(word.to_string()),
                };
                out.push((i, tok));
            }
        }
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

impl Reader<'_, '_> {
    fn error(&self, pos: usize, message: impl Into<String>) -> ProofFileError {
        let (line, col) = line_col(self.text, pos);
        ProofFileError { line, col, message: message.into() }
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn expect_open(&mut self) -> Result<(), ProofFileError> {
        match self.bump() {
            (_, Tok::Open) => Ok(()),
            (pos, t) => Err(self.error(pos, format!("expected `(`, found {t:?}"))),
        }
    }

    fn expect_close(&mut self) -> Result<(), ProofFileError> {
        match self.bump() {
            (_, Tok::Close) => Ok(()),
            (pos, t) => Err(self.error(pos, format!("expected `)`, found {t:?}"))),
        }
    }

    fn atom(&mut self, what: &str) -> Result<(usize, String), ProofFileError> {
        match self.bump() {
            (pos, Tok::Atom(a)) => Ok((pos, a)),
            (pos, t) => Err(self.error(pos, format!("expected {what}, found {t:?}"))),
        }
    }

    fn string(&mut self, what: &str) -> Result<(usize, String), ProofFileError> {
        match self.bump() {
            (pos, Tok::Str(s)) => Ok((pos, s)),
            (pos, t) => Err(self.error(pos, format!("expected {what} in quotes, found {t:?}"))),
        }
    }

    fn formula(&mut self) -> Result<Formula, ProofFileError> {
        let (pos, s) = self.string("a formula")?;
        self.symbols.formula(&s).map_err(|e| self.error(pos + 1 + e.pos, e.kind.to_string()))
    }

    fn node(&mut self) -> Result<Proof, ProofFileError> {
        self.expect_open()?;
        let (pos, head) = self.atom("a rule name")?;
        let rule = Rule::from_name(&head).ok_or_else(|| self.error(pos, format!("unknown rule `{head}`")))?;
        if rule == Rule::Assume {
            let (_, label) = self.atom("an assumption label")?;
            let f = self.formula()?;
            self.expect_close()?;
            return Ok(Proof::assume(label, f));
        }
        let conclusion = self.formula()?;
        let mut p = Proof::node(rule, conclusion, Vec::new());
        while let Tok::Key(_) = self.peek() {
            let (pos, Tok::Key(key)) = self.bump() else { unreachable!() };
            let dup = || self.error(pos, format!("`:{key}` given twice"));
            match key.as_str() {
                "discharge" => {
                    if p.label.is_some() {
                        return Err(dup());
                    }
                    p.label = Some(self.atom("a discharge label")?.1);
                }
                "witness" => {
                    if p.witness.is_some() {
                        return Err(dup());
                    }
                    let (at, n) = self.atom("a witness index")?;
                    p.witness = Some(n.parse().map_err(|_| self.error(at, format!("`{n}` is not a witness index")))?);
                }
                "term" => {
                    if p.term.is_some() {
                        return Err(dup());
                    }
                    let (at, s) = self.string("a term")?;
                    p.term = Some(self.symbols.term(&s).map_err(|e| self.error(at + 1 + e.pos, e.kind.to_string()))?);
                }
                _ => return Err(self.error(pos, format!("unknown annotation `:{key}`"))),
            }
        }
        while *self.peek() == Tok::Open {
            let embedded = rule == Rule::Detour && p.children.len() == 1;
            if embedded {
                self.expect_open()?;
                let (at, word) = self.atom("`embedded`")?;
                if word != "embedded" {
                    return Err(self.error(at, format!("expected `embedded`, found `{word}`")));
                }
                p.children.push(self.node()?);
                self.expect_close()?;
            } else {
                p.children.push(self.node()?);
            }
        }
        self.expect_close()?;
        Ok(p)
    }
}

/// Reads one proof against `sig`.
pub fn read_proof(text: &str, sig: &Signature) -> Result<Proof, ProofFileError> {
    read_with(text, Symbols::Fixed(sig))
}

/// Reads one proof, declaring symbols in `sig` on first use.
pub fn read_proof_inferring(text: &str, sig: &mut Signature) -> Result<Proof, ProofFileError> {
    read_with(text, Symbols::Infer(sig))
}

fn read_with(text: &str, symbols: Symbols<'_>) -> Result<Proof, ProofFileError> {
    let toks = lex(text).map_err(|(pos, message)| {
        let (line, col) = line_col(text, pos);
        ProofFileError { line, col, message }
    })?;
    let mut r = Reader { toks, at: 0, text, symbols };
    let p = r.node()?;
    match r.bump() {
        (_, Tok::Eof) => Ok(p),
        (pos, _) => Err(r.error(pos, "trailing input after the proof")),
    }
}

pub fn write_proof(p: &Proof) -> String {
    let mut out = String::new();
    write_node(p, 0, &mut out);
    out.push('\n');
    out
}

fn write_node(p: &Proof, indent: usize, out: &mut String) {
    if p.rule == Rule::Assume {
        let label = p.label.as_deref().unwrap_or("_");
        out.push_str(&format!("(assume {label} \"{}\")", p.conclusion));
        return;
    }
    out.push_str(&format!("({} \"{}\"", p.rule.name(), p.conclusion));
    if let Some(l) = &p.label {
        out.push_str(&format!(" :discharge {l}"));
    }
    if let Some(i) = p.witness {
        out.push_str(&format!(" :witness {i}"));
    }
    if let Some(t) = &p.term {
        out.push_str(&format!(" :term \"{t}\""));
    }
    let pad = " ".repeat(indent + 2);
    for (i, c) in p.children.iter().enumerate() {
        out.push('\n');
        out.push_str(&pad);
        if p.rule == Rule::Detour && i == 1 {
            out.push_str("(embedded ");
            write_node(c, indent + 2, out);
            out.push(')');
        } else {
            write_node(c, indent + 2, out);
        }
    }
    out.push(')');
}
