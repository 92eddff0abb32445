//! Recursive-descent parser for the textual formula grammar.
//!
//! Precedence is `&` > `|` > `->`; all three binary connectives associate to
//! the right. Quantifiers extend as far right as possible.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{Formula, Signature, SyntaxError, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// A character that cannot start any token.
    Lexical(char),
    Unexpected {
        expected: &'static str,
        found: String,
    },
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    /// An identifier that is neither bound nor declared, or declared in another role.
    UnboundName(String),
    NameClash(String),
}

/// Parse failure with the byte offset where it was detected.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at offset {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Lexical(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::Unexpected { expected, found } => write!(f, "expected {expected}, found {found}"),
            ParseErrorKind::Arity { name, expected, found } => {
                write!(f, "`{name}` expects {expected} argument(s), found {found}")
            }
            ParseErrorKind::UnboundName(n) => write!(f, "unbound name `{n}`"),
            ParseErrorKind::NameClash(n) => write!(f, "`{n}` is declared with a different role"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Witness(u32),
    LParen,
    RParen,
    Comma,
    Dot,
    Amp,
    Bar,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Witness(i) => write!(f, "`@{i}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'@' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n = text[i + 1..j]
                    .parse::<u32>()
                    .map_err(|_| ParseError { pos: start, kind: ParseErrorKind::Lexical('@') })?;
                i = j;
                out.push((start, Tok::Witness(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'') {
                    j += 1;
                }
                out.push((start, Tok::Ident(text[i..j].to_string())));
                i = j;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError { pos: start, kind: ParseErrorKind::Lexical(ch) });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

enum SigMode<'s> {
    Fixed(&'s Signature),
    Extend(&'s mut Signature),
}

impl SigMode<'_> {
    fn sig(&self) -> &Signature {
        match self {
            SigMode::Fixed(s) => s,
            SigMode::Extend(s) => s,
        }
    }
}

struct Parser<'s> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    sig: SigMode<'s>,
    scope: Vec<String>,
}

const KEYWORDS: [&str; 4] = ["top", "bot", "forall", "exists"];

fn clash(pos: usize, e: SyntaxError) -> ParseError {
    let kind = match e {
        SyntaxError::Arity { name, expected, found } => ParseErrorKind::Arity { name, expected, found },
        SyntaxError::NameClash(n) | SyntaxError::UnknownSymbol(n) => ParseErrorKind::NameClash(n),
        SyntaxError::NullaryFunction(n) => ParseErrorKind::Arity { name: n, expected: 1, found: 0 },
        SyntaxError::OpenTerm(n) => ParseErrorKind::UnboundName(n),
    };
    ParseError { pos, kind }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError { pos: self.pos(), kind: ParseErrorKind::Unexpected { expected, found: self.peek().to_string() } }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.conjunction()?;
        if *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.disjunction()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.conjunction()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "top" => {
                    self.bump();
                    Ok(Formula::Top)
                }
                "bot" => {
                    self.bump();
                    Ok(Formula::Bot)
                }
                "forall" | "exists" => {
                    self.bump();
                    let var = match self.bump() {
                        (_, Tok::Ident(v)) if !KEYWORDS.contains(&v.as_str()) => v,
                        (pos, t) => {
                            return Err(ParseError {
                                pos,
                                kind: ParseErrorKind::Unexpected { expected: "a variable", found: t.to_string() },
                            })
                        }
                    };
                    self.expect(Tok::Dot, "`.`")?;
                    self.scope.push(var.clone());
                    let body = self.formula();
                    self.scope.pop();
                    let body = body?;
                    Ok(if name == "forall" { Formula::forall(&var, body) } else { Formula::exists(&var, body) })
                }
                _ => self.atom(),
            },
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() != Tok::LParen {
            return Ok(args);
        }
        self.bump();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.unexpected("`,` or `)`")),
            }
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let (pos, tok) = self.bump();
        let Tok::Ident(name) = tok else { unreachable!("atom called on a non-identifier") };
        let args = self.args()?;
        match &mut self.sig {
            SigMode::Fixed(sig) => match sig.relation_arity(&name) {
                Some(a) if a == args.len() => {}
                Some(a) => {
                    return Err(ParseError {
                        pos,
                        kind: ParseErrorKind::Arity { name, expected: a, found: args.len() },
                    })
                }
                None => return Err(ParseError { pos, kind: ParseErrorKind::UnboundName(name) }),
            },
            SigMode::Extend(sig) => sig.add_relation(&name, args.len()).map_err(|e| clash(pos, e))?,
        }
        Ok(Formula::Atom(name, args))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            (_, Tok::Witness(i)) => Ok(Term::Witness(i)),
            (pos, Tok::Ident(name)) if !KEYWORDS.contains(&name.as_str()) => {
                if *self.peek() == Tok::LParen {
                    let args = self.args()?;
                    match &mut self.sig {
                        SigMode::Fixed(sig) => match sig.function_arity(&name) {
                            Some(a) if a == args.len() => {}
                            Some(a) => {
                                return Err(ParseError {
                                    pos,
                                    kind: ParseErrorKind::Arity { name, expected: a, found: args.len() },
                                })
                            }
                            None => return Err(ParseError { pos, kind: ParseErrorKind::UnboundName(name) }),
                        },
                        SigMode::Extend(sig) => sig.add_function(&name, args.len()).map_err(|e| clash(pos, e))?,
                    }
                    return Ok(Term::App(name, args));
                }
                if self.scope.contains(&name) {
                    return Ok(Term::Var(name));
                }
                if let Some(a) = self.sig.sig().function_arity(&name) {
                    return Err(ParseError { pos, kind: ParseErrorKind::Arity { name, expected: a, found: 0 } });
                }
                match &mut self.sig {
                    SigMode::Fixed(sig) if sig.has_constant(&name) => Ok(Term::Const(name)),
                    SigMode::Fixed(_) => Err(ParseError { pos, kind: ParseErrorKind::UnboundName(name) }),
                    SigMode::Extend(sig) => {
                        sig.add_constant(&name).map_err(|e| clash(pos, e))?;
                        Ok(Term::Const(name))
                    }
                }
            }
            (pos, t) => {
                Err(ParseError { pos, kind: ParseErrorKind::Unexpected { expected: "a term", found: t.to_string() } })
            }
        }
    }
}

fn run_with<T>(
    text: &str,
    sig: SigMode<'_>,
    free: &[&str],
    item: impl FnOnce(&mut Parser<'_>) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, sig, scope: free.iter().map(|s| s.to_string()).collect() };
    let out = item(&mut p)?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(out)
}

fn run(text: &str, sig: SigMode<'_>, free: &[&str]) -> Result<Formula, ParseError> {
    run_with(text, sig, free, |p| p.formula())
}

/// Parses a closed term against a fixed signature.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    run_with(text, SigMode::Fixed(sig), &[], |p| p.term())
}

/// Like [`parse_term`], declaring unknown constants and functions in `sig`.
pub fn parse_term_extending(text: &str, sig: &mut Signature) -> Result<Term, ParseError> {
    run_with(text, SigMode::Extend(sig), &[], |p| p.term())
}

/// Parses `text` against a fixed signature. Identifiers in term position must
/// be bound by an enclosing quantifier or declared as constants.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    run(text, SigMode::Fixed(sig), &[])
}

/// Like [`parse_formula`], with `free` treated as variables bound outside the text.
pub fn parse_open_formula(text: &str, sig: &Signature, free: &[&str]) -> Result<Formula, ParseError> {
    run(text, SigMode::Fixed(sig), free)
}

/// Parses `text`, declaring every unknown symbol in `sig` as it is met:
/// unbound term identifiers become constants, relations and functions take
/// the arity of their first use.
pub fn parse_formula_extending(text: &str, sig: &mut Signature) -> Result<Formula, ParseError> {
    run(text, SigMode::Extend(sig), &[])
}
