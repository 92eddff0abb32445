//! Signature files: one declaration kind per line.
//!
//! ```text
//! # comment
//! constants c d
//! functions f/1 g/2
//! relations P/0 S/1
//! ```

use bql_core::Signature;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct SigFileError {
    pub line: usize,
    pub message: String,
}

pub fn read_signature(text: &str) -> Result<Signature, SigFileError> {
    let mut sig = Signature::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| SigFileError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut words = content.split_whitespace();
        let Some(kind) = words.next() else { continue };
        for w in words {
            let added = match kind {
                "constants" => sig.add_constant(w),
                "functions" | "relations" => {
                    let (name, arity) = w
                        .split_once('/')
                        .and_then(|(n, a)| Some((n, a.parse::<usize>().ok()?)))
                        .ok_or_else(|| err(format!("expected name/arity, found `{w}`")))?;
                    if kind == "functions" {
                        sig.add_function(name, arity)
                    } else {
                        sig.add_relation(name, arity)
                    }
                }
                other => return Err(err(format!("unknown declaration `{other}`"))),
            };
            added.map_err(|e| err(e.to_string()))?;
        }
    }
    Ok(sig)
}

/// Canonical form: the three lines in fixed order, empty kinds omitted.
pub fn write_signature(sig: &Signature) -> String {
    let mut out = String::new();
    let consts: Vec<&str> = sig.constants().collect();
    if !consts.is_empty() {
        out.push_str(&format!("constants {}\n", consts.join(" ")));
    }
    let funcs: Vec<String> = sig.functions().map(|(n, a)| format!("{n}/{a}")).collect();
    if !funcs.is_empty() {
        out.push_str(&format!("functions {}\n", funcs.join(" ")));
    }
    let rels: Vec<String> = sig.relations().map(|(n, a)| format!("{n}/{a}")).collect();
    if !rels.is_empty() {
        out.push_str(&format!("relations {}\n", rels.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_writes() {
        let text = "# demo\nconstants c d\nfunctions f/1\nrelations P/0 S/1  # trailing\n";
        let sig = read_signature(text).unwrap();
        assert!(sig.has_constant("d"));
        assert_eq!(sig.function_arity("f"), Some(1));
        assert_eq!(sig.relation_arity("S"), Some(1));
        assert_eq!(write_signature(&sig), "constants c d\nfunctions f/1\nrelations P/0 S/1\n");
        assert_eq!(read_signature(&write_signature(&sig)).unwrap(), sig);
    }

    #[test]
    fn rejects_bad_lines() {
        assert_eq!(read_signature("relations S").unwrap_err().line, 1);
        assert!(read_signature("\nsorts A").unwrap_err().message.contains("sorts"));
        assert!(read_signature("relations S/1 S/2").is_err());
    }
}
