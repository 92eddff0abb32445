//! Canonical rendering. Every operand that is not atomic gets parentheses,
//! so the output never depends on precedence or associativity.

use core::fmt;

use super::{Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::Witness(i) => write!(f, "@{i}"),
            Term::App(fun, args) => {
                write!(f, "{fun}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

fn is_atomic(f: &Formula) -> bool {
    matches!(f, Formula::Top | Formula::Bot | Formula::Atom(..))
}

fn operand(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    if is_atomic(f) {
        write!(out, "{f}")
    } else {
        write!(out, "({f})")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("top"),
            Formula::Bot => f.write_str("bot"),
            Formula::Atom(r, args) if args.is_empty() => f.write_str(r),
            Formula::Atom(r, args) => {
                write!(f, "{r}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Arrow(a, b) => {
                let op = match self {
                    Formula::And(..) => " & ",
                    Formula::Or(..) => " | ",
                    _ => " -> ",
                };
                operand(f, a)?;
                f.write_str(op)?;
                operand(f, b)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let q = if matches!(self, Formula::Forall(..)) { "forall" } else { "exists" };
                write!(f, "{q} {v}. ")?;
                // a quantifier body may itself be a bare quantifier
                if matches!(**body, Formula::Forall(..) | Formula::Exists(..)) {
                    write!(f, "{body}")
                } else {
                    operand(f, body)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn canonical_forms() {
        assert_eq!(Formula::Top.to_string(), "top");
        let f = Formula::and(Formula::prop("P"), Formula::or(Formula::prop("Q"), Formula::prop("R")));
        assert_eq!(f.to_string(), "P & (Q | R)");
        let v = || vec![Term::var("v")];
        let g = Formula::forall("v", Formula::arrow(Formula::atom("P", v()), Formula::atom("Q", v())));
        assert_eq!(g.to_string(), "forall v. (P(v) -> Q(v))");
        let dist = Formula::or(
            Formula::and(Formula::prop("P"), Formula::prop("Q")),
            Formula::and(Formula::prop("P"), Formula::prop("R")),
        );
        assert_eq!(dist.to_string(), "(P & Q) | (P & R)");
        let nested = Formula::forall(
            "v",
            Formula::exists(
                "u",
                Formula::atom("R", vec![Term::var("v"), Term::App("f".into(), vec![Term::Witness(3)])]),
            ),
        );
        assert_eq!(nested.to_string(), "forall v. exists u. R(v, f(@3))");
    }
}
