//! Seeded random formulas over a signature.
//!
//! Terms are constants and bound variables; function symbols are not used.
//! Output depends only on the seed, the signature and the configuration.

use std::collections::BTreeSet;

use bql_core::syntax::Connective;
use bql_core::{Formula, Signature, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Maximum nesting of connectives and quantifiers.
    pub depth: usize,
    pub banned: BTreeSet<Connective>,
    /// Variables that may occur free.
    pub free: Vec<String>,
}

impl GenConfig {
    pub fn new(depth: usize) -> Self {
        GenConfig { depth, banned: BTreeSet::new(), free: Vec::new() }
    }

    pub fn banning(mut self, cs: &[Connective]) -> Self {
        self.banned.extend(cs.iter().copied());
        self
    }

    /// Without `->`, `|` and `exists`.
    pub fn positive(self) -> Self {
        self.banning(&[Connective::Arrow, Connective::Or, Connective::Exists])
    }

    pub fn with_free(mut self, v: &str) -> Self {
        self.free.push(v.to_string());
        self
    }
}

pub struct FormulaGen {
    rng: ChaCha8Rng,
    relations: Vec<(String, usize)>,
    constants: Vec<String>,
    cfg: GenConfig,
}

const VARS: [&str; 4] = ["x", "y", "z", "u"];

impl FormulaGen {
    pub fn new(seed: u64, sig: &Signature, cfg: GenConfig) -> Self {
        FormulaGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            relations: sig.relations().map(|(r, a)| (r.to_string(), a)).collect(),
            constants: sig.constants().map(str::to_string).collect(),
            cfg,
        }
    }

    pub fn formula(&mut self) -> Formula {
        let scope = self.cfg.free.clone();
        self.gen(self.cfg.depth, &scope)
    }

    /// `n` pairwise distinct formulas, or fewer if the space runs dry.
    pub fn distinct(&mut self, n: usize) -> Vec<Formula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut misses = 0;
        while out.len() < n && misses < 100 * n.max(1) {
            let f = self.formula();
            if seen.insert(f.to_string()) {
                out.push(f);
            } else {
                misses += 1;
            }
        }
        out
    }

    fn leaf(&mut self, scope: &[String]) -> Formula {
        let terms: Vec<Term> =
            self.constants.iter().map(|c| Term::constant(c)).chain(scope.iter().map(|v| Term::var(v))).collect();
        let usable: Vec<&(String, usize)> =
            self.relations.iter().filter(|(_, a)| *a == 0 || !terms.is_empty()).collect();
        if usable.is_empty() || self.rng.gen_ratio(1, 8) {
            return if self.rng.gen_bool(0.5) { Formula::Top } else { Formula::Bot };
        }
        let (r, a) = usable.choose(&mut self.rng).expect("nonempty");
        let (r, a) = (r.clone(), *a);
        let args = (0..a).map(|_| terms.choose(&mut self.rng).expect("nonempty").clone()).collect();
        Formula::atom(&r, args)
    }

    fn gen(&mut self, depth: usize, scope: &[String]) -> Formula {
        let allowed: Vec<Connective> =
            [Connective::And, Connective::Or, Connective::Arrow, Connective::Forall, Connective::Exists]
                .into_iter()
                .filter(|c| !self.cfg.banned.contains(c))
                .collect();
        if depth == 0 || allowed.is_empty() || self.rng.gen_ratio(1, 4) {
            return self.leaf(scope);
        }
        match *allowed.choose(&mut self.rng).expect("nonempty") {
            c @ (Connective::And | Connective::Or | Connective::Arrow) => {
                let a = self.gen(depth - 1, scope);
                let b = self.gen(depth - 1, scope);
                match c {
                    Connective::And => Formula::and(a, b),
                    Connective::Or => Formula::or(a, b),
                    _ => Formula::arrow(a, b),
                }
            }
            q => {
                let v = VARS.get(scope.len()).map_or_else(|| format!("x{}", scope.len()), |v| v.to_string());
                let mut inner = scope.to_vec();
                inner.push(v.clone());
                let body = self.gen(depth - 1, &inner);
                if q == Connective::Forall {
                    Formula::forall(&v, body)
                } else {
                    Formula::exists(&v, body)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bql_core::syntax::{fragment_check, free_vars};

    fn sig() -> Signature {
        Signature::new().with_relation("P", 0).with_relation("S", 1).with_constant("c")
    }

    #[test]
    fn deterministic_per_seed() {
        let a = FormulaGen::new(7, &sig(), GenConfig::new(4)).distinct(20);
        let b = FormulaGen::new(7, &sig(), GenConfig::new(4)).distinct(20);
        let c = FormulaGen::new(8, &sig(), GenConfig::new(4)).distinct(20);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn respects_configuration() {
        let cfg = GenConfig::new(3).positive();
        for f in FormulaGen::new(1, &sig(), cfg.clone()).distinct(50) {
            assert!(f.depth() <= 3);
            assert!(f.is_sentence());
            assert!(fragment_check(&f, &cfg.banned), "{f}");
        }
        for f in FormulaGen::new(2, &sig(), GenConfig::new(2).with_free("x")).distinct(50) {
            assert!(free_vars(&f).iter().all(|v| v == "x"));
        }
    }

    #[test]
    fn sentences_without_constants_stay_closed() {
        let sig = Signature::new().with_relation("S", 1);
        for f in FormulaGen::new(3, &sig, GenConfig::new(3)).distinct(30) {
            assert!(f.is_sentence(), "{f}");
        }
    }
}
