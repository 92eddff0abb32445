//! Invariant suites over exhaustive model enumerations and fixed generator
//! sets. Every suite re-evaluates its claims with the forcing relation and
//! reports a count of checked cases and of failures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::time::{Duration, Instant};

use bql_core::model_ops::{glue_rooted_fan, root_below};
use bql_core::proofs::corpus::{cd_consequence, corpus_signature, relative_family, script_corpus};
use bql_core::proofs::{check_proof, check_relative_proof, conj, relative_deduction_traced, Proof, RdCase};
use bql_core::search::{
    disjunction_glue_check, enumerate_models, find_countermodel, refute_or_unknown, Refutation, SearchBounds,
};
use bql_core::semantics::{forced_everywhere, relatively_forced, validate_model, Evaluator};
use bql_core::syntax::{alpha_eq, free_vars, parse_formula, Connective};
use bql_core::{Formula, KripkeModel, Signature, World};

use crate::generate::{FormulaGen, GenConfig};
use crate::modelfile::{read_model, write_model};
use crate::prooffile::{read_proof, write_proof};

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub note: String,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    name: &'static str,
    start: Instant,
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, start: Instant::now(), cases: 0, failures: 0, first_failure: None }
    }

    fn fail(&mut self, msg: impl Display) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(msg.to_string());
        }
    }

    /// Counts one case; `ok` must be `Ok(true)` to pass.
    fn case<E: Display>(&mut self, ok: Result<bool, E>, msg: impl FnOnce() -> String) {
        self.cases += 1;
        match ok {
            Ok(true) => {}
            Ok(false) => self.fail(msg()),
            Err(e) => self.fail(format!("{}: {e}", msg())),
        }
    }

    fn finish(self, note: impl Into<String>) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first_failure,
            note: note.into(),
            elapsed: self.start.elapsed(),
        }
    }
}

fn forces(m: &KripkeModel, w: World, f: &Formula) -> bool {
    Evaluator::new(m).forces_sentence(w, f).expect("sentence over the model's signature")
}

fn show(fs: &[Formula]) -> String {
    fs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// `n` distinct sentences of depth at most `depth` from a fixed seed.
pub fn sentences(sig: &Signature, seed: u64, n: usize, cfg: GenConfig) -> Vec<Formula> {
    FormulaGen::new(seed, sig, cfg).distinct(n)
}

/// `{P, P -> Q}` against `Q` with one world and one element.
pub fn modus_ponens() -> SuiteResult {
    let mut t = Tally::new("modus-ponens");
    let sig = Signature::new().with_relation("P", 0).with_relation("Q", 0);
    let p = |s: &str| parse_formula(s, &sig).expect("fixed text");
    let gamma = [p("P"), p("P -> Q")];
    let q = p("Q");
    match find_countermodel(&gamma, &q, &SearchBounds::new(1, 1, sig.clone())) {
        Ok(Some(c)) => {
            let ok = gamma.iter().all(|g| forces(&c.model, c.world, g)) && !forces(&c.model, c.world, &q);
            t.case(Ok::<_, String>(ok), || "countermodel does not re-evaluate".into());
        }
        Ok(None) => t.case(Ok::<_, String>(false), || "no countermodel at (1, 1)".into()),
        Err(e) => t.case(Err(e), || "search".into()),
    }
    t.finish("")
}

/// Forcing is upward closed along the order.
pub fn persistence(bounds: &SearchBounds, sentences: &[Formula]) -> SuiteResult {
    let mut t = Tally::new("persistence");
    let mut models = 0;
    for m in enumerate_models(bounds).expect("bounds") {
        models += 1;
        let mut ev = Evaluator::new(&m);
        for f in sentences {
            let forced = match ev.forced_worlds(f) {
                Ok(v) => v,
                Err(e) => {
                    t.fail(format!("{f}: {e}"));
                    continue;
                }
            };
            for &(w, u) in &m.order {
                t.case(Ok::<_, String>(!forced[w] || forced[u]), || {
                    format!("{f} at {} but not {}", m.worlds[w], m.worlds[u])
                });
            }
        }
    }
    t.finish(format!("{models} models, {} sentences", sentences.len()))
}

/// Implications hold at worlds without successors.
pub fn vacuity(bounds: &SearchBounds, sentences: &[Formula]) -> SuiteResult {
    let mut t = Tally::new("vacuity");
    let arrows: Vec<Formula> = sentences
        .iter()
        .flat_map(|a| sentences.iter().take(8).map(move |b| Formula::arrow(a.clone(), b.clone())))
        .collect();
    for m in enumerate_models(bounds).expect("bounds") {
        let mut ev = Evaluator::new(&m);
        for w in (0..m.worlds.len()).filter(|&w| m.successors(w).next().is_none()) {
            for f in &arrows {
                t.case(ev.forces_sentence(w, f), || format!("{f} fails at dead end {}", m.worlds[w]));
            }
        }
    }
    t.finish(format!("{} implications", arrows.len()))
}

/// `forall v (phi | psi)` forces `phi | forall v psi` for closed `phi`.
pub fn cd_validity(bounds: &SearchBounds, instances: &[(Formula, String, Formula)]) -> SuiteResult {
    let mut t = Tally::new("cd-validity");
    let pairs: Vec<(Formula, Formula)> = instances
        .iter()
        .map(|(phi, v, psi)| {
            (
                Formula::forall(v, Formula::or(phi.clone(), psi.clone())),
                Formula::or(phi.clone(), Formula::forall(v, psi.clone())),
            )
        })
        .collect();
    for m in enumerate_models(bounds).expect("bounds") {
        let mut ev = Evaluator::new(&m);
        for (prem, concl) in &pairs {
            for w in 0..m.worlds.len() {
                let ok = ev.forces_sentence(w, prem).and_then(|p| Ok(!p || ev.forces_sentence(w, concl)?));
                t.case(ok, || format!("{prem} without {concl} at {}", m.worlds[w]));
            }
        }
    }
    t.finish(format!("{} instances", instances.len()))
}

/// Forcing at `w` is unchanged by cutting the model down to what `w` sees.
pub fn submodel_invariance(bounds: &SearchBounds, sentences: &[Formula]) -> SuiteResult {
    let mut t = Tally::new("submodel-invariance");
    for m in enumerate_models(bounds).expect("bounds") {
        let mut whole = Evaluator::new(&m);
        for w in 0..m.worlds.len() {
            let sub = bql_core::model_ops::generated_submodel(&m, w).expect("world in range");
            let at = sub.world_index(&m.worlds[w]).expect("generator kept");
            let mut part = Evaluator::new(&sub);
            for f in sentences {
                let ok = whole.forces_sentence(w, f).and_then(|a| Ok(a == part.forces_sentence(at, f)?));
                t.case(ok, || format!("{f} differs at {}", m.worlds[w]));
            }
        }
    }
    t.finish("")
}

/// Every enumerated model is well formed.
pub fn enumeration_validity(bounds: &SearchBounds) -> SuiteResult {
    let mut t = Tally::new("enumeration-validity");
    for m in enumerate_models(bounds).expect("bounds") {
        let v = validate_model(&m);
        t.case(Ok::<_, String>(v.is_empty()), || format!("{:?}", v));
    }
    t.finish("")
}

/// A proof to check for soundness; `sigma` selects the relative kernel.
#[derive(Clone, Debug)]
pub struct Checked {
    pub name: String,
    pub proof: Proof,
    pub sigma: Option<Vec<Formula>>,
}

/// The scripts of the built-in corpus.
pub fn corpus_items() -> Vec<Checked> {
    script_corpus()
        .into_iter()
        .map(|(name, s)| Checked { name: name.to_string(), proof: s.proof, sigma: s.sigma })
        .collect()
}

/// Every world forcing the open assumptions forces the conclusion; for
/// relative proofs, every successor of a world forcing the theory does.
/// Models are enumerated over `sig` plus the witness constants in play.
pub fn soundness(items: &[Checked], sig: &Signature, max_worlds: usize, max_domain: usize) -> SuiteResult {
    let mut t = Tally::new("soundness");
    struct Goal<'a> {
        name: &'a str,
        sigma: Option<&'a [Formula]>,
        open: Vec<Formula>,
        safe: Vec<Formula>,
        conclusion: Formula,
    }
    let mut groups: BTreeMap<BTreeSet<u32>, Vec<Goal>> = BTreeMap::new();
    for it in items {
        let checked = match &it.sigma {
            None => check_proof(&it.proof, sig),
            Some(s) => check_relative_proof(&it.proof, s, sig),
        };
        let j = match checked {
            Ok(j) => j,
            Err(e) => {
                t.fail(format!("{}: rejected: {e}", it.name));
                continue;
            }
        };
        let mut ws = j.conclusion.witnesses();
        for f in j.open_formulas().iter().chain(it.sigma.iter().flatten()) {
            ws.extend(f.witnesses());
        }
        groups.entry(ws).or_default().push(Goal {
            name: &it.name,
            sigma: it.sigma.as_deref(),
            open: j.open_formulas(),
            safe: j.safe_formulas(),
            conclusion: j.conclusion,
        });
    }
    let mut models = 0;
    for (ws, goals) in &groups {
        let mut b = SearchBounds::new(max_worlds, max_domain, sig.clone());
        b.witnesses = ws.clone();
        for m in enumerate_models(&b).expect("bounds") {
            models += 1;
            for g in goals {
                let ok = match g.sigma {
                    None => forced_everywhere(&m, &g.open, &g.conclusion),
                    Some(s) => relatively_forced(&m, s, &g.safe, &g.conclusion),
                };
                t.case(ok, || format!("{} fails on {}", g.name, write_model(&m)));
            }
        }
    }
    t.finish(format!("{} proofs, {models} models", items.len()))
}

/// Transforms the relative family for each triple, re-checks every output
/// independently and tracks case coverage. Returns the outputs for a
/// subsequent soundness run.
pub fn relative_deduction(triples: &[(Formula, Formula, Formula)], sig: &Signature) -> (SuiteResult, Vec<Checked>) {
    let mut t = Tally::new("relative-deduction");
    let mut covered = BTreeSet::new();
    let mut outputs = Vec::new();
    for (a, b, c) in triples {
        for e in relative_family(a, b, c) {
            let name = format!("{} [{a} / {b} / {c}]", e.name);
            let out = match relative_deduction_traced(&e.proof, &e.sigma_prime, &e.gamma, sig) {
                Ok(out) => out,
                Err(err) => {
                    t.case(Err(err), || name.clone());
                    continue;
                }
            };
            covered.extend(out.cases.iter().copied());
            let verdict = check_proof(&out.proof, sig).map(|j| {
                let expected = Formula::arrow(conj(&e.gamma), e.proof.conclusion.clone());
                alpha_eq(&j.conclusion, &expected)
                    && j.open.iter().all(|(_, f)| e.sigma_prime.iter().any(|s| alpha_eq(s, f)))
            });
            t.case(verdict, || format!("{name}: output conclusion or open set is wrong"));
            outputs.push(Checked { name, proof: out.proof, sigma: None });
        }
    }
    let missing: Vec<RdCase> = RdCase::ALL.iter().copied().filter(|c| !covered.contains(c)).collect();
    if !missing.is_empty() {
        t.fail(format!("cases never exercised: {missing:?}"));
    }
    let note = format!("{}/{} cases covered", covered.len(), RdCase::ALL.len());
    (t.finish(note), outputs)
}

/// Countermodels to implications have a successor refuting the consequent.
pub fn conditional_proof(sig: &Signature, bounds: &SearchBounds, seed: u64, tries: usize) -> SuiteResult {
    let mut t = Tally::new("conditional-proof");
    let mut gen = FormulaGen::new(seed, sig, GenConfig::new(2));
    for _ in 0..tries {
        let gamma: Vec<Formula> = (0..2).map(|_| gen.formula()).collect();
        let imp = Formula::arrow(gen.formula(), gen.formula());
        let Formula::Arrow(phi, psi) = &imp else { unreachable!() };
        let Some(c) = find_countermodel(&gamma, &imp, bounds).expect("search") else { continue };
        let (m, w) = (&c.model, c.world);
        let refutes = gamma.iter().all(|g| forces(m, w, g)) && !forces(m, w, &imp);
        let successor =
            m.successors(w).any(|u| gamma.iter().all(|g| forces(m, u, g)) && forces(m, u, phi) && !forces(m, u, psi));
        t.case(Ok::<_, String>(refutes && successor), || format!("{} / {imp}", show(&gamma)));
    }
    t.finish(format!("{tries} attempts"))
}

/// For implication-free `gamma`, a countermodel to `gamma, phi |= psi`
/// yields a new root forcing `gamma` and refuting `phi -> psi`. Stops after
/// `want` instances with a countermodel.
pub fn root_below_construction(
    sig: &Signature,
    bounds: &SearchBounds,
    seed: u64,
    want: usize,
    tries: usize,
) -> SuiteResult {
    let mut t = Tally::new("root-below");
    let mut ctx = FormulaGen::new(seed, sig, GenConfig::new(2).banning(&[Connective::Arrow]));
    let mut gen = FormulaGen::new(seed ^ 0x5eed, sig, GenConfig::new(2));
    let mut attempts = 0;
    for k in 0..tries {
        if t.cases >= want {
            break;
        }
        attempts += 1;
        let gamma: Vec<Formula> = (0..k % 3).map(|_| ctx.formula()).collect();
        let (phi, psi) = (gen.formula(), gen.formula());
        let mut premises = gamma.clone();
        premises.push(phi.clone());
        let Some(c) = find_countermodel(&premises, &psi, bounds).expect("search") else { continue };
        let label = format!("{} ; {phi} |= {psi}", show(&gamma));
        let found_ok = premises.iter().all(|g| forces(&c.model, c.world, g)) && !forces(&c.model, c.world, &psi);
        let built = root_below(&c.model, c.world).map(|(m, root)| {
            found_ok
                && validate_model(&m).is_empty()
                && gamma.iter().all(|g| forces(&m, root, g))
                && !forces(&m, root, &Formula::arrow(phi.clone(), psi.clone()))
        });
        t.case(built, || label);
    }
    t.finish(format!("{attempts} attempts"))
}

fn root_of(m: &KripkeModel) -> World {
    let n = m.worlds.len();
    (0..n).find(|&r| (0..n).all(|u| u == r || m.sees(r, u))).expect("rooted model")
}

/// Glues every pair of rooted models that agree on domain, constants and
/// functions, and compares forcing at the new root with forcing at both tips.
pub fn intersection(sig: &Signature, max_worlds: usize, max_domain: usize, sentences: &[Formula]) -> SuiteResult {
    let mut t = Tally::new("intersection");
    let b = SearchBounds::new(max_worlds, max_domain, sig.clone()).rooted();
    type Key = (usize, BTreeMap<String, usize>, BTreeMap<String, Vec<(Vec<usize>, usize)>>);
    let mut groups: BTreeMap<Key, Vec<(KripkeModel, World, Vec<bool>)>> = BTreeMap::new();
    for m in enumerate_models(&b).expect("bounds") {
        let key = (
            m.domain.len(),
            m.consts.clone(),
            m.funcs.iter().map(|(f, tb)| (f.clone(), tb.rows.iter().map(|(a, v)| (a.clone(), *v)).collect())).collect(),
        );
        let root = root_of(&m);
        let mut ev = Evaluator::new(&m);
        let forced = sentences.iter().map(|f| ev.forces_sentence(root, f).expect("sentence")).collect();
        groups.entry(key).or_default().push((m, root, forced));
    }
    let mut pairs = 0;
    for members in groups.values() {
        for i in 0..members.len() {
            for j in i..members.len() {
                let (m1, r1, f1) = &members[i];
                let (m2, r2, f2) = &members[j];
                pairs += 1;
                let (g, root) = match glue_rooted_fan(&[(m1.clone(), *r1), (m2.clone(), *r2)]) {
                    Ok(x) => x,
                    Err(e) => {
                        t.fail(format!("glue: {e}"));
                        continue;
                    }
                };
                let mut ev = Evaluator::new(&g);
                for (k, f) in sentences.iter().enumerate() {
                    let ok = ev.forces_sentence(root, f).map(|at_root| at_root == (f1[k] && f2[k]));
                    t.case(ok, || format!("{f} on glued {}", write_model(&g)));
                }
            }
        }
    }
    t.finish(format!("{pairs} pairs, {} sentences", sentences.len()))
}

/// Finds triples whose two component searches succeed and checks the glued
/// countermodel to the disjunction. Stops after `want` such triples.
pub fn disjunction_gluing(sig: &Signature, bounds: &SearchBounds, seed: u64, want: usize, tries: usize) -> SuiteResult {
    let mut t = Tally::new("disjunction-gluing");
    let mut ctx = FormulaGen::new(seed, sig, GenConfig::new(2).positive());
    let mut gen = FormulaGen::new(seed ^ 0x91e, sig, GenConfig::new(2));
    let mut attempts = 0;
    for k in 0..tries {
        if t.cases >= want {
            break;
        }
        attempts += 1;
        let gamma: Vec<Formula> = (0..k % 3).map(|_| ctx.formula()).collect();
        let (phi, psi) = (gen.formula(), gen.formula());
        let left = find_countermodel(&gamma, &phi, bounds).expect("search");
        let right = find_countermodel(&gamma, &psi, bounds).expect("search");
        if left.is_none() || right.is_none() {
            continue;
        }
        let label = format!("{} |= {phi} | {psi}", show(&gamma));
        let verdict = disjunction_glue_check(&gamma, &phi, &psi, bounds).map(|found| match found {
            Some(c) => {
                validate_model(&c.model).is_empty()
                    && gamma.iter().all(|g| forces(&c.model, c.world, g))
                    && !forces(&c.model, c.world, &Formula::or(phi.clone(), psi.clone()))
            }
            None => false,
        });
        t.case(verdict, || label);
    }
    t.finish(format!("{attempts} attempts"))
}

/// `forall v (phi | psi) -> phi | forall v psi` over generated closed `phi`
/// and `psi` with `x` free.
pub fn cd_instances(sig: &Signature, seed: u64, n: usize) -> Vec<(Formula, String, Formula)> {
    let phis = FormulaGen::new(seed, sig, GenConfig::new(1)).distinct(n);
    let psis: Vec<Formula> = FormulaGen::new(seed + 1, sig, GenConfig::new(1).with_free("x"))
        .distinct(20 * n)
        .into_iter()
        .filter(|f| free_vars(f).contains("x"))
        .take(n)
        .collect();
    phis.into_iter().zip(psis).map(|(phi, psi)| (phi, "x".to_string(), psi)).collect()
}

/// Each CD instance and the cd-consequence sequent has a checked proof and
/// no countermodel within the bounds.
pub fn cd_search_agreement(instances: &[(Formula, String, Formula)], bounds: &SearchBounds) -> SuiteResult {
    let mut t = Tally::new("cd-search-agreement");
    let sig = &bounds.signature;
    for (phi, v, psi) in instances {
        let prem = Formula::forall(v, Formula::or(phi.clone(), psi.clone()));
        let concl = Formula::or(phi.clone(), Formula::forall(v, psi.clone()));
        let proof = Proof::arrow_int("h", prem.clone(), Proof::cd(Proof::assume("h", prem.clone())));
        let f = Formula::arrow(prem, concl);
        let proved = check_proof(&proof, sig).map(|j| j.open.is_empty() && alpha_eq(&j.conclusion, &f));
        t.case(proved, || format!("{f}: proof rejected"));
        let searched = refute_or_unknown(&f, bounds).map(|r| matches!(r, Refutation::UnknownUpTo(_)));
        t.case(searched, || format!("{f}: refuted"));
    }
    let p = Formula::prop("P");
    let s = Formula::atom("S", vec![bql_core::Term::var("x")]);
    let proof = cd_consequence(&p, "x", &s);
    match check_proof(&proof, sig) {
        Ok(j) => {
            let open = j.open_formulas();
            let found = find_countermodel(&open, &j.conclusion, bounds).map(|c| c.is_none());
            t.case(found, || format!("{} |= {}: refuted", show(&open), j.conclusion));
        }
        Err(e) => t.case(Err(e), || "cd-consequence".into()),
    }
    t.finish(format!("{} instances plus cd-consequence", instances.len()))
}

/// Printing then parsing is the identity, and printing is a fixed point.
pub fn formula_round_trip(sig: &Signature, seed: u64, n: usize, depth: usize) -> SuiteResult {
    let mut t = Tally::new("formula-round-trip");
    let mut gen = FormulaGen::new(seed, sig, GenConfig::new(depth));
    for _ in 0..n {
        let f = gen.formula();
        let printed = f.to_string();
        let ok = parse_formula(&printed, sig).map(|g| g == f && g.to_string() == printed);
        t.case(ok, || printed.clone());
    }
    t.finish("")
}

/// Proof files for `proofs` and model files for every model in `bounds`
/// read back to the same value and write back to the same text.
pub fn file_round_trip(proofs: &[Checked], sig: &Signature, bounds: &SearchBounds) -> SuiteResult {
    let mut t = Tally::new("file-round-trip");
    for p in proofs {
        let text = write_proof(&p.proof);
        let ok = read_proof(&text, sig).map(|q| q == p.proof && write_proof(&q) == text);
        t.case(ok, || p.name.clone());
    }
    let mut models = 0;
    for m in enumerate_models(bounds).expect("bounds") {
        models += 1;
        let text = write_model(&m);
        let ok = read_model(&text).map(|n| n == m && write_model(&n) == text);
        t.case(ok, || text.clone());
    }
    t.finish(format!("{} proofs, {models} models", proofs.len()))
}

fn ps() -> Signature {
    Signature::new().with_relation("P", 0).with_relation("S", 1)
}

fn psc() -> Signature {
    ps().with_constant("c")
}

fn pqsc() -> Signature {
    psc().with_relation("Q", 0)
}

/// Triples fed to the relative family by the standard run.
pub fn family_triples() -> Vec<(Formula, Formula, Formula)> {
    let sig = corpus_signature();
    let f = |s: &str| parse_formula(s, &sig).expect("fixed text");
    vec![
        (f("P"), f("Q"), f("R")),
        (f("P & Q"), f("R"), f("S(c)")),
        (f("exists x. S(x)"), f("P | Q"), f("forall x. S(x)")),
    ]
}

pub const STANDARD: [&str; 15] = [
    "modus-ponens",
    "persistence",
    "vacuity",
    "cd-validity",
    "submodel-invariance",
    "enumeration-validity",
    "corpus-soundness",
    "relative-deduction",
    "conditional-proof",
    "root-below",
    "intersection",
    "disjunction-gluing",
    "cd-search-agreement",
    "formula-round-trip",
    "file-round-trip",
];

/// Runs one of [`STANDARD`] with its default parameters.
pub fn run_standard(name: &str) -> Option<SuiteResult> {
    let persistence_set = || sentences(&ps(), 1, 50, GenConfig::new(4));
    let r = match name {
        "modus-ponens" => modus_ponens(),
        "persistence" => persistence(&SearchBounds::new(3, 2, ps()), &persistence_set()),
        "vacuity" => vacuity(&SearchBounds::new(3, 2, ps()), &sentences(&psc(), 2, 20, GenConfig::new(3))),
        "cd-validity" => cd_validity(&SearchBounds::new(3, 2, psc()), &cd_instances(&psc(), 3, 20)),
        "submodel-invariance" => submodel_invariance(&SearchBounds::new(3, 2, ps()), &persistence_set()),
        "enumeration-validity" => enumeration_validity(&SearchBounds::new(3, 2, psc())),
        "corpus-soundness" => {
            let mut r = soundness(&corpus_items(), &corpus_signature(), 2, 2);
            r.name = "corpus-soundness";
            r
        }
        "relative-deduction" => {
            let sig = corpus_signature();
            let (mut r, outputs) = relative_deduction(&family_triples(), &sig);
            let s = soundness(&outputs, &sig, 2, 2);
            r.cases += s.cases;
            r.failures += s.failures;
            r.first_failure = r.first_failure.or(s.first_failure);
            r.note = format!("{}; {}", r.note, s.note);
            r.elapsed += s.elapsed;
            r
        }
        "conditional-proof" => conditional_proof(&pqsc(), &SearchBounds::new(2, 2, pqsc()), 4, 60),
        "root-below" => root_below_construction(&pqsc(), &SearchBounds::new(2, 2, pqsc()), 5, 20, 400),
        "intersection" => intersection(&psc(), 2, 2, &sentences(&psc(), 6, 30, GenConfig::new(3).positive())),
        "disjunction-gluing" => disjunction_gluing(&pqsc(), &SearchBounds::new(2, 2, pqsc()), 7, 10, 400),
        "cd-search-agreement" => cd_search_agreement(&cd_instances(&psc(), 8, 10), &SearchBounds::new(3, 2, psc())),
        "formula-round-trip" => {
            let sig = pqsc().with_relation("R", 2).with_constant("d");
            formula_round_trip(&sig, 9, 1000, 6)
        }
        "file-round-trip" => {
            let sig = corpus_signature();
            let mut proofs = corpus_items();
            proofs.extend(relative_deduction(&family_triples(), &sig).1);
            let mb = SearchBounds::new(
                2,
                2,
                Signature::new().with_relation("S", 1).with_constant("c").with_function("f", 1),
            );
            file_round_trip(&proofs, &sig, &mb)
        }
        _ => return None,
    };
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_names_resolve() {
        assert!(run_standard("no-such-suite").is_none());
        let r = run_standard("modus-ponens").unwrap();
        assert!(r.passed() && r.cases == 1);
    }

    #[test]
    fn a_broken_claim_is_reported() {
        let sig = ps();
        let p = parse_formula("P", &sig).unwrap();
        let bad = Checked { name: "p-from-nothing".into(), proof: Proof::assume("h", p.clone()), sigma: None };
        assert!(soundness(&[bad], &sig, 1, 1).passed());
        let wrong = Checked {
            name: "mislabelled".into(),
            proof: Proof::node(bql_core::proofs::Rule::TopInt, p, vec![]),
            sigma: None,
        };
        let r = soundness(&[wrong], &sig, 1, 1);
        assert_eq!(r.failures, 1);
        assert!(r.first_failure.unwrap().contains("rejected"));
    }
}
