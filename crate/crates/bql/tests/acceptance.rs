//! Acceptance run: one line per criterion, parameters and limits pinned
//! below. Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bql::cli::run;
use bql::generate::GenConfig;
use bql::modelfile::read_model;
use bql::suite::{self, Checked, SuiteResult};
use bql_core::proofs::corpus::{corpus_rules, corpus_signature};
use bql_core::proofs::Rule;
use bql_core::search::SearchBounds;
use bql_core::semantics::Evaluator;
use bql_core::syntax::{fragment_check, parse_formula, Connective};
use bql_core::Signature;

const MP_LIMIT: Duration = Duration::from_secs(1);
const PERSISTENCE_LIMIT: Duration = Duration::from_secs(60);
const PERSISTENCE_SENTENCES: usize = 50;
const PERSISTENCE_DEPTH: usize = 4;
const MIN_SCRIPTS: usize = 15;
const MIN_RELATIVE_PROOFS: usize = 30;
const MIN_ROOT_BELOW: usize = 20;
const INTERSECTION_SENTENCES: usize = 40;
const INTERSECTION_DEPTH: usize = 3;
const MIN_GLUE_TRIPLES: usize = 10;
const CD_INSTANCES: usize = 10;
const ROUND_TRIPS: usize = 1000;
const ROUND_TRIP_DEPTH: usize = 6;

struct Line {
    n: u32,
    pass: bool,
    text: String,
}

fn line(n: u32, pass: bool, text: impl Into<String>) -> Line {
    Line { n, pass, text: text.into() }
}

fn detail(r: &SuiteResult) -> String {
    let mut s = format!("{} cases, {} failures, {:.2}s", r.cases, r.failures, r.elapsed.as_secs_f64());
    if !r.note.is_empty() {
        s.push_str(&format!(" ({})", r.note));
    }
    if let Some(f) = &r.first_failure {
        s.push_str(&format!("; first failure: {}", f.lines().next().unwrap_or("")));
    }
    s
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

fn modus_ponens() -> Line {
    let start = Instant::now();
    let mut out = Vec::new();
    let code = run(
        ["bql", "refute", "--gamma", "P, P -> Q", "--formula", "Q", "--max-worlds", "1", "--max-domain", "1"],
        &mut out,
        &mut Vec::new(),
    );
    let elapsed = start.elapsed();
    let out = String::from_utf8(out).unwrap_or_default();
    let confirmed = (|| {
        let (header, body) = out.split_once('\n')?;
        let id = header.strip_prefix("countermodel world ")?;
        let m = read_model(body).ok()?;
        let w = m.world_index(id)?;
        let sig = Signature::new().with_relation("P", 0).with_relation("Q", 0);
        let mut ev = Evaluator::new(&m);
        let f = |s: &str| parse_formula(s, &sig).ok();
        Some(
            m.worlds.len() == 1
                && ev.forces_sentence(w, &f("P")?).ok()?
                && ev.forces_sentence(w, &f("P -> Q")?).ok()?
                && !ev.forces_sentence(w, &f("Q")?).ok()?,
        )
    })()
    .unwrap_or(false);
    let pass = code == 0 && confirmed && elapsed < MP_LIMIT;
    line(
        1,
        pass,
        format!(
            "modus ponens fails: refute {{P, P -> Q}} |= Q at (1, 1) found and re-evaluated = {confirmed} in {:.3}s (limit {}s)",
            elapsed.as_secs_f64(),
            MP_LIMIT.as_secs()
        ),
    )
}

fn persistence() -> Line {
    let sentences = suite::sentences(&ps(), 1, PERSISTENCE_SENTENCES, GenConfig::new(PERSISTENCE_DEPTH));
    let sized = sentences.len() == PERSISTENCE_SENTENCES && sentences.iter().all(|f| f.depth() <= PERSISTENCE_DEPTH);
    let r = suite::persistence(&SearchBounds::new(3, 2, ps()), &sentences);
    let pass = sized && r.passed() && r.elapsed < PERSISTENCE_LIMIT;
    line(
        2,
        pass,
        format!(
            "persistence at (3, 2) over P/0, S/1 with {} sentences of depth <= {PERSISTENCE_DEPTH}: {} (limit {}s)",
            sentences.len(),
            detail(&r),
            PERSISTENCE_LIMIT.as_secs()
        ),
    )
}

fn kernel_soundness() -> Line {
    let items = suite::corpus_items();
    let rules = corpus_rules();
    let all_rules = Rule::ALL.iter().all(|r| rules.contains(r));
    let r = suite::soundness(&items, &corpus_signature(), 2, 2);
    let pass = items.len() >= MIN_SCRIPTS && all_rules && r.passed();
    line(
        3,
        pass,
        format!(
            "kernel soundness: {} scripts (min {MIN_SCRIPTS}), {}/{} rule forms, full (2, 2) enumeration: {}",
            items.len(),
            rules.len(),
            Rule::ALL.len(),
            detail(&r)
        ),
    )
}

fn relative_deduction() -> Line {
    let sig = corpus_signature();
    let (r, outputs): (SuiteResult, Vec<Checked>) = suite::relative_deduction(&suite::family_triples(), &sig);
    let s = suite::soundness(&outputs, &sig, 2, 2);
    let pass = outputs.len() >= MIN_RELATIVE_PROOFS && r.passed() && s.passed();
    line(
        4,
        pass,
        format!(
            "relative deduction: {} proofs transformed (min {MIN_RELATIVE_PROOFS}): {}; outputs on (2, 2): {}",
            outputs.len(),
            detail(&r),
            detail(&s)
        ),
    )
}

fn root_below() -> Line {
    let r = suite::root_below_construction(&pqsc(), &SearchBounds::new(2, 2, pqsc()), 5, MIN_ROOT_BELOW, 400);
    let pass = r.cases >= MIN_ROOT_BELOW && r.passed();
    line(
        5,
        pass,
        format!(
            "root below a countermodel refutes phi -> psi at (2, 2), min {MIN_ROOT_BELOW} instances: {}",
            detail(&r)
        ),
    )
}

fn intersection() -> Line {
    let cfg = GenConfig::new(INTERSECTION_DEPTH).positive();
    let banned: BTreeSet<Connective> = cfg.banned.clone();
    let sentences = suite::sentences(&psc(), 6, INTERSECTION_SENTENCES, cfg);
    let fragment = sentences.iter().all(|f| fragment_check(f, &banned) && f.depth() <= INTERSECTION_DEPTH);
    let r = suite::intersection(&psc(), 2, 2, &sentences);
    let pass = fragment && !sentences.is_empty() && r.passed();
    line(
        6,
        pass,
        format!(
            "intersection: all pairs of rooted (2, 2) models with shared interpretations x {} sentences without ->, |, exists: {}",
            sentences.len(),
            detail(&r)
        ),
    )
}

fn gluing() -> Line {
    let r = suite::disjunction_gluing(&pqsc(), &SearchBounds::new(2, 2, pqsc()), 7, MIN_GLUE_TRIPLES, 400);
    let pass = r.cases >= MIN_GLUE_TRIPLES && r.passed();
    line(7, pass, format!("disjunction gluing at (2, 2), min {MIN_GLUE_TRIPLES} triples: {}", detail(&r)))
}

fn cd() -> Line {
    let instances = suite::cd_instances(&psc(), 8, CD_INSTANCES);
    let r = suite::cd_search_agreement(&instances, &SearchBounds::new(3, 2, psc()));
    let pass = instances.len() == CD_INSTANCES && r.cases == 2 * CD_INSTANCES + 1 && r.passed();
    line(8, pass, format!("CD instances and cd-consequence: proved and unknown-up-to-bounds at (3, 2): {}", detail(&r)))
}

fn round_trip() -> Line {
    let sig = pqsc().with_relation("R", 2).with_constant("d");
    let f = suite::formula_round_trip(&sig, 9, ROUND_TRIPS, ROUND_TRIP_DEPTH);
    let csig = corpus_signature();
    let mut proofs = suite::corpus_items();
    proofs.extend(suite::relative_deduction(&suite::family_triples(), &csig).1);
    let mb = SearchBounds::new(2, 2, Signature::new().with_relation("S", 1).with_constant("c").with_function("f", 1));
    let files = suite::file_round_trip(&proofs, &csig, &mb);
    let pass = f.cases == ROUND_TRIPS && f.passed() && files.passed();
    line(
        9,
        pass,
        format!(
            "round trips: {ROUND_TRIPS} formulas of depth <= {ROUND_TRIP_DEPTH}: {}; files: {}",
            detail(&f),
            detail(&files)
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [fn() -> Line; 9] = [
        modus_ponens,
        persistence,
        kernel_soundness,
        relative_deduction,
        root_below,
        intersection,
        gluing,
        cd,
        round_trip,
    ];
    let mut failed = 0;
    for c in criteria {
        let l = c();
        println!("criterion {} {} {}", l.n, if l.pass { "PASS" } else { "FAIL" }, l.text);
        failed += usize::from(!l.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
