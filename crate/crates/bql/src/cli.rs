//! The `bql` command line.
//!
//! Exit status is 0 on success, 1 when a checked property fails (a proof is
//! rejected, a formula does not parse, a countermodel exists under
//! `--expect-valid`, a suite fails) and 2 on usage or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bql_core::proofs::{check_proof, check_relative_proof, relative_deduction_under, Judgment};
use bql_core::search::{disjunction_glue_check, find_countermodel, Countermodel, SearchBounds};
use bql_core::semantics::Evaluator;
use bql_core::{Formula, Signature};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::modelfile::{read_model, write_model, ModelDoc};
use crate::prooffile::{read_proof, read_proof_inferring, write_proof};
use crate::sentences::{read_sentence_lines, read_sentence_list, Symbols};
use crate::sigfile::read_signature;
use crate::suite::{run_standard, STANDARD};

#[derive(Debug, Parser)]
#[command(name = "bql", version, about = "Constant-domain basic first-order logic toolkit")]
struct Cli {
    /// Structured JSON output instead of plain lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct SigArg {
    /// Signature file; without it symbols are declared on first use.
    #[arg(long)]
    sig: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 2)]
    max_worlds: usize,
    #[arg(long, default_value_t = 2)]
    max_domain: usize,
    /// Only consider models with a world that sees every other world.
    #[arg(long)]
    rooted: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the canonical form of a formula.
    Parse {
        formula: String,
        #[command(flatten)]
        sig: SigArg,
    },
    /// Decide whether a world of a model forces a sentence.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        sig: SigArg,
    },
    /// Check a proof file, with the detour rule when a theory is given.
    Check {
        #[arg(long)]
        proof: PathBuf,
        /// Theory for the detour rule (file or comma list).
        #[arg(long)]
        sigma: Option<String>,
        #[command(flatten)]
        sig: SigArg,
    },
    /// Turn a relative proof into a plain proof of conj(gamma) -> conclusion.
    Transform {
        #[arg(long)]
        proof: PathBuf,
        /// Theory the input's detours were checked against.
        #[arg(long)]
        sigma: String,
        /// Theory whose members may stay open in the output.
        #[arg(long = "sigma-prime")]
        sigma_prime: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        sig: SigArg,
    },
    /// Search for a countermodel to gamma |= formula.
    Refute {
        #[arg(long, default_value = "")]
        gamma: String,
        #[arg(long)]
        formula: String,
        /// Treat a countermodel as a failure (exit 1).
        #[arg(long)]
        expect_valid: bool,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[command(flatten)]
        sig: SigArg,
    },
    /// Glue countermodels to gamma |= left and gamma |= right under a root.
    Glue {
        #[arg(long, default_value = "")]
        gamma: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[command(flatten)]
        sig: SigArg,
    },
    /// Run the invariant suites and print a pass/fail table.
    Suite {
        /// Run only the named suites.
        #[arg(long)]
        only: Vec<String>,
        /// List the suite names.
        #[arg(long)]
        list: bool,
    },
}

/// A failure that ends the command with status 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<i32, Fatal>;

struct Symtab {
    sig: Signature,
    fixed: bool,
}

impl Symtab {
    fn load(arg: &SigArg) -> Result<Symtab, Fatal> {
        Ok(match &arg.sig {
            Some(path) => Symtab {
                sig: read_signature(&read(path)?).map_err(|e| Fatal(format!("{}: {e}", path.display())))?,
                fixed: true,
            },
            None => Symtab { sig: Signature::new(), fixed: false },
        })
    }

    fn symbols(&mut self) -> Symbols<'_> {
        if self.fixed {
            Symbols::Fixed(&self.sig)
        } else {
            Symbols::Infer(&mut self.sig)
        }
    }

    fn formula(&mut self, text: &str) -> Result<Formula, Fatal> {
        self.symbols().formula(text).map_err(|e| Fatal(format!("`{text}`: {e}")))
    }

    /// A path to a sentence file if it exists, otherwise a comma list.
    fn sentences(&mut self, arg: &str) -> Result<Vec<Formula>, Fatal> {
        let path = Path::new(arg);
        if !arg.is_empty() && path.is_file() {
            let text = read(path)?;
            read_sentence_lines(&text, &mut self.symbols()).map_err(|e| Fatal(format!("{arg}: {e}")))
        } else {
            Ok(read_sentence_list(arg, &mut self.symbols())?)
        }
    }
}

fn read(path: &Path) -> Result<String, Fatal> {
    fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let json = cli.json;
    match &cli.command {
        Command::Parse { formula, sig } => parse(formula, sig, json, out),
        Command::Eval { model, world, formula, sig } => eval(model, world, formula, sig, json, out),
        Command::Check { proof, sigma, sig } => check(proof, sigma.as_deref(), sig, json, out),
        Command::Transform { proof, sigma, sigma_prime, gamma, out: dest, sig } => {
            transform(proof, sigma, sigma_prime, gamma, dest, sig, json, out)
        }
        Command::Refute { gamma, formula, expect_valid, bounds, sig } => {
            refute(gamma, formula, *expect_valid, bounds, sig, json, out)
        }
        Command::Glue { gamma, left, right, bounds, sig } => glue(gamma, left, right, bounds, sig, json, out),
        Command::Suite { only, list } => suite(only, *list, json, out),
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), Fatal> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn parse(text: &str, sig: &SigArg, json: bool, out: &mut dyn Write) -> Outcome {
    let mut tab = Symtab::load(sig)?;
    match tab.symbols().formula(text) {
        Ok(f) => {
            if json {
                emit(out, &json!({ "formula": f.to_string() }))?;
            } else {
                writeln!(out, "{f}")?;
            }
            Ok(0)
        }
        Err(e) => {
            if json {
                emit(out, &json!({ "error": e.kind.to_string(), "offset": e.pos }))?;
            } else {
                writeln!(out, "{text}")?;
                writeln!(out, "{}^", " ".repeat(text[..e.pos.min(text.len())].chars().count()))?;
                writeln!(out, "error at offset {}: {}", e.pos, e.kind)?;
            }
            Ok(1)
        }
    }
}

fn eval(model: &Path, world: &str, formula: &str, sig: &SigArg, json: bool, out: &mut dyn Write) -> Outcome {
    let m = read_model(&read(model)?).map_err(|e| Fatal(format!("{}: {e}", model.display())))?;
    let w = m.world_index(world).ok_or_else(|| Fatal(format!("no world `{world}` in {}", model.display())))?;
    let f = Symtab::load(sig)?.formula(formula)?;
    let forced = Evaluator::new(&m).forces_sentence(w, &f)?;
    if json {
        emit(out, &json!({ "world": world, "formula": f.to_string(), "forced": forced }))?;
    } else {
        writeln!(out, "{}", if forced { "forced" } else { "not-forced" })?;
    }
    Ok(0)
}

fn judgment_lines(j: &Judgment, out: &mut dyn Write) -> Result<(), Fatal> {
    writeln!(out, "conclusion: {}", j.conclusion)?;
    for (kind, list) in [("open", &j.open), ("unsafe", &j.unsafe_)] {
        if list.is_empty() {
            writeln!(out, "{kind}: none")?;
        }
        for (l, f) in list {
            writeln!(out, "{kind}: {l}: {f}")?;
        }
    }
    Ok(())
}

fn judgment_json(j: &Judgment) -> Value {
    let list = |xs: &[(String, Formula)]| -> Vec<Value> {
        xs.iter().map(|(l, f)| json!({ "label": l, "formula": f.to_string() })).collect()
    };
    json!({ "conclusion": j.conclusion.to_string(), "open": list(&j.open), "unsafe": list(&j.unsafe_) })
}

fn load_proof(path: &Path, tab: &mut Symtab) -> Result<bql_core::proofs::Proof, Fatal> {
    let text = read(path)?;
    let p = if tab.fixed { read_proof(&text, &tab.sig) } else { read_proof_inferring(&text, &mut tab.sig) };
    p.map_err(|e| Fatal(format!("{}:{e}", path.display())))
}

fn check(proof: &Path, sigma: Option<&str>, sig: &SigArg, json: bool, out: &mut dyn Write) -> Outcome {
    let mut tab = Symtab::load(sig)?;
    let p = load_proof(proof, &mut tab)?;
    let sigma = sigma.map(|s| tab.sentences(s)).transpose()?;
    let result = match &sigma {
        Some(s) => check_relative_proof(&p, s, &tab.sig),
        None => check_proof(&p, &tab.sig),
    };
    match result {
        Ok(j) => {
            if json {
                emit(out, &json!({ "accepted": true, "judgment": judgment_json(&j) }))?;
            } else {
                judgment_lines(&j, out)?;
            }
            Ok(0)
        }
        Err(e) => {
            if json {
                emit(out, &json!({ "accepted": false, "error": e.kind.to_string(), "path": e.path }))?;
            } else {
                writeln!(out, "rejected: {e}")?;
            }
            Ok(1)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn transform(
    proof: &Path,
    sigma: &str,
    sigma_prime: &str,
    gamma: &str,
    dest: &Path,
    sig: &SigArg,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let mut tab = Symtab::load(sig)?;
    let p = load_proof(proof, &mut tab)?;
    let sigma = tab.sentences(sigma)?;
    let sigma_prime = tab.sentences(sigma_prime)?;
    let gamma = tab.sentences(gamma)?;
    let t = match relative_deduction_under(&p, &sigma, &sigma_prime, &gamma, &tab.sig) {
        Ok(t) => t,
        Err(e) => {
            if json {
                emit(out, &json!({ "transformed": false, "error": e.to_string() }))?;
            } else {
                writeln!(out, "rejected: {e}")?;
            }
            return Ok(1);
        }
    };
    fs::write(dest, write_proof(&t.proof)).map_err(|e| Fatal(format!("{}: {e}", dest.display())))?;
    let back = read_proof(&read(dest)?, &tab.sig).map_err(|e| Fatal(format!("{}:{e}", dest.display())))?;
    let j = match check_proof(&back, &tab.sig) {
        Ok(j) => j,
        Err(e) => {
            writeln!(out, "rejected: written proof fails to re-check: {e}")?;
            return Ok(1);
        }
    };
    if json {
        let cases: Vec<String> = t.cases.iter().map(|c| format!("{c:?}")).collect();
        emit(
            out,
            &json!({ "transformed": true, "out": dest.display().to_string(), "judgment": judgment_json(&j), "cases": cases }),
        )?;
    } else {
        writeln!(out, "wrote {}", dest.display())?;
        judgment_lines(&j, out)?;
    }
    Ok(0)
}

fn bounds(b: &BoundsArgs, sig: Signature) -> SearchBounds {
    let sb = SearchBounds::new(b.max_worlds, b.max_domain, sig);
    if b.rooted {
        sb.rooted()
    } else {
        sb
    }
}

fn report(found: Option<Countermodel>, b: &SearchBounds, json: bool, out: &mut dyn Write) -> Result<(), Fatal> {
    match found {
        Some(c) => {
            let id = &c.model.worlds[c.world];
            if json {
                let model = serde_json::to_value(ModelDoc::from_model(&c.model))?;
                emit(out, &json!({ "result": "countermodel", "world": id, "model": model }))?;
            } else {
                writeln!(out, "countermodel world {id}")?;
                write!(out, "{}", write_model(&c.model))?;
            }
        }
        None => {
            if json {
                emit(
                    out,
                    &json!({ "result": "unknown-up-to-bounds", "max_worlds": b.max_worlds, "max_domain": b.max_domain }),
                )?;
            } else {
                writeln!(out, "unknown-up-to-bounds")?;
            }
        }
    }
    Ok(())
}

fn refute(
    gamma: &str,
    formula: &str,
    expect_valid: bool,
    b: &BoundsArgs,
    sig: &SigArg,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let mut tab = Symtab::load(sig)?;
    let gamma = tab.sentences(gamma)?;
    let f = tab.formula(formula)?;
    let sb = bounds(b, tab.sig);
    let found = find_countermodel(&gamma, &f, &sb)?;
    let refuted = found.is_some();
    report(found, &sb, json, out)?;
    Ok(if refuted && expect_valid { 1 } else { 0 })
}

fn glue(
    gamma: &str,
    left: &str,
    right: &str,
    b: &BoundsArgs,
    sig: &SigArg,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let mut tab = Symtab::load(sig)?;
    let gamma = tab.sentences(gamma)?;
    let l = tab.formula(left)?;
    let r = tab.formula(right)?;
    let sb = bounds(b, tab.sig);
    let found = disjunction_glue_check(&gamma, &l, &r, &sb)?;
    report(found, &sb, json, out)?;
    Ok(0)
}

fn suite(only: &[String], list: bool, json: bool, out: &mut dyn Write) -> Outcome {
    if list {
        for name in STANDARD {
            writeln!(out, "{name}")?;
        }
        return Ok(0);
    }
    if let Some(bad) = only.iter().find(|n| !STANDARD.contains(&n.as_str())) {
        return Err(Fatal(format!("unknown suite `{bad}`")));
    }
    let names: Vec<&str> = if only.is_empty() { STANDARD.to_vec() } else { only.iter().map(String::as_str).collect() };
    let mut rows = Vec::new();
    let mut all = true;
    if !json {
        writeln!(out, "{:<22} {:<6} {:>9} {:>8} {:>9}  note", "suite", "result", "cases", "failures", "seconds")?;
    }
    for name in names {
        let r = run_standard(name).expect("known suite");
        all &= r.passed();
        if json {
            rows.push(json!({
                "suite": r.name,
                "passed": r.passed(),
                "cases": r.cases,
                "failures": r.failures,
                "first_failure": r.first_failure,
                "seconds": r.elapsed.as_secs_f64(),
                "note": r.note,
            }));
        } else {
            let verdict = if r.passed() { "pass" } else { "FAIL" };
            writeln!(
                out,
                "{:<22} {:<6} {:>9} {:>8} {:>9.2}  {}",
                r.name,
                verdict,
                r.cases,
                r.failures,
                r.elapsed.as_secs_f64(),
                r.note
            )?;
            if let Some(first) = &r.first_failure {
                writeln!(out, "    first failure: {first}")?;
            }
        }
    }
    if json {
        emit(out, &Value::Array(rows))?;
    }
    Ok(if all { 0 } else { 1 })
}
