//! `dilator`: JSON reports on cocycles, interaction groups, dilations,
//! finite kernels and the solenoid expectation.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dilator_core::circle::{
    classify_entry, solenoid_expectation, solenoid_suite, unit_samples, MonomialIndex,
    PiecewiseLinearCocycle, SolenoidMode,
};
use dilator_core::interaction::compare_suite;
use dilator_core::io::{KernelDescription, SystemDescription};
use dilator_core::report::Tally;
use dilator_core::{
    CocycleMode, Complex64, CylinderFunction, Dilation, ExactCocycle, ExactKernel, ExactSystem,
    Rational, ShiftSystem, Status, VerificationReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sha2::{Digest, Sha256};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(
    name = "dilator",
    version,
    about = "Exact checks for interaction groups and their dilations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Bounds {
    /// Table depth of the test functions.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Largest coordinate of the lattice elements tested.
    #[arg(long, default_value_t = 2)]
    word_bound: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Normalization, positivity, extension consistency and coherence.
    Validate {
        system: PathBuf,
        #[arg(long, default_value_t = 2)]
        word_bound: u32,
    },
    /// Interaction group axioms and the partial action they induce.
    Axioms {
        system: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Dilation identities, faithfulness, forcing and fiber measures.
    Dilate {
        system: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        /// Largest level coordinate searched for faithfulness witnesses.
        #[arg(long, default_value_t = 4)]
        level: u32,
    },
    /// Conditional expectation, faithfulness and index of a finite kernel.
    Kernel { kernel: PathBuf },
    /// Circle cocycle class and the solenoid expectation on sample points.
    Solenoid {
        /// Preset `w1`, `w2`, `w3` or breakpoints `a:v,...` in units of π.
        #[arg(long, default_value = "w1")]
        omega: String,
        /// Monomial exponents `k:v,...`.
        #[arg(long, default_value = "")]
        m: String,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Degree of the covering map `z ↦ z^d`.
        #[arg(long, default_value_t = 2)]
        d: u32,
    },
    /// Uniqueness of the interaction group: the first system's maps in
    /// terms of the second's.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Random normalized strict cocycle, printed as a system description.
    Generate {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Alphabet size per factor.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        alphabets: Vec<usize>,
        /// Generator table depth.
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
}

/// Exit statuses.
const FAILED: u8 = 1;
const MALFORMED: u8 = 2;
const INTERNAL: u8 = 3;

enum Failure {
    Malformed(String),
    Internal(String),
}

type Outcome<T> = Result<T, Failure>;

fn malformed(e: impl std::fmt::Display) -> Failure {
    Failure::Malformed(e.to_string())
}

fn read(path: &Path) -> Outcome<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn text<'a>(path: &Path, bytes: &'a [u8]) -> Outcome<&'a str> {
    std::str::from_utf8(bytes).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path, hasher: &mut Sha256) -> Outcome<ExactSystem> {
    let bytes = read(path)?;
    hasher.update(&bytes);
    let cocycle = SystemDescription::parse(text(path, &bytes)?)
        .and_then(|d| d.to_cocycle())
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    Ok(ExactSystem::new(cocycle))
}

fn load_cocycle(path: &Path, hasher: &mut Sha256) -> Outcome<ExactCocycle> {
    let bytes = read(path)?;
    hasher.update(&bytes);
    SystemDescription::parse(text(path, &bytes)?)
        .and_then(|d| d.to_cocycle())
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_kernel(path: &Path, hasher: &mut Sha256) -> Outcome<ExactKernel> {
    let bytes = read(path)?;
    hasher.update(&bytes);
    KernelDescription::parse(text(path, &bytes)?)
        .and_then(|d| d.to_kernel())
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

/// Report on stdout; `None` when the command prints something else.
fn run(command: Command) -> Outcome<Option<VerificationReport>> {
    let mut hasher = Sha256::new();
    let mut report = VerificationReport::new();
    match command {
        Command::Validate { system, word_bound } => {
            let cocycle = load_cocycle(&system, &mut hasher)?;
            report.extend(cocycle.validate());
            report.extend(cocycle.check_extension_consistency(word_bound));
            report.extend(cocycle.check_coherence(word_bound));
        }
        Command::Axioms { system, bounds } => {
            let is = load_system(&system, &mut hasher)?;
            report.extend(is.axiom_suite(bounds.depth, bounds.word_bound));
            report.extend(is.partial_action_suite(bounds.depth, bounds.word_bound));
        }
        Command::Dilate {
            system,
            bounds,
            level,
        } => {
            let is = load_system(&system, &mut hasher)?;
            let dilation = Dilation::new(&is);
            report.extend(dilation.dilation_suite(bounds.depth, bounds.word_bound));
            report.extend(dilation.faithfulness(level, bounds.depth));
            report.extend(dilation.expectation_forcing(bounds.depth, bounds.word_bound));
            report.extend(dilation.fiber_suite(bounds.word_bound, bounds.depth));
        }
        Command::Kernel { kernel } => {
            let k = load_kernel(&kernel, &mut hasher)?;
            report.extend(k.conditional_expectation_report());
            report.extend(k.faithfulness_report());
        }
        Command::Solenoid {
            omega,
            m,
            samples,
            tol,
            d,
        } => {
            hasher.update(format!(
                "omega={omega};m={m};samples={samples};tol={tol};d={d}"
            ));
            report = solenoid(&omega, &m, samples, tol, d)?;
        }
        Command::Compare {
            first,
            second,
            bounds,
        } => {
            let a = load_system(&first, &mut hasher)?;
            let b = load_system(&second, &mut hasher)?;
            if a.system() != b.system() {
                return Err(malformed("the two systems have different shift spaces"));
            }
            report.extend(compare_suite(&a, &b, bounds.depth, bounds.word_bound));
        }
        Command::Generate {
            seed,
            alphabets,
            depth,
        } => {
            let desc = generate(seed, alphabets, depth)?;
            let out = serde_json::to_string_pretty(&desc)
                .map_err(|e| Failure::Internal(e.to_string()))?;
            emit(&out);
            return Ok(None);
        }
    }
    report.input_digest = Some(hex::encode(hasher.finalize()));
    Ok(Some(report))
}

fn solenoid(omega: &str, m: &str, samples: usize, tol: f64, d: u32) -> Outcome<VerificationReport> {
    if d < 2 {
        return Err(malformed("--d must be at least 2"));
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(malformed("--tol must be a non-negative number"));
    }
    let w = PiecewiseLinearCocycle::parse(omega).map_err(malformed)?;
    let m: MonomialIndex = m.parse().map_err(malformed)?;

    let mut report = VerificationReport::new();
    report.push(classify_entry(omega, &w));
    report.extend(solenoid_suite(std::slice::from_ref(&m), samples, tol, d));

    let mut values = Vec::with_capacity(samples);
    let mut tally = Tally::new("evaluate")
        .param("m", &m)
        .param("d", d)
        .param("samples", samples)
        .note("F(b_m) by summation over the N-th roots of each sample point");
    for x in unit_samples(samples) {
        let v = solenoid_expectation(&m, x, SolenoidMode::Sum, d)
            .map_err(|e| Failure::Internal(e.to_string()))?;
        tally.observe(true, || json!(null));
        values.push(json!({ "x": complex_json(x), "value": complex_json(v) }));
    }
    report.push(tally.finish_witness(Status::Pass, json!({ "values": values })));
    Ok(report)
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

/// Product of factorwise cocycles with random positive rational weights,
/// normalized over each fiber of the first symbol.
fn generate(seed: u64, alphabets: Vec<usize>, depth: usize) -> Outcome<SystemDescription> {
    if depth == 0 {
        return Err(malformed("--depth must be at least 1"));
    }
    let system = ShiftSystem::new(alphabets).map_err(malformed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generators = Vec::with_capacity(system.rank());
    for i in 0..system.rank() {
        let mut level = vec![0; system.rank()];
        level[i] = depth;
        let words = system.words(&level);
        let raw: Vec<i64> = words.iter().map(|_| rng.gen_range(1..=9)).collect();
        let mut totals: HashMap<&[u8], i64> = HashMap::new();
        for (w, &n) in words.iter().zip(&raw) {
            *totals.entry(&w.factors()[i][1..]).or_default() += n;
        }
        let table = words
            .iter()
            .zip(&raw)
            .map(|(w, &n)| Rational::new(n.into(), totals[&w.factors()[i][1..]].into()))
            .collect();
        generators.push(
            CylinderFunction::new(system.clone(), level, table)
                .map_err(|e| Failure::Internal(e.to_string()))?,
        );
    }
    let cocycle = ExactCocycle::new(system, generators, CocycleMode::Strict)
        .map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(SystemDescription::from_cocycle(&cocycle))
}

/// A closed pipe on stdout is not an error of the checks.
fn emit(out: &str) {
    let mut stdout = io::stdout().lock();
    let _ = writeln!(stdout, "{out}").and_then(|_| stdout.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = panic::catch_unwind(|| run(cli.command))
        .unwrap_or_else(|_| Err(Failure::Internal("a check panicked".into())));
    match outcome {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => match serde_json::to_string_pretty(&report) {
            Ok(out) => {
                emit(&out);
                if report.all_ok() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(FAILED)
                }
            }
            Err(e) => {
                eprintln!("error: cannot serialize report: {e}");
                ExitCode::from(INTERNAL)
            }
        },
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(MALFORMED)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(INTERNAL)
        }
    }
}
