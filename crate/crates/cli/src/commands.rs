use std::fs;
use std::io::{self, Write};
use std::path::Path;

use groupwalk::cayley::{check_homomorphism, convolution_matrix};
use groupwalk::distribution::parse_distribution;
use groupwalk::random::random_distribution;
use groupwalk::rational;
use groupwalk::simulate::simulate_walk;
use groupwalk::walk::{analyze_walk_with, WalkOptions, DEFAULT_MAX_BITS};
use groupwalk::{Error, HomomorphismCheck};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::source::{load_distribution, load_group, read, validation_reports};
use crate::{ConmatArgs, DistArgs, Format, GroupSource, LemmaCheckArgs, SimulateArgs, WalkArgs};

pub struct Context {
    pub verbose: bool,
}

impl Context {
    fn note(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    /// A check ran and failed (exit 1).
    Check(String),
    /// Bad arguments, unreadable input or invalid group (exit 2).
    Usage(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("stdout: {e}"))),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

pub fn group_build(ctx: &Context, src: &GroupSource, output: Option<&Path>) -> Result<(), Failure> {
    let group = load_group(src)?;
    ctx.note(format!("group of order {}", group.order()));
    emit(output, &group.to_cayley_table())
}

pub fn group_validate(ctx: &Context, src: &GroupSource) -> Result<(), Failure> {
    let reports = validation_reports(src)?;
    let failed = reports.iter().find(|r| !r.is_group);
    let report = failed.unwrap_or(&reports[0]);
    emit(None, &to_json(report))?;
    for r in &reports {
        if !r.associativity_checked {
            ctx.note("associativity not checked: order above --assoc-limit");
        }
    }
    match failed {
        Some(r) => Err(Failure::Check(r.to_string())),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct DistSummary {
    group_order: usize,
    support: Vec<usize>,
    full_support: bool,
    probs: Vec<String>,
}

pub fn dist_check(ctx: &Context, src: &GroupSource, args: &DistArgs) -> Result<(), Failure> {
    let group = load_group(src)?;
    let text = read(&args.path)?;
    let dist = match parse_distribution(group, &text, args.normalize) {
        Ok(d) => d,
        Err(e @ Error::InvalidDistribution(_)) => {
            return Err(Failure::Check(format!("{}: {e}", args.path.display())))
        }
        Err(e) => return Err(Failure::Usage(format!("{}: {e}", args.path.display()))),
    };
    ctx.note(format!("largest entry: {} bits", dist.max_bits()));
    let summary = DistSummary {
        group_order: dist.group().order(),
        support: dist.support().into_iter().map(|k| k + 1).collect(),
        full_support: dist.has_full_support(),
        probs: dist.probs().iter().map(rational::format).collect(),
    };
    emit(None, &to_json(&summary))
}

pub fn conmat(ctx: &Context, args: &ConmatArgs) -> Result<(), Failure> {
    let group = load_group(&args.group)?;
    let dist = load_distribution(&group, &args.dist)?;
    let a = convolution_matrix(&dist);
    ctx.note(format!("Con(X) of order {}", a.order()));
    let text = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string(&a.to_string_rows()).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Csv => a.to_csv(),
    };
    emit(args.output.as_deref(), &text)
}

#[derive(Serialize)]
struct Trial {
    trial: u64,
    #[serde(flatten)]
    check: HomomorphismCheck,
}

#[derive(Serialize)]
struct LemmaReport {
    group_order: usize,
    trials: u64,
    seed: u64,
    passed: u64,
    all_hold: bool,
    results: Vec<Trial>,
}

pub fn lemma_check(ctx: &Context, args: &LemmaCheckArgs) -> Result<(), Failure> {
    let group = load_group(&args.group)?;
    let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
    let mut results = Vec::with_capacity(args.trials as usize);
    for trial in 1..=args.trials {
        let x = random_distribution(&group, &mut rng, false);
        let y = random_distribution(&group, &mut rng, false);
        let check = check_homomorphism(&x, &y)?;
        ctx.note(format!("trial {trial}: {}", if check.holds { "ok" } else { "FAILED" }));
        results.push(Trial { trial, check });
    }
    let passed = results.iter().filter(|t| t.check.holds).count() as u64;
    let report = LemmaReport {
        group_order: group.order(),
        trials: args.trials,
        seed: args.seed,
        passed,
        all_hold: passed == args.trials,
        results,
    };
    emit(args.output.as_deref(), &to_json(&report))?;
    match report.results.iter().find(|t| !t.check.holds) {
        Some(t) => Err(Failure::Check(format!(
            "trial {} failed: {}",
            t.trial,
            serde_json::to_string(&t.check).expect("check serializes")
        ))),
        None => Ok(()),
    }
}

pub fn walk(ctx: &Context, args: &WalkArgs) -> Result<(), Failure> {
    if !(args.eps > 0.0 && args.eps < 1.0) {
        return Err(Failure::Usage(format!("--eps must lie in (0, 1), got {}", args.eps)));
    }
    let group = load_group(&args.group)?;
    let xi = load_distribution(&group, &args.dist)?;
    let options = WalkOptions {
        epsilon: args.eps,
        max_steps: args.max_steps,
        max_bits: DEFAULT_MAX_BITS,
    };
    let report = analyze_walk_with(&xi, &options)?;
    if let Some(m) = report.float_from_step {
        ctx.note(format!("switched to binary64 at step {m}"));
    }
    emit(args.output.as_deref(), &to_json(&report))?;
    if let Some(path) = &args.tv_csv {
        emit(Some(path), &report.tv_csv())?;
    }
    if report.increment_support_full && !report.converged {
        return Err(Failure::Check(format!(
            "full-support walk did not reach TV < {} within {} steps",
            args.eps, args.max_steps
        )));
    }
    Ok(())
}

pub fn simulate(ctx: &Context, args: &SimulateArgs) -> Result<(), Failure> {
    let group = load_group(&args.group)?;
    let xi = load_distribution(&group, &args.dist)?;
    let result = simulate_walk(&xi, args.steps, args.trajectories, args.seed)?;
    ctx.note(format!(
        "tv_to_exact {:.6}, tv_to_uniform {:.6}",
        result.tv_to_exact, result.tv_to_uniform
    ));
    emit(args.output.as_deref(), &to_json(&result))
}
