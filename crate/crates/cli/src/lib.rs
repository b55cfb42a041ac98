//! Command-line front end for `revpinsker`.
//!
//! Every command is a thin wrapper over one library call and prints a single
//! [`OutputRecord`] (or, for `compare`, one CSV table).

mod compare;
mod record;

use clap::{Args, Parser, Subcommand, ValueEnum};
use revpinsker::bounds::{corollary1_bound, renyi_bound, theorem1_bound, tv_cap, vajda_bound};
use revpinsker::divergence::{f_divergence, ratio_extremes, renyi_from_hellinger, total_variation};
use revpinsker::extremal::{ternary_extremal, verify_membership};
use revpinsker::generator::{chi2_generator, hellinger_generator, kl_generator, tv_generator};
use revpinsker::oracle::{search_sup_with, Execution, SearchConfig};
use revpinsker::{ClassParams, Distribution, ExtendedReal, Generator};
use thiserror::Error;

pub use compare::{compare_rows, parse_grid, Comparator, CompareRow};
pub use record::{format_extended, format_sig, parse_extended, OutputRecord, Status, CSV_DIGITS, JSON_DIGITS};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] revpinsker::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Parse(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "revpinsker",
    version,
    about = "f-divergences and optimal reverse Pinsker bounds"
)]
pub struct Cli {
    /// Output encoding; `compare` defaults to csv, everything else to json.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed-form bound.
    Bound(BoundArgs),
    /// D_f(P||Q) together with the measured (delta, m, M).
    Divergence(DivergenceArgs),
    /// The ternary pair attaining the bound of a class.
    Extremal(ClassArgs),
    /// Check that a pair belongs to a class.
    Verify(VerifyArgs),
    /// Compare the optimal bounds with earlier ones on a grid.
    Compare(CompareArgs),
    /// Randomized search for bound violations.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulaArg {
    Thm1,
    Cor1,
    Cor2,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// kl, tv, chi2, hellinger:<alpha> or renyi:<alpha>
    #[arg(long)]
    pub div: String,
    #[arg(long, value_enum, default_value = "thm1")]
    pub formula: FormulaArg,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Upper ratio extreme; may be "inf".
    #[arg(long = "M", value_parser = extended_arg, allow_negative_numbers = true)]
    pub big_m: Option<ExtendedReal>,
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    #[arg(long)]
    pub div: String,
    /// Comma-separated weights of P.
    #[arg(long, allow_negative_numbers = true)]
    pub p: String,
    /// Comma-separated weights of Q.
    #[arg(long, allow_negative_numbers = true)]
    pub q: String,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long = "M", value_parser = extended_arg, allow_negative_numbers = true)]
    pub big_m: ExtendedReal,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p: String,
    #[arg(long, allow_negative_numbers = true)]
    pub q: String,
    #[command(flatten)]
    pub class: ClassArgs,
    /// Absolute tolerance on each of delta, m, M.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Divergences whose gap to the class bound is reported; repeatable.
    #[arg(long)]
    pub div: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// "default", or "<m list>:<M list>:<cap fractions>", e.g. "0,0.5:2,10:0.5,1".
    #[arg(long, default_value = "default")]
    pub grid: String,
    #[arg(long, value_enum, default_value = "all")]
    pub comparator: ComparatorArg,
    /// Order of the Rényi comparison.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComparatorArg {
    Simic,
    SasonChi2,
    SasonRenyi,
    Verdu,
    All,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long)]
    pub div: String,
    #[command(flatten)]
    pub class: ClassArgs,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of atoms per sampled pair (2..=12).
    #[arg(long, default_value_t = 8)]
    pub support_size: usize,
    /// Hill-climbing steps per trial.
    #[arg(long, default_value_t = 0)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.25)]
    pub step_scale: f64,
    /// Slack above the bound before a sample counts as a violation.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Skip evaluating the extremal pair first.
    #[arg(long)]
    pub no_extremal_seed: bool,
    /// Run trials on the current thread.
    #[arg(long)]
    pub sequential: bool,
}

/// The spelling of `value` on the command line.
pub(crate) fn value_name(value: impl ValueEnum) -> String {
    value
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn extended_arg(s: &str) -> Result<ExtendedReal, String> {
    s.parse().map_err(|e: revpinsker::Error| e.to_string())
}

/// A divergence named on the command line.
#[derive(Debug, Clone)]
pub enum Divergence {
    Generator(Generator),
    Renyi(f64),
}

impl Divergence {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let order = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::Parse(format!("cannot parse order {s:?} in {spec:?}")))
        };
        match spec.split_once(':') {
            None => match spec {
                "kl" => Ok(Divergence::Generator(kl_generator())),
                "tv" => Ok(Divergence::Generator(tv_generator())),
                "chi2" => Ok(Divergence::Generator(chi2_generator())),
                _ => Err(CliError::Parse(format!("unknown divergence {spec:?}"))),
            },
            Some(("hellinger", a)) => Ok(Divergence::Generator(hellinger_generator(order(a)?)?)),
            Some(("renyi", a)) => {
                let alpha = order(a)?;
                // same order check as the Hellinger generator
                hellinger_generator(alpha)?;
                Ok(Divergence::Renyi(alpha))
            }
            Some(_) => Err(CliError::Parse(format!("unknown divergence {spec:?}"))),
        }
    }

    fn generator(&self) -> Result<Generator, CliError> {
        match self {
            Divergence::Generator(g) => Ok(g.clone()),
            Divergence::Renyi(_) => Err(CliError::Parse(
                "Rényi divergence is not an f-divergence; use hellinger:<alpha>".into(),
            )),
        }
    }

    fn of(&self, p: &Distribution, q: &Distribution) -> Result<ExtendedReal, CliError> {
        Ok(match self {
            Divergence::Generator(g) => f_divergence(g, p, q)?,
            Divergence::Renyi(alpha) => {
                renyi_from_hellinger(*alpha, f_divergence(&hellinger_generator(*alpha)?, p, q)?)?
            }
        })
    }

    /// Optimal bound for this divergence over a class.
    fn class_bound(&self, params: &ClassParams) -> Result<ExtendedReal, CliError> {
        Ok(match self {
            Divergence::Generator(g) => theorem1_bound(g, params)?,
            Divergence::Renyi(alpha) => renyi_bound(*alpha, params)?,
        })
    }
}

pub fn parse_weights(list: &str) -> Result<Vec<f64>, CliError> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Parse(format!("cannot parse weight {s:?}")))
        })
        .collect()
}

fn distribution(list: &str) -> Result<Distribution, CliError> {
    Ok(Distribution::new(parse_weights(list)?)?)
}

fn require<T>(value: Option<T>, flag: &str, formula: FormulaArg) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Parse(format!("--{flag} is required for --formula {formula:?}")))
}

/// What a command printed and the exit code it asks for.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

pub fn cmd_bound(args: &BoundArgs) -> Result<OutputRecord, CliError> {
    let div = Divergence::parse(&args.div)?;
    let mut record = OutputRecord::new("bound");
    record
        .input("div", &args.div)
        .input("formula", value_name(args.formula));
    if let Some(d) = args.delta {
        record.input("delta", d);
    }
    if let Some(m) = args.m {
        record.input("m", m);
    }
    if let Some(big_m) = args.big_m {
        record.input("M", big_m);
    }

    let bound = match args.formula {
        FormulaArg::Thm1 => {
            let params = ClassParams::new(
                require(args.delta, "delta", args.formula)?,
                require(args.m, "m", args.formula)?,
                require(args.big_m, "M", args.formula)?,
            )?;
            div.class_bound(&params)?
        }
        FormulaArg::Cor1 => {
            let m = require(args.m, "m", args.formula)?;
            let big_m = require(args.big_m, "M", args.formula)?;
            match &div {
                Divergence::Generator(g) => corollary1_bound(g, m, big_m)?,
                Divergence::Renyi(alpha) => {
                    let cap = tv_cap(m, big_m)?;
                    renyi_bound(*alpha, &ClassParams::new(cap, m, big_m)?)?
                }
            }
        }
        FormulaArg::Cor2 => {
            let delta = require(args.delta, "delta", args.formula)?;
            match &div {
                Divergence::Generator(g) => vajda_bound(g, delta)?,
                Divergence::Renyi(alpha) => {
                    renyi_from_hellinger(*alpha, vajda_bound(&hellinger_generator(*alpha)?, delta)?)?
                }
            }
        }
    };
    record.result("bound", bound);
    Ok(record)
}

pub fn cmd_divergence(args: &DivergenceArgs) -> Result<OutputRecord, CliError> {
    let div = Divergence::parse(&args.div)?;
    let (p, q) = (distribution(&args.p)?, distribution(&args.q)?);
    let mut record = OutputRecord::new("divergence");
    record.input("div", &args.div).input("p", &args.p).input("q", &args.q);
    let value = div.of(&p, &q)?;
    let (m, big_m) = ratio_extremes(&p, &q)?;
    record
        .result("divergence", value)
        .result("delta", total_variation(&p, &q)?)
        .result("m", m)
        .result("M", big_m);
    Ok(record)
}

fn class_params(args: &ClassArgs) -> Result<ClassParams, CliError> {
    Ok(ClassParams::new(args.delta, args.m, args.big_m)?)
}

fn echo_class(record: &mut OutputRecord, args: &ClassArgs) {
    record
        .input("delta", args.delta)
        .input("m", args.m)
        .input("M", args.big_m);
}

pub fn cmd_extremal(args: &ClassArgs) -> Result<OutputRecord, CliError> {
    let params = class_params(args)?;
    let mut record = OutputRecord::new("extremal");
    echo_class(&mut record, args);
    let pair = ternary_extremal(&params)?;
    record
        .vector("p", pair.p.weights())
        .vector("q", pair.q.weights())
        .result("t", pair.t);
    Ok(record)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<OutputRecord, CliError> {
    let params = class_params(&args.class)?;
    let (p, q) = (distribution(&args.p)?, distribution(&args.q)?);
    let generators = args
        .div
        .iter()
        .map(|d| Divergence::parse(d)?.generator())
        .collect::<Result<Vec<_>, _>>()?;
    let mut record = OutputRecord::new("verify");
    record.input("p", &args.p).input("q", &args.q).input("tol", args.tol);
    echo_class(&mut record, &args.class);
    if !args.div.is_empty() {
        record.input("div", args.div.join(" "));
    }

    let report = verify_membership(&p, &q, &params, args.tol, &generators)?;
    record
        .result("measured_delta", report.measured_delta)
        .result("measured_m", report.measured_m)
        .result("measured_M", report.measured_big_m)
        .result("delta_deviation", report.delta_deviation)
        .result("m_deviation", report.m_deviation)
        .result("M_deviation", report.big_m_deviation);
    for g in &report.gaps {
        record.result(&format!("{}.divergence", g.generator_name), g.divergence);
        if let Some(b) = g.bound {
            record.result(&format!("{}.bound", g.generator_name), b);
        }
        if let Some(gap) = g.gap {
            record.result(&format!("{}.gap", g.generator_name), gap);
        }
    }
    record.status = if report.pass { Status::Pass } else { Status::Fail };
    Ok(record)
}

pub fn fuzz_config(args: &FuzzArgs) -> SearchConfig {
    SearchConfig {
        support_size: args.support_size,
        trials: args.trials,
        seed: args.seed,
        perturbation_steps: args.steps,
        step_scale: args.step_scale,
        tolerance: args.tol,
        extremal_seed: !args.no_extremal_seed,
        ..SearchConfig::default()
    }
}

pub fn cmd_fuzz(args: &FuzzArgs) -> Result<OutputRecord, CliError> {
    let gen = Divergence::parse(&args.div)?.generator()?;
    let params = class_params(&args.class)?;
    let config = fuzz_config(args);
    let execution = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };

    let mut record = OutputRecord::new("fuzz");
    record
        .input("div", &args.div)
        .input("trials", args.trials)
        .input("seed", args.seed)
        .input("support_size", args.support_size)
        .input("steps", args.steps)
        .input("step_scale", args.step_scale)
        .input("tol", args.tol)
        .input("extremal_seed", !args.no_extremal_seed);
    echo_class(&mut record, &args.class);

    let outcome = search_sup_with(&gen, &params, &config, execution)?;
    record
        .result("best_value", outcome.best_value)
        .result("bound", outcome.bound)
        .result("gap", outcome.gap)
        .result("violations", outcome.violations as f64)
        .result("evaluated", outcome.evaluated as f64)
        .vector("best_p", outcome.best_pair.0.weights())
        .vector("best_q", outcome.best_pair.1.weights());
    record.status = if outcome.violations == 0 {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(record)
}

fn encode(record: &OutputRecord, format: Format) -> String {
    match format {
        Format::Json => record.to_json() + "\n",
        Format::Csv => record.to_csv(),
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let format = cli.format.unwrap_or(Format::Json);
    let record = match &cli.command {
        Command::Bound(a) => cmd_bound(a)?,
        Command::Divergence(a) => cmd_divergence(a)?,
        Command::Extremal(a) => cmd_extremal(a)?,
        Command::Verify(a) => cmd_verify(a)?,
        Command::Fuzz(a) => {
            let record = cmd_fuzz(a)?;
            let exit_code = if record.status == Status::Fail { 1 } else { 0 };
            return Ok(Output {
                text: encode(&record, format),
                exit_code,
            });
        }
        Command::Compare(a) => {
            let rows = compare_rows(&parse_grid(&a.grid)?, a.comparator.into(), a.alpha)?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => compare::to_csv(&rows),
                Format::Json => encode(&compare::summary(a, &rows), Format::Json),
            };
            let exit_code = if rows.iter().all(CompareRow::dominates) { 0 } else { 1 };
            return Ok(Output { text, exit_code });
        }
    };
    Ok(Output {
        text: encode(&record, format),
        exit_code: 0,
    })
}
