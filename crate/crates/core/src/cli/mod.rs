//! Command-line front end: `simulate`, `verify`, `theory` and `compare`.

mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

pub use config::{RunConfig, CONFIG_SCHEMA_VERSION};
pub use output::{
    read_report, write_run, CONFIG_FILE, HISTOGRAM_CSV, HOM_MOMENTS_CSV, L_MOMENTS_CSV, REPORT_FILE, TRIALS_CSV,
};

use crate::error::{Error, Result};
use crate::experiments::{aggregate, compare_ensembles, run_trials};
use crate::oracles::{run_suite, Suite};
use crate::pgroups::{enumerate_subgroups, AbelianPGroup, Partition};
use crate::theory::{l_moment, limit_rescaled_hom_moment, FluctuationParams};

pub const EXIT_SUCCESS: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "cokfluct", version, about = "Cokernels of random structured integer matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte Carlo experiment described by a JSON config.
    Simulate(SimulateArgs),
    /// Run exact oracle suites.
    Verify(VerifyArgs),
    /// Print exact limiting values.
    Theory(TheoryArgs),
    /// Compare the centered rank-vector distributions of two reports.
    Compare(CompareArgs),
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    /// JSON run config.
    #[arg(long, short)]
    pub config: PathBuf,
    /// Output directory (overrides `output_dir`).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Omit timestamps so identical inputs give identical bytes.
    #[arg(long)]
    pub reproducible: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Identity,
    Balanced,
    Cok,
    Chains,
    Decomposition,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Identity => vec![Suite::Identity],
            SuiteArg::Balanced => vec![Suite::Balanced],
            SuiteArg::Cok => vec![Suite::Cok],
            SuiteArg::Chains => vec![Suite::Chains],
            SuiteArg::Decomposition => vec![Suite::Decomposition],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    pub suite: SuiteArg,
    /// Also write the outcomes as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct TheoryArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 0.0)]
    pub zeta: f64,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Group type, e.g. `2,1` for Z/p^2 + Z/p. Repeatable.
    #[arg(long = "group", short = 'g')]
    pub groups: Vec<Partition>,
    /// Partition for an L-moment. Repeatable.
    #[arg(long = "lambda", short = 'l')]
    pub lambdas: Vec<Partition>,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, clap::Args)]
pub struct CompareArgs {
    /// Report file or run directory.
    pub a: PathBuf,
    pub b: PathBuf,
    /// Also write the comparison as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Runs a parsed command and maps the outcome to an exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::Simulate(args) => simulate(args, out),
        Command::Verify(args) => verify(args, out),
        Command::Theory(args) => theory(args, out),
        Command::Compare(args) => compare(args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                EXIT_CONFIG
            } else {
                EXIT_FAILURE
            }
        }
    }
}

pub fn simulate(args: SimulateArgs, out: &mut dyn Write) -> Result<u8> {
    let mut config = RunConfig::load(&args.config)?;
    if let Some(t) = args.trials {
        config.experiment.trials = t;
    }
    if let Some(s) = args.seed {
        config.ensemble.master_seed = s;
    }
    if let Some(w) = args.workers {
        config.experiment.workers = Some(w);
    }
    if args.reproducible {
        config.experiment.reproducible = true;
    }
    if let Some(dir) = args.out {
        config.output_dir = Some(dir);
    }
    config.validate()?;
    let dir = config
        .output_dir
        .clone()
        .ok_or_else(|| Error::Config("no output directory: pass --out or set output_dir".into()))?;

    let records = run_trials(&config.ensemble, config.experiment.trials, config.experiment.workers)?;
    let report = aggregate(&config.ensemble, &config.experiment, &records)?;
    let written = write_run(&dir, &config, &report, &records)?;

    writeln!(
        out,
        "{} trials: {} finite, {} with free rank, {} saturated; centering {}",
        report.trials, report.finite_count, report.free_rank_count, report.saturated_count, report.centering
    )?;
    for h in &report.hom_moments {
        writeln!(out, "E|Hom(cok, {})| / k^{} = {:.4} (limit {})", h.group_name, h.ell, h.rescaled, h.target)?;
    }
    for l in &report.l_moments {
        writeln!(out, "E p^<L,{}> = {:.4} (limit {:.4})", l.lambda, l.mean, l.target_value)?;
    }
    for w in &report.warnings {
        writeln!(out, "warning: {w}")?;
    }
    for p in written {
        writeln!(out, "wrote {}", p.display())?;
    }
    Ok(EXIT_SUCCESS)
}

pub fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<u8> {
    let mut outcomes = Vec::new();
    for suite in args.suite.suites() {
        let outcome = run_suite(suite)?;
        writeln!(out, "== {suite}")?;
        for check in &outcome.checks {
            writeln!(out, "{check}")?;
        }
        outcomes.push(outcome);
    }
    let ok = outcomes.iter().all(|o| o.ok());
    writeln!(out, "{}", if ok { "all checks passed" } else { "some checks FAILED" })?;
    if let Some(path) = args.json {
        std::fs::write(path, serde_json::to_string_pretty(&outcomes)? + "\n")?;
    }
    Ok(if ok { EXIT_SUCCESS } else { EXIT_FAILURE })
}

#[derive(serde::Serialize)]
struct GroupRow {
    group: String,
    ell: u32,
    chain_counts: Vec<String>,
    limit: String,
    limit_value: f64,
}

#[derive(serde::Serialize)]
struct LambdaRow {
    lambda: String,
    exact: String,
    scale: f64,
    value: f64,
}

pub fn theory(args: TheoryArgs, out: &mut dyn Write) -> Result<u8> {
    let params = FluctuationParams::new(args.p, args.zeta, args.d)?;
    let mut groups = Vec::new();
    for lambda in &args.groups {
        let g = AbelianPGroup::new(args.p, lambda.clone())?;
        let counts = enumerate_subgroups(&g)?.chain_counts();
        let limit = limit_rescaled_hom_moment(&g)?;
        groups.push(GroupRow {
            group: g.to_string(),
            ell: g.ell(),
            chain_counts: counts.iter().map(ToString::to_string).collect(),
            limit_value: limit.to_f64().unwrap_or(f64::NAN),
            limit: limit.to_string(),
        });
    }
    let mut lambdas = Vec::new();
    for lambda in &args.lambdas {
        let m = l_moment(lambda, &params)?;
        lambdas.push(LambdaRow { lambda: lambda.to_string(), exact: m.exact.to_string(), scale: m.scale, value: m.value() });
    }
    if args.json {
        let doc = serde_json::json!({
            "p": args.p, "zeta": args.zeta, "d": args.d, "chi": params.chi(),
            "groups": groups, "lambdas": lambdas,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        return Ok(EXIT_SUCCESS);
    }
    writeln!(out, "p = {}, zeta = {}, d = {}, chi = {:.6}", args.p, args.zeta, args.d, params.chi())?;
    for g in &groups {
        writeln!(
            out,
            "G = {}: l = {}, c = ({}), c(G,l)/l! = {} ({:.6})",
            g.group,
            g.ell,
            g.chain_counts.join(","),
            g.limit,
            g.limit_value
        )?;
    }
    for l in &lambdas {
        writeln!(out, "lambda = {}: E p^<L,lambda> = {} * {} = {:.6}", l.lambda, l.exact, l.scale, l.value)?;
    }
    Ok(EXIT_SUCCESS)
}

pub fn compare(args: CompareArgs, out: &mut dyn Write) -> Result<u8> {
    let a = read_report(&args.a)?;
    let b = read_report(&args.b)?;
    let c = compare_ensembles(&a, &b)?;
    writeln!(out, "total variation distance: {:.6} over {} vectors", c.tv_distance, c.support_size)?;
    for g in &c.moment_gaps {
        writeln!(out, "lambda = {}: {:.4} vs {:.4} (gap {:.4})", g.lambda, g.mean_a, g.mean_b, g.gap)?;
    }
    if let Some(path) = args.json {
        std::fs::write(path, serde_json::to_string_pretty(&c)? + "\n")?;
    }
    Ok(EXIT_SUCCESS)
}
