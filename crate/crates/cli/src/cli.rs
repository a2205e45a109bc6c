//! Command-line definitions and dispatch.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use syndrec_core::cascade::CascadeConfig;
use syndrec_core::de::{search, threshold, DeParams, SearchConfig};
use syndrec_core::ldpc::{SparseParityMatrix, DEFAULT_MAX_ITERS};
use syndrec_core::session::{
    rate_sweep_with, simulate_with, universality_sweep_with, Scheme, SimReport,
};
use syndrec_core::JointDistribution;

use crate::output::{self, Format};
use crate::spec::{self, MatrixSpec};
use crate::{alist, Error, Parallel};

#[derive(Debug, Parser)]
#[command(name = "syndrec", version, about = "Syndrome-based information reconciliation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print H(X), H(X|Y) and I(X;Y) of a joint distribution.
    Info(InfoArgs),
    /// Build a parity-check matrix with PEG and write it as alist.
    GenMatrix(GenMatrixArgs),
    /// Density-evolution threshold of an ensemble.
    DeThreshold(DeThresholdArgs),
    /// Search for a variable degree distribution with a higher threshold.
    DeSearch(DeSearchArgs),
    /// Monte-Carlo one-way LDPC reconciliation.
    Simulate(SimulateArgs),
    /// Shortening sweep over reveal fractions on one mother matrix.
    Sweep(SweepArgs),
    /// One matrix against a family of sources with equal H(X|Y).
    Universality(UniversalityArgs),
    /// Monte-Carlo Cascade reconciliation.
    Cascade(CascadeArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// `bsc:p`, `asym:a,b`, or a JSON file with p00, p01, p10, p11.
    #[arg(long)]
    pub dist: String,
    /// Block length.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout if omitted.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    #[serde(skip)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MatrixArgs {
    /// alist path, `regular:dv,dc`, or `dd:<ensemble.json>`.
    #[arg(long, default_value = "regular:3,6")]
    pub matrix: String,
    /// PEG seed for generated matrices.
    #[arg(long, default_value_t = 1)]
    pub matrix_seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InfoArgs {
    #[arg(long)]
    pub dist: String,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenMatrixArgs {
    /// `regular:dv,dc` or `dd:<ensemble.json>`.
    #[arg(long, default_value = "regular:3,6")]
    pub matrix: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Where to write the alist file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DeArgs {
    #[arg(long, default_value_t = 0.002)]
    pub tol: f64,
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub de_iters: Option<usize>,
    /// DE sampling seed for `de-threshold`; search seed for `de-search`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DeThresholdArgs {
    /// `regular:dv,dc` or an ensemble JSON file.
    #[arg(long, default_value = "regular:3,6")]
    pub ensemble: String,
    #[command(flatten)]
    pub de: DeArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DeSearchArgs {
    /// Design rate of the ensemble; the syndrome rate is one minus this.
    #[arg(long, default_value_t = 0.5)]
    pub rate: f64,
    /// Largest variable degree.
    #[arg(long, default_value_t = 8)]
    pub cap: usize,
    /// Number of candidate evaluations.
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    #[command(flatten)]
    pub de: DeArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Fraction of positions disclosed in the clear.
    #[arg(long, default_value_t = 0.0)]
    pub reveal: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Comma-separated reveal fractions.
    #[arg(long, default_value = "0,0.05,0.1,0.15")]
    pub reveal: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct UniversalityArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Comma-separated values of P(Y=1|X=0) for the asymmetric members.
    #[arg(long, default_value = "0.05,0.02")]
    pub anchors: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CascadeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 4)]
    pub passes: usize,
    /// First-pass block size; derived from the crossover if omitted.
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub growth: usize,
}

pub fn run(cli: Cli) -> Result<(), Error> {
    let start = Instant::now();
    match cli.command {
        Command::Info(a) => info(&a, start),
        Command::GenMatrix(a) => gen_matrix(&a, start),
        Command::DeThreshold(a) => de_threshold(&a, start),
        Command::DeSearch(a) => de_search(&a, start),
        Command::Simulate(a) => simulate(&a, start),
        Command::Sweep(a) => sweep(&a, start),
        Command::Universality(a) => universality(&a, start),
        Command::Cascade(a) => cascade(&a, start),
    }
}

fn elapsed(start: Instant) -> u128 {
    start.elapsed().as_millis()
}

fn check_common(c: &Common) -> Result<JointDistribution, Error> {
    if c.trials == 0 {
        return Err(Error::Invalid("--trials must be at least 1".into()));
    }
    if c.n == 0 {
        return Err(Error::Invalid("--n must be at least 1".into()));
    }
    spec::parse_dist(&c.dist)
}

fn matrix_summary(h: &SparseParityMatrix, spec: &MatrixSpec, seed: u64) -> serde_json::Value {
    json!({
        "spec": spec,
        "seed": seed,
        "n": h.n(),
        "m": h.m(),
        "edges": h.num_edges(),
        "rate": h.rate(),
        "max_variable_degree": h.max_variable_degree(),
        "max_check_degree": h.max_check_degree(),
    })
}

fn load_matrix(c: &Common, m: &MatrixArgs) -> Result<(SparseParityMatrix, serde_json::Value), Error> {
    if m.max_iters == 0 {
        return Err(Error::Invalid("--max-iters must be at least 1".into()));
    }
    let spec: MatrixSpec = m.matrix.parse()?;
    let h = spec.resolve(c.n, m.matrix_seed)?;
    let summary = matrix_summary(&h, &spec, m.matrix_seed);
    Ok((h, summary))
}

/// Writes reports as JSON (full envelope) or CSV (one row per report).
fn emit_reports<C: Serialize, R: Serialize>(
    common: &Common,
    command: &str,
    config: &C,
    result: &R,
    reports: &[SimReport],
    start: Instant,
) -> Result<(), Error> {
    let text = match common.format {
        Format::Json => output::json(command, config, result, elapsed(start))?,
        Format::Csv => output::csv(reports)?,
    };
    output::emit(common.out.as_deref(), &text)
}

fn info(a: &InfoArgs, start: Instant) -> Result<(), Error> {
    let d = spec::parse_dist(&a.dist)?;
    let result = json!({
        "distribution": d,
        "label": d.label(),
        "h_x": d.entropy_x(),
        "h_x_given_y": d.conditional_entropy(),
        "mutual_information": d.mutual_information(),
    });
    let text = output::json("info", a, &result, elapsed(start))?;
    output::emit(a.out.as_deref(), &text)
}

fn gen_matrix(a: &GenMatrixArgs, start: Instant) -> Result<(), Error> {
    let spec: MatrixSpec = a.matrix.parse()?;
    if let MatrixSpec::Alist { .. } = spec {
        return Err(Error::Invalid(
            "gen-matrix needs regular:dv,dc or dd:<file>, not an alist path".into(),
        ));
    }
    let h = spec.resolve(a.n, a.seed)?;
    alist::save(&a.out, &h)?;
    let result = matrix_summary(&h, &spec, a.seed);
    let text = output::json("gen-matrix", a, &result, elapsed(start))?;
    output::emit(None, &text)
}

fn de_params(a: &DeArgs, defaults: DeParams) -> DeParams {
    DeParams {
        population: a.population.unwrap_or(defaults.population),
        max_iters: a.de_iters.unwrap_or(defaults.max_iters),
        seed: a.seed.unwrap_or(defaults.seed),
        ..defaults
    }
}

fn de_threshold(a: &DeThresholdArgs, start: Instant) -> Result<(), Error> {
    let dd = spec::parse_ensemble(&a.ensemble)?;
    let params = de_params(&a.de, DeParams::default());
    let report = threshold(&dd, a.de.tol, &params)?;
    let config = json!({ "args": a, "ensemble": dd, "design_rate": dd.design_rate() });
    let text = output::json("de-threshold", &config, &report, elapsed(start))?;
    output::emit(a.de.out.as_deref(), &text)
}

fn de_search(a: &DeSearchArgs, start: Instant) -> Result<(), Error> {
    let mut cfg = SearchConfig::new(a.rate, a.cap, a.budget, a.de.seed.unwrap_or(0));
    cfg.tol = a.de.tol;
    // The seed drives the search moves; DE keeps its own sampling seed.
    cfg.de = de_params(
        &DeArgs {
            seed: None,
            ..a.de.clone()
        },
        cfg.de,
    );
    let outcome = search(&cfg)?;
    let config = json!({ "args": a, "search": cfg });
    let text = output::json("de-search", &config, &outcome, elapsed(start))?;
    output::emit(a.de.out.as_deref(), &text)
}

fn simulate(a: &SimulateArgs, start: Instant) -> Result<(), Error> {
    let d = check_common(&a.common)?;
    let (h, matrix) = load_matrix(&a.common, &a.matrix)?;
    let scheme = Scheme::Ldpc {
        matrix: &h,
        max_iters: a.matrix.max_iters,
        reveal_fraction: a.reveal,
    };
    let report = simulate_with(&Parallel, &scheme, &d, a.common.n, a.common.trials, a.common.seed)?;
    let config = json!({ "args": a, "distribution": d, "matrix": matrix });
    emit_reports(&a.common, "simulate", &config, &report, std::slice::from_ref(&report), start)
}

fn sweep(a: &SweepArgs, start: Instant) -> Result<(), Error> {
    let d = check_common(&a.common)?;
    let fractions = spec::parse_list(&a.reveal)?;
    let (h, matrix) = load_matrix(&a.common, &a.matrix)?;
    let reports = rate_sweep_with(
        &Parallel,
        &h,
        &d,
        &fractions,
        a.common.trials,
        a.common.seed,
        a.matrix.max_iters,
    )?;
    let config = json!({
        "args": a,
        "distribution": d,
        "matrix": matrix,
        "reveal_fractions": fractions,
    });
    emit_reports(&a.common, "sweep", &config, &reports, &reports, start)
}

fn universality(a: &UniversalityArgs, start: Instant) -> Result<(), Error> {
    let anchor = check_common(&a.common)?;
    let target = anchor.conditional_entropy();
    let mut family = vec![anchor];
    for x in spec::parse_list(&a.anchors)? {
        family.push(JointDistribution::solve_equal_hxy(target, x)?);
    }
    let (h, matrix) = load_matrix(&a.common, &a.matrix)?;
    let report = universality_sweep_with(
        &Parallel,
        &h,
        &family,
        a.common.trials,
        a.common.seed,
        a.matrix.max_iters,
    )?;
    let config = json!({
        "args": a,
        "family": family,
        "target_conditional_entropy": target,
        "matrix": matrix,
    });
    emit_reports(&a.common, "universality", &config, &report, &report.reports, start)
}

fn cascade(a: &CascadeArgs, start: Instant) -> Result<(), Error> {
    let d = check_common(&a.common)?;
    let k1 = match a.k1 {
        Some(k1) => k1,
        None => CascadeConfig::for_distribution(&d, a.common.n, 0)?.k1,
    };
    CascadeConfig::new(a.passes, k1, a.growth, 0)?;
    let scheme = Scheme::Cascade {
        passes: a.passes,
        k1: Some(k1),
        growth: a.growth,
    };
    let report = simulate_with(&Parallel, &scheme, &d, a.common.n, a.common.trials, a.common.seed)?;
    let config = json!({ "args": a, "distribution": d, "resolved_k1": k1 });
    emit_reports(&a.common, "cascade", &config, &report, std::slice::from_ref(&report), start)
}
