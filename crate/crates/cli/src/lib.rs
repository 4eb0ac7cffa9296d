//! Command-line front end: classification, tables, slice computations,
//! bundled example checks and exceptional fixture checks.
//!
//! Exit codes: `0` success, `1` a requested verification failed, `2` invalid
//! input or unwritable output.

pub mod cache;
pub mod checks;

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use slodowy::fixtures::{self, FixtureError, RowCheck};
use slodowy::partition::{self, classification_table, DefectReport, PartitionError};
use slodowy::slice::{slice_report, slice_report_or_randomized, verify_relation, EvalMode, ReportOptions, SliceError, DEFAULT_SEED, DEFAULT_TRIALS};
use slodowy::{AlgebraType, Partition, SliceContext, SliceReport, Verdict, ENGINE_VERSION};
use thiserror::Error;

use crate::cache::{Cache, CacheKey, CACHE_ENV};
use crate::checks::{known_relations, run_example, Assertion, Example};

/// Largest natural-module dimension accepted by `slice` without `--allow-large`.
pub const MAX_SLICE_DIM: usize = 14;

/// Largest rank accepted by `table`.
pub const MAX_TABLE_RANK: usize = 12;

/// Largest dimension at which `slice` defaults to identical mode.
pub const IDENTICAL_MODE_MAX_DIM: usize = 10;

/// CSV header of `table`.
pub const CSV_HEADER: &str = "rank,type,partition,n_lambda,s_lambda,d_lambda,defect,verdict,provenance";

#[derive(Debug, Parser)]
#[command(name = "slodowy", version, about = "Nilpotent orbits, Slodowy slices and restricted invariants of so(N) and sp(N)")]
pub struct Cli {
    /// Cache directory; defaults to ~/.cache/slodowy.
    #[arg(long, global = true, env = CACHE_ENV, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one orbit and print its defect data.
    Classify(ClassifyArgs),
    /// Classify every orbit of B_n and D_n up to a rank, as CSV.
    Table(TableArgs),
    /// Restrict the invariants to the slice of one orbit.
    Slice(SliceArgs),
    /// Run a bundled example check.
    Verify(VerifyArgs),
    /// Check embedded fixture tables.
    Fixtures(FixturesArgs),
}

/// `so` or `sp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    So,
    Sp,
}

/// The algebra and orbit shared by several commands.
#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    #[arg(long, value_enum)]
    pub algebra: Family,
    /// Dimension N of the natural module.
    #[arg(long)]
    pub dim: usize,
    /// Comma-separated parts, largest first.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub partition: Vec<usize>,
}

impl OrbitArgs {
    fn resolve(&self) -> Result<(AlgebraType, Partition), CliError> {
        let alg = match self.algebra {
            Family::So => AlgebraType::orthogonal(self.dim)?,
            Family::Sp => AlgebraType::symplectic(self.dim)?,
        };
        Ok((alg, Partition::validate(&self.partition, alg)?))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub algebra: Family,
    #[arg(long)]
    pub max_rank: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SliceArgs {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Show the degrees of the initial components.
    #[arg(long)]
    pub degrees: bool,
    /// Show the Jacobian rank of the initial components.
    #[arg(long)]
    pub jacobian: bool,
    /// Check the known relations for this orbit.
    #[arg(long)]
    pub verify_relations: bool,
    /// Additional relation over q1, …, qℓ to check (repeatable).
    #[arg(long = "relation", value_name = "EXPR")]
    pub relations: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Random points used for degrees and ranks.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Compute initial components and relations symbolically.
    #[arg(long, conflicts_with = "randomized")]
    pub identical: bool,
    /// Evaluate at seeded random points only.
    #[arg(long)]
    pub randomized: bool,
    /// Include the full restrictions κ(q_i) (identical mode).
    #[arg(long)]
    pub kappa: bool,
    /// Lift the dimension guard.
    #[arg(long)]
    pub allow_large: bool,
    /// Print the full result as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub example: Example,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

/// Fixture sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureSet {
    /// The E6, F4 and G2 tables.
    Exceptional,
}

#[derive(Debug, Clone, Args)]
pub struct FixturesArgs {
    #[arg(long, value_enum)]
    pub check: FixtureSet,
    #[arg(long)]
    pub json: bool,
}

/// Failures, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Slice(SliceError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<SliceError> for CliError {
    fn from(e: SliceError) -> Self {
        match e {
            SliceError::Partition(p) => Self::Partition(p),
            SliceError::UnknownSymbol(_) | SliceError::OddPfaffianPower | SliceError::Poly(_) => Self::Invalid(e.to_string()),
            SliceError::TooLarge { .. } => Self::Invalid(format!("{e}; drop --identical to evaluate at random points")),
            other => Self::Slice(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Partition(_) | Self::Invalid(_) | Self::Output { .. } => 2,
            Self::Slice(_) | Self::Fixture(_) => 1,
            Self::Io(_) | Self::Csv(_) | Self::Json(_) => 2,
        }
    }
}

/// `classify` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub algebra: String,
    pub dim: usize,
    pub partition: String,
    pub verdict: Verdict,
    /// Defect data; orthogonal algebras only.
    pub defect: Option<DefectReport>,
}

/// Outcome of one relation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub expression: String,
    pub mode: EvalMode,
    pub seed: u64,
    pub holds: bool,
}

/// `slice` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceOutput {
    pub engine_version: String,
    pub report: SliceReport,
    pub relations: Vec<RelationCheck>,
}

/// `verify` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub example: String,
    pub seed: u64,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
}

/// Runs a parsed command, writing results to `out`. Returns whether every
/// requested verification passed.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        cli.cache_dir.clone().or_else(Cache::default_dir).map_or_else(Cache::disabled, Cache::at)
    };
    match &cli.command {
        Command::Classify(a) => classify(a, out),
        Command::Table(a) => table(a, out),
        Command::Slice(a) => slice(a, &cache, out),
        Command::Verify(a) => verify(a, out),
        Command::Fixtures(a) => fixture_check(a, out),
    }
}

/// Verdict and defect data for one orbit.
pub fn classification(alg: AlgebraType, lambda: &Partition) -> Result<Classification, CliError> {
    let defect = if alg.is_orthogonal() { Some(partition::defect(lambda, alg)?) } else { None };
    Ok(Classification {
        algebra: alg.to_string(),
        dim: alg.dim_v(),
        partition: lambda.to_string(),
        verdict: partition::classify(lambda, alg),
        defect,
    })
}

fn classify(a: &ClassifyArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let (alg, lambda) = a.orbit.resolve()?;
    let c = classification(alg, &lambda)?;
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&c)?)?;
        return Ok(true);
    }
    writeln!(out, "algebra: {} (dim V = {})", c.algebra, c.dim)?;
    writeln!(out, "partition: {}", c.partition)?;
    writeln!(out, "verdict: {}", c.verdict.tag)?;
    if !c.verdict.provenance.is_empty() {
        writeln!(out, "reason: {}", c.verdict.provenance)?;
    }
    if let Some(d) = &c.defect {
        writeln!(out, "n_lambda: {}", d.n_lambda)?;
        writeln!(out, "s_lambda: {}", d.s_lambda)?;
        writeln!(out, "d_lambda: {}", d.d_lambda)?;
        writeln!(out, "parts: {}", d.k)?;
        writeln!(out, "dim g^e: {}", d.dim_centralizer)?;
        writeln!(out, "sum of degrees: {}", d.sum_delta)?;
        writeln!(out, "defect: {}", d.defect)?;
    }
    Ok(true)
}

/// CSV text of the classification table up to `max_rank`.
pub fn table_csv(max_rank: usize) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in classification_table(max_rank) {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn table(a: &TableArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    if a.algebra != Family::So {
        return Err(CliError::Invalid("the table covers orthogonal algebras only".into()));
    }
    if a.max_rank == 0 || a.max_rank > MAX_TABLE_RANK {
        return Err(CliError::Invalid(format!("--max-rank must be in 1..={MAX_TABLE_RANK}")));
    }
    let text = table_csv(a.max_rank)?;
    match &a.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output { path: path.clone(), source })?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(true)
}

/// Default evaluation mode for a natural module of dimension `n`.
pub fn default_mode(n: usize) -> EvalMode {
    if n <= IDENTICAL_MODE_MAX_DIM {
        EvalMode::Identical
    } else {
        EvalMode::Randomized
    }
}

/// Computes (or loads) the slice report and relation checks.
pub fn slice_output(a: &SliceArgs, cache: &Cache) -> Result<SliceOutput, CliError> {
    let (alg, lambda) = a.orbit.resolve()?;
    if alg.dim_v() > MAX_SLICE_DIM && !a.allow_large {
        return Err(CliError::Invalid(format!(
            "dim {} exceeds {MAX_SLICE_DIM}; pass --allow-large to compute anyway",
            alg.dim_v()
        )));
    }
    // Without an explicit flag, identical mode is preferred where it is
    // feasible and the report records the mode actually used.
    let (mode, requested) = if a.identical {
        (EvalMode::Identical, "Identical")
    } else if a.randomized {
        (EvalMode::Randomized, "Randomized")
    } else {
        (default_mode(alg.dim_v()), "Auto")
    };
    if a.kappa && mode != EvalMode::Identical {
        return Err(CliError::Invalid("--kappa needs identical mode".into()));
    }
    let opts = ReportOptions { seed: a.seed, trials: a.trials.max(1), mode, include_kappa: a.kappa };
    let key = |op: &str, mode: &str| {
        CacheKey::new(op)
            .with("algebra", alg)
            .with("partition", &lambda)
            .with("mode", mode)
            .with("seed", a.seed)
            .with("trials", opts.trials)
    };
    // Built lazily: a fully cached run never constructs the context.
    let mut slot: Option<SliceContext> = None;
    let report: SliceReport = cache.get_or_compute(&key("slice", requested).with("kappa", a.kappa), || {
        let ctx = context(&mut slot, alg, &lambda)?;
        let r = if a.identical { slice_report(ctx, &opts) } else { slice_report_or_randomized(ctx, &opts) };
        r.map_err(CliError::from)
    })?;
    let mode = report.mode;
    let mut exprs: Vec<String> = Vec::new();
    if a.verify_relations {
        exprs.extend(known_relations(alg, &lambda).iter().map(|s| s.to_string()));
    }
    exprs.extend(a.relations.iter().cloned());
    let mut relations = Vec::new();
    for expr in exprs {
        let holds: bool = cache.get_or_compute(&key("relation", &format!("{mode:?}")).with("expression", &expr), || {
            verify_relation(context(&mut slot, alg, &lambda)?, &expr, mode, a.seed).map_err(CliError::from)
        })?;
        relations.push(RelationCheck { expression: expr, mode, seed: a.seed, holds });
    }
    Ok(SliceOutput { engine_version: ENGINE_VERSION.into(), report, relations })
}

fn context<'a>(slot: &'a mut Option<SliceContext>, alg: AlgebraType, lambda: &Partition) -> Result<&'a SliceContext, CliError> {
    if slot.is_none() {
        *slot = Some(SliceContext::new(lambda, alg)?);
    }
    Ok(slot.as_ref().expect("just filled"))
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn slice(a: &SliceArgs, cache: &Cache, out: &mut dyn Write) -> Result<bool, CliError> {
    let result = slice_output(a, cache)?;
    if a.verify_relations && result.relations.is_empty() {
        eprintln!("note: no known relations for this orbit");
    }
    let passed = result.relations.iter().all(|r| r.holds);
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&result)?)?;
        return Ok(passed);
    }
    let r = &result.report;
    let all = !(a.degrees || a.jacobian || a.verify_relations || !a.relations.is_empty());
    writeln!(
        out,
        "{} {}: dim g^e = {}, rank {}, mode {}, seed {}",
        r.algebra,
        r.partition,
        r.dim_ge,
        r.rank,
        serde_json::to_value(r.mode)?.as_str().unwrap_or_default(),
        r.seed
    )?;
    if all || a.degrees {
        writeln!(out, "degrees: {} (sum {}, defect {})", join(&r.deltas), r.sum_delta, r.defect)?;
        for g in &r.generators {
            if let Some(init) = &g.initial {
                writeln!(out, "  q{} initial: {init}", g.index)?;
            }
        }
    }
    if all || a.jacobian {
        let verdict = if r.independent { "independent" } else { "dependent" };
        writeln!(out, "jacobian rank: {} of {} ({verdict})", r.jacobian_rank, r.rank)?;
    }
    for rel in &result.relations {
        writeln!(out, "relation {}: {}", rel.expression, if rel.holds { "holds" } else { "fails" })?;
    }
    Ok(passed)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let assertions = run_example(a.example, a.seed)?;
    let passed = assertions.iter().all(|x| x.passed);
    let result = VerifyOutput { example: a.example.name().into(), seed: a.seed, assertions, passed };
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&result)?)?;
        return Ok(passed);
    }
    for x in &result.assertions {
        writeln!(out, "{} {}: {}", if x.passed { "PASS" } else { "FAIL" }, x.name, x.detail)?;
    }
    let n = result.assertions.iter().filter(|x| x.passed).count();
    writeln!(out, "{}: {n}/{} passed", result.example, result.assertions.len())?;
    Ok(passed)
}

fn fixture_check(a: &FixturesArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let FixtureSet::Exceptional = a.check;
    let rows: Vec<RowCheck> = fixtures::check_all()?;
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
        return Ok(true);
    }
    for r in &rows {
        writeln!(
            out,
            "{} row {} {}: Σ = {}, Σ' = {}{}",
            r.algebra,
            r.row,
            r.label,
            r.sigma_computed,
            r.sigma_prime_computed,
            if r.conclusive { " (equal)" } else { "" }
        )?;
    }
    writeln!(out, "{} rows consistent", rows.len())?;
    Ok(true)
}
