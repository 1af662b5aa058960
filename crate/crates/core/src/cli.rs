//! Command-line front end.
//!
//! Every command is a pure function of its input files, flags and seed.
//! Exit codes: 0 success, 2 usage or validation, 3 data, 4 capacity
//! (exact enumeration over the cap).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, ErrorClass, Result};
use crate::evaluation::{run_sweep, STUDY_BOUNDARY_MARGIN, write_records_csv, write_summary_csv, StrikeRule, SweepSpec};
use crate::gbm::{simulate_path, write_paths_csv, GbmParams, PriceAnchor, SplitPath};
use crate::market_data::{build_ladder, load_price_series_path, ColumnMap, DateRange, PriceSeries, ReturnLadder, WindowPolicy};
use crate::ordering::{derive_seed, sample_rng, OrderingMode, OrderingSource, DEFAULT_ENUMERATION_CAP};
use crate::pricing::{price_interval, AveragingConvention, DiscountSpec, OptionContract, OptionKind};
use crate::probability::{compare_for_trade, payoff_probability, HedgerChoice, ProbabilityInterval, SpeculatorChoice};
use crate::report::{sig9, Sig9};

/// Environment variable holding the default worker thread count.
pub const THREADS_ENV: &str = "NPI_ASIAN_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "npi-asian",
    version,
    about = "NPI price and payoff-probability bounds for arithmetic Asian options",
    allow_negative_numbers = true
)]
struct Cli {
    /// Worker threads (defaults to $NPI_ASIAN_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Maximum buying and minimum selling prices.
    Price(SingleArgs),
    /// Lower and upper probabilities of a positive payoff.
    Prob(SingleArgs),
    /// Per-date speculator/hedger decisions between two underlyings.
    Compare(CompareArgs),
    /// Coverage/accuracy/precision over a volatility grid of GBM paths.
    Sweep(SweepArgs),
    /// Dump simulated GBM paths.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Call,
    Put,
}

impl From<Kind> for OptionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Call => OptionKind::Call,
            Kind::Put => OptionKind::Put,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Anchor {
    Start,
    Split,
}

#[derive(Debug, Args)]
struct CsvArgs {
    #[arg(long, default_value = "date")]
    date_col: String,
    #[arg(long, default_value = "close")]
    price_col: String,
}

impl CsvArgs {
    fn columns(&self) -> ColumnMap {
        ColumnMap {
            date: self.date_col.clone(),
            price: self.price_col.clone(),
        }
    }
}

#[derive(Debug, Args)]
struct SourceArgs {
    #[arg(long, value_enum, default_value = "mc")]
    mode: Mode,
    /// Monte Carlo orderings.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exact-mode enumeration cap.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

impl SourceArgs {
    fn source(&self) -> OrderingSource {
        let base = match self.mode {
            Mode::Exact => OrderingSource::exact(),
            Mode::Mc => OrderingSource::monte_carlo(self.samples, self.seed),
        };
        base.with_seed(self.seed).with_cap(self.cap)
    }
}

#[derive(Debug, Args)]
struct BoundaryArgs {
    /// Lower boundary return r(0) override.
    #[arg(long, requires = "rn1")]
    r0: Option<f64>,
    /// Upper boundary return r(n+1) override.
    #[arg(long, requires = "r0")]
    rn1: Option<f64>,
    /// Push window-derived boundaries outward by this log return.
    #[arg(long, default_value_t = 0.0)]
    boundary_margin: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SingleArgs {
    #[arg(long)]
    csv: PathBuf,
    #[command(flatten)]
    columns: CsvArgs,
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    strike: f64,
    /// Future monitoring steps m.
    #[arg(long)]
    horizon: usize,
    /// Continuously compounded discount rate per step.
    #[arg(long, default_value_t = 0.0)]
    rate: f64,
    /// Initial price: a number or `last-close`.
    #[arg(long, default_value = "last-close")]
    s0: String,
    #[arg(long, requires = "sample_to")]
    sample_from: Option<NaiveDate>,
    #[arg(long, requires = "sample_from")]
    sample_to: Option<NaiveDate>,
    #[arg(long, requires = "boundary_to")]
    boundary_from: Option<NaiveDate>,
    #[arg(long, requires = "boundary_from")]
    boundary_to: Option<NaiveDate>,
    #[command(flatten)]
    boundary: BoundaryArgs,
    #[command(flatten)]
    source: SourceArgs,
    /// Average over S_0 and the m future prices (divisor m+1).
    #[arg(long)]
    include_initial: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Also write the ladder as CSV here.
    #[arg(long)]
    ladder_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
#[command(group = clap::ArgGroup::new("strike_rule").required(true).args(["strike", "strike_ratio"]))]
#[command(group = clap::ArgGroup::new("horizon_rule").required(true).args(["horizon", "expiry"]))]
struct CompareArgs {
    #[arg(long)]
    csv_a: PathBuf,
    #[arg(long)]
    csv_b: PathBuf,
    #[arg(long, default_value = "A")]
    label_a: String,
    #[arg(long, default_value = "B")]
    label_b: String,
    #[command(flatten)]
    columns: CsvArgs,
    #[arg(long, value_enum, default_value = "call")]
    kind: Kind,
    #[arg(long)]
    strike: Option<f64>,
    /// Strike as a multiple of each date's close.
    #[arg(long)]
    strike_ratio: Option<f64>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Horizon = calendar days from each trading date to this date.
    #[arg(long)]
    expiry: Option<NaiveDate>,
    /// First trading date to evaluate.
    #[arg(long)]
    from: NaiveDate,
    /// Last trading date to evaluate.
    #[arg(long)]
    to: NaiveDate,
    /// Use at most this many observations of history per date.
    #[arg(long)]
    lookback: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    rate: f64,
    #[command(flatten)]
    boundary: BoundaryArgs,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    include_initial: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct GbmArgs {
    #[arg(long, default_value_t = 0.02)]
    mu: f64,
    /// Option initial price (split anchor) or path start (start anchor).
    #[arg(long, default_value_t = 50.0)]
    s0: f64,
    #[arg(long, default_value_t = 100)]
    history: usize,
    #[arg(long, default_value_t = 10)]
    horizon: usize,
    #[arg(long, value_enum, default_value = "split")]
    anchor: Anchor,
}

impl GbmArgs {
    fn params(&self, sigma: f64) -> GbmParams {
        GbmParams {
            drift: self.mu,
            volatility: sigma,
            initial_price: self.s0,
            total_steps: self.history + self.horizon,
            history_steps: self.history,
            anchor: match self.anchor {
                Anchor::Start => PriceAnchor::Start,
                Anchor::Split => PriceAnchor::Split,
            },
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    /// Comma-separated per-step volatilities.
    #[arg(long, value_delimiter = ',', required = true)]
    sigmas: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    paths: usize,
    #[arg(long, default_value_t = 2000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    gbm: GbmArgs,
    #[arg(long, value_enum, default_value = "call")]
    kind: Kind,
    /// Strike as a multiple of the option's initial price.
    #[arg(long, default_value_t = 1.0)]
    strike_ratio: f64,
    #[arg(long, default_value_t = STUDY_BOUNDARY_MARGIN)]
    boundary_margin: f64,
    #[arg(long, default_value_t = 0.0)]
    rate: f64,
    #[arg(long)]
    include_initial: bool,
    /// Summary CSV destination (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Raw per-path records CSV.
    #[arg(long)]
    records_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    #[arg(long)]
    sigma: f64,
    #[arg(long, default_value_t = 1)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    gbm: GbmArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };

    let threads = cli
        .threads
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()));
    // Reports are buffered so that a failing command prints nothing to `out`.
    let mut buffer = Vec::new();
    let result = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli.command, &mut buffer)),
            Err(e) => Err(StageError::new("setup", Error::invalid(e.to_string()))),
        },
        None => execute(&cli.command, &mut buffer),
    };
    let result = result.and_then(|()| io(out.write_all(&buffer)));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error [{}]: {}", e.stage, e.source);
            match e.source.class() {
                ErrorClass::Validation => EXIT_USAGE,
                ErrorClass::Data => EXIT_DATA,
                ErrorClass::Capacity => EXIT_CAPACITY,
            }
        }
    }
}

struct StageError {
    stage: &'static str,
    source: Error,
}

impl StageError {
    fn new(stage: &'static str, source: Error) -> Self {
        Self { stage, source }
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, StageError>;
}

impl<T> Stage<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, StageError> {
        self.map_err(|e| StageError::new(stage, e))
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<(), StageError> {
    match command {
        Command::Price(args) => cmd_price(args, out),
        Command::Prob(args) => cmd_prob(args, out),
        Command::Compare(args) => cmd_compare(args, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::Simulate(args) => cmd_simulate(args, out),
    }
}

fn io<T>(r: std::io::Result<T>) -> Result<T, StageError> {
    r.map_err(|e| StageError::new("output", Error::Io(e)))
}

fn policy(
    boundary: &BoundaryArgs,
    sampling: Option<DateRange>,
    boundary_window: Option<DateRange>,
) -> WindowPolicy {
    WindowPolicy {
        sampling_window: sampling,
        boundary_window,
        boundary_override: boundary.r0.zip(boundary.rn1),
        boundary_margin: boundary.boundary_margin,
    }
}

fn range(from: Option<NaiveDate>, to: Option<NaiveDate>) -> Result<Option<DateRange>> {
    match (from, to) {
        (Some(a), Some(b)) => DateRange::new(a, b).map(Some),
        _ => Ok(None),
    }
}

fn averaging(include_initial: bool) -> AveragingConvention {
    AveragingConvention { include_initial }
}

#[derive(Serialize)]
struct LadderSummary {
    n: usize,
    lower_boundary: Sig9,
    upper_boundary: Sig9,
}

impl From<&ReturnLadder> for LadderSummary {
    fn from(l: &ReturnLadder) -> Self {
        Self {
            n: l.n(),
            lower_boundary: Sig9(l.lower_boundary()),
            upper_boundary: Sig9(l.upper_boundary()),
        }
    }
}

#[derive(Serialize)]
struct SourceSummary {
    mode: &'static str,
    samples: Option<u64>,
    seed: u64,
}

impl From<&OrderingSource> for SourceSummary {
    fn from(s: &OrderingSource) -> Self {
        match s.mode {
            OrderingMode::Exact => Self { mode: "exact", samples: None, seed: s.seed },
            OrderingMode::MonteCarlo { samples } => Self {
                mode: "monte-carlo",
                samples: Some(samples),
                seed: s.seed,
            },
        }
    }
}

#[derive(Serialize)]
struct ContractSummary {
    kind: OptionKind,
    strike: Sig9,
    horizon: usize,
    initial_price: Sig9,
    rate_per_step: Sig9,
    averaging: &'static str,
}

#[derive(Serialize)]
struct PriceSe {
    max_buying: Sig9,
    min_selling: Sig9,
}

#[derive(Serialize)]
struct PairSe {
    lower: Sig9,
    upper: Sig9,
}

/// Bumped whenever a JSON report changes shape.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct PriceReport {
    schema_version: u32,
    command: &'static str,
    as_of: NaiveDate,
    contract: ContractSummary,
    ladder: LadderSummary,
    source: SourceSummary,
    max_buying: Sig9,
    min_selling: Sig9,
    standard_error: Option<PriceSe>,
}

#[derive(Serialize)]
struct ProbReport {
    schema_version: u32,
    command: &'static str,
    as_of: NaiveDate,
    contract: ContractSummary,
    ladder: LadderSummary,
    source: SourceSummary,
    lower: Sig9,
    upper: Sig9,
    standard_error: Option<PairSe>,
}

struct Prepared {
    series: PriceSeries,
    ladder: ReturnLadder,
    contract: OptionContract,
    source: OrderingSource,
    convention: AveragingConvention,
}

fn prepare(args: &SingleArgs) -> Result<Prepared, StageError> {
    let series = load_price_series_path(&args.csv, &args.columns.columns()).stage("parse")?;
    let window = policy(
        &args.boundary,
        range(args.sample_from, args.sample_to).stage("ladder")?,
        range(args.boundary_from, args.boundary_to).stage("ladder")?,
    );
    let ladder = build_ladder(&series, &window).stage("ladder")?;
    if let Some(path) = &args.ladder_out {
        let file = File::create(path).map_err(Error::from).stage("output")?;
        ladder.write_csv(BufWriter::new(file)).stage("output")?;
    }
    let s0 = match args.s0.as_str() {
        "last-close" => series.last().price,
        text => text
            .parse::<f64>()
            .map_err(|_| Error::invalid(format!("--s0 expects a number or `last-close`, got `{text}`")))
            .stage("price")?,
    };
    let discount = DiscountSpec::new(args.rate).stage("price")?;
    let contract = OptionContract::new(args.kind.into(), args.strike, args.horizon, s0)
        .stage("price")?
        .with_discount(discount);
    Ok(Prepared {
        series,
        ladder,
        contract,
        source: args.source.source(),
        convention: averaging(args.include_initial),
    })
}

fn contract_summary(c: &OptionContract, conv: AveragingConvention) -> ContractSummary {
    ContractSummary {
        kind: c.kind,
        strike: Sig9(c.strike),
        horizon: c.horizon,
        initial_price: Sig9(c.initial_price),
        rate_per_step: Sig9(c.discount.rate_per_step),
        averaging: if conv.include_initial { "include-initial" } else { "exclude-initial" },
    }
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), StageError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| StageError::new("output", Error::Io(std::io::Error::other(e))))?;
    io(writeln!(out, "{text}"))
}

fn opt_sig9(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

fn cmd_price(args: &SingleArgs, out: &mut dyn Write) -> Result<(), StageError> {
    let p = prepare(args)?;
    let interval = price_interval(&p.contract, &p.ladder, &p.source, p.convention).stage("price")?;
    match args.format {
        Format::Json => write_json(
            &PriceReport {
                schema_version: SCHEMA_VERSION,
                command: "price",
                as_of: p.series.last().date,
                contract: contract_summary(&p.contract, p.convention),
                ladder: (&p.ladder).into(),
                source: (&p.source).into(),
                max_buying: Sig9(interval.max_buying),
                min_selling: Sig9(interval.min_selling),
                standard_error: interval.standard_error.map(|(l, u)| PriceSe {
                    max_buying: Sig9(l),
                    min_selling: Sig9(u),
                }),
            },
            out,
        ),
        Format::Csv => {
            io(writeln!(
                out,
                "as_of,max_buying,min_selling,se_max_buying,se_min_selling,n,lower_boundary,upper_boundary,mode,seed"
            ))?;
            let summary = SourceSummary::from(&p.source);
            io(writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                p.series.last().date,
                sig9(interval.max_buying),
                sig9(interval.min_selling),
                opt_sig9(interval.standard_error.map(|s| s.0)),
                opt_sig9(interval.standard_error.map(|s| s.1)),
                p.ladder.n(),
                sig9(p.ladder.lower_boundary()),
                sig9(p.ladder.upper_boundary()),
                summary.mode,
                summary.seed
            ))
        }
    }
}

fn cmd_prob(args: &SingleArgs, out: &mut dyn Write) -> Result<(), StageError> {
    let p = prepare(args)?;
    let prob = payoff_probability(&p.contract, &p.ladder, &p.source, p.convention).stage("probability")?;
    match args.format {
        Format::Json => write_json(
            &ProbReport {
                schema_version: SCHEMA_VERSION,
                command: "prob",
                as_of: p.series.last().date,
                contract: contract_summary(&p.contract, p.convention),
                ladder: (&p.ladder).into(),
                source: (&p.source).into(),
                lower: Sig9(prob.lower),
                upper: Sig9(prob.upper),
                standard_error: prob.standard_error.map(|(l, u)| PairSe {
                    lower: Sig9(l),
                    upper: Sig9(u),
                }),
            },
            out,
        ),
        Format::Csv => {
            io(writeln!(out, "as_of,lower,upper,se_lower,se_upper,n,lower_boundary,upper_boundary,mode,seed"))?;
            let summary = SourceSummary::from(&p.source);
            io(writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                p.series.last().date,
                sig9(prob.lower),
                sig9(prob.upper),
                opt_sig9(prob.standard_error.map(|s| s.0)),
                opt_sig9(prob.standard_error.map(|s| s.1)),
                p.ladder.n(),
                sig9(p.ladder.lower_boundary()),
                sig9(p.ladder.upper_boundary()),
                summary.mode,
                summary.seed
            ))
        }
    }
}

#[derive(Serialize)]
struct CompareRow {
    date: NaiveDate,
    horizon: usize,
    upper_a: Sig9,
    lower_a: Sig9,
    upper_b: Sig9,
    lower_b: Sig9,
    speculator: String,
    hedger: String,
}

#[derive(Serialize)]
struct CompareReport<'a> {
    schema_version: u32,
    command: &'static str,
    label_a: &'a str,
    label_b: &'a str,
    kind: OptionKind,
    source: SourceSummary,
    rows: Vec<CompareRow>,
}

fn asset_probability(
    series: &PriceSeries,
    date: NaiveDate,
    horizon: usize,
    args: &CompareArgs,
    source: &OrderingSource,
) -> Result<ProbabilityInterval> {
    let history = series.up_to(date, args.lookback)?;
    let spot = history.last().price;
    let strike = match (args.strike, args.strike_ratio) {
        (Some(k), _) => k,
        (None, Some(r)) => StrikeRule::SpotRatio(r).strike(spot),
        (None, None) => unreachable!("clap requires one strike rule"),
    };
    let ladder = build_ladder(&history, &policy(&args.boundary, None, None))?;
    let contract = OptionContract::new(args.kind.into(), strike, horizon, spot)?
        .with_discount(DiscountSpec::new(args.rate)?);
    payoff_probability(&contract, &ladder, source, averaging(args.include_initial))
}

fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<(), StageError> {
    let columns = args.columns.columns();
    let a = load_price_series_path(&args.csv_a, &columns).stage("parse")?;
    let b = load_price_series_path(&args.csv_b, &columns).stage("parse")?;
    let window = DateRange::new(args.from, args.to).stage("parse")?;
    let source = args.source.source();

    let mut rows = Vec::new();
    for obs in a.observations().iter().filter(|o| window.contains(o.date)) {
        let date = obs.date;
        if b.price_on(date).is_none() {
            continue;
        }
        let horizon = match (args.horizon, args.expiry) {
            (Some(m), _) => m,
            (None, Some(expiry)) => match usize::try_from((expiry - date).num_days()) {
                Ok(days) if days > 0 => days,
                _ => continue,
            },
            (None, None) => unreachable!("clap requires one horizon rule"),
        };
        let pa = asset_probability(&a, date, horizon, args, &source).stage("probability")?;
        let pb = asset_probability(&b, date, horizon, args, &source).stage("probability")?;
        let decision = compare_for_trade(&pa, &pb);
        rows.push(CompareRow {
            date,
            horizon,
            upper_a: Sig9(pa.upper),
            lower_a: Sig9(pa.lower),
            upper_b: Sig9(pb.upper),
            lower_b: Sig9(pb.lower),
            speculator: match decision.speculator {
                SpeculatorChoice::A => args.label_a.clone(),
                SpeculatorChoice::B => args.label_b.clone(),
                SpeculatorChoice::Indifferent => "indifferent".into(),
            },
            hedger: match decision.hedger {
                HedgerChoice::A => args.label_a.clone(),
                HedgerChoice::B => args.label_b.clone(),
                HedgerChoice::Abstain => "abstain".into(),
            },
        });
    }
    if rows.is_empty() {
        return Err(StageError::new(
            "parse",
            Error::invalid(format!("no common trading dates in {}..={}", args.from, args.to)),
        ));
    }

    match args.format {
        Format::Json => write_json(
            &CompareReport {
                schema_version: SCHEMA_VERSION,
                command: "compare",
                label_a: &args.label_a,
                label_b: &args.label_b,
                kind: args.kind.into(),
                source: (&source).into(),
                rows,
            },
            out,
        ),
        Format::Csv => {
            io(writeln!(out, "date,horizon,upper_a,lower_a,upper_b,lower_b,speculator,hedger"))?;
            for r in rows {
                io(writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.date,
                    r.horizon,
                    sig9(r.upper_a.0),
                    sig9(r.lower_a.0),
                    sig9(r.upper_b.0),
                    sig9(r.lower_b.0),
                    r.speculator,
                    r.hedger
                ))?;
            }
            Ok(())
        }
    }
}

fn with_output(
    path: &Option<PathBuf>,
    out: &mut dyn Write,
    write: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<(), StageError> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(Error::from).stage("output")?;
            let mut w = BufWriter::new(file);
            write(&mut w).stage("output")?;
            io(w.flush())
        }
        None => write(out).stage("output"),
    }
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), StageError> {
    let mut spec = SweepSpec::gbm_study(args.sigmas.clone(), args.paths, args.samples);
    spec.gbm = args.gbm.params(spec.gbm.volatility);
    spec.kind = args.kind.into();
    spec.strike = StrikeRule::SpotRatio(args.strike_ratio);
    spec.discount = DiscountSpec::new(args.rate).stage("sweep")?;
    spec.convention = averaging(args.include_initial);
    spec.window = WindowPolicy::default().with_margin(args.boundary_margin);
    if !(args.strike_ratio > 0.0 && args.strike_ratio.is_finite()) {
        return Err(StageError::new("sweep", Error::invalid("--strike-ratio must be > 0")));
    }
    let outcome = run_sweep(&spec, args.seed).stage("sweep")?;
    if let Some(path) = &args.records_out {
        let mut sink = std::io::sink();
        with_output(&Some(path.clone()), &mut sink, |w| write_records_csv(&outcome.records, w))?;
    }
    with_output(&args.out, out, |w| write_summary_csv(&outcome.rows, w))
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), StageError> {
    let params = args.gbm.params(args.sigma);
    let stream = derive_seed(args.seed, &[0x7061_7468]);
    let paths = (0..args.paths)
        .map(|id| simulate_path(&params, &mut sample_rng(stream, id as u64)))
        .collect::<Result<Vec<SplitPath>>>()
        .stage("simulate")?;
    with_output(&args.out, out, |w| write_paths_csv(paths.iter().enumerate(), w))
}
