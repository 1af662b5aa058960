//! Coverage, accuracy and precision of NPI price intervals against realised
//! GBM benchmark prices, and the volatility sweep that produces them.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gbm::{benchmark_price, simulate_path, GbmParams, PriceAnchor};
use crate::market_data::{build_ladder, WindowPolicy};
use crate::ordering::{derive_seed, sample_rng, OrderingSource};
use crate::pricing::{price_interval, AveragingConvention, DiscountSpec, OptionContract, OptionKind, PriceInterval};
use crate::report::sig9;

const PATH_STREAM: u64 = 0x7061_7468;
const ORDERING_STREAM: u64 = 0x6f72_6465;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyRecord {
    pub npi: PriceInterval,
    pub benchmark: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyMetrics {
    /// Share of records whose interval contains the benchmark.
    pub coverage: f64,
    /// Mean absolute gap between interval midpoint and benchmark.
    pub accuracy: f64,
    /// Mean interval width.
    pub precision: f64,
    pub record_count: usize,
}

/// Relative slack on the containment test, so that a degenerate interval
/// still covers a benchmark that differs from it only by rounding.
pub const COVERAGE_SLACK: f64 = 1e-12;

pub fn compute_metrics(records: &[StudyRecord]) -> Result<StudyMetrics> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let n = records.len() as f64;
    let covered = records
        .iter()
        .filter(|r| {
            let slack = COVERAGE_SLACK * r.benchmark.abs().max(1.0);
            r.npi.max_buying - slack <= r.benchmark && r.benchmark <= r.npi.min_selling + slack
        })
        .count();
    let accuracy = records
        .iter()
        .map(|r| (r.npi.midpoint() - r.benchmark).abs())
        .sum::<f64>()
        / n;
    let precision = records.iter().map(|r| r.npi.width()).sum::<f64>() / n;
    Ok(StudyMetrics {
        coverage: covered as f64 / n,
        accuracy,
        precision,
        record_count: records.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrikeRule {
    Fixed(f64),
    /// Strike as a multiple of the option's initial price; `1.0` is ATM.
    SpotRatio(f64),
}

impl StrikeRule {
    pub fn strike(&self, spot: f64) -> f64 {
        match *self {
            StrikeRule::Fixed(k) => k,
            StrikeRule::SpotRatio(ratio) => ratio * spot,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub volatility_grid: Vec<f64>,
    pub paths_per_point: usize,
    /// Template; the volatility is replaced by each grid value.
    pub gbm: GbmParams,
    pub kind: OptionKind,
    pub strike: StrikeRule,
    pub discount: DiscountSpec,
    pub source: OrderingSource,
    pub convention: AveragingConvention,
    pub window: WindowPolicy,
}

/// Boundary margin used by [`SweepSpec::gbm_study`]. Interval widths at
/// low volatility come out around 3 to 4, wide enough to absorb most
/// ten-step benchmark payoffs.
pub const STUDY_BOUNDARY_MARGIN: f64 = 0.6;

impl SweepSpec {
    /// 110-step paths with drift 0.02, 100 history steps and an ATM call over
    /// the last 10 steps, the option starting at 50.
    pub fn gbm_study(volatility_grid: Vec<f64>, paths_per_point: usize, samples: u64) -> Self {
        Self {
            volatility_grid,
            paths_per_point,
            gbm: GbmParams {
                drift: 0.02,
                volatility: 0.02,
                initial_price: 50.0,
                total_steps: 110,
                history_steps: 100,
                anchor: PriceAnchor::Split,
            },
            kind: OptionKind::Call,
            strike: StrikeRule::Fixed(50.0),
            discount: DiscountSpec::default(),
            source: OrderingSource::monte_carlo(samples, 0),
            convention: AveragingConvention::default(),
            window: WindowPolicy::default().with_margin(STUDY_BOUNDARY_MARGIN),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.volatility_grid.is_empty() {
            return Err(Error::invalid("volatility grid is empty"));
        }
        if let Some(s) = self.volatility_grid.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
            return Err(Error::invalid(format!("volatility {s} must be >= 0")));
        }
        if self.paths_per_point == 0 {
            return Err(Error::invalid("paths_per_point must be at least 1"));
        }
        self.gbm.validate()
    }
}

/// One simulated path's NPI interval and benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RawRecord {
    pub sigma: f64,
    pub path_id: usize,
    pub record: StudyRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub metrics: StudyMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub records: Vec<RawRecord>,
}

/// Runs one path of the study: simulate, price from history, benchmark on
/// the future. Path `path_id` uses the same shocks and ordering streams at
/// every volatility.
pub fn study_path(spec: &SweepSpec, sigma: f64, path_id: usize, seed: u64) -> Result<RawRecord> {
    let params = spec.gbm.with_volatility(sigma);
    let mut rng = sample_rng(derive_seed(seed, &[PATH_STREAM]), path_id as u64);
    let path = simulate_path(&params, &mut rng)?;
    let ladder = build_ladder(&path.history, &spec.window)?;
    let spot = path.split_price();
    let contract = OptionContract::new(spec.kind, spec.strike.strike(spot), params.future_steps(), spot)?
        .with_discount(spec.discount);
    let source = spec
        .source
        .with_seed(derive_seed(seed, &[ORDERING_STREAM, path_id as u64]));
    let npi = price_interval(&contract, &ladder, &source, spec.convention)?;
    let benchmark = benchmark_price(&path.future, &contract, spec.convention)?;
    Ok(RawRecord {
        sigma,
        path_id,
        record: StudyRecord { npi, benchmark },
    })
}

pub fn run_sweep(spec: &SweepSpec, seed: u64) -> Result<SweepOutcome> {
    spec.validate()?;
    let jobs: Vec<(f64, usize)> = spec
        .volatility_grid
        .iter()
        .flat_map(|&s| (0..spec.paths_per_point).map(move |p| (s, p)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(sigma, path_id)| study_path(spec, sigma, path_id, seed))
        .collect::<Result<Vec<_>>>()?;
    let rows = summarize(&records)?;
    Ok(SweepOutcome { rows, records })
}

/// Groups raw records by consecutive equal sigma and aggregates each group.
pub fn summarize(records: &[RawRecord]) -> Result<Vec<SweepRow>> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    records
        .chunk_by(|a, b| a.sigma == b.sigma)
        .map(|group| {
            let study: Vec<StudyRecord> = group.iter().map(|r| r.record).collect();
            Ok(SweepRow {
                sigma: group[0].sigma,
                metrics: compute_metrics(&study)?,
            })
        })
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// `sigma,coverage,accuracy,precision,paths`
pub fn write_summary_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sigma", "coverage", "accuracy", "precision", "paths"])
        .map_err(csv_err)?;
    for row in rows {
        let m = row.metrics;
        w.write_record([
            sig9(row.sigma),
            sig9(m.coverage),
            sig9(m.accuracy),
            sig9(m.precision),
            m.record_count.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// `sigma,path_id,max_buying,min_selling,benchmark`
pub fn write_records_csv<W: Write>(records: &[RawRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sigma", "path_id", "max_buying", "min_selling", "benchmark"])
        .map_err(csv_err)?;
    for r in records {
        w.write_record([
            sig9(r.sigma),
            r.path_id.to_string(),
            sig9(r.record.npi.max_buying),
            sig9(r.record.npi.min_selling),
            sig9(r.record.benchmark),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Spearman rank correlation (average ranks for ties).
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "spearman needs paired samples");
    let rx = ranks(x);
    let ry = ranks(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}
