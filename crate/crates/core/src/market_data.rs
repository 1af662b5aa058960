//! Price histories, log returns and the ranked return ladder.
//!
//! A [`ReturnLadder`] holds the `n` observed log returns in ascending order
//! together with the two boundary returns `r(0)` and `r(n+1)`. Consecutive
//! rungs delimit the `n + 1` intervals that future returns may fall into.
//! Which returns populate the ladder and where the boundaries come from is
//! controlled by a [`WindowPolicy`]: the sampling window can be shorter than
//! the boundary window, so a recent calm period drives the ladder while the
//! extremes of a longer history still cap the outer intervals.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};

const DATE_FORMAT: &str = "%Y-%m-%d";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub date: NaiveDate,
    pub price: f64,
}

/// Closing prices on strictly increasing dates, all strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    observations: Vec<Observation>,
}

impl PriceSeries {
    /// Sorts the observations by date and validates them.
    pub fn new(mut observations: Vec<Observation>) -> Result<Self> {
        if observations.len() < 2 {
            return Err(Error::TooFewObservations(observations.len()));
        }
        for (i, obs) in observations.iter().enumerate() {
            if !(obs.price > 0.0 && obs.price.is_finite()) {
                return Err(Error::NonPositivePrice {
                    row: i as u64 + 1,
                    price: obs.price,
                });
            }
        }
        observations.sort_by_key(|o| o.date);
        if let Some(pair) = observations.windows(2).position(|w| w[0].date == w[1].date) {
            return Err(Error::DuplicateDate {
                row: pair as u64 + 2,
                date: observations[pair].date,
            });
        }
        Ok(Self { observations })
    }

    /// Builds a series on consecutive calendar days starting at `start`.
    pub fn from_prices(start: NaiveDate, prices: &[f64]) -> Result<Self> {
        let observations = prices
            .iter()
            .zip(start.iter_days())
            .map(|(&price, date)| Observation { date, price })
            .collect();
        Self::new(observations)
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn prices(&self) -> impl Iterator<Item = f64> + '_ {
        self.observations.iter().map(|o| o.price)
    }

    pub fn first(&self) -> Observation {
        self.observations[0]
    }

    pub fn last(&self) -> Observation {
        self.observations[self.observations.len() - 1]
    }

    /// Continuously compounded step returns `ln(p[t+1] / p[t])`.
    pub fn log_returns(&self) -> Vec<f64> {
        self.observations
            .windows(2)
            .map(|w| (w[1].price / w[0].price).ln())
            .collect()
    }

    /// Observations dated on or before `date`, keeping at most the last
    /// `lookback` of them when given.
    pub fn up_to(&self, date: NaiveDate, lookback: Option<usize>) -> Result<Self> {
        let end = self.observations.partition_point(|o| o.date <= date);
        let start = lookback.map_or(0, |k| end.saturating_sub(k));
        Self::new(self.observations[start..end].to_vec())
    }

    /// Close on `date`, if observed.
    pub fn price_on(&self, date: NaiveDate) -> Option<f64> {
        self.observations
            .binary_search_by_key(&date, |o| o.date)
            .ok()
            .map(|i| self.observations[i].price)
    }

    fn returns_within(&self, range: Option<DateRange>) -> Vec<f64> {
        self.observations
            .windows(2)
            .filter(|w| range.is_none_or(|r| r.contains(w[0].date) && r.contains(w[1].date)))
            .map(|w| (w[1].price / w[0].price).ln())
            .collect()
    }

    fn count_within(&self, range: DateRange) -> usize {
        self.observations
            .iter()
            .filter(|o| range.contains(o.date))
            .count()
    }
}

/// Header names of the date and price columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub date: String,
    pub price: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            date: "date".to_string(),
            price: "close".to_string(),
        }
    }
}

/// Reads a headed CSV with ISO-8601 dates. Errors carry the 1-based line
/// number, counting the header as line 1.
pub fn load_price_series<R: Read>(source: R, columns: &ColumnMap) -> Result<PriceSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers().map_err(|e| csv_error(e, 1))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let date_col = find(&columns.date)?;
    let price_col = find(&columns.price)?;

    let mut rows: Vec<(Observation, u64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(e, rows.len() as u64 + 2))?;
        let row = record.position().map_or(rows.len() as u64 + 2, |p| p.line());
        let date_raw = record.get(date_col).unwrap_or_default();
        let price_raw = record.get(price_col).unwrap_or_default();
        let date = NaiveDate::parse_from_str(date_raw, DATE_FORMAT).map_err(|_| Error::BadDate {
            row,
            value: date_raw.to_string(),
        })?;
        let price: f64 = price_raw.parse().map_err(|_| Error::BadPrice {
            row,
            value: price_raw.to_string(),
        })?;
        if !(price > 0.0 && price.is_finite()) {
            return Err(Error::NonPositivePrice { row, price });
        }
        rows.push((Observation { date, price }, row));
    }

    rows.sort_by_key(|(o, row)| (o.date, *row));
    if let Some(w) = rows.windows(2).find(|w| w[0].0.date == w[1].0.date) {
        return Err(Error::DuplicateDate {
            row: w[1].1,
            date: w[1].0.date,
        });
    }
    PriceSeries::new(rows.into_iter().map(|(o, _)| o).collect())
}

pub fn load_price_series_path(path: impl AsRef<Path>, columns: &ColumnMap) -> Result<PriceSeries> {
    load_price_series(File::open(path)?, columns)
}

fn csv_error(err: csv::Error, fallback_row: u64) -> Error {
    let row = err.position().map_or(fallback_row, |p| p.line());
    Error::MalformedCsv {
        row,
        message: err.to_string(),
    }
}

/// Inclusive calendar date range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self> {
        if start > end {
            return Err(Error::invalid(format!("date range {start}..={end} is reversed")));
        }
        Ok(Self { start, end })
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    pub fn contains_range(&self, other: &DateRange) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

/// Which returns build the ladder and how its boundaries are chosen.
///
/// A `None` sampling window means the whole series; a `None` boundary window
/// means the sampling window. Without an override the boundaries are the
/// extreme returns inside the boundary window, pushed
/// outward by `boundary_margin` (log-return units). Larger margins give
/// wider NPI intervals.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WindowPolicy {
    pub sampling_window: Option<DateRange>,
    pub boundary_window: Option<DateRange>,
    pub boundary_override: Option<(f64, f64)>,
    pub boundary_margin: f64,
}

impl WindowPolicy {
    /// Sample and take boundaries from the same (whole) series.
    pub fn single_window() -> Self {
        Self::default()
    }

    /// Emphasis period for the ladder, longer period for the extremes.
    pub fn emphasis(sampling: DateRange, boundary: DateRange) -> Self {
        Self {
            sampling_window: Some(sampling),
            boundary_window: Some(boundary),
            ..Self::default()
        }
    }

    pub fn with_override(mut self, lower: f64, upper: f64) -> Self {
        self.boundary_override = Some((lower, upper));
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.boundary_margin = margin;
        self
    }
}

/// Ascending observed returns between the boundary returns.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnLadder {
    // r(0), r(1), ..., r(n), r(n+1)
    rungs: Vec<f64>,
}

impl ReturnLadder {
    /// Sorts `returns` and places them between the given boundaries.
    pub fn new(mut returns: Vec<f64>, lower: f64, upper: f64) -> Result<Self> {
        if returns.is_empty() {
            return Err(Error::invalid("ladder needs at least one return"));
        }
        if returns.iter().chain([&lower, &upper]).any(|r| !r.is_finite()) {
            return Err(Error::invalid("ladder returns and boundaries must be finite"));
        }
        returns.sort_by(f64::total_cmp);
        let (min, max) = (returns[0], returns[returns.len() - 1]);
        if lower > min || upper < max {
            return Err(Error::BoundaryBracket {
                lower,
                upper,
                min,
                max,
            });
        }
        let mut rungs = Vec::with_capacity(returns.len() + 2);
        rungs.push(lower);
        rungs.extend(returns);
        rungs.push(upper);
        Ok(Self { rungs })
    }

    /// Number of observed returns, `n`.
    pub fn n(&self) -> usize {
        self.rungs.len() - 2
    }

    pub fn interval_count(&self) -> usize {
        self.rungs.len() - 1
    }

    pub fn sorted_returns(&self) -> &[f64] {
        &self.rungs[1..self.rungs.len() - 1]
    }

    pub fn lower_boundary(&self) -> f64 {
        self.rungs[0]
    }

    pub fn upper_boundary(&self) -> f64 {
        self.rungs[self.rungs.len() - 1]
    }

    /// `r(0) ..= r(n+1)`.
    pub fn rungs(&self) -> &[f64] {
        &self.rungs
    }

    /// Endpoints `[r(j-1), r(j)]` of interval `I_j`, `j` in `1..=n+1`.
    pub fn interval(&self, j: usize) -> Option<(f64, f64)> {
        if j == 0 || j >= self.rungs.len() {
            return None;
        }
        Some((self.rungs[j - 1], self.rungs[j]))
    }

    /// Audit dump: `rank,return` with the boundaries tagged `r0` / `rn1`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["rank", "return"]).map_err(err)?;
        let last = self.rungs.len() - 1;
        for (j, r) in self.rungs.iter().enumerate() {
            let rank = match j {
                0 => "r0".to_string(),
                j if j == last => "rn1".to_string(),
                j => j.to_string(),
            };
            w.write_record([rank, crate::report::sig9(*r)]).map_err(err)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Applies `policy` to `series`.
pub fn build_ladder(series: &PriceSeries, policy: &WindowPolicy) -> Result<ReturnLadder> {
    if !(policy.boundary_margin >= 0.0 && policy.boundary_margin.is_finite()) {
        return Err(Error::invalid(format!(
            "boundary margin must be finite and >= 0, got {}",
            policy.boundary_margin
        )));
    }
    if let Some(range) = policy.sampling_window {
        check_window(series, range, "sampling")?;
    }
    let sampled = series.returns_within(policy.sampling_window);
    if sampled.is_empty() {
        return Err(Error::TooFewObservations(sampled.len() + 1));
    }

    let (lower, upper) = match policy.boundary_override {
        Some(bounds) => bounds,
        None => {
            if let Some(range) = policy.boundary_window {
                check_window(series, range, "boundary")?;
                let inner = policy.sampling_window.unwrap_or(DateRange {
                    start: series.first().date,
                    end: series.last().date,
                });
                if !range.contains_range(&inner) {
                    return Err(Error::invalid(format!(
                        "boundary window {}..={} must contain the sampling window {}..={}",
                        range.start, range.end, inner.start, inner.end
                    )));
                }
            }
            let wide = match policy.boundary_window {
                Some(range) => series.returns_within(Some(range)),
                None => sampled.clone(),
            };
            let min = wide.iter().copied().fold(f64::INFINITY, f64::min);
            let max = wide.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (min - policy.boundary_margin, max + policy.boundary_margin)
        }
    };
    ReturnLadder::new(sampled, lower, upper)
}

fn check_window(series: &PriceSeries, range: DateRange, which: &'static str) -> Result<()> {
    let count = series.count_within(range);
    if count < 2 {
        return Err(Error::EmptyWindow {
            which,
            start: range.start,
            end: range.end,
            count,
        });
    }
    Ok(())
}
