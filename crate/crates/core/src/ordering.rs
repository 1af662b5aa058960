//! Equally likely orderings of future returns among the ladder intervals.
//!
//! With `n` observed returns there are `C(n+m, m)` interleavings of `m`
//! future values among them, all equally likely. An interleaving fixes how
//! many future values land in each interval `I_1..I_{n+1}`; the order in
//! which the future steps visit those intervals is then a uniformly random
//! arrangement of that multiset. Together this is exactly the sequential
//! prediction where the `t`-th future value falls in each of the `n + t`
//! current intervals with equal probability.
//!
//! Interval indices are 1-based throughout, matching `I_j = [r(j-1), r(j)]`.
//!
//! Expectations over orderings are computed by [`OrderingSource::estimate`],
//! either exactly (every interleaving, every distinct arrangement) or by
//! Monte Carlo. Monte Carlo sample `i` always draws from its own ChaCha8
//! stream `i` under the run seed, and per-sample values are reduced in index
//! order, so results do not depend on the thread count.

use std::io::Write;

use num_bigint::BigUint;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::market_data::ReturnLadder;

/// Default ceiling on exact enumeration work.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// `C(n+m, m)`, exact.
pub fn ordering_count(n: u64, m: u64) -> BigUint {
    // C(n+k, k) = C(n+k-1, k-1) * (n+k) / k stays integral at every step
    (1..=m).fold(BigUint::from(1u32), |acc, k| acc * (n + k) / k)
}

/// Number of labelled interval sequences, `(n+1)^m`; the total number of
/// distinct arrangements over all interleavings.
pub fn arrangement_count(n: u64, m: u64) -> BigUint {
    BigUint::from(n + 1).pow(m as u32)
}

/// Interval index of each future step, in temporal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderingAssignment {
    intervals: Vec<usize>,
}

impl OrderingAssignment {
    /// Validates every index against `n + 1` intervals.
    pub fn new(intervals: Vec<usize>, n: usize) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::invalid("ordering needs at least one future step"));
        }
        check_indices(&intervals, n + 1)?;
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[usize] {
        &self.intervals
    }

    pub fn horizon(&self) -> usize {
        self.intervals.len()
    }

    /// The interleaving this ordering belongs to: indices sorted ascending.
    pub fn canonical(&self) -> OrderingAssignment {
        let mut intervals = self.intervals.clone();
        intervals.sort_unstable();
        OrderingAssignment { intervals }
    }

    /// Every distinct temporal arrangement of this ordering's indices, in
    /// lexicographic order.
    pub fn arrangements(&self) -> Arrangements {
        Arrangements::new(self.canonical().intervals)
    }
}

fn check_indices(intervals: &[usize], max: usize) -> Result<()> {
    match intervals.iter().position(|&j| j == 0 || j > max) {
        Some(step) => Err(Error::IntervalIndexOutOfRange {
            step: step + 1,
            index: intervals[step],
            max,
        }),
        None => Ok(()),
    }
}

/// Lexicographic successor of `v` among its permutations; `false` when `v`
/// was the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Distinct permutations of a multiset of interval indices.
#[derive(Debug, Clone)]
pub struct Arrangements {
    current: Vec<usize>,
    done: bool,
}

impl Arrangements {
    fn new(mut sorted: Vec<usize>) -> Self {
        sorted.sort_unstable();
        Self {
            current: sorted,
            done: false,
        }
    }
}

impl Iterator for Arrangements {
    type Item = OrderingAssignment;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = OrderingAssignment {
            intervals: self.current.clone(),
        };
        self.done = !next_permutation(&mut self.current);
        Some(out)
    }
}

/// All `C(n+m, m)` interleavings, lexicographic in the positions the future
/// values occupy among the `n + m` ranks. Each is yielded in canonical
/// (ascending) form.
#[derive(Debug, Clone)]
pub struct Orderings {
    positions: Vec<usize>,
    slots: usize,
    done: bool,
}

impl Iterator for Orderings {
    type Item = OrderingAssignment;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        // future value k (0-based) at rank p has p - k observed values below
        let intervals = self
            .positions
            .iter()
            .enumerate()
            .map(|(k, &p)| p - k + 1)
            .collect();

        let m = self.positions.len();
        match (0..m).rev().find(|&i| self.positions[i] < self.slots - m + i) {
            Some(i) => {
                self.positions[i] += 1;
                for k in i + 1..m {
                    self.positions[k] = self.positions[k - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(OrderingAssignment { intervals })
    }
}

/// Streams every interleaving of `m` future values among `n` observed ones.
/// Refuses when `C(n+m, m)` exceeds `cap`.
pub fn enumerate_orderings(n: usize, m: usize, cap: u64) -> Result<Orderings> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("n and m must both be at least 1"));
    }
    let count = ordering_count(n as u64, m as u64);
    if count > BigUint::from(cap) {
        return Err(Error::EnumerationCapExceeded {
            orderings: count.to_string(),
            arrangements: arrangement_count(n as u64, m as u64).to_string(),
            cap,
        });
    }
    Ok(Orderings {
        positions: (0..m).collect(),
        slots: n + m,
        done: false,
    })
}

/// One ordering drawn uniformly: a uniform `m`-subset of the `n + m` ranks
/// gives the interleaving, a uniform shuffle gives the temporal order.
pub fn sample_ordering<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> OrderingAssignment {
    let mut intervals = Vec::with_capacity(m);
    fill_sample(n, m, rng, &mut intervals);
    OrderingAssignment { intervals }
}

fn fill_sample<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R, out: &mut Vec<usize>) {
    let mut positions = index::sample(rng, n + m, m).into_vec();
    positions.sort_unstable();
    out.clear();
    out.extend(positions.iter().enumerate().map(|(k, &p)| p - k + 1));
    out.shuffle(rng);
}

/// Per-horizon bounds on the aggregate compounding return `R̂_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Replaces each future return by its interval endpoints and averages the
/// first `i` of them for every horizon `i`.
pub fn aggregate_bounds(ordering: &OrderingAssignment, ladder: &ReturnLadder) -> Result<AggregateBounds> {
    check_indices(ordering.intervals(), ladder.interval_count())?;
    let rungs = ladder.rungs();
    let m = ordering.horizon();
    let mut lower = Vec::with_capacity(m);
    let mut upper = Vec::with_capacity(m);
    let (mut lo, mut hi) = (0.0, 0.0);
    for (i, &j) in ordering.intervals().iter().enumerate() {
        lo += rungs[j - 1];
        hi += rungs[j];
        let steps = (i + 1) as f64;
        lower.push(lo / steps);
        upper.push(hi / steps);
    }
    Ok(AggregateBounds { lower, upper })
}

/// Dumps orderings as CSV, one row of interval indices per ordering.
pub fn write_orderings_csv<W, I>(orderings: I, m: usize, out: W) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = OrderingAssignment>,
{
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record((1..=m).map(|t| format!("step_{t}"))).map_err(err)?;
    for o in orderings {
        w.write_record(o.intervals().iter().map(|j| j.to_string()))
            .map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingMode {
    Exact,
    MonteCarlo { samples: u64 },
}

/// How expectations over orderings are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderingSource {
    pub mode: OrderingMode,
    pub seed: u64,
    pub enumeration_cap: u64,
}

impl OrderingSource {
    pub fn exact() -> Self {
        Self {
            mode: OrderingMode::Exact,
            seed: 0,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        Self {
            mode: OrderingMode::MonteCarlo { samples },
            seed,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.enumeration_cap = cap;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Mean of `stat` over orderings of `m` future steps on `n` observed
    /// returns. `stat` receives 1-based interval indices in temporal order.
    /// Monte Carlo results carry the standard error of each mean.
    pub fn estimate<const K: usize, F>(&self, n: usize, m: usize, stat: F) -> Result<Estimate<K>>
    where
        F: Fn(&[usize]) -> [f64; K] + Sync,
    {
        if n == 0 || m == 0 {
            return Err(Error::invalid("n and m must both be at least 1"));
        }
        match self.mode {
            OrderingMode::Exact => self.exact_estimate(n, m, stat),
            OrderingMode::MonteCarlo { samples } => self.monte_carlo_estimate(n, m, samples, stat),
        }
    }

    fn exact_estimate<const K: usize, F>(&self, n: usize, m: usize, stat: F) -> Result<Estimate<K>>
    where
        F: Fn(&[usize]) -> [f64; K] + Sync,
    {
        let cap = BigUint::from(self.enumeration_cap);
        let arrangements = arrangement_count(n as u64, m as u64);
        if arrangements > cap {
            return Err(Error::EnumerationCapExceeded {
                orderings: ordering_count(n as u64, m as u64).to_string(),
                arrangements: arrangements.to_string(),
                cap: self.enumeration_cap,
            });
        }
        let interleavings: Vec<OrderingAssignment> =
            enumerate_orderings(n, m, self.enumeration_cap)?.collect();
        let per_ordering: Vec<[f64; K]> = interleavings
            .par_iter()
            .map(|o| {
                let mut sum = [0.0; K];
                let mut count = 0usize;
                for a in o.arrangements() {
                    let v = stat(a.intervals());
                    for k in 0..K {
                        sum[k] += v[k];
                    }
                    count += 1;
                }
                sum.map(|s| s / count as f64)
            })
            .collect();

        let mut mean = [0.0; K];
        for v in &per_ordering {
            for k in 0..K {
                mean[k] += v[k];
            }
        }
        let total = per_ordering.len() as f64;
        Ok(Estimate {
            mean: mean.map(|s| s / total),
            std_error: None,
            evaluations: per_ordering.len() as u64,
        })
    }

    fn monte_carlo_estimate<const K: usize, F>(
        &self,
        n: usize,
        m: usize,
        samples: u64,
        stat: F,
    ) -> Result<Estimate<K>>
    where
        F: Fn(&[usize]) -> [f64; K] + Sync,
    {
        if samples == 0 {
            return Err(Error::invalid("monte carlo needs at least one sample"));
        }
        let seed = self.seed;
        let values: Vec<[f64; K]> = (0..samples)
            .into_par_iter()
            .map_init(
                || Vec::with_capacity(m),
                |buf, i| {
                    let mut rng = sample_rng(seed, i);
                    fill_sample(n, m, &mut rng, buf);
                    stat(buf)
                },
            )
            .collect();

        let count = values.len() as f64;
        let mut mean = [0.0; K];
        for v in &values {
            for k in 0..K {
                mean[k] += v[k];
            }
        }
        mean = mean.map(|s| s / count);
        let mut sq = [0.0; K];
        for v in &values {
            for k in 0..K {
                let d = v[k] - mean[k];
                sq[k] += d * d;
            }
        }
        let std_error = if values.len() > 1 {
            sq.map(|s| (s / (count - 1.0)).sqrt() / count.sqrt())
        } else {
            [0.0; K]
        };
        Ok(Estimate {
            mean,
            std_error: Some(std_error),
            evaluations: samples,
        })
    }
}

/// Means of a statistic over orderings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const K: usize> {
    pub mean: [f64; K],
    /// `None` for exact enumeration.
    pub std_error: Option<[f64; K]>,
    /// Interleavings enumerated, or samples drawn.
    pub evaluations: u64,
}

/// The RNG used for Monte Carlo sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a run seed with task identifiers into an independent sub-seed.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}
