//! Shared fixtures and an independent brute-force reference.
#![allow(dead_code)]

pub mod properties;

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use npi_asian::{
    build_ladder, load_price_series_path, AveragingConvention, ColumnMap, OptionContract, OptionKind,
    ReturnLadder, WindowPolicy,
};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// r0 = -0.04, returns {0, 0.01, 0.02}, r4 = 0.04.
pub fn ladder_fixture() -> ReturnLadder {
    ReturnLadder::new(vec![0.02, 0.0, 0.01], -0.04, 0.04).unwrap()
}

/// Ladder from `small.csv` (four returns) with boundaries (-0.05, 0.06).
pub fn csv_fixture() -> ReturnLadder {
    let series = load_price_series_path(fixture("small.csv"), &ColumnMap::default()).unwrap();
    build_ladder(&series, &WindowPolicy::single_window().with_override(-0.05, 0.06)).unwrap()
}

pub fn contract(kind: OptionKind, strike: f64, horizon: usize, s0: f64) -> OptionContract {
    OptionContract::new(kind, strike, horizon, s0).unwrap()
}

/// Reference expectations by summing over every labelled sequence of `m`
/// interval choices, each weighted by sequential prediction: the `t`-th
/// future value falls in interval `j` with probability
/// `(1 + earlier hits of j) / (n + t)`.
pub struct BruteForce {
    /// Expected (max buying, min selling), undiscounted.
    pub prices: (f64, f64),
    /// Exact (lower, upper) probability of a positive payoff.
    pub probability: (BigRational, BigRational),
    /// Total weight, must be exactly one.
    pub total: BigRational,
}

pub fn brute_force(
    ladder: &ReturnLadder,
    kind: OptionKind,
    strike: f64,
    m: usize,
    s0: f64,
    convention: AveragingConvention,
) -> BruteForce {
    let n = ladder.n();
    let rungs = ladder.rungs();
    let zero = || BigRational::from_integer(BigInt::from(0));
    let mut out = BruteForce {
        prices: (0.0, 0.0),
        probability: (zero(), zero()),
        total: zero(),
    };
    let mut seq = vec![1usize; m];
    loop {
        let mut weight = BigRational::from_integer(BigInt::from(1));
        let mut hits = vec![0i64; n + 2];
        for (t, &j) in seq.iter().enumerate() {
            weight *= BigRational::new(BigInt::from(1 + hits[j]), BigInt::from((n + t + 1) as i64));
            hits[j] += 1;
        }

        let (mut lo, mut hi, mut sum_lo, mut sum_hi) = (0.0f64, 0.0f64, 0.0, 0.0);
        for &j in &seq {
            lo += rungs[j - 1];
            hi += rungs[j];
            sum_lo += s0 * lo.exp();
            sum_hi += s0 * hi.exp();
        }
        if convention.include_initial {
            sum_lo += s0;
            sum_hi += s0;
        }
        let d = convention.divisor(m) as f64;
        let (avg_lo, avg_hi) = (sum_lo / d, sum_hi / d);

        let (pay_lo, pay_hi, in_lo, in_hi) = match kind {
            OptionKind::Call => ((avg_lo - strike).max(0.0), (avg_hi - strike).max(0.0), avg_lo > strike, avg_hi > strike),
            OptionKind::Put => ((strike - avg_hi).max(0.0), (strike - avg_lo).max(0.0), avg_hi < strike, avg_lo < strike),
        };
        let w = ratio_to_f64(&weight);
        out.prices.0 += w * pay_lo;
        out.prices.1 += w * pay_hi;
        if in_lo {
            out.probability.0 += &weight;
        }
        if in_hi {
            out.probability.1 += &weight;
        }
        out.total += weight;

        // odometer over {1..=n+1}^m
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if seq[i] < n + 1 {
                seq[i] += 1;
                break;
            }
            seq[i] = 1;
        }
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    // exact enough for fixture-sized denominators
    r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap()
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
