//! Geometric Brownian motion paths split into a history and a future segment.
//!
//! `S_{t+1} = S_t * exp((mu - sigma^2 / 2) + sigma * Z_t)` with i.i.d.
//! standard normal `Z_t` (rand_distr's ziggurat sampler). The history feeds
//! the NPI ladder, the future gives the realised benchmark payoff.

use std::io::Write;

use chrono::NaiveDate;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::market_data::PriceSeries;
use crate::pricing::{AveragingConvention, OptionContract};

/// Which point of the path carries `initial_price`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriceAnchor {
    /// The first simulated price.
    #[default]
    Start,
    /// The price at the history/future split, i.e. the option's `S_0`.
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmParams {
    pub drift: f64,
    pub volatility: f64,
    pub initial_price: f64,
    pub total_steps: usize,
    pub history_steps: usize,
    pub anchor: PriceAnchor,
}

impl GbmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.volatility >= 0.0 && self.volatility.is_finite()) {
            return Err(Error::invalid(format!("volatility must be >= 0, got {}", self.volatility)));
        }
        if !self.drift.is_finite() {
            return Err(Error::invalid("drift must be finite"));
        }
        if !(self.initial_price > 0.0 && self.initial_price.is_finite()) {
            return Err(Error::invalid("initial price must be > 0"));
        }
        if self.history_steps == 0 || self.history_steps >= self.total_steps {
            return Err(Error::invalid(format!(
                "need 0 < history_steps ({}) < total_steps ({})",
                self.history_steps, self.total_steps
            )));
        }
        Ok(())
    }

    /// Option horizon `m`.
    pub fn future_steps(&self) -> usize {
        self.total_steps - self.history_steps
    }

    pub fn with_volatility(mut self, volatility: f64) -> Self {
        self.volatility = volatility;
        self
    }
}

/// A simulated path; `future` starts at the last `history` price.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPath {
    pub history: PriceSeries,
    pub future: PriceSeries,
}

impl SplitPath {
    /// Whole path, `total_steps + 1` prices.
    pub fn prices(&self) -> Vec<f64> {
        self.history
            .prices()
            .chain(self.future.prices().skip(1))
            .collect()
    }

    /// Price at the split, the option's `S_0`.
    pub fn split_price(&self) -> f64 {
        self.history.last().price
    }
}

fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date")
}

pub fn simulate_path<R: Rng + ?Sized>(params: &GbmParams, rng: &mut R) -> Result<SplitPath> {
    params.validate()?;
    let step_drift = params.drift - 0.5 * params.volatility * params.volatility;
    let mut log_level = Vec::with_capacity(params.total_steps + 1);
    log_level.push(0.0);
    let mut acc = 0.0;
    for _ in 0..params.total_steps {
        let z: f64 = rng.sample(StandardNormal);
        acc += step_drift + params.volatility * z;
        log_level.push(acc);
    }
    let origin = match params.anchor {
        PriceAnchor::Start => 0.0,
        PriceAnchor::Split => log_level[params.history_steps],
    };
    let prices: Vec<f64> = log_level
        .iter()
        .map(|x| params.initial_price * (x - origin).exp())
        .collect();

    let split = params.history_steps;
    let history = PriceSeries::from_prices(epoch(), &prices[..=split])?;
    let future_start = history.last().date;
    let future = PriceSeries::from_prices(future_start, &prices[split..])?;
    Ok(SplitPath { history, future })
}

/// Discounted payoff on the realised future segment (`m + 1` prices, the
/// first being the split price).
pub fn benchmark_price(
    future: &PriceSeries,
    contract: &OptionContract,
    convention: AveragingConvention,
) -> Result<f64> {
    if future.len() != contract.horizon + 1 {
        return Err(Error::HorizonMismatch {
            expected: contract.horizon,
            got: future.len().saturating_sub(1),
        });
    }
    let prices: Vec<f64> = future.prices().collect();
    let average = convention.average(&prices);
    Ok(contract.discount_factor() * contract.kind.payoff(average, contract.strike))
}

/// Path dump: `path_id,step,price`.
pub fn write_paths_csv<'a, W, I>(paths: I, out: W) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = (usize, &'a SplitPath)>,
{
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["path_id", "step", "price"]).map_err(err)?;
    for (id, path) in paths {
        for (step, price) in path.prices().iter().enumerate() {
            w.write_record([id.to_string(), step.to_string(), crate::report::sig9(*price)])
                .map_err(err)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::sample_rng;
    use crate::pricing::OptionKind;

    fn params(mu: f64, sigma: f64, total: usize, history: usize) -> GbmParams {
        GbmParams {
            drift: mu,
            volatility: sigma,
            initial_price: 50.0,
            total_steps: total,
            history_steps: history,
            anchor: PriceAnchor::Start,
        }
    }

    #[test]
    fn zero_volatility_zero_drift_is_flat() {
        let path = simulate_path(&params(0.0, 0.0, 20, 10), &mut sample_rng(1, 0)).unwrap();
        assert!(path.prices().iter().all(|&p| p == 50.0));
        assert_eq!(path.history.len(), 11);
        assert_eq!(path.future.len(), 11);
        assert_eq!(path.future.first(), path.history.last());
    }

    #[test]
    fn zero_volatility_follows_drift() {
        let path = simulate_path(&params(0.02, 0.0, 10, 5), &mut sample_rng(1, 0)).unwrap();
        let last = *path.prices().last().unwrap();
        assert!((last - 50.0 * 0.2f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn split_anchor_pins_option_start() {
        let mut p = params(0.02, 0.03, 30, 20);
        p.anchor = PriceAnchor::Split;
        let path = simulate_path(&p, &mut sample_rng(4, 2)).unwrap();
        assert!((path.split_price() - 50.0).abs() < 1e-12);
        let mut q = p;
        q.anchor = PriceAnchor::Start;
        let raw = simulate_path(&q, &mut sample_rng(4, 2)).unwrap();
        // same shocks, rescaled
        let ratio = raw.split_price() / 50.0;
        for (a, b) in path.prices().iter().zip(raw.prices()) {
            assert!((a * ratio - b).abs() < 1e-9 * b);
        }
    }

    #[test]
    fn log_return_mean_matches_drift() {
        // small drift keeps 10^5 compounded steps inside f64 range
        let (mu, sigma) = (0.0005, 0.02);
        let n = 100_000;
        let path = simulate_path(&params(mu, sigma, n, 1), &mut sample_rng(11, 0)).unwrap();
        let prices = path.prices();
        let mean = prices.windows(2).map(|w| (w[1] / w[0]).ln()).sum::<f64>() / n as f64;
        let target = mu - sigma * sigma / 2.0;
        assert!((mean - target).abs() < 3.0 * sigma / (n as f64).sqrt(), "{mean} vs {target}");
    }

    #[test]
    fn seeded_paths_repeat() {
        let p = params(0.02, 0.05, 110, 100);
        let a = simulate_path(&p, &mut sample_rng(5, 3)).unwrap();
        let b = simulate_path(&p, &mut sample_rng(5, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn benchmark_examples() {
        let flat = PriceSeries::from_prices(epoch(), &[50.0; 11]).unwrap();
        let call = OptionContract::new(OptionKind::Call, 50.0, 10, 50.0).unwrap();
        assert_eq!(benchmark_price(&flat, &call, Default::default()).unwrap(), 0.0);

        let up = PriceSeries::from_prices(epoch(), &[50.0, 55.0]).unwrap();
        let one = OptionContract::new(OptionKind::Call, 50.0, 1, 50.0).unwrap();
        assert_eq!(benchmark_price(&up, &one, Default::default()).unwrap(), 5.0);

        assert!(matches!(
            benchmark_price(&up, &call, Default::default()),
            Err(Error::HorizonMismatch { expected: 10, got: 1 })
        ));
    }

    #[test]
    fn benchmark_on_random_path_is_mean_minus_strike() {
        let p = params(0.01, 0.04, 30, 20);
        let path = simulate_path(&p, &mut sample_rng(21, 0)).unwrap();
        let fut: Vec<f64> = path.future.prices().collect();
        let by_hand = fut[1..].iter().sum::<f64>() / 10.0;
        let call = OptionContract::new(OptionKind::Call, 48.0, 10, fut[0]).unwrap();
        let got = benchmark_price(&path.future, &call, Default::default()).unwrap();
        assert!((got - (by_hand - 48.0).max(0.0)).abs() < 1e-12);
    }

    #[test]
    fn path_dump_layout() {
        let path = simulate_path(&params(0.0, 0.0, 2, 1), &mut sample_rng(0, 0)).unwrap();
        let mut out = Vec::new();
        write_paths_csv([(7, &path)], &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "path_id,step,price\n7,0,50\n7,1,50\n7,2,50\n"
        );
    }
}
