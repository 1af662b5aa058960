//! Fixed-strike arithmetic Asian options priced from the return ladder.
//!
//! For one ordering, replacing every future return by the lower (upper)
//! endpoint of its interval gives the smallest (largest) attainable
//! compounded price path, hence the smallest (largest) arithmetic average.
//! The maximum buying price is the discounted mean, over orderings, of the
//! payoff at the pessimistic average; the minimum selling price uses the
//! optimistic one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::market_data::ReturnLadder;
use crate::ordering::{AggregateBounds, OrderingSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

impl OptionKind {
    pub fn payoff(self, average: f64, strike: f64) -> f64 {
        match self {
            OptionKind::Call => (average - strike).max(0.0),
            OptionKind::Put => (strike - average).max(0.0),
        }
    }

    /// (lower, upper) payoff over an average known to lie in `[low, high]`.
    pub fn payoff_bounds(self, low: f64, high: f64, strike: f64) -> (f64, f64) {
        match self {
            OptionKind::Call => (self.payoff(low, strike), self.payoff(high, strike)),
            OptionKind::Put => (self.payoff(high, strike), self.payoff(low, strike)),
        }
    }
}

/// Flat continuously compounded rate per step.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct DiscountSpec {
    pub rate_per_step: f64,
}

impl DiscountSpec {
    pub fn new(rate_per_step: f64) -> Result<Self> {
        if !(rate_per_step >= 0.0 && rate_per_step.is_finite()) {
            return Err(Error::invalid(format!(
                "discount rate must be finite and >= 0, got {rate_per_step}"
            )));
        }
        Ok(Self { rate_per_step })
    }

    /// `B(0, m)`.
    pub fn factor(&self, horizon: usize) -> f64 {
        (-self.rate_per_step * horizon as f64).exp()
    }
}

/// Whether the initial price enters the average (divisor `m + 1`) or not
/// (divisor `m`, the default).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct AveragingConvention {
    pub include_initial: bool,
}

impl AveragingConvention {
    pub fn exclude_initial() -> Self {
        Self { include_initial: false }
    }

    pub fn include_initial() -> Self {
        Self { include_initial: true }
    }

    pub fn divisor(&self, horizon: usize) -> usize {
        horizon + usize::from(self.include_initial)
    }

    /// Average of a realised path `prices[0] = S_0, prices[1..] = S_1..S_m`.
    pub fn average(&self, prices: &[f64]) -> f64 {
        let m = prices.len() - 1;
        let sum: f64 = prices[1..].iter().sum();
        let sum = if self.include_initial { sum + prices[0] } else { sum };
        sum / self.divisor(m) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptionContract {
    pub kind: OptionKind,
    pub strike: f64,
    pub horizon: usize,
    pub initial_price: f64,
    pub discount: DiscountSpec,
}

impl OptionContract {
    pub fn new(kind: OptionKind, strike: f64, horizon: usize, initial_price: f64) -> Result<Self> {
        let contract = Self {
            kind,
            strike,
            horizon,
            initial_price,
            discount: DiscountSpec::default(),
        };
        contract.validate()?;
        Ok(contract)
    }

    pub fn with_discount(mut self, discount: DiscountSpec) -> Self {
        self.discount = discount;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strike > 0.0 && self.strike.is_finite()) {
            return Err(Error::invalid(format!("strike must be > 0, got {}", self.strike)));
        }
        if self.horizon == 0 {
            return Err(Error::invalid("horizon must be at least 1 step"));
        }
        if !(self.initial_price > 0.0 && self.initial_price.is_finite()) {
            return Err(Error::invalid(format!(
                "initial price must be > 0, got {}",
                self.initial_price
            )));
        }
        DiscountSpec::new(self.discount.rate_per_step).map(|_| ())
    }

    pub fn discount_factor(&self) -> f64 {
        self.discount.factor(self.horizon)
    }
}

/// Expected NPI price bounds for one contract.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriceInterval {
    /// Lower expected price.
    pub max_buying: f64,
    /// Upper expected price.
    pub min_selling: f64,
    /// Standard errors of (max_buying, min_selling); Monte Carlo only.
    pub standard_error: Option<(f64, f64)>,
}

impl PriceInterval {
    pub fn width(&self) -> f64 {
        self.min_selling - self.max_buying
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.max_buying + self.min_selling)
    }

    pub fn contains(&self, price: f64) -> bool {
        self.max_buying <= price && price <= self.min_selling
    }
}

/// Minimum and maximum arithmetic average price implied by per-horizon
/// aggregate-return bounds.
pub fn average_price_bounds(
    bounds: &AggregateBounds,
    initial_price: f64,
    convention: AveragingConvention,
) -> (f64, f64) {
    let m = bounds.lower.len();
    let grow = |r: &[f64]| -> f64 {
        r.iter()
            .enumerate()
            .map(|(i, avg)| initial_price * ((i + 1) as f64 * avg).exp())
            .sum()
    };
    let base = if convention.include_initial { initial_price } else { 0.0 };
    let divisor = convention.divisor(m) as f64;
    (
        (base + grow(&bounds.lower)) / divisor,
        (base + grow(&bounds.upper)) / divisor,
    )
}

/// Same quantity as [`average_price_bounds`], straight from interval
/// indices: the cumulative log return to step `i` is `i * R̂_i`.
pub(crate) fn average_bounds_for(
    intervals: &[usize],
    rungs: &[f64],
    initial_price: f64,
    convention: AveragingConvention,
) -> (f64, f64) {
    let (mut cum_lo, mut cum_hi) = (0.0, 0.0);
    let (mut sum_lo, mut sum_hi) = (0.0, 0.0);
    for &j in intervals {
        cum_lo += rungs[j - 1];
        cum_hi += rungs[j];
        sum_lo += cum_lo.exp();
        sum_hi += cum_hi.exp();
    }
    if convention.include_initial {
        sum_lo += 1.0;
        sum_hi += 1.0;
    }
    let scale = initial_price / convention.divisor(intervals.len()) as f64;
    (scale * sum_lo, scale * sum_hi)
}

/// Maximum buying and minimum selling prices under the NPI ordering model.
pub fn price_interval(
    contract: &OptionContract,
    ladder: &ReturnLadder,
    source: &OrderingSource,
    convention: AveragingConvention,
) -> Result<PriceInterval> {
    contract.validate()?;
    let rungs = ladder.rungs();
    let discount = contract.discount_factor();
    let est = source.estimate(ladder.n(), contract.horizon, |intervals| {
        let (low, high) =
            average_bounds_for(intervals, rungs, contract.initial_price, convention);
        let (buy, sell) = contract.kind.payoff_bounds(low, high, contract.strike);
        [discount * buy, discount * sell]
    })?;
    Ok(PriceInterval {
        max_buying: est.mean[0],
        min_selling: est.mean[1],
        standard_error: est.std_error.map(|se| (se[0], se[1])),
    })
}
