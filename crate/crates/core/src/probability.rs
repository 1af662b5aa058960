//! Upper and lower probabilities of a positive payoff, and the pairwise
//! speculator / hedger criteria built on them.

use serde::Serialize;

use crate::error::Result;
use crate::market_data::ReturnLadder;
use crate::ordering::OrderingSource;
use crate::pricing::{average_bounds_for, AveragingConvention, OptionContract, OptionKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbabilityInterval {
    pub lower: f64,
    pub upper: f64,
    /// Standard errors of (lower, upper); Monte Carlo only.
    pub standard_error: Option<(f64, f64)>,
}

impl ProbabilityInterval {
    /// Interval without sampling error, e.g. read from a published table.
    pub fn new(lower: f64, upper: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&lower) && lower <= upper && upper <= 1.0);
        Self {
            lower,
            upper,
            standard_error: None,
        }
    }
}

/// Fraction of orderings whose pessimistic (lower) or optimistic (upper)
/// average price puts the option strictly in the money.
pub fn payoff_probability(
    contract: &OptionContract,
    ladder: &ReturnLadder,
    source: &OrderingSource,
    convention: AveragingConvention,
) -> Result<ProbabilityInterval> {
    contract.validate()?;
    let rungs = ladder.rungs();
    let k = contract.strike;
    let est = source.estimate(ladder.n(), contract.horizon, |intervals| {
        let (low, high) = average_bounds_for(intervals, rungs, contract.initial_price, convention);
        let (lower, upper) = match contract.kind {
            OptionKind::Call => (low > k, high > k),
            OptionKind::Put => (high < k, low < k),
        };
        [f64::from(u8::from(lower)), f64::from(u8::from(upper))]
    })?;
    Ok(ProbabilityInterval {
        lower: est.mean[0],
        upper: est.mean[1],
        standard_error: est.std_error.map(|se| (se[0], se[1])),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeculatorChoice {
    A,
    B,
    Indifferent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HedgerChoice {
    A,
    B,
    Abstain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TradingDecision {
    pub speculator: SpeculatorChoice,
    pub hedger: HedgerChoice,
}

impl TradingDecision {
    /// The decision with the roles of A and B exchanged.
    pub fn swapped(self) -> Self {
        let speculator = match self.speculator {
            SpeculatorChoice::A => SpeculatorChoice::B,
            SpeculatorChoice::B => SpeculatorChoice::A,
            SpeculatorChoice::Indifferent => SpeculatorChoice::Indifferent,
        };
        let hedger = match self.hedger {
            HedgerChoice::A => HedgerChoice::B,
            HedgerChoice::B => HedgerChoice::A,
            HedgerChoice::Abstain => HedgerChoice::Abstain,
        };
        Self { speculator, hedger }
    }
}

/// A speculator prefers the asset that is ahead on either endpoint; if each
/// asset is ahead on one endpoint, or neither is ahead, there is no
/// preference. A hedger needs one lower probability strictly above the
/// other asset's upper probability.
pub fn compare_for_trade(a: &ProbabilityInterval, b: &ProbabilityInterval) -> TradingDecision {
    let a_ahead = a.lower > b.lower || a.upper > b.upper;
    let b_ahead = b.lower > a.lower || b.upper > a.upper;
    let speculator = match (a_ahead, b_ahead) {
        (true, false) => SpeculatorChoice::A,
        (false, true) => SpeculatorChoice::B,
        _ => SpeculatorChoice::Indifferent,
    };
    let hedger = if a.lower > b.upper {
        HedgerChoice::A
    } else if b.lower > a.upper {
        HedgerChoice::B
    } else {
        HedgerChoice::Abstain
    };
    TradingDecision { speculator, hedger }
}
