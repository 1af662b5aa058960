//! Nonparametric predictive inference (NPI) for fixed-strike arithmetic
//! Asian options.
//!
//! Historical log returns are sorted into a ladder of `n + 1` open intervals.
//! Each possible ordering of the `m` future returns among those intervals is
//! equally likely; taking the left or right endpoint of every interval gives
//! a pessimistic and an optimistic price path, and averaging the resulting
//! payoffs over orderings gives a maximum buying price and a minimum selling
//! price for the option.
//!
//! ```
//! use npi_asian::{build_ladder, price_interval, AveragingConvention, OptionContract,
//!     OptionKind, OrderingSource, PriceSeries, WindowPolicy};
//! use chrono::NaiveDate;
//!
//! let start = NaiveDate::from_ymd_opt(2024, 1, 1).unwrap();
//! let series = PriceSeries::from_prices(start, &[100.0, 102.0, 101.0, 104.0, 103.5]).unwrap();
//! let ladder = build_ladder(&series, &WindowPolicy::single_window().with_override(-0.05, 0.06)).unwrap();
//! let call = OptionContract::new(OptionKind::Call, 104.0, 3, 103.5).unwrap();
//! let p = price_interval(&call, &ladder, &OrderingSource::exact(), AveragingConvention::default()).unwrap();
//! assert!(p.max_buying < p.min_selling);
//! ```
//!
//! See `examples/` for one runnable program per capability.

pub mod cli;
pub mod error;
pub mod evaluation;
pub mod gbm;
pub mod market_data;
pub mod ordering;
pub mod pricing;
pub mod probability;
pub mod report;

pub use error::{Error, ErrorClass, Result};
pub use evaluation::{compute_metrics, run_sweep, StrikeRule, StudyMetrics, StudyRecord, SweepSpec};
pub use gbm::{benchmark_price, simulate_path, GbmParams, PriceAnchor, SplitPath};
pub use market_data::{
    build_ladder, load_price_series, load_price_series_path, ColumnMap, DateRange, Observation, PriceSeries,
    ReturnLadder, WindowPolicy,
};
pub use ordering::{
    aggregate_bounds, enumerate_orderings, ordering_count, sample_ordering, AggregateBounds, OrderingAssignment,
    OrderingMode, OrderingSource,
};
pub use pricing::{
    average_price_bounds, price_interval, AveragingConvention, DiscountSpec, OptionContract, OptionKind,
    PriceInterval,
};
pub use probability::{
    compare_for_trade, payoff_probability, HedgerChoice, ProbabilityInterval, SpeculatorChoice, TradingDecision,
};
