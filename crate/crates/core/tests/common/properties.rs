//! Structural invariants shared by the property suite and the acceptance run.

use npi_asian::ordering::sample_rng;
use npi_asian::{
    aggregate_bounds, average_price_bounds, compare_for_trade, payoff_probability, price_interval,
    sample_ordering, AveragingConvention, HedgerChoice, OptionContract, OptionKind, OrderingSource,
    ProbabilityInterval, ReturnLadder, SpeculatorChoice,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Check = Result<(), TestCaseError>;

pub const CASES: u32 = 1000;

/// Returns plus boundaries that bracket them.
pub fn ladder_parts() -> impl Strategy<Value = (Vec<f64>, f64, f64)> {
    (prop::collection::vec(-0.05f64..0.05, 1..7), 0.0f64..0.05, 0.0f64..0.05).prop_map(|(r, below, above)| {
        let min = r.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (r, min - below, max + above)
    })
}

pub fn kind() -> impl Strategy<Value = OptionKind> {
    prop_oneof![Just(OptionKind::Call), Just(OptionKind::Put)]
}

pub fn convention() -> impl Strategy<Value = AveragingConvention> {
    any::<bool>().prop_map(|include_initial| AveragingConvention { include_initial })
}

/// Exact, or a short Monte Carlo run. Both are deterministic, so
/// comparisons at one seed are exact.
pub fn source() -> impl Strategy<Value = OrderingSource> {
    prop_oneof![
        Just(OrderingSource::exact()),
        any::<u64>().prop_map(|seed| OrderingSource::monte_carlo(64, seed)),
    ]
}

pub fn interval() -> impl Strategy<Value = ProbabilityInterval> {
    // coarse grid so that ties occur often
    (0u32..=20, 0u32..=20).prop_map(|(a, b)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        ProbabilityInterval::new(f64::from(lo) / 20.0, f64::from(hi) / 20.0)
    })
}

fn ladder((r, lo, hi): (Vec<f64>, f64, f64)) -> ReturnLadder {
    ReturnLadder::new(r, lo, hi).unwrap()
}

pub type PriceCase = ((Vec<f64>, f64, f64), usize, f64, OptionKind, AveragingConvention, OrderingSource);

pub fn price_case() -> impl Strategy<Value = PriceCase> {
    (ladder_parts(), 1usize..4, 80.0f64..120.0, kind(), convention(), source())
}

pub fn buying_below_selling((parts, m, k, kind, conv, src): PriceCase) -> Check {
    let ladder = ladder(parts);
    let c = OptionContract::new(kind, k, m, 100.0).unwrap();
    let p = price_interval(&c, &ladder, &src, conv).unwrap();
    prop_assert!(p.max_buying >= 0.0);
    prop_assert!(p.max_buying <= p.min_selling, "{p:?}");
    Ok(())
}

pub fn probabilities_ordered((parts, m, k, kind, conv, src): PriceCase) -> Check {
    let ladder = ladder(parts);
    let c = OptionContract::new(kind, k, m, 100.0).unwrap();
    let q = payoff_probability(&c, &ladder, &src, conv).unwrap();
    prop_assert!(0.0 <= q.lower && q.lower <= q.upper && q.upper <= 1.0, "{q:?}");
    Ok(())
}

/// Same case plus a non-negative strike increment.
pub fn strike_monotone(((parts, m, k1, _, conv, src), dk): (PriceCase, f64)) -> Check {
    let ladder = ladder(parts);
    let k2 = k1 + dk;
    for kind in [OptionKind::Call, OptionKind::Put] {
        let at = |k| {
            let c = OptionContract::new(kind, k, m, 100.0).unwrap();
            (
                price_interval(&c, &ladder, &src, conv).unwrap(),
                payoff_probability(&c, &ladder, &src, conv).unwrap(),
            )
        };
        let (p1, q1) = at(k1);
        let (p2, q2) = at(k2);
        match kind {
            OptionKind::Call => {
                prop_assert!(p2.max_buying <= p1.max_buying && p2.min_selling <= p1.min_selling);
                prop_assert!(q2.lower <= q1.lower && q2.upper <= q1.upper);
            }
            OptionKind::Put => {
                prop_assert!(p2.max_buying >= p1.max_buying && p2.min_selling >= p1.min_selling);
                prop_assert!(q2.lower >= q1.lower && q2.upper >= q1.upper);
            }
        }
    }
    Ok(())
}

/// Strike taken as a ratio of the spot; `scale` multiplies both.
pub fn scale_equivariant(((parts, m, k, kind, conv, src), scale): (PriceCase, f64)) -> Check {
    let ladder = ladder(parts);
    let base = OptionContract::new(kind, k, m, 100.0).unwrap();
    let scaled = OptionContract::new(kind, k * scale, m, 100.0 * scale).unwrap();
    let a = price_interval(&base, &ladder, &src, conv).unwrap();
    let b = price_interval(&scaled, &ladder, &src, conv).unwrap();
    let tol = 1e-9 * scale.max(1.0) * (1.0 + a.min_selling);
    prop_assert!((b.max_buying - scale * a.max_buying).abs() <= tol, "{a:?} {b:?}");
    prop_assert!((b.min_selling - scale * a.min_selling).abs() <= tol, "{a:?} {b:?}");
    Ok(())
}

/// Boundaries pushed out by `(down, up)`.
pub fn widening_never_shrinks(((parts, m, k, kind, conv, src), (down, up)): (PriceCase, (f64, f64))) -> Check {
    let (r, lo, hi) = parts;
    let narrow = ReturnLadder::new(r.clone(), lo, hi).unwrap();
    let wide = ReturnLadder::new(r, lo - down, hi + up).unwrap();
    let c = OptionContract::new(kind, k, m, 100.0).unwrap();
    let pn = price_interval(&c, &narrow, &src, conv).unwrap();
    let pw = price_interval(&c, &wide, &src, conv).unwrap();
    prop_assert!(pw.max_buying <= pn.max_buying && pw.min_selling >= pn.min_selling, "{pn:?} {pw:?}");
    let qn = payoff_probability(&c, &narrow, &src, conv).unwrap();
    let qw = payoff_probability(&c, &wide, &src, conv).unwrap();
    prop_assert!(qw.lower <= qn.lower && qw.upper >= qn.upper, "{qn:?} {qw:?}");
    Ok(())
}

pub fn hedger_implies_speculator((a, b): (ProbabilityInterval, ProbabilityInterval)) -> Check {
    let d = compare_for_trade(&a, &b);
    match d.hedger {
        HedgerChoice::A => prop_assert_eq!(d.speculator, SpeculatorChoice::A),
        HedgerChoice::B => prop_assert_eq!(d.speculator, SpeculatorChoice::B),
        HedgerChoice::Abstain => {}
    }
    Ok(())
}

pub fn antisymmetric((a, b): (ProbabilityInterval, ProbabilityInterval)) -> Check {
    prop_assert_eq!(compare_for_trade(&b, &a), compare_for_trade(&a, &b).swapped());
    let same = compare_for_trade(&a, &a);
    prop_assert_eq!(same.speculator, SpeculatorChoice::Indifferent);
    prop_assert_eq!(same.hedger, HedgerChoice::Abstain);
    Ok(())
}

pub fn sampled_orderings_valid(((parts, _, _, _, conv, _), m, seed): (PriceCase, usize, u64)) -> Check {
    let ladder = ladder(parts);
    let o = sample_ordering(ladder.n(), m, &mut sample_rng(seed, 0));
    prop_assert_eq!(o.horizon(), m);
    prop_assert!(o.intervals().iter().all(|&j| (1..=ladder.n() + 1).contains(&j)));
    let b = aggregate_bounds(&o, &ladder).unwrap();
    prop_assert!(b.lower.iter().zip(&b.upper).all(|(l, u)| l <= u));
    let (low, high) = average_price_bounds(&b, 100.0, conv);
    prop_assert!(0.0 < low && low <= high);
    Ok(())
}
