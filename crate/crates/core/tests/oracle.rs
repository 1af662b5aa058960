//! Exact enumeration against frozen values from the Python brute force in
//! `tests/oracles/`, and against a Rust brute force over labelled sequences.

mod common;

use common::*;
use npi_asian::{
    enumerate_orderings, ordering_count, payoff_probability, price_interval, AveragingConvention, OptionKind,
    OrderingSource, ReturnLadder,
};

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

struct Frozen {
    call: (f64, f64),
    put: (f64, f64),
    call_p: (f64, f64),
    put_p: (f64, f64),
}

fn check_frozen(ladder: &ReturnLadder, m: usize, s0: f64, k: f64, want: Frozen) {
    let exact = OrderingSource::exact();
    let conv = AveragingConvention::exclude_initial();
    for (kind, prices, probs) in [
        (OptionKind::Call, want.call, want.call_p),
        (OptionKind::Put, want.put, want.put_p),
    ] {
        let c = contract(kind, k, m, s0);
        let p = price_interval(&c, ladder, &exact, conv).unwrap();
        assert!(rel_close(p.max_buying, prices.0), "{kind:?} buy {} vs {}", p.max_buying, prices.0);
        assert!(rel_close(p.min_selling, prices.1), "{kind:?} sell {} vs {}", p.min_selling, prices.1);
        assert!(p.standard_error.is_none());
        let q = payoff_probability(&c, ladder, &exact, conv).unwrap();
        assert!(rel_close(q.lower, probs.0), "{kind:?} p_lo {} vs {}", q.lower, probs.0);
        assert!(rel_close(q.upper, probs.1), "{kind:?} p_hi {} vs {}", q.upper, probs.1);
    }
}

#[test]
fn ladder_fixture_matches_python_oracle() {
    check_frozen(
        &ladder_fixture(),
        2,
        100.0,
        100.0,
        Frozen {
            call: (0.9121058808609364, 2.682896716652974),
            put: (0.0, 1.2427533141813178),
            call_p: (11.0 / 20.0, 9.0 / 10.0),
            put_p: (0.0, 7.0 / 20.0),
        },
    );
}

#[test]
fn csv_fixture_matches_python_oracle() {
    let ladder = csv_fixture();
    assert_eq!(ladder.n(), 4);
    check_frozen(
        &ladder,
        3,
        103.5,
        104.0,
        Frozen {
            call: (1.1129756650773297, 3.8688008979529624),
            put: (0.2882446473963436, 2.161099401412305),
            call_p: (13.0 / 30.0, 169.0 / 210.0),
            put_p: (41.0 / 210.0, 17.0 / 30.0),
        },
    );
}

#[test]
fn fixture_ordering_counts() {
    assert_eq!(ordering_count(3, 2), 10u32.into());
    assert_eq!(ordering_count(4, 3), 35u32.into());
    assert_eq!(enumerate_orderings(3, 2, 1_000_000).unwrap().count(), 10);
    assert_eq!(enumerate_orderings(4, 3, 1_000_000).unwrap().count(), 35);
}

#[test]
fn probabilities_are_exact_rationals() {
    let ladder = csv_fixture();
    let exact = OrderingSource::exact();
    let conv = AveragingConvention::exclude_initial();
    let c = contract(OptionKind::Call, 104.0, 3, 103.5);
    let bf = brute_force(&ladder, OptionKind::Call, 104.0, 3, 103.5, conv);
    assert_eq!(bf.total, ratio(1, 1));
    assert_eq!(bf.probability, (ratio(13, 30), ratio(169, 210)));
    let q = payoff_probability(&c, &ladder, &exact, conv).unwrap();
    assert!((q.lower - ratio_to_f64(&bf.probability.0)).abs() < 1e-15);
    assert!((q.upper - ratio_to_f64(&bf.probability.1)).abs() < 1e-15);
}

#[test]
fn exact_matches_rust_brute_force_across_settings() {
    let exact = OrderingSource::exact();
    let ladders = [ladder_fixture(), csv_fixture(), ReturnLadder::new(vec![-0.01], -0.03, 0.02).unwrap()];
    for ladder in &ladders {
        for m in 1..=4 {
            for conv in [AveragingConvention::exclude_initial(), AveragingConvention::include_initial()] {
                for kind in [OptionKind::Call, OptionKind::Put] {
                    for k in [95.0, 100.0, 100.7] {
                        let c = contract(kind, k, m, 100.0);
                        let bf = brute_force(ladder, kind, k, m, 100.0, conv);
                        let p = price_interval(&c, ladder, &exact, conv).unwrap();
                        let q = payoff_probability(&c, ladder, &exact, conv).unwrap();
                        let tag = format!("n={} m={m} {conv:?} {kind:?} K={k}", ladder.n());
                        assert!((p.max_buying - bf.prices.0).abs() < 1e-11, "{tag}");
                        assert!((p.min_selling - bf.prices.1).abs() < 1e-11, "{tag}");
                        assert!((q.lower - ratio_to_f64(&bf.probability.0)).abs() < 1e-13, "{tag}");
                        assert!((q.upper - ratio_to_f64(&bf.probability.1)).abs() < 1e-13, "{tag}");
                    }
                }
            }
        }
    }
}

/// Every interleaving carries the same total weight `1 / C(n+m, m)` under
/// sequential prediction, which is what the exact mode averages over.
#[test]
fn interleavings_are_equally_likely_under_sequential_prediction() {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use std::collections::BTreeMap;

    for (n, m) in [(1usize, 1usize), (2, 2), (3, 2), (4, 3), (2, 4)] {
        let mut by_multiset: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
        let total = (n + 1).pow(m as u32);
        for code in 0..total {
            let mut seq = Vec::with_capacity(m);
            let mut c = code;
            for _ in 0..m {
                seq.push(c % (n + 1) + 1);
                c /= n + 1;
            }
            let mut weight = BigRational::from_integer(BigInt::from(1));
            let mut hits = vec![0i64; n + 2];
            for (t, &j) in seq.iter().enumerate() {
                weight *= BigRational::new(BigInt::from(1 + hits[j]), BigInt::from((n + t + 1) as i64));
                hits[j] += 1;
            }
            seq.sort_unstable();
            *by_multiset.entry(seq).or_insert_with(|| BigRational::from_integer(BigInt::from(0))) += weight;
        }
        let count: u64 = ordering_count(n as u64, m as u64).try_into().unwrap();
        assert_eq!(by_multiset.len() as u64, count);
        let expected = BigRational::new(BigInt::from(1), BigInt::from(count));
        assert!(by_multiset.values().all(|w| *w == expected), "n={n} m={m}");

        let enumerated: Vec<Vec<usize>> = enumerate_orderings(n, m, 1_000_000)
            .unwrap()
            .map(|o| o.intervals().to_vec())
            .collect();
        assert_eq!(enumerated, by_multiset.keys().cloned().collect::<Vec<_>>());
    }
}

/// Decision rules applied by hand to brute-force rational probabilities,
/// one asset per strike on the same ladder.
#[test]
fn decisions_follow_hand_applied_rules() {
    use npi_asian::{compare_for_trade, HedgerChoice, SpeculatorChoice};
    let ladder = ladder_fixture();
    let conv = AveragingConvention::exclude_initial();
    let strikes = [98.0, 99.5, 100.0, 100.5, 101.0, 102.0];
    for &ka in &strikes {
        for &kb in &strikes {
            let bf_a = brute_force(&ladder, OptionKind::Call, ka, 2, 100.0, conv).probability;
            let bf_b = brute_force(&ladder, OptionKind::Call, kb, 2, 100.0, conv).probability;
            let want_hedger = if bf_a.0 > bf_b.1 {
                HedgerChoice::A
            } else if bf_b.0 > bf_a.1 {
                HedgerChoice::B
            } else {
                HedgerChoice::Abstain
            };
            let a_ahead = bf_a.0 > bf_b.0 || bf_a.1 > bf_b.1;
            let b_ahead = bf_b.0 > bf_a.0 || bf_b.1 > bf_a.1;
            let want_speculator = match (a_ahead, b_ahead) {
                (true, false) => SpeculatorChoice::A,
                (false, true) => SpeculatorChoice::B,
                _ => SpeculatorChoice::Indifferent,
            };
            let exact = OrderingSource::exact();
            let qa = payoff_probability(&contract(OptionKind::Call, ka, 2, 100.0), &ladder, &exact, conv).unwrap();
            let qb = payoff_probability(&contract(OptionKind::Call, kb, 2, 100.0), &ladder, &exact, conv).unwrap();
            let got = compare_for_trade(&qa, &qb);
            assert_eq!((got.speculator, got.hedger), (want_speculator, want_hedger), "K_A={ka} K_B={kb}");
        }
    }
}
