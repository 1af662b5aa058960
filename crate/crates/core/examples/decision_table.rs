//! The trading criterion applied to published probability intervals for
//! WTI against heating oil.

use npi_asian::{compare_for_trade, ProbabilityInterval};

fn main() {
    // date, WTI upper, WTI lower, heating oil upper, heating oil lower
    let rows = [
        ("2019-11-22", 0.15, 0.13, 0.34, 0.33),
        ("2019-11-23", 0.88, 0.87, 0.92, 0.92),
        ("2019-11-24", 0.80, 0.79, 0.91, 0.90),
        ("2019-11-25", 0.70, 0.69, 0.69, 0.68),
        ("2019-11-26", 0.70, 0.69, 0.70, 0.69),
        ("2019-11-27", 0.71, 0.69, 0.71, 0.70),
        ("2019-11-28", 0.71, 0.70, 0.83, 0.82),
        ("2019-11-29", 0.72, 0.71, 0.92, 0.92),
        ("2019-11-30", 0.97, 0.96, 0.99, 0.99),
    ];
    println!("A = WTI, B = heating oil");
    for (date, ua, la, ub, lb) in rows {
        let d = compare_for_trade(&ProbabilityInterval::new(la, ua), &ProbabilityInterval::new(lb, ub));
        println!("{date}  speculator {:<12} hedger {:?}", format!("{:?}", d.speculator), d.hedger);
    }
}
