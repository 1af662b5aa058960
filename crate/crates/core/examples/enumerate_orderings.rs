//! Lists every ordering of m future returns among n observed ones, with the
//! aggregate return bounds each implies.
//!
//! cargo run --example enumerate_orderings -- [n] [m]

use npi_asian::ordering::{write_orderings_csv, DEFAULT_ENUMERATION_CAP};
use npi_asian::{aggregate_bounds, enumerate_orderings, ordering_count, ReturnLadder};

fn main() -> npi_asian::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer"));
    let n = args.next().unwrap_or(3);
    let m = args.next().unwrap_or(2);
    println!("C({}, {m}) = {} orderings", n + m, ordering_count(n as u64, m as u64));

    // evenly spaced returns in [-0.02, 0.02]
    let step = 0.04 / (n + 1) as f64;
    let returns = (1..=n).map(|i| -0.02 + step * i as f64).collect();
    let ladder = ReturnLadder::new(returns, -0.02, 0.02)?;

    for o in enumerate_orderings(n, m, DEFAULT_ENUMERATION_CAP)? {
        let b = aggregate_bounds(&o, &ladder)?;
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:+.4}")).collect::<Vec<_>>().join(" ");
        println!("{:?}  lower [{}]  upper [{}]", o.intervals(), fmt(&b.lower), fmt(&b.upper));
    }

    println!("\nas CSV:");
    write_orderings_csv(enumerate_orderings(n, m, DEFAULT_ENUMERATION_CAP)?, m, std::io::stdout())?;
    Ok(())
}
