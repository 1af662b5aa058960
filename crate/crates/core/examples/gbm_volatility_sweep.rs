//! Coverage, accuracy and precision of the NPI interval against realised
//! payoffs on simulated GBM paths, over a grid of daily volatilities.
//!
//! cargo run --release --example gbm_volatility_sweep -- [paths] [orderings]

use npi_asian::evaluation::{run_sweep, spearman, SweepSpec};

fn main() -> npi_asian::Result<()> {
    let mut args = std::env::args().skip(1);
    let paths = args.next().map_or(300, |s| s.parse().expect("paths"));
    let samples = args.next().map_or(1000, |s| s.parse().expect("orderings"));

    let grid = vec![0.005, 0.01, 0.02, 0.03, 0.05, 0.10];
    let spec = SweepSpec::gbm_study(grid.clone(), paths, samples);
    let outcome = run_sweep(&spec, 42)?;

    println!("sigma   coverage  accuracy  precision");
    for row in &outcome.rows {
        let m = row.metrics;
        println!("{:<7} {:<9.3} {:<9.3} {:.3}", row.sigma, m.coverage, m.accuracy, m.precision);
    }
    let cov: Vec<f64> = outcome.rows.iter().map(|r| r.metrics.coverage).collect();
    let acc: Vec<f64> = outcome.rows.iter().map(|r| r.metrics.accuracy).collect();
    println!("rank correlation with sigma: coverage {:.2}, accuracy {:.2}", spearman(&grid, &cov), spearman(&grid, &acc));
    Ok(())
}
