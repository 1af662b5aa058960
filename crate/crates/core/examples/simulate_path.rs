//! One GBM path split into history and future, with the realised payoff of
//! an at-the-money Asian call on the future segment.

use npi_asian::ordering::sample_rng;
use npi_asian::{benchmark_price, simulate_path, GbmParams, OptionContract, OptionKind, PriceAnchor};

fn main() -> npi_asian::Result<()> {
    let params = GbmParams {
        drift: 0.02,
        volatility: 0.02,
        initial_price: 50.0,
        total_steps: 110,
        history_steps: 100,
        anchor: PriceAnchor::Split,
    };
    let path = simulate_path(&params, &mut sample_rng(2024, 0))?;
    let future: Vec<String> = path.future.prices().map(|p| format!("{p:.2}")).collect();
    println!("history: {} prices from {:.2} to {:.2}", path.history.len(), path.history.first().price, path.split_price());
    println!("future:  {}", future.join(" "));

    let call = OptionContract::new(OptionKind::Call, 50.0, params.future_steps(), path.split_price())?;
    println!("realised payoff {:.4}", benchmark_price(&path.future, &call, Default::default())?);
    Ok(())
}
