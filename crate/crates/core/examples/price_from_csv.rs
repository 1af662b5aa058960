//! Maximum buying and minimum selling price of an Asian call from a price CSV.
//!
//! cargo run --example price_from_csv -- [path.csv] [strike] [horizon]

use npi_asian::{
    build_ladder, load_price_series_path, price_interval, AveragingConvention, ColumnMap, OptionContract,
    OptionKind, OrderingSource, WindowPolicy,
};

fn main() -> npi_asian::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/crude_a.csv").into());
    let series = load_price_series_path(&path, &ColumnMap::default())?;
    let spot = series.last().price;
    let strike: f64 = args.next().map_or(spot, |s| s.parse().expect("strike"));
    let horizon: usize = args.next().map_or(10, |s| s.parse().expect("horizon"));

    let ladder = build_ladder(&series, &WindowPolicy::single_window())?;
    let call = OptionContract::new(OptionKind::Call, strike, horizon, spot)?;
    let source = OrderingSource::monte_carlo(20_000, 1);
    let p = price_interval(&call, &ladder, &source, AveragingConvention::default())?;
    let (se_buy, se_sell) = p.standard_error.unwrap_or_default();

    println!("{} returns, boundaries [{:.4}, {:.4}]", ladder.n(), ladder.lower_boundary(), ladder.upper_boundary());
    println!("call K={strike} m={horizon} S0={spot} as of {}", series.last().date);
    println!("  max buying  {:.4} (se {se_buy:.4})", p.max_buying);
    println!("  min selling {:.4} (se {se_sell:.4})", p.min_selling);
    Ok(())
}
