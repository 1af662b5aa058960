//! Lower and upper probability that a call and a put finish in the money,
//! computed exactly by enumerating every ordering.

use npi_asian::{
    build_ladder, load_price_series_path, payoff_probability, AveragingConvention, ColumnMap, OptionContract,
    OptionKind, OrderingSource, WindowPolicy,
};

fn main() -> npi_asian::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/small.csv");
    let series = load_price_series_path(path, &ColumnMap::default())?;
    let ladder = build_ladder(&series, &WindowPolicy::single_window().with_override(-0.05, 0.06))?;
    let s0 = series.last().price;

    for kind in [OptionKind::Call, OptionKind::Put] {
        for strike in [100.0, 104.0, 108.0] {
            let c = OptionContract::new(kind, strike, 3, s0)?;
            let q = payoff_probability(&c, &ladder, &OrderingSource::exact(), AveragingConvention::default())?;
            println!("{kind:?} K={strike:<5} P in [{:.4}, {:.4}]", q.lower, q.upper);
        }
    }
    Ok(())
}
