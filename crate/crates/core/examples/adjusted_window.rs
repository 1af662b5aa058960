//! Sampling from a recent calm window while taking the boundaries r(0) and
//! r(n+1) from a longer window that includes a sell-off.

use chrono::NaiveDate;
use npi_asian::{
    build_ladder, load_price_series_path, price_interval, AveragingConvention, ColumnMap, DateRange,
    OptionContract, OptionKind, OrderingSource, WindowPolicy,
};

fn date(s: &str) -> NaiveDate {
    s.parse().expect("ISO date")
}

fn main() -> npi_asian::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/crude_a.csv");
    let series = load_price_series_path(path, &ColumnMap::default())?;
    let spot = series.last().price;
    let call = OptionContract::new(OptionKind::Call, spot, 10, spot)?;
    let source = OrderingSource::monte_carlo(20_000, 7);

    let recent = DateRange::new(date("2019-11-08"), date("2020-05-08"))?;
    let year = DateRange::new(date("2019-05-08"), date("2020-05-08"))?;
    let policies = [
        ("full history", WindowPolicy::single_window()),
        ("last year", WindowPolicy { sampling_window: Some(year), ..Default::default() }),
        ("last half year", WindowPolicy { sampling_window: Some(recent), ..Default::default() }),
        ("half year, year boundaries", WindowPolicy::emphasis(recent, year)),
    ];
    for (name, policy) in policies {
        let ladder = build_ladder(&series, &policy)?;
        let p = price_interval(&call, &ladder, &source, AveragingConvention::default())?;
        println!(
            "{name:<28} n={:<4} r0={:+.4} rn1={:+.4}  [{:.4}, {:.4}] width {:.4}",
            ladder.n(),
            ladder.lower_boundary(),
            ladder.upper_boundary(),
            p.max_buying,
            p.min_selling,
            p.width()
        );
    }
    Ok(())
}
