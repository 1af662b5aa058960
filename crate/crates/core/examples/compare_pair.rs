//! Day-by-day speculator and hedger choice between two underlyings, using a
//! call struck at 95% of each day's close that expires on a fixed date.

use chrono::NaiveDate;
use npi_asian::{
    build_ladder, compare_for_trade, load_price_series_path, payoff_probability, AveragingConvention, ColumnMap,
    OptionContract, OptionKind, OrderingSource, PriceSeries, ProbabilityInterval, WindowPolicy,
};

fn probability(series: &PriceSeries, day: NaiveDate, horizon: usize) -> npi_asian::Result<ProbabilityInterval> {
    let history = series.up_to(day, Some(250))?;
    let spot = history.last().price;
    let ladder = build_ladder(&history, &WindowPolicy::single_window())?;
    let call = OptionContract::new(OptionKind::Call, 0.95 * spot, horizon, spot)?;
    payoff_probability(&call, &ladder, &OrderingSource::monte_carlo(10_000, 3), AveragingConvention::default())
}

fn main() -> npi_asian::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let a = load_price_series_path(format!("{dir}/crude_a.csv"), &ColumnMap::default())?;
    let b = load_price_series_path(format!("{dir}/crude_b.csv"), &ColumnMap::default())?;
    let expiry: NaiveDate = "2019-11-30".parse().unwrap();
    let first: NaiveDate = "2019-11-18".parse().unwrap();

    println!("date        A [lower, upper]   B [lower, upper]   speculator   hedger");
    for obs in a.observations().iter().filter(|o| o.date >= first && o.date < expiry) {
        if b.price_on(obs.date).is_none() {
            continue;
        }
        let horizon = (expiry - obs.date).num_days() as usize;
        let pa = probability(&a, obs.date, horizon)?;
        let pb = probability(&b, obs.date, horizon)?;
        let d = compare_for_trade(&pa, &pb);
        println!(
            "{}  [{:.3}, {:.3}]     [{:.3}, {:.3}]     {:<12} {:?}",
            obs.date, pa.lower, pa.upper, pb.lower, pb.upper, format!("{:?}", d.speculator), d.hedger
        );
    }
    Ok(())
}
