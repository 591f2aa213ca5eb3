//! Stock returns regressed on a public-interest series in log levels, alone
//! and with a control.

use eventstudy::inference::sentiment_regression;
use eventstudy::series::{align, DatedSeries};
use eventstudy::synth::{weekdays_after, SynthRng};

fn main() -> eventstudy::Result<()> {
    let dates = weekdays_after(chrono::NaiveDate::from_ymd_opt(2016, 7, 29).unwrap(), 90);
    let mut rng = SynthRng::new(2016);

    let mut interest = Vec::new();
    let mut level = 2.0f64;
    for _ in &dates {
        level += 0.08 * rng.normal();
        interest.push(level.exp());
    }
    let trends = DatedSeries::new("Google Trends", dates.clone(), interest)?.log_levels()?;

    let oil: Vec<f64> = dates.iter().map(|_| 0.02 * rng.normal()).collect();
    let stock: Vec<f64> = trends
        .values()
        .iter()
        .zip(&oil)
        .map(|(s, o)| 0.001 - 0.004 * s + 0.3 * o + 0.006 * rng.normal())
        .collect();
    let str_series = DatedSeries::new("STR", dates.clone(), stock)?;
    let wti = DatedSeries::new("WTI", dates, oil)?;

    let panel = align(&[str_series, trends, wti])?.panel;
    let y = panel.column("STR")?;
    let sentiment = ("Google Trends", panel.column("Google Trends")?);

    for controls in [vec![], vec![("WTI", panel.column("WTI")?)]] {
        let r = sentiment_regression(y, sentiment, &controls)?;
        let cells: Vec<String> = r
            .names
            .iter()
            .zip(r.coefficients.iter().zip(&r.p_values))
            .map(|(n, (c, p))| format!("{n} {c:+.5} (p {p:.4})"))
            .collect();
        println!("k = {}: {}; adjusted R² {:.4}", r.k, cells.join(", "), r.adj_r2);
    }
    Ok(())
}
