//! Parse two price files with different calendars, align them on shared
//! dates and turn levels into log returns.

use eventstudy::series::{align, parse_csv_series};

const IBOV: &str = "\
date,close
2016-11-01,62000.5
2016-11-02,61300.2
2016-11-03,60850.0
2016-11-04,61020.9
2016-11-07,64050.1
2016-11-08,64850.8
";

// No row on 2016-11-02, an empty cell on 2016-11-04.
const MSCI: &str = "\
date,close,volume
2016-11-01,1680.1,10
2016-11-03,1668.3,12
2016-11-04,,11
2016-11-07,1704.0,9
2016-11-08,1711.6,15
";

fn main() -> eventstudy::Result<()> {
    let ibov = parse_csv_series(IBOV, "close")?.series.with_name("Brazil");
    let msci = parse_csv_series(MSCI, "close")?;
    println!("MSCI: {} rows kept, {} empty cells skipped", msci.series.len(), msci.skipped_empty);

    let aligned = align(&[ibov, msci.series.with_name("MSCI World")])?;
    for (name, dropped) in &aligned.dropped {
        println!("{name}: {dropped} dates dropped");
    }
    println!("\nshared levels:\n{}", aligned.panel.to_csv());

    for s in aligned.panel.to_series() {
        let r = s.log_returns()?;
        let pretty: Vec<String> = r.dates().iter().zip(r.values()).map(|(d, v)| format!("{d} {v:+.5}")).collect();
        println!("{} log returns: {}", r.name(), pretty.join(", "));
    }
    Ok(())
}
