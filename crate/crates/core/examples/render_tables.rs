//! Build a result table by hand and render it as markdown, CSV and JSON.

use eventstudy::reporting::{render_table, Cell, Format, ResultTable, Row, ADJUSTED_R2};

fn main() -> eventstudy::Result<()> {
    let mut table = ResultTable::new("Unconditional OLS regression results", vec!["Brazil".into(), "India".into()]);
    let est = |coefficient, p_value| Cell::Estimate { coefficient, p_value };
    table.push_section(
        "Event day [0 ; 0]",
        vec![
            Row { label: "Constant".into(), cells: vec![est(0.00121, 0.3315), est(-0.0000004, 0.9961)] },
            Row { label: "Event".into(), cells: vec![est(-0.09762, 0.0004), est(0.021455, 0.0339)] },
            Row {
                label: ADJUSTED_R2.into(),
                cells: vec![Cell::Statistic { value: 0.1021 }, Cell::Statistic { value: 0.0417 }],
            },
        ],
    );
    for format in [Format::Markdown, Format::Csv, Format::Structured] {
        println!("--- {}\n{}", format.extension(), render_table(&table, format)?);
    }
    Ok(())
}
