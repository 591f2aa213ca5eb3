mod common;

use common::{check_goldens, golden_tables, CONTROLS};
use eventstudy::inference::{EVENT, INTERCEPT};
use eventstudy::reporting::{
    parse_structured, render_table, significance_stars, Cell, Format, ResultTable, Row, ADJUSTED_R2,
};
use proptest::prelude::*;

fn stars_count(p: f64) -> usize {
    significance_stars(p).unwrap().len()
}

#[test]
fn stars_at_cited_cells() {
    for (p, want) in [(0.0004, "***"), (0.0339, "**"), (0.0707, "*"), (0.2451, ""), (0.05, "*"), (0.01, "**"), (0.10, "")] {
        assert_eq!(significance_stars(p).unwrap(), want, "p = {p}");
    }
    assert!(significance_stars(-1e-9).is_err());
    assert!(significance_stars(1.0 + 1e-9).is_err());
    assert!(significance_stars(f64::NAN).is_err());
}

#[test]
fn cell_text() {
    let c = Cell::Estimate { coefficient: -0.09762, p_value: 0.0004 };
    assert_eq!(c.text().unwrap(), "-0.097620*** (0.0004)");
    let z = Cell::Estimate { coefficient: -1e-9, p_value: 0.9 };
    assert_eq!(z.text().unwrap(), "0.000000 (0.9000)");
    assert_eq!(Cell::Statistic { value: 0.12345 }.text().unwrap(), "0.1235");
}

#[test]
fn empty_and_unknown() {
    let t = ResultTable::new("t", vec!["a".into()]);
    assert_eq!(render_table(&t, Format::Markdown).unwrap_err().exit_code(), 3);
    let err = "latex".parse::<Format>().unwrap_err();
    assert!(err.to_string().contains("latex"));
}

#[test]
fn ragged_rows_rejected() {
    let mut t = ResultTable::new("t", vec!["a".into(), "b".into()]);
    t.push_section("", vec![Row { label: "x".into(), cells: vec![Cell::Statistic { value: 1.0 }] }]);
    assert!(render_table(&t, Format::Csv).is_err());
}

fn cell() -> impl Strategy<Value = Cell> {
    prop_oneof![
        (-1e3f64..1e3, 0.0f64..=1.0).prop_map(|(coefficient, p_value)| Cell::Estimate { coefficient, p_value }),
        (-1.0f64..1.0).prop_map(|value| Cell::Statistic { value }),
    ]
}

fn table() -> impl Strategy<Value = ResultTable> {
    (1usize..5, 1usize..4, 1usize..5).prop_flat_map(|(cols, sections, rows)| {
        prop::collection::vec(prop::collection::vec(prop::collection::vec(cell(), cols), rows), sections).prop_map(
            move |grid| {
                let mut t = ResultTable::new("Τable | ünïcode", (0..cols).map(|c| format!("col {c}")).collect());
                for (s, rows) in grid.into_iter().enumerate() {
                    let rows = rows
                        .into_iter()
                        .enumerate()
                        .map(|(r, cells)| Row { label: format!("row, \"{r}\""), cells })
                        .collect();
                    t.push_section(format!("section {s}"), rows);
                }
                t
            },
        )
    })
}

proptest! {
    #[test]
    fn stars_are_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(stars_count(lo) >= stars_count(hi));
    }

    #[test]
    fn structured_round_trips(t in table()) {
        let text = render_table(&t, Format::Structured).unwrap();
        prop_assert_eq!(parse_structured(&text).unwrap(), t);
    }

    #[test]
    fn rendering_is_pure(t in table()) {
        for f in [Format::Markdown, Format::Csv, Format::Structured] {
            prop_assert_eq!(render_table(&t, f).unwrap(), render_table(&t.clone(), f).unwrap());
        }
    }

    #[test]
    fn csv_has_one_line_per_cell(t in table()) {
        let text = render_table(&t, Format::Csv).unwrap();
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let n_cells: usize = t.sections.iter().map(|s| s.rows.len() * t.columns.len()).sum();
        prop_assert_eq!(reader.records().count(), n_cells);
    }
}

#[test]
fn golden_row_sets() {
    let files = golden_tables();
    let tables: Vec<ResultTable> = files
        .iter()
        .filter(|(n, _)| n.ends_with(".json"))
        .map(|(_, text)| parse_structured(text).unwrap())
        .collect();
    assert_eq!(tables.len(), 2);
    let plain = vec![INTERCEPT.to_string(), EVENT.to_string(), ADJUSTED_R2.to_string()];
    let mut with_controls = vec![INTERCEPT.to_string(), EVENT.to_string()];
    with_controls.extend(CONTROLS.iter().map(|c| c.to_string()));
    with_controls.push(ADJUSTED_R2.to_string());
    for (table, rows) in tables.iter().zip([plain, with_controls]) {
        let labels = table.row_labels();
        let headings: Vec<&str> = labels.iter().map(|(h, _)| h.as_str()).collect();
        assert_eq!(headings, ["Event day [0 ; 0]", "Event window [+1; +5]"]);
        for (_, r) in &labels {
            assert_eq!(r, &rows);
        }
    }
}

#[test]
fn goldens_are_byte_identical() {
    let first = golden_tables();
    assert_eq!(first, golden_tables());
    let differing = check_goldens(&first);
    assert!(differing.is_empty(), "golden mismatch: {differing:?} (set EVENTSTUDY_BLESS=1 to regenerate)");
}
