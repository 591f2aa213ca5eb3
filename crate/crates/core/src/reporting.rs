//! Regression tables: coefficient with significance stars and the p-value in
//! parentheses, grouped into sections, rendered as markdown, CSV or JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::RegressionResult;

pub const ADJUSTED_R2: &str = "Adjusted R²";

/// `***` below 1%, `**` below 5%, `*` below 10%, otherwise empty.
pub fn significance_stars(p: f64) -> Result<&'static str> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.10 {
        "*"
    } else {
        ""
    })
}

fn fixed(value: f64, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_owned(),
        _ => s,
    }
}

pub fn format_coefficient(c: f64) -> String {
    fixed(c, 6)
}

pub fn format_p_value(p: f64) -> String {
    fixed(p, 4)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cell {
    Estimate { coefficient: f64, p_value: f64 },
    Statistic { value: f64 },
}

impl Cell {
    /// Cell text, e.g. `-0.097620*** (0.0004)`.
    pub fn text(&self) -> Result<String> {
        match *self {
            Cell::Estimate { coefficient, p_value } => Ok(format!(
                "{}{} ({})",
                format_coefficient(coefficient),
                significance_stars(p_value)?,
                format_p_value(p_value)
            )),
            Cell::Statistic { value } => Ok(fixed(value, 4)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    /// Empty for tables without sub-headings.
    pub heading: String,
    pub rows: Vec<Row>,
}

/// A titled grid of cells: one column per model (e.g. per country), rows
/// grouped into sections (e.g. per sub-study).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub title: String,
    pub columns: Vec<String>,
    pub sections: Vec<Section>,
}

impl ResultTable {
    pub fn new(title: impl Into<String>, columns: Vec<String>) -> Self {
        Self { title: title.into(), columns, sections: Vec::new() }
    }

    pub fn push_section(&mut self, heading: impl Into<String>, rows: Vec<Row>) {
        self.sections.push(Section { heading: heading.into(), rows });
    }

    /// Adds a section with one row per coefficient plus an adjusted R² row,
    /// one column per regression. All regressions must share coefficient names.
    pub fn push_regressions(&mut self, heading: impl Into<String>, results: &[&RegressionResult]) -> Result<()> {
        if results.len() != self.columns.len() {
            return Err(Error::MalformedTable(format!(
                "{} regressions for {} columns",
                results.len(),
                self.columns.len()
            )));
        }
        let first = results.first().ok_or_else(|| Error::EmptyTable("no regressions".into()))?;
        if let Some(r) = results.iter().find(|r| r.names != first.names) {
            return Err(Error::MalformedTable(format!(
                "coefficient names differ: {:?} vs {:?}",
                first.names, r.names
            )));
        }
        let mut rows: Vec<Row> = first
            .names
            .iter()
            .enumerate()
            .map(|(i, name)| Row {
                label: name.clone(),
                cells: results
                    .iter()
                    .map(|r| Cell::Estimate { coefficient: r.coefficients[i], p_value: r.p_values[i] })
                    .collect(),
            })
            .collect();
        rows.push(Row {
            label: ADJUSTED_R2.to_owned(),
            cells: results.iter().map(|r| Cell::Statistic { value: r.adj_r2 }).collect(),
        });
        self.push_section(heading, rows);
        Ok(())
    }

    /// Row labels of every section, in order.
    pub fn row_labels(&self) -> Vec<(String, Vec<String>)> {
        self.sections
            .iter()
            .map(|s| (s.heading.clone(), s.rows.iter().map(|r| r.label.clone()).collect()))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.columns.is_empty() {
            return Err(Error::EmptyTable(format!("'{}' has no columns", self.title)));
        }
        if self.sections.iter().all(|s| s.rows.is_empty()) {
            return Err(Error::EmptyTable(format!("'{}' has no rows", self.title)));
        }
        for section in &self.sections {
            for row in &section.rows {
                if row.cells.len() != self.columns.len() {
                    return Err(Error::MalformedTable(format!(
                        "row '{}' has {} cells for {} columns",
                        row.label,
                        row.cells.len(),
                        self.columns.len()
                    )));
                }
                for cell in &row.cells {
                    match *cell {
                        Cell::Estimate { coefficient, p_value } => {
                            if !coefficient.is_finite() {
                                return Err(Error::MalformedTable(format!("non-finite coefficient in '{}'", row.label)));
                            }
                            significance_stars(p_value)?;
                        }
                        Cell::Statistic { value } if !value.is_finite() => {
                            return Err(Error::MalformedTable(format!("non-finite statistic in '{}'", row.label)));
                        }
                        Cell::Statistic { .. } => {}
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Csv,
    Structured,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Markdown => "md",
            Format::Csv => "csv",
            Format::Structured => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markdown" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            "structured" => Ok(Format::Structured),
            other => Err(Error::UnknownFormat(other.to_owned())),
        }
    }
}

pub fn render_table(table: &ResultTable, format: Format) -> Result<String> {
    table.validate()?;
    match format {
        Format::Markdown => render_markdown(table),
        Format::Csv => render_csv(table),
        Format::Structured => {
            let mut out = serde_json::to_string_pretty(table).map_err(|e| Error::MalformedTable(e.to_string()))?;
            out.push('\n');
            Ok(out)
        }
    }
}

/// Inverse of [`render_table`] with [`Format::Structured`].
pub fn parse_structured(text: &str) -> Result<ResultTable> {
    let table: ResultTable = serde_json::from_str(text).map_err(|e| Error::MalformedTable(e.to_string()))?;
    table.validate()?;
    Ok(table)
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

fn render_markdown(table: &ResultTable) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "### {}\n", table.title);
    out.push('|');
    for c in std::iter::once("").chain(table.columns.iter().map(String::as_str)) {
        let _ = write!(out, " {} |", md_escape(c));
    }
    out.push_str("\n|");
    for _ in 0..=table.columns.len() {
        out.push_str("---|");
    }
    out.push('\n');
    for section in &table.sections {
        if !section.heading.is_empty() {
            let _ = write!(out, "| **{}** |", md_escape(&section.heading));
            out.push_str(&" |".repeat(table.columns.len()));
            out.push('\n');
        }
        for row in &section.rows {
            let _ = write!(out, "| {} |", md_escape(&row.label));
            for cell in &row.cells {
                let _ = write!(out, " {} |", cell.text()?);
            }
            out.push('\n');
        }
    }
    Ok(out)
}

fn render_csv(table: &ResultTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["column", "row", "coefficient", "p", "stars"]).map_err(io)?;
    for section in &table.sections {
        for row in &section.rows {
            let label = if section.heading.is_empty() {
                row.label.clone()
            } else {
                format!("{} / {}", section.heading, row.label)
            };
            for (column, cell) in table.columns.iter().zip(&row.cells) {
                let (coef, p, stars) = match *cell {
                    Cell::Estimate { coefficient, p_value } => (
                        format_coefficient(coefficient),
                        format_p_value(p_value),
                        significance_stars(p_value)?.to_owned(),
                    ),
                    Cell::Statistic { .. } => (cell.text()?, String::new(), String::new()),
                };
                w.write_record([column.as_str(), label.as_str(), &coef, &p, &stars]).map_err(io)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}
