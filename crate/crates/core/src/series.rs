//! Dated series ingestion, transforms and calendar alignment.
//!
//! Series are read from CSV files whose first column is an ISO-8601 `date`
//! and whose remaining columns are numeric. Transforms are pure and return
//! new series; alignment keeps only the dates every series shares and never
//! fills gaps.

use std::collections::HashSet;
use std::fmt::Write as _;

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// Ordered `(date, value)` observations for one instrument or indicator.
#[derive(Debug, Clone, PartialEq)]
pub struct DatedSeries {
    name: String,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl DatedSeries {
    /// Builds a series, checking that dates strictly increase, every value
    /// is finite and there is at least one observation.
    pub fn new(name: impl Into<String>, dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if dates.len() != values.len() {
            return Err(Error::LengthMismatch { left: dates.len(), right: values.len() });
        }
        if dates.is_empty() {
            return Err(Error::NoUsableRows { name });
        }
        for pair in dates.windows(2) {
            if pair[1] == pair[0] {
                return Err(Error::DuplicateDate { date: pair[1] });
            }
            if pair[1] < pair[0] {
                return Err(Error::UnsortedDates { date: pair[1] });
            }
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { name, date: dates[i] });
        }
        Ok(Self { name, dates, values })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first_date(&self) -> NaiveDate {
        self.dates[0]
    }

    pub fn last_date(&self) -> NaiveDate {
        self.dates[self.dates.len() - 1]
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Keeps observations with `start <= date <= end`; either bound may be open.
    pub fn restrict(&self, start: Option<NaiveDate>, end: Option<NaiveDate>) -> Result<Self> {
        let keep = |d: &NaiveDate| start.is_none_or(|s| *d >= s) && end.is_none_or(|e| *d <= e);
        let (dates, values): (Vec<_>, Vec<_>) = self
            .dates
            .iter()
            .zip(&self.values)
            .filter(|(d, _)| keep(d))
            .map(|(d, v)| (*d, *v))
            .unzip();
        if dates.is_empty() {
            let range = format!(
                "series '{}' has no observations in {}..{}",
                self.name,
                start.map_or_else(|| "-".to_owned(), |d| d.to_string()),
                end.map_or_else(|| "-".to_owned(), |d| d.to_string()),
            );
            return Err(Error::EmptySample(range));
        }
        Self::new(self.name.clone(), dates, values)
    }

    fn check_positive(&self) -> Result<()> {
        match self.values.iter().position(|v| *v <= 0.0) {
            Some(i) => Err(Error::NonPositive {
                name: self.name.clone(),
                date: self.dates[i],
                value: self.values[i],
            }),
            None => Ok(()),
        }
    }

    /// Continuously compounded returns `ln(P_t / P_{t-1})`, dated at the later
    /// observation. The output is one element shorter than the input.
    pub fn log_returns(&self) -> Result<Self> {
        if self.len() < 2 {
            return Err(Error::TooShort { name: self.name.clone(), needed: 2, got: self.len() });
        }
        self.check_positive()?;
        let values = self.values.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
        Self::new(self.name.clone(), self.dates[1..].to_vec(), values)
    }

    /// Elementwise natural logarithm.
    pub fn log_levels(&self) -> Result<Self> {
        self.check_positive()?;
        let values = self.values.iter().map(|v| v.ln()).collect();
        Self::new(self.name.clone(), self.dates.clone(), values)
    }

    /// Two-column CSV (`date,<name>`) that [`parse_csv_series`] reads back exactly.
    pub fn to_csv(&self) -> String {
        let mut out = format!("date,{}\n", self.name);
        for (d, v) in self.dates.iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", d.format("%Y-%m-%d"), v);
        }
        out
    }
}

/// Output of [`parse_csv_series`]: the series plus a tally of rows skipped
/// because their value cell was empty.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRead {
    pub series: DatedSeries,
    pub skipped_empty: usize,
}

/// Column names of a CSV header, for validating configuration before any
/// parsing work.
pub fn csv_header(text: &str) -> Result<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Csv { row: 1, message: e.to_string() })?;
    Ok(headers.iter().map(|h| h.trim().to_owned()).collect())
}

/// Reads `value_column` out of a CSV document whose first column is `date`.
///
/// Row numbers in errors are file line numbers (the header is line 1).
pub fn parse_csv_series(text: &str, value_column: &str) -> Result<CsvRead> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Csv { row: 1, message: e.to_string() })?
        .clone();
    match headers.get(0) {
        Some("date") => {}
        other => {
            return Err(Error::Csv {
                row: 1,
                message: format!("first column must be named 'date', found {:?}", other.unwrap_or("")),
            })
        }
    }
    let col = headers
        .iter()
        .skip(1)
        .position(|h| h == value_column)
        .map(|i| i + 1)
        .ok_or_else(|| Error::MissingColumn(value_column.to_owned()))?;

    let mut dates = Vec::new();
    let mut values = Vec::new();
    let mut skipped_empty = 0;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Csv {
            row: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let raw_date = record.get(0).unwrap_or("");
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d").map_err(|_| Error::Csv {
            row,
            message: format!("invalid ISO-8601 date {raw_date:?}"),
        })?;
        let cell = record.get(col).unwrap_or("");
        if cell.is_empty() {
            skipped_empty += 1;
            continue;
        }
        let value: f64 = cell.parse().map_err(|_| Error::Csv {
            row,
            message: format!("unparseable value {cell:?} in column '{value_column}'"),
        })?;
        if !value.is_finite() {
            return Err(Error::Csv { row, message: format!("non-finite value {cell:?}") });
        }
        if let Some(prev) = dates.last() {
            if date == *prev {
                return Err(Error::DuplicateDate { date });
            }
            if date < *prev {
                return Err(Error::UnsortedDates { date });
            }
        }
        dates.push(date);
        values.push(value);
    }
    if dates.is_empty() {
        return Err(Error::NoUsableRows { name: value_column.to_owned() });
    }
    Ok(CsvRead { series: DatedSeries::new(value_column, dates, values)?, skipped_empty })
}

/// Named value vector inside an [`AlignedPanel`].
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Series restricted to their common dates, one value per date per column.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPanel {
    dates: Vec<NaiveDate>,
    columns: Vec<Column>,
}

impl AlignedPanel {
    pub fn new(dates: Vec<NaiveDate>, columns: Vec<Column>) -> Result<Self> {
        if dates.windows(2).any(|w| w[1] <= w[0]) {
            let bad = dates.windows(2).find(|w| w[1] <= w[0]).map(|w| w[1]).unwrap();
            return Err(Error::UnsortedDates { date: bad });
        }
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::DuplicateName(c.name.clone()));
            }
            if c.values.len() != dates.len() {
                return Err(Error::LengthMismatch { left: dates.len(), right: c.values.len() });
            }
        }
        Ok(Self { dates, columns })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|c| c.name.as_str())
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))
    }

    /// Rows `range.start..range.end` of every column.
    pub fn rows(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            dates: self.dates[range.clone()].to_vec(),
            columns: self
                .columns
                .iter()
                .map(|c| Column { name: c.name.clone(), values: c.values[range.clone()].to_vec() })
                .collect(),
        }
    }

    /// Splits the panel back into one series per column.
    pub fn to_series(&self) -> Vec<DatedSeries> {
        self.columns
            .iter()
            .map(|c| DatedSeries { name: c.name.clone(), dates: self.dates.clone(), values: c.values.clone() })
            .collect()
    }

    /// Wide CSV: `date,<col1>,<col2>,...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("date");
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.name);
        }
        out.push('\n');
        for (i, d) in self.dates.iter().enumerate() {
            let _ = write!(out, "{}", d.format("%Y-%m-%d"));
            for c in &self.columns {
                let _ = write!(out, ",{}", c.values[i]);
            }
            out.push('\n');
        }
        out
    }
}

/// Result of [`align`]: the panel and how many observations each input lost.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub panel: AlignedPanel,
    pub dropped: Vec<(String, usize)>,
}

/// Intersects the calendars of `series` and restricts every series to the
/// shared dates. Gaps are never filled.
pub fn align(series: &[DatedSeries]) -> Result<Alignment> {
    let first = series.first().ok_or(Error::NoSeries)?;
    let mut names = HashSet::new();
    for s in series {
        if !names.insert(s.name()) {
            return Err(Error::DuplicateName(s.name().to_owned()));
        }
    }
    let sets: Vec<HashSet<NaiveDate>> = series[1..].iter().map(|s| s.dates.iter().copied().collect()).collect();
    let common: Vec<NaiveDate> = first
        .dates
        .iter()
        .copied()
        .filter(|d| sets.iter().all(|set| set.contains(d)))
        .collect();
    if common.is_empty() {
        let ranges = series
            .iter()
            .map(|s| format!("{}: {}..{}", s.name, s.first_date(), s.last_date()))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::EmptyIntersection { ranges });
    }
    let keep: HashSet<NaiveDate> = common.iter().copied().collect();
    let mut columns = Vec::with_capacity(series.len());
    let mut dropped = Vec::with_capacity(series.len());
    for s in series {
        let values: Vec<f64> = s
            .dates
            .iter()
            .zip(&s.values)
            .filter(|(d, _)| keep.contains(d))
            .map(|(_, v)| *v)
            .collect();
        dropped.push((s.name.clone(), s.len() - values.len()));
        columns.push(Column { name: s.name.clone(), values });
    }
    Ok(Alignment { panel: AlignedPanel::new(common, columns)?, dropped })
}
