//! Event-relative trading-day indexing.
//!
//! Day 0 is the event date; every other row of a panel gets its signed
//! distance from day 0 counted in panel rows, so offsets are trading days
//! and never calendar days.

use std::ops::Range;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::AlignedPanel;

/// Minimum estimation-window length accepted by [`EventSpec::new`].
pub const MIN_ESTIMATION_DAYS: i64 = 10;

/// Inclusive range of event-relative offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: i64,
    pub end: i64,
}

impl Window {
    pub const fn new(start: i64, end: i64) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }

    pub fn contains(&self, offset: i64) -> bool {
        self.start <= offset && offset <= self.end
    }

    pub fn offsets(&self) -> impl Iterator<Item = i64> {
        self.start..=self.end
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:+}, {:+}]", self.start, self.end)
    }
}

/// 110 trading days ending one day before the event window.
pub const DEFAULT_ESTIMATION: Window = Window::new(-115, -6);
/// Five trading days either side of the event.
pub const DEFAULT_EVENT: Window = Window::new(-5, 5);

/// Event date plus estimation and event windows, validated to be disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventSpec {
    event_date: NaiveDate,
    estimation: Window,
    event: Window,
}

impl EventSpec {
    pub fn new(event_date: NaiveDate, estimation: Window, event: Window) -> Result<Self> {
        if estimation.start > estimation.end {
            return Err(Error::InvalidWindow(format!("estimation window {estimation} is reversed")));
        }
        if event.start > event.end {
            return Err(Error::InvalidWindow(format!("event window {event} is reversed")));
        }
        if estimation.end >= event.start {
            return Err(Error::InvalidWindow(format!(
                "estimation window {estimation} overlaps event window {event}"
            )));
        }
        if (estimation.len() as i64) < MIN_ESTIMATION_DAYS {
            return Err(Error::InvalidWindow(format!(
                "estimation window {estimation} has {} days, need at least {MIN_ESTIMATION_DAYS}",
                estimation.len()
            )));
        }
        Ok(Self { event_date, estimation, event })
    }

    pub fn with_defaults(event_date: NaiveDate) -> Self {
        Self::new(event_date, DEFAULT_ESTIMATION, DEFAULT_EVENT).expect("default windows are valid")
    }

    pub fn event_date(&self) -> NaiveDate {
        self.event_date
    }

    pub fn estimation(&self) -> Window {
        self.estimation
    }

    pub fn event(&self) -> Window {
        self.event
    }

    /// `[estimation.start, event.end]`; the two windows may leave a gap.
    pub fn span(&self) -> Window {
        Window::new(self.estimation.start, self.event.end)
    }
}

/// A panel whose rows carry their offset from the event day.
#[derive(Debug, Clone, PartialEq)]
pub struct FramedPanel {
    panel: AlignedPanel,
    zero_row: usize,
}

impl FramedPanel {
    pub fn panel(&self) -> &AlignedPanel {
        &self.panel
    }

    pub fn zero_row(&self) -> usize {
        self.zero_row
    }

    pub fn event_day(&self) -> NaiveDate {
        self.panel.dates()[self.zero_row]
    }

    /// Offset of every row, in row order.
    pub fn day_index(&self) -> Vec<i64> {
        (0..self.panel.len()).map(|r| r as i64 - self.zero_row as i64).collect()
    }

    pub fn first_offset(&self) -> i64 {
        -(self.zero_row as i64)
    }

    pub fn last_offset(&self) -> i64 {
        self.panel.len() as i64 - 1 - self.zero_row as i64
    }

    /// Row range covering offsets `[start, end]`.
    pub fn window_rows(&self, start: i64, end: i64) -> Result<Range<usize>> {
        if start > end {
            return Err(Error::InvalidWindow(format!("start offset {start} after end offset {end}")));
        }
        let below = (self.first_offset() - start).max(0) as usize;
        let above = (end - self.last_offset()).max(0) as usize;
        let missing = (below + above).min((end - start + 1) as usize);
        if missing > 0 {
            return Err(Error::InsufficientHistory { start, end, missing });
        }
        let lo = (self.zero_row as i64 + start) as usize;
        let hi = (self.zero_row as i64 + end) as usize + 1;
        Ok(lo..hi)
    }

    /// Values of one column over offsets `[start, end]`.
    pub fn column_window(&self, name: &str, start: i64, end: i64) -> Result<&[f64]> {
        let rows = self.window_rows(start, end)?;
        Ok(&self.panel.column(name)?[rows])
    }
}

/// Anchors `panel` on `event_date`.
///
/// When the date is not a row of the panel, `snap_forward` moves day 0 to
/// the first later trading date; otherwise the call is rejected.
pub fn frame(panel: AlignedPanel, event_date: NaiveDate, snap_forward: bool) -> Result<FramedPanel> {
    let last = *panel
        .dates()
        .last()
        .ok_or_else(|| Error::EmptySample("cannot frame an empty panel".into()))?;
    if event_date > last {
        return Err(Error::EventAfterPanel { date: event_date, last });
    }
    let zero_row = match panel.dates().binary_search(&event_date) {
        Ok(i) => i,
        Err(i) if snap_forward => i,
        Err(_) => return Err(Error::EventDateAbsent { date: event_date }),
    };
    Ok(FramedPanel { panel, zero_row })
}

/// Rows of `framed` whose offsets lie in `[start, end]`, as a plain panel.
pub fn slice_window(framed: &FramedPanel, start: i64, end: i64) -> Result<AlignedPanel> {
    let rows = framed.window_rows(start, end)?;
    Ok(framed.panel.rows(rows))
}
