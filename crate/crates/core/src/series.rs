//! Uniformly dated daily series.
//!
//! Every series in the pipeline (poll spread, mention counts, topic coverage,
//! sentiment bias) is a [`DatedSeries`]: a start day plus one value per
//! consecutive calendar day, with no gaps.

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive range of calendar days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DateSpan {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateSpan {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self> {
        if end < start {
            return Err(Error::invalid(format!("span end {end} precedes start {start}")));
        }
        Ok(DateSpan { start, end })
    }

    /// Smallest span covering every date yielded by `dates`.
    pub fn covering<I: IntoIterator<Item = NaiveDate>>(dates: I) -> Option<Self> {
        let mut iter = dates.into_iter();
        let first = iter.next()?;
        let (start, end) = iter.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d)));
        Some(DateSpan { start, end })
    }

    pub fn len(&self) -> usize {
        (self.end - self.start).num_days() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    /// Day offset of `date` from the span start, if inside the span.
    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        self.contains(date)
            .then(|| (date - self.start).num_days() as usize)
    }

    pub fn union(&self, other: &DateSpan) -> DateSpan {
        DateSpan {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }

    pub fn intersection(&self, other: &DateSpan) -> Option<DateSpan> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start <= end).then_some(DateSpan { start, end })
    }
}

/// One value per consecutive day starting at `start_date`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatedSeries {
    pub start_date: NaiveDate,
    pub values: Vec<f64>,
    pub label: String,
}

impl DatedSeries {
    pub fn new(start_date: NaiveDate, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("a dated series needs at least one value"));
        }
        Ok(DatedSeries {
            start_date,
            values,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn end_date(&self) -> NaiveDate {
        self.date_at(self.values.len() - 1)
    }

    pub fn span(&self) -> DateSpan {
        DateSpan {
            start: self.start_date,
            end: self.end_date(),
        }
    }

    pub fn date_at(&self, index: usize) -> NaiveDate {
        self.start_date + Days::new(index as u64)
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        (0..self.values.len()).map(move |i| self.date_at(i))
    }

    pub fn value_on(&self, date: NaiveDate) -> Option<f64> {
        self.span().index_of(date).map(|i| self.values[i])
    }

    /// Restricts the series to `span`, which must lie within it.
    pub fn slice(&self, span: &DateSpan) -> Result<DatedSeries> {
        let lo = self.span().index_of(span.start);
        let hi = self.span().index_of(span.end);
        match (lo, hi) {
            (Some(lo), Some(hi)) => Ok(DatedSeries {
                start_date: span.start,
                values: self.values[lo..=hi].to_vec(),
                label: self.label.clone(),
            }),
            _ => Err(Error::invalid(format!(
                "span {}..{} is outside series `{}`",
                span.start, span.end, self.label
            ))),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> DatedSeries {
        DatedSeries {
            start_date: self.start_date,
            values: self.values.iter().map(|&v| f(v)).collect(),
            label: self.label.clone(),
        }
    }
}

/// Restricts two series to their common dates.
pub fn align(a: &DatedSeries, b: &DatedSeries) -> Result<(DatedSeries, DatedSeries)> {
    let common = a.span().intersection(&b.span()).ok_or_else(|| {
        Error::invalid(format!("series `{}` and `{}` do not overlap", a.label, b.label))
    })?;
    Ok((a.slice(&common)?, b.slice(&common)?))
}

/// Trailing moving average over `window_days`.
///
/// Each day is averaged with the preceding `window_days - 1` days; near the
/// start of the series only the available days are used.
pub fn sliding_mean(s: &DatedSeries, window_days: usize) -> Result<DatedSeries> {
    if window_days == 0 {
        return Err(Error::invalid("window_days must be at least 1"));
    }
    let values = trailing_mean(&s.values, window_days);
    Ok(DatedSeries {
        start_date: s.start_date,
        values,
        label: s.label.clone(),
    })
}

pub(crate) fn trailing_mean(values: &[f64], window: usize) -> Vec<f64> {
    // Summed per window rather than with a running total so no drift accumulates
    // on long series.
    (0..values.len())
        .map(|i| {
            let lo = (i + 1).saturating_sub(window);
            let w = &values[lo..=i];
            w.iter().sum::<f64>() / w.len() as f64
        })
        .collect()
}
