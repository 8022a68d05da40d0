//! The sentiment-bias statistic
//!
//! ```text
//! SB = (pos_A − neg_A − pos_B + neg_B) / total
//! ```
//!
//! where `total` counts every mention of either entity, neutral ones included.
//! It lies in [−2, 2] in principle and in [−1, 1] in practice, since each
//! mention moves the numerator by at most one.

use std::collections::{BTreeMap, HashMap};

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use super::MentionRecord;
use crate::error::{Error, Result};
use crate::nmf::NmfFactors;
use crate::series::{DateSpan, DatedSeries};

/// Topics supported by fewer mentions are reported as not significant.
pub const MIN_TOPIC_SUPPORT: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

/// One mention reduced to what the statistic needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledMention {
    pub side: Side,
    pub polarity: Polarity,
}

impl LabeledMention {
    pub const fn new(side: Side, polarity: Polarity) -> Self {
        LabeledMention { side, polarity }
    }

    /// This mention's term in the numerator: +1 favours A, −1 favours B.
    pub fn contribution(self) -> i64 {
        match (self.side, self.polarity) {
            (_, Polarity::Neutral) => 0,
            (Side::A, Polarity::Positive) | (Side::B, Polarity::Negative) => 1,
            (Side::A, Polarity::Negative) | (Side::B, Polarity::Positive) => -1,
        }
    }

    /// Parses shorthand like `A+`, `B-`, `A0`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut c = s.chars();
        let side = match c.next()? {
            'A' | 'a' => Side::A,
            'B' | 'b' => Side::B,
            _ => return None,
        };
        let polarity = match c.next()? {
            '+' => Polarity::Positive,
            '-' | '−' => Polarity::Negative,
            '0' | '=' => Polarity::Neutral,
            _ => return None,
        };
        c.next().is_none().then_some(LabeledMention { side, polarity })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityCounts {
    pub positive: u64,
    pub negative: u64,
    pub neutral: u64,
}

impl EntityCounts {
    pub fn total(&self) -> u64 {
        self.positive + self.negative + self.neutral
    }

    fn add(&mut self, p: Polarity) {
        match p {
            Polarity::Positive => self.positive += 1,
            Polarity::Negative => self.negative += 1,
            Polarity::Neutral => self.neutral += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentimentTally {
    pub a: EntityCounts,
    pub b: EntityCounts,
}

impl SentimentTally {
    pub fn from_labels<'a, I: IntoIterator<Item = &'a LabeledMention>>(labels: I) -> Self {
        let mut t = SentimentTally::default();
        for m in labels {
            t.add(*m);
        }
        t
    }

    pub fn add(&mut self, m: LabeledMention) {
        match m.side {
            Side::A => self.a.add(m.polarity),
            Side::B => self.b.add(m.polarity),
        }
    }

    pub fn merge(&self, other: &SentimentTally) -> SentimentTally {
        let sum = |x: EntityCounts, y: EntityCounts| EntityCounts {
            positive: x.positive + y.positive,
            negative: x.negative + y.negative,
            neutral: x.neutral + y.neutral,
        };
        SentimentTally {
            a: sum(self.a, other.a),
            b: sum(self.b, other.b),
        }
    }

    pub fn total(&self) -> u64 {
        self.a.total() + self.b.total()
    }

    pub fn numerator(&self) -> i64 {
        self.a.positive as i64 - self.a.negative as i64 - self.b.positive as i64
            + self.b.negative as i64
    }

    /// Tally with the roles of A and B exchanged.
    pub fn swapped(&self) -> SentimentTally {
        SentimentTally { a: self.b, b: self.a }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbStatistic {
    pub value: f64,
    pub tally: SentimentTally,
}

pub fn sentiment_bias(tally: &SentimentTally) -> Result<SbStatistic> {
    let total = tally.total();
    if total == 0 {
        return Err(Error::Undefined("sentiment bias of an empty tally".into()));
    }
    Ok(SbStatistic {
        value: tally.numerator() as f64 / total as f64,
        tally: *tally,
    })
}

fn label_of(r: &MentionRecord, a: &str, b: &str) -> Option<LabeledMention> {
    let side = if r.entity == a {
        Side::A
    } else if r.entity == b {
        Side::B
    } else {
        return None;
    };
    Some(LabeledMention::new(side, r.sentiment.polarity()))
}

/// Labels of the records naming entity `a` or `b`; others are skipped.
pub fn tally_records<'r, I>(records: I, a: &str, b: &str) -> Vec<LabeledMention>
where
    I: IntoIterator<Item = &'r MentionRecord>,
{
    records
        .into_iter()
        .filter_map(|r| label_of(r, a, b))
        .collect()
}

/// Sentiment bias of the mentions pooled over a trailing window, per day.
///
/// The series runs from the first to the last mention date. Days whose
/// window holds no mention repeat the previous value.
pub fn sb_series(
    mentions: &[MentionRecord],
    a: &str,
    b: &str,
    window_days: usize,
) -> Result<DatedSeries> {
    if window_days == 0 {
        return Err(Error::invalid("window_days must be at least 1"));
    }
    let mut daily: BTreeMap<NaiveDate, SentimentTally> = BTreeMap::new();
    for r in mentions {
        if let Some(l) = label_of(r, a, b) {
            daily.entry(r.date).or_default().add(l);
        }
    }
    let span = DateSpan::covering(daily.keys().copied())
        .ok_or_else(|| Error::Undefined("no mention of either entity on any day".into()))?;
    sb_series_from_daily(&daily, &span, window_days)
}

fn sb_series_from_daily(
    daily: &BTreeMap<NaiveDate, SentimentTally>,
    span: &DateSpan,
    window_days: usize,
) -> Result<DatedSeries> {
    let mut values = Vec::with_capacity(span.len());
    let mut last: Option<f64> = None;
    let mut first_index = None;
    for i in 0..span.len() {
        let day = span.start + Days::new(i as u64);
        let from = day - Days::new(window_days as u64 - 1);
        let pooled = daily
            .range(from..=day)
            .fold(SentimentTally::default(), |acc, (_, t)| acc.merge(t));
        if pooled.total() > 0 {
            last = Some(sentiment_bias(&pooled)?.value);
            first_index.get_or_insert(i);
        }
        if let Some(v) = last {
            values.push(v);
        }
    }
    let start = span.start + Days::new(first_index.unwrap_or(0) as u64);
    DatedSeries::new(start, values, "sb")
}

/// Topic indices each document belongs to: those holding at least
/// `threshold` of the document's total membership.
pub fn topic_membership(factors: &NmfFactors, threshold: f64) -> HashMap<String, Vec<usize>> {
    (0..factors.n_docs())
        .map(|j| {
            let row = factors.h_row(j);
            let total: f64 = row.iter().sum();
            let topics = if total > 0.0 {
                row.iter()
                    .enumerate()
                    .filter(|(_, &h)| h / total >= threshold)
                    .map(|(i, _)| i)
                    .collect()
            } else {
                Vec::new()
            };
            (factors.doc_ids[j].clone(), topics)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSb {
    pub topic_id: usize,
    pub tally: SentimentTally,
    /// `None` when the topic has no mention at all.
    pub value: Option<f64>,
    pub significant: bool,
}

/// Sentiment bias within each topic, counting a mention toward every topic
/// its article belongs to.
pub fn per_topic_sb(
    mentions: &[MentionRecord],
    factors: &NmfFactors,
    a: &str,
    b: &str,
    membership_threshold: f64,
    min_support: u64,
) -> Result<Vec<TopicSb>> {
    if !(membership_threshold > 0.0 && membership_threshold < 1.0) {
        return Err(Error::invalid("membership threshold must lie in (0, 1)"));
    }
    let membership = topic_membership(factors, membership_threshold);
    let mut tallies = vec![SentimentTally::default(); factors.n_topics()];
    for r in mentions {
        let Some(label) = label_of(r, a, b) else {
            continue;
        };
        if let Some(topics) = membership.get(&r.article_id) {
            for &i in topics {
                tallies[i].add(label);
            }
        }
    }
    tallies
        .into_iter()
        .zip(&factors.topic_ids)
        .map(|(tally, &topic_id)| {
            let value = if tally.total() > 0 {
                Some(sentiment_bias(&tally)?.value)
            } else {
                None
            };
            Ok(TopicSb {
                topic_id,
                tally,
                value,
                significant: tally.total() >= min_support,
            })
        })
        .collect()
}
