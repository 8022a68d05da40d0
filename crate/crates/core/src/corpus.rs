//! Loading and validation of news articles and poll records, and the daily
//! series derived directly from them.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sentiment::article_sentences;
use crate::series::{sliding_mean, DateSpan, DatedSeries};
use crate::text::{match_words, PhraseMatcher};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Article {
    pub id: String,
    pub outlet: String,
    pub date: NaiveDate,
    pub title: String,
    pub body: String,
}

impl Article {
    /// Title and body joined, the text that enters the document-term matrix.
    pub fn full_text(&self) -> String {
        format!("{}\n{}", self.title, self.body)
    }
}

/// A tracked entity and the phrases that name it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntitySpec {
    pub label: String,
    pub aliases: Vec<String>,
    #[serde(skip)]
    matcher: Option<PhraseMatcher>,
}

impl PartialEq for EntitySpec {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.aliases == other.aliases
    }
}

impl EntitySpec {
    pub fn new<S: AsRef<str>>(label: impl Into<String>, aliases: &[S]) -> Result<Self> {
        let aliases: Vec<String> = aliases.iter().map(|a| a.as_ref().to_string()).collect();
        let matcher = PhraseMatcher::new(&aliases)?;
        Ok(EntitySpec {
            label: label.into(),
            aliases,
            matcher: Some(matcher),
        })
    }

    /// Builds the matcher for a spec that came out of deserialization.
    pub fn compiled(self) -> Result<Self> {
        EntitySpec::new(self.label, &self.aliases)
    }

    fn matcher(&self) -> PhraseMatcher {
        self.matcher
            .clone()
            .unwrap_or_else(|| PhraseMatcher::new(&self.aliases).expect("validated aliases"))
    }

    pub fn mentioned_in(&self, text: &str) -> bool {
        match &self.matcher {
            Some(m) => m.matches(text),
            None => self.matcher().matches(text),
        }
    }

    pub(crate) fn mentioned_in_words(&self, words: &[String]) -> bool {
        match &self.matcher {
            Some(m) => m.matches_words(words),
            None => self.matcher().matches_words(words),
        }
    }
}

/// Checks that every entity has aliases, labels are unique and alias lists
/// are pairwise disjoint.
pub fn validate_entities(entities: &[EntitySpec]) -> Result<()> {
    if entities.is_empty() {
        return Err(Error::invalid("at least one entity is required"));
    }
    let mut labels = HashSet::new();
    let mut seen: Vec<(Vec<String>, &str)> = Vec::new();
    for e in entities {
        if !labels.insert(e.label.as_str()) {
            return Err(Error::invalid(format!("duplicate entity label `{}`", e.label)));
        }
        if e.aliases.is_empty() {
            return Err(Error::invalid(format!("entity `{}` has no aliases", e.label)));
        }
        for alias in &e.aliases {
            let words = match_words(alias);
            if words.is_empty() {
                return Err(Error::invalid(format!(
                    "entity `{}` has an empty alias",
                    e.label
                )));
            }
            if let Some((_, owner)) = seen.iter().find(|(w, owner)| *w == words && *owner != e.label)
            {
                return Err(Error::invalid(format!(
                    "alias `{alias}` is shared by entities `{owner}` and `{}`",
                    e.label
                )));
            }
            seen.push((words, e.label.as_str()));
        }
    }
    Ok(())
}

/// Reads line-delimited article records, keeping those that name at least
/// one entity in the title or body. Input order is preserved.
pub fn load_articles(path: &Path, entities: &[EntitySpec]) -> Result<Vec<Article>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_articles(BufReader::new(file), path, entities)
}

pub fn read_articles<R: Read>(
    reader: R,
    path: &Path,
    entities: &[EntitySpec],
) -> Result<Vec<Article>> {
    validate_entities(entities)?;
    let reader = BufReader::new(reader);
    let mut ids = HashSet::new();
    let mut kept = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let article: Article = serde_json::from_str(&line)
            .map_err(|e| Error::parse(path, line_no, e.to_string()))?;
        if article.id.is_empty() {
            return Err(Error::parse(path, line_no, "empty article id"));
        }
        if article.body.trim().is_empty() {
            return Err(Error::parse(path, line_no, format!("article `{}` has an empty body", article.id)));
        }
        if !ids.insert(article.id.clone()) {
            return Err(Error::DuplicateId(article.id));
        }
        let title_words = match_words(&article.title);
        let body_words = match_words(&article.body);
        let relevant = entities.iter().any(|e| {
            e.mentioned_in_words(&title_words) || e.mentioned_in_words(&body_words)
        });
        if relevant {
            kept.push(article);
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(kept)
}

/// Writes articles in the same line-delimited format `load_articles` reads.
pub fn write_articles<W: Write>(mut out: W, articles: &[Article]) -> std::io::Result<()> {
    for a in articles {
        serde_json::to_writer(&mut out, a)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PollRecord {
    pub date: NaiveDate,
    pub pollster: String,
    pub pct_a: f64,
    pub pct_b: f64,
}

impl PollRecord {
    pub fn spread(&self) -> f64 {
        self.pct_a - self.pct_b
    }

    fn validate(&self) -> std::result::Result<(), String> {
        for (name, v) in [("pct_a", self.pct_a), ("pct_b", self.pct_b)] {
            if !(0.0..=100.0).contains(&v) {
                return Err(format!("{name}={v} is outside [0, 100]"));
            }
        }
        if self.pct_a + self.pct_b > 100.0 {
            return Err(format!(
                "pct_a + pct_b = {} exceeds 100",
                self.pct_a + self.pct_b
            ));
        }
        Ok(())
    }
}

pub fn load_polls(path: &Path) -> Result<Vec<PollRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_polls(file, path)
}

/// Parses `date,pollster,pct_a,pct_b` CSV; the result is sorted by date
/// (stable, so same-day records keep file order).
pub fn read_polls<R: Read>(reader: R, path: &Path) -> Result<Vec<PollRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(path, 1, e.to_string()))?
        .clone();
    let expected = ["date", "pollster", "pct_a", "pct_b"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::parse(
            path,
            1,
            format!("expected header `{}`", expected.join(",")),
        ));
    }
    let mut polls = Vec::new();
    for (idx, record) in rdr.deserialize::<PollRecord>().enumerate() {
        let line = idx + 2;
        let poll = record.map_err(|e| Error::parse(path, line, e.to_string()))?;
        poll.validate().map_err(|m| Error::parse(path, line, m))?;
        polls.push(poll);
    }
    polls.sort_by_key(|p| p.date);
    Ok(polls)
}

/// Daily mean spread `pct_a - pct_b` over the polls dated in the trailing
/// `window_days`. Days whose window holds no poll repeat the previous value.
pub fn daily_spread(polls: &[PollRecord], window_days: usize) -> Result<DatedSeries> {
    if window_days == 0 {
        return Err(Error::invalid("window_days must be at least 1"));
    }
    let span = DateSpan::covering(polls.iter().map(|p| p.date))
        .ok_or_else(|| Error::invalid("no poll records"))?;
    let mut by_day: BTreeMap<NaiveDate, Vec<f64>> = BTreeMap::new();
    for p in polls {
        by_day.entry(p.date).or_default().push(p.spread());
    }
    let mut values = Vec::with_capacity(span.len());
    let mut last = None;
    for i in 0..span.len() {
        let day = span.start + Days::new(i as u64);
        let first = day - Days::new(window_days as u64 - 1);
        let spreads: Vec<f64> = by_day
            .range(first..=day)
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        let value = if spreads.is_empty() {
            last.expect("the span starts on a poll date")
        } else {
            spreads.iter().sum::<f64>() / spreads.len() as f64
        };
        last = Some(value);
        values.push(value);
    }
    DatedSeries::new(span.start, values, "spread")
}

/// Raw per-day count of sentences naming `entity`, over `span`.
pub fn raw_mention_counts(
    articles: &[Article],
    entity: &EntitySpec,
    span: &DateSpan,
) -> Result<Vec<f64>> {
    let mut counts = vec![0.0; span.len()];
    for a in articles {
        let idx = span.index_of(a.date).ok_or_else(|| {
            Error::invalid(format!("article `{}` dated {} is outside the series span", a.id, a.date))
        })?;
        counts[idx] += article_sentences(a)
            .iter()
            .filter(|s| entity.mentioned_in(s))
            .count() as f64;
    }
    Ok(counts)
}

/// Daily count of sentences naming `entity`, smoothed by a trailing mean.
/// The series spans the article dates.
pub fn mention_counts(
    articles: &[Article],
    entity: &EntitySpec,
    window_days: usize,
) -> Result<DatedSeries> {
    let span = DateSpan::covering(articles.iter().map(|a| a.date))
        .ok_or_else(|| Error::invalid("no articles"))?;
    mention_counts_over(articles, entity, window_days, &span)
}

pub fn mention_counts_over(
    articles: &[Article],
    entity: &EntitySpec,
    window_days: usize,
    span: &DateSpan,
) -> Result<DatedSeries> {
    let raw = DatedSeries::new(
        span.start,
        raw_mention_counts(articles, entity, span)?,
        format!("mentions_{}", entity.label),
    )?;
    sliding_mean(&raw, window_days)
}
