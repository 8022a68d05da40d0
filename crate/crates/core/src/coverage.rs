//! Daily topic coverage: each document's length spread over its topic
//! memberships, summed per day, smoothed and normalized.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Article;
use crate::error::{Error, Result};
use crate::nmf::NmfFactors;
use crate::series::{sliding_mean, DateSpan, DatedSeries};
use crate::text::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Each day's values divided by that day's total over topics.
    #[default]
    Share,
    /// Each topic's series divided by its own sum over the period.
    UnitArea,
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "share" => Ok(Normalization::Share),
            "unit_area" | "unit-area" => Ok(Normalization::UnitArea),
            other => Err(Error::invalid(format!("unknown normalization `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicCoverage {
    pub mode: Normalization,
    pub topic_ids: Vec<usize>,
    /// Smoothed and normalized coverage, one series per topic.
    pub series: Vec<DatedSeries>,
    /// Unsmoothed, unnormalized daily weights.
    pub raw: Vec<DatedSeries>,
}

impl TopicCoverage {
    pub fn n_topics(&self) -> usize {
        self.series.len()
    }

    pub fn span(&self) -> Option<DateSpan> {
        self.series.first().map(DatedSeries::span)
    }
}

/// Number of tokens in an article, the document length used for weighting.
pub fn document_length(article: &Article) -> usize {
    tokenize(&article.full_text()).len()
}

/// Raw daily weights `T_i(d) = Σ_j l(j)·h_ji` over documents dated `d`.
///
/// Articles missing from the factorization (dropped as empty) contribute
/// nothing; factor rows without a matching article are ignored.
pub fn raw_topic_weights(
    f: &NmfFactors,
    articles: &[Article],
    span: &DateSpan,
) -> Result<Vec<Vec<f64>>> {
    let rows: HashMap<&str, usize> = f
        .doc_ids
        .iter()
        .enumerate()
        .map(|(j, id)| (id.as_str(), j))
        .collect();
    let mut weights = vec![vec![0.0; span.len()]; f.n_topics()];
    for a in articles {
        let day = span.index_of(a.date).ok_or_else(|| {
            Error::invalid(format!(
                "article `{}` dated {} is outside the series span {}..{}",
                a.id, a.date, span.start, span.end
            ))
        })?;
        let Some(&j) = rows.get(a.id.as_str()) else {
            continue;
        };
        let len = document_length(a) as f64;
        for (i, &h) in f.h_row(j).iter().enumerate() {
            weights[i][day] += len * h;
        }
    }
    Ok(weights)
}

/// Coverage over the span of the given articles.
pub fn topic_weight_series(
    f: &NmfFactors,
    articles: &[Article],
    window_days: usize,
    mode: Normalization,
) -> Result<TopicCoverage> {
    let span = DateSpan::covering(articles.iter().map(|a| a.date))
        .ok_or_else(|| Error::invalid("no articles"))?;
    topic_weight_series_over(f, articles, window_days, mode, &span)
}

pub fn topic_weight_series_over(
    f: &NmfFactors,
    articles: &[Article],
    window_days: usize,
    mode: Normalization,
    span: &DateSpan,
) -> Result<TopicCoverage> {
    let raw = raw_topic_weights(f, articles, span)?;
    let mut smoothed = Vec::with_capacity(raw.len());
    let mut raw_series = Vec::with_capacity(raw.len());
    for (values, id) in raw.into_iter().zip(&f.topic_ids) {
        let s = DatedSeries::new(span.start, values, format!("topic_{id}"))?;
        smoothed.push(sliding_mean(&s, window_days)?.values);
        raw_series.push(s);
    }
    normalize(&mut smoothed, mode);
    let series = smoothed
        .into_iter()
        .zip(&f.topic_ids)
        .map(|(v, id)| DatedSeries::new(span.start, v, format!("topic_{id}")))
        .collect::<Result<_>>()?;
    Ok(TopicCoverage {
        mode,
        topic_ids: f.topic_ids.clone(),
        series,
        raw: raw_series,
    })
}

fn normalize(values: &mut [Vec<f64>], mode: Normalization) {
    let Some(days) = values.first().map(Vec::len) else {
        return;
    };
    match mode {
        Normalization::Share => {
            for d in 0..days {
                let total: f64 = values.iter().map(|v| v[d]).sum();
                if total > 0.0 {
                    values.iter_mut().for_each(|v| v[d] /= total);
                }
            }
        }
        Normalization::UnitArea => {
            for v in values.iter_mut() {
                let total: f64 = v.iter().sum();
                if total > 0.0 {
                    v.iter_mut().for_each(|x| *x /= total);
                }
            }
        }
    }
}

/// Whole-period share of each topic, from the raw weights.
pub fn agenda_profile(cov: &TopicCoverage) -> Result<Vec<f64>> {
    if cov.raw.is_empty() {
        return Err(Error::invalid("coverage has no topics"));
    }
    let totals: Vec<f64> = cov.raw.iter().map(|s| s.values.iter().sum()).collect();
    let sum: f64 = totals.iter().sum();
    if !(sum > 0.0) {
        return Err(Error::Undefined("coverage is zero for every topic".into()));
    }
    Ok(totals.into_iter().map(|t| t / sum).collect())
}

/// Agenda shares on a single day, from the smoothed series.
pub fn agenda_on(cov: &TopicCoverage, date: chrono::NaiveDate) -> Option<Vec<f64>> {
    let vals: Option<Vec<f64>> = cov.series.iter().map(|s| s.value_on(date)).collect();
    let vals = vals?;
    let total: f64 = vals.iter().sum();
    (total > 0.0).then(|| vals.into_iter().map(|v| v / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn article(id: &str, date: &str, words: usize) -> Article {
        Article {
            id: id.into(),
            outlet: "X".into(),
            date: date.parse().unwrap(),
            title: String::new(),
            body: vec!["word"; words].join(" "),
        }
    }

    fn factors(ids: &[&str], h: Vec<f64>) -> NmfFactors {
        let n = h.len() / ids.len();
        NmfFactors::from_parts(
            ids.iter().map(|s| s.to_string()).collect(),
            vec!["word".into()],
            h,
            vec![1.0; n],
        )
        .unwrap()
    }

    #[test]
    fn single_document_weight() {
        let f = factors(&["a"], vec![0.5, 0.0]);
        let cov =
            topic_weight_series(&f, &[article("a", "2016-08-01", 100)], 1, Normalization::UnitArea)
                .unwrap();
        assert_eq!(cov.raw[0].values, vec![50.0]);
        assert_eq!(cov.raw[1].values, vec![0.0]);
    }

    #[test]
    fn zero_membership_contributes_nothing() {
        let f = factors(&["a", "b"], vec![0.0, 0.0, 1.0, 1.0]);
        let arts = [article("a", "2016-08-01", 40), article("b", "2016-08-01", 10)];
        let cov = topic_weight_series(&f, &arts, 1, Normalization::Share).unwrap();
        assert_eq!(cov.raw[0].values, vec![10.0]);
        assert_eq!(cov.raw[1].values, vec![10.0]);
    }

    #[test]
    fn three_document_hand_case() {
        let f = factors(&["a", "b", "c"], vec![1.0, 0.0, 0.5, 0.5, 0.0, 1.0]);
        let arts = [
            article("a", "2016-08-01", 10),
            article("b", "2016-08-01", 20),
            article("c", "2016-08-01", 30),
        ];
        let cov = topic_weight_series(&f, &arts, 7, Normalization::Share).unwrap();
        assert_eq!(cov.raw[0].values, vec![20.0]);
        assert_eq!(cov.raw[1].values, vec![40.0]);
        assert_eq!(cov.series[0].values, vec![1.0 / 3.0]);
        assert_eq!(cov.series[1].values, vec![2.0 / 3.0]);
        assert_eq!(agenda_profile(&cov).unwrap(), vec![1.0 / 3.0, 2.0 / 3.0]);
    }

    #[test]
    fn agenda_profile_trivial_cases() {
        let f = factors(&["a"], vec![0.7]);
        let cov = topic_weight_series(&f, &[article("a", "2016-08-01", 5)], 1, Normalization::Share)
            .unwrap();
        assert_eq!(agenda_profile(&cov).unwrap(), vec![1.0]);

        let f = factors(&["a", "b"], vec![1.0, 0.0, 0.0, 1.0]);
        let arts = [article("a", "2016-08-01", 5), article("b", "2016-08-02", 5)];
        let cov = topic_weight_series(&f, &arts, 1, Normalization::Share).unwrap();
        assert_eq!(agenda_profile(&cov).unwrap(), vec![0.5, 0.5]);

        let f = factors(&["a"], vec![0.0]);
        let cov = topic_weight_series(&f, &[article("a", "2016-08-01", 5)], 1, Normalization::Share)
            .unwrap();
        assert!(agenda_profile(&cov).is_err());
    }

    #[test]
    fn shares_sum_to_one_on_active_days() {
        let f = factors(&["a", "b", "c"], vec![0.2, 0.9, 0.4, 0.1, 0.0, 0.3, 0.6, 0.0, 1.0]);
        let arts = [
            article("a", "2016-08-01", 13),
            article("b", "2016-08-04", 7),
            article("c", "2016-08-09", 22),
        ];
        let cov = topic_weight_series(&f, &arts, 2, Normalization::Share).unwrap();
        for d in 0..cov.series[0].len() {
            let total: f64 = cov.series.iter().map(|s| s.values[d]).sum();
            let raw_total: f64 = cov.raw.iter().map(|s| s.values[d]).sum();
            let smoothed_active = d == 0 || d == 1 || d == 3 || d == 4 || d == 8 || d == 9;
            if smoothed_active {
                assert!((total - 1.0).abs() < 1e-9, "day {d}: {total}");
            } else {
                assert_eq!(total, 0.0);
                assert_eq!(raw_total, 0.0);
            }
        }
    }

    #[test]
    fn unit_area_integrates_to_one() {
        let f = factors(&["a", "b"], vec![0.2, 0.9, 0.4, 0.1]);
        let arts = [article("a", "2016-08-01", 13), article("b", "2016-08-04", 7)];
        let cov = topic_weight_series(&f, &arts, 3, Normalization::UnitArea).unwrap();
        for s in &cov.series {
            assert!((s.values.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn additive_over_disjoint_document_sets() {
        let f = factors(&["a", "b", "c"], vec![0.2, 0.9, 0.4, 0.1, 0.5, 0.5]);
        let arts = [
            article("a", "2016-08-01", 13),
            article("b", "2016-08-02", 7),
            article("c", "2016-08-02", 9),
        ];
        let span = DateSpan::covering(arts.iter().map(|a| a.date)).unwrap();
        let all = raw_topic_weights(&f, &arts, &span).unwrap();
        let left = raw_topic_weights(&f, &arts[..1], &span).unwrap();
        let right = raw_topic_weights(&f, &arts[1..], &span).unwrap();
        for i in 0..2 {
            for d in 0..span.len() {
                assert!((all[i][d] - left[i][d] - right[i][d]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn article_outside_span_errors() {
        let f = factors(&["a"], vec![1.0]);
        let span = DateSpan::new("2016-09-01".parse().unwrap(), "2016-09-05".parse().unwrap())
            .unwrap();
        let err = topic_weight_series_over(
            &f,
            &[article("a", "2016-08-01", 3)],
            1,
            Normalization::Share,
            &span,
        );
        assert!(err.is_err());
    }
}
