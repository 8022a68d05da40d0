//! Entity mentions, their sentiment, and the sentiment-bias statistic.

mod bias;
mod lexicon;
mod sentences;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Article, EntitySpec};
use crate::error::Result;
use crate::text::match_words;

pub use bias::{
    per_topic_sb, sb_series, sentiment_bias, tally_records, topic_membership, EntityCounts,
    LabeledMention, Polarity, SbStatistic, SentimentTally, Side, TopicSb, MIN_TOPIC_SUPPORT,
};
pub use lexicon::{
    clause_score, parse_valences, score_sentence, scoring_tokens, ClauseContext, Lexicon,
    LexiconPaths, LexiconScorer, PrecomputedScorer, SentimentScorer, NEGATION_WINDOW,
};
pub use sentences::{clean_clause, split_clauses, split_sentences, ABBREVIATIONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentimentClass {
    VeryNegative,
    Negative,
    Neutral,
    Positive,
    VeryPositive,
}

impl SentimentClass {
    pub fn from_score(s: f64) -> Self {
        if s <= -2.0 {
            SentimentClass::VeryNegative
        } else if s < 0.0 {
            SentimentClass::Negative
        } else if s == 0.0 {
            SentimentClass::Neutral
        } else if s < 2.0 {
            SentimentClass::Positive
        } else {
            SentimentClass::VeryPositive
        }
    }

    pub fn polarity(self) -> Polarity {
        match self {
            SentimentClass::VeryNegative | SentimentClass::Negative => Polarity::Negative,
            SentimentClass::Neutral => Polarity::Neutral,
            SentimentClass::Positive | SentimentClass::VeryPositive => Polarity::Positive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MentionRecord {
    pub article_id: String,
    pub date: NaiveDate,
    pub entity: String,
    pub sentence_index: usize,
    pub sentence: String,
    pub sentiment: SentimentClass,
}

/// Title (as one unit) followed by the body sentences. Sentence indices used
/// by mentions and precomputed labels refer to this list.
pub fn article_sentences(article: &Article) -> Vec<String> {
    let mut out = split_sentences(&article.title);
    out.extend(split_sentences(&article.body));
    out
}

/// An entity named in a clause of a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityClause {
    pub entity: String,
    pub sentence_index: usize,
    pub clause: String,
}

/// Attributes sentences (or, for sentences naming several entities, their
/// clauses) to the entities they name.
pub fn extract_mentions(article: &Article, entities: &[EntitySpec]) -> Vec<EntityClause> {
    let mut out = Vec::new();
    for (idx, sentence) in article_sentences(article).iter().enumerate() {
        let words = match_words(sentence);
        let named: Vec<&EntitySpec> = entities
            .iter()
            .filter(|e| e.mentioned_in_words(&words))
            .collect();
        match named.len() {
            0 => {}
            1 => out.push(EntityClause {
                entity: named[0].label.clone(),
                sentence_index: idx,
                clause: clean_clause(sentence),
            }),
            _ => {
                for clause in split_clauses(sentence) {
                    let clause_words = match_words(&clause);
                    for e in &named {
                        if e.mentioned_in_words(&clause_words) {
                            out.push(EntityClause {
                                entity: e.label.clone(),
                                sentence_index: idx,
                                clause: clause.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Extracts and scores every mention in the corpus, in article order.
pub fn score_mentions(
    articles: &[Article],
    entities: &[EntitySpec],
    scorer: &dyn SentimentScorer,
) -> Result<Vec<MentionRecord>> {
    let per_article: Vec<Result<Vec<MentionRecord>>> = articles
        .par_iter()
        .map(|a| {
            extract_mentions(a, entities)
                .into_iter()
                .map(|m| {
                    let sentiment = scorer.classify(&ClauseContext {
                        article_id: &a.id,
                        sentence_index: m.sentence_index,
                        text: &m.clause,
                    })?;
                    Ok(MentionRecord {
                        article_id: a.id.clone(),
                        date: a.date,
                        entity: m.entity,
                        sentence_index: m.sentence_index,
                        sentence: m.clause,
                        sentiment,
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for r in per_article {
        out.extend(r?);
    }
    Ok(out)
}
