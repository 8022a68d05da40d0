//! End-to-end analysis driven by a [`PipelineConfig`].
//!
//! Topics are fitted once on the articles of every outlet pooled together,
//! so topic ids mean the same thing across outlets; coverage, sentiment and
//! the time-series tests then run per outlet.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bootstrap::{bootstrap_sb, BootstrapResult, RNG_ALGORITHM};
use crate::config::PipelineConfig;
use crate::corpus::{daily_spread, load_articles, load_polls, mention_counts_over, Article, EntitySpec};
use crate::coverage::{agenda_profile, topic_weight_series_over, TopicCoverage};
use crate::error::{Error, Result};
use crate::nmf::{nmf_factorize, top_keywords, NmfFactors, NmfParams};
use crate::sentiment::{
    per_topic_sb, sb_series, score_mentions, sentiment_bias, tally_records, topic_membership,
    LabeledMention, Lexicon, LexiconScorer, MentionRecord, PrecomputedScorer, SbStatistic,
    SentimentScorer, SentimentTally, TopicSb,
};
use crate::series::{DateSpan, DatedSeries};
use crate::stats::{granger_scan, lagged_correlation_scan, GrangerScan, LagCorrelation};
use crate::text::load_term_list;
use crate::vectorizer::{build_vocabulary, tfidf_matrix};

/// Which parts of the analysis to run. Ingest always runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stages {
    pub topics: bool,
    pub sentiment: bool,
    pub correlation: bool,
    pub causality: bool,
}

impl Stages {
    pub const ALL: Stages = Stages {
        topics: true,
        sentiment: true,
        correlation: true,
        causality: true,
    };
    pub const TOPICS: Stages = Stages {
        topics: true,
        sentiment: false,
        correlation: false,
        causality: false,
    };
    pub const SENTIMENT: Stages = Stages {
        topics: false,
        sentiment: true,
        correlation: false,
        causality: false,
    };
    pub const CORRELATE: Stages = Stages {
        topics: true,
        sentiment: true,
        correlation: true,
        causality: false,
    };
    pub const CAUSALITY: Stages = Stages {
        topics: true,
        sentiment: false,
        correlation: false,
        causality: true,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub rng: String,
    pub sentiment_scorer: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub topic_id: usize,
    pub keywords: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModelReport {
    pub n_docs: usize,
    pub n_terms: usize,
    pub iterations: usize,
    pub final_error: f64,
    /// Articles with no vocabulary term, left out of the factorization.
    pub empty_documents: Vec<String>,
    pub dropped_topics: Vec<usize>,
    pub topics: Vec<TopicSummary>,
}

/// One lag scan of `series` against the spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub series: String,
    pub rows: Vec<LagCorrelation>,
    /// Why the scan was skipped, when it was.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl CorrelationTable {
    /// The row with the largest |rho|.
    pub fn strongest(&self) -> Option<&LagCorrelation> {
        self.rows.iter().max_by(|a, b| a.rho.abs().total_cmp(&b.rho.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicBootstrap {
    pub topic_id: usize,
    pub result: BootstrapResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentReport {
    pub n_mentions: usize,
    pub overall: SbStatistic,
    pub series: DatedSeries,
    pub per_topic: Vec<TopicSb>,
    pub bootstrap: BootstrapResult,
    pub topic_bootstrap: Vec<TopicBootstrap>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutletReport {
    pub name: String,
    pub n_articles: usize,
    pub span: DateSpan,
    pub mention_counts: Vec<DatedSeries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agenda: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<TopicCoverage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<SentimentReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correlations: Vec<CorrelationTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub granger: Option<GrangerScan>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub tool: ToolInfo,
    pub config: PipelineConfig,
    pub entities: [String; 2],
    pub spread: DatedSeries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topic_model: Option<TopicModelReport>,
    pub outlets: Vec<OutletReport>,
}

impl ReportBundle {
    pub fn outlet(&self, name: &str) -> Option<&OutletReport> {
        self.outlets.iter().find(|o| o.name == name)
    }
}

/// Derives an independent seed for a sub-task from the run seed.
fn sub_seed(seed: u64, parts: &[u64]) -> u64 {
    // SplitMix64 finalizer over the mixed-in parts.
    let mut z = seed;
    for &p in parts {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(p);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

struct Inputs {
    entities: Vec<EntitySpec>,
    outlets: Vec<(String, Vec<Article>)>,
    spread: DatedSeries,
}

fn ingest(config: &PipelineConfig) -> Result<Inputs> {
    let entities = config.entity_specs()?;
    let polls = load_polls(&config.resolve(&config.polls))?;
    let spread = daily_spread(&polls, config.window_days)?;
    let mut seen: HashMap<String, String> = HashMap::new();
    let mut outlets = Vec::new();
    for o in &config.outlets {
        let articles = load_articles(&config.resolve(&o.articles), &entities)?;
        for a in &articles {
            if let Some(other) = seen.insert(a.id.clone(), o.name.clone()) {
                return Err(Error::invalid(format!(
                    "article id `{}` appears in outlets `{other}` and `{}`",
                    a.id, o.name
                )));
            }
        }
        log::info!("outlet {}: {} articles", o.name, articles.len());
        outlets.push((o.name.clone(), articles));
    }
    Ok(Inputs {
        entities,
        outlets,
        spread,
    })
}

fn fit_topics(config: &PipelineConfig, inputs: &Inputs) -> Result<(NmfFactors, TopicModelReport)> {
    let pooled: Vec<Article> = inputs
        .outlets
        .iter()
        .flat_map(|(_, a)| a.iter().cloned())
        .collect();
    let (matrix, vocab_len) = (|| {
        let stopwords = load_term_list(&config.resolve(&config.stopwords))?;
        let vocab = build_vocabulary(&pooled, &stopwords, config.min_df)?;
        let n = vocab.len();
        Ok::<_, Error>((tfidf_matrix(&pooled, &vocab)?, n))
    })()
    .map_err(|e| e.in_stage("vectorize"))?;
    log::info!(
        "tf-idf matrix: {} documents x {vocab_len} terms, {} nonzeros",
        matrix.n_rows(),
        matrix.nnz()
    );

    let factors = (|| {
        let params = NmfParams {
            n_topics: config.n_topics,
            seed: config.seed,
            tol: config.nmf.tol,
            max_iter: config.nmf.max_iter,
        };
        let full = nmf_factorize(&matrix, &params)?;
        let mut drop = config.drop_topics.clone();
        drop.sort_unstable();
        drop.dedup();
        if drop.is_empty() {
            Ok::<_, Error>(full)
        } else {
            full.without_topics(&drop)
        }
    })()
    .map_err(|e| e.in_stage("nmf"))?;

    let k = config.top_keywords.min(factors.n_terms());
    let keywords = top_keywords(&factors, k).map_err(|e| e.in_stage("nmf"))?;
    let mut dropped_topics = config.drop_topics.clone();
    dropped_topics.sort_unstable();
    dropped_topics.dedup();
    let report = TopicModelReport {
        n_docs: factors.n_docs(),
        n_terms: factors.n_terms(),
        iterations: factors.iterations,
        final_error: factors.final_error,
        empty_documents: matrix.dropped.clone(),
        dropped_topics,
        topics: factors
            .topic_ids
            .iter()
            .zip(keywords)
            .map(|(&topic_id, keywords)| TopicSummary { topic_id, keywords })
            .collect(),
    };
    Ok((factors, report))
}

fn scorer(config: &PipelineConfig) -> Result<Box<dyn SentimentScorer>> {
    Ok(match &config.lexicon.labels {
        Some(p) => Box::new(PrecomputedScorer::load(&config.resolve(p))?),
        None => Box::new(LexiconScorer {
            lexicon: Lexicon::load(&config.lexicon_paths())?,
        }),
    })
}

fn scorer_name(config: &PipelineConfig) -> &'static str {
    if config.lexicon.labels.is_some() {
        "precomputed"
    } else {
        "lexicon"
    }
}

/// Labels of each topic's mentions, for the per-topic bootstrap.
fn topic_labels(
    mentions: &[MentionRecord],
    factors: &NmfFactors,
    a: &str,
    b: &str,
    threshold: f64,
) -> Vec<Vec<LabeledMention>> {
    let membership = topic_membership(factors, threshold);
    let mut out = vec![Vec::new(); factors.n_topics()];
    for r in mentions {
        let Some(&label) = tally_records([r], a, b).first() else {
            continue;
        };
        if let Some(topics) = membership.get(&r.article_id) {
            for &i in topics {
                out[i].push(label);
            }
        }
    }
    out
}

fn analyze_sentiment(
    config: &PipelineConfig,
    outlet_index: usize,
    articles: &[Article],
    entities: &[EntitySpec],
    scorer: &dyn SentimentScorer,
    factors: Option<&NmfFactors>,
) -> Result<SentimentReport> {
    let (a, b) = (entities[0].label.as_str(), entities[1].label.as_str());
    let mentions =
        score_mentions(articles, entities, scorer).map_err(|e| e.in_stage("sentiment"))?;

    let (labels, overall, series, per_topic) = (|| {
        let labels = tally_records(&mentions, a, b);
        let overall = sentiment_bias(&SentimentTally::from_labels(&labels))?;
        let series = sb_series(&mentions, a, b, config.window_days)?;
        let per_topic = match factors {
            Some(f) => per_topic_sb(
                &mentions,
                f,
                a,
                b,
                config.membership_threshold,
                config.min_support,
            )?,
            None => Vec::new(),
        };
        Ok::<_, Error>((labels, overall, series, per_topic))
    })()
    .map_err(|e| e.in_stage("sb"))?;

    let (bootstrap, topic_bootstrap) = (|| {
        let bs = &config.bootstrap;
        let seed = sub_seed(config.seed, &[outlet_index as u64, 0]);
        let overall = bootstrap_sb(&labels, bs.resamples, bs.gamma, seed)?;
        let mut per_topic = Vec::new();
        if let Some(f) = factors {
            let groups = topic_labels(&mentions, f, a, b, config.membership_threshold);
            for (group, &topic_id) in groups.iter().zip(&f.topic_ids) {
                if group.is_empty() {
                    continue;
                }
                let seed = sub_seed(config.seed, &[outlet_index as u64, topic_id as u64]);
                per_topic.push(TopicBootstrap {
                    topic_id,
                    result: bootstrap_sb(group, bs.resamples, bs.gamma, seed)?,
                });
            }
        }
        Ok::<_, Error>((overall, per_topic))
    })()
    .map_err(|e| e.in_stage("bootstrap"))?;

    Ok(SentimentReport {
        n_mentions: labels.len(),
        overall,
        series,
        per_topic,
        bootstrap,
        topic_bootstrap,
    })
}

fn correlation_table(
    config: &PipelineConfig,
    seed: u64,
    series: &DatedSeries,
    spread: &DatedSeries,
) -> Result<CorrelationTable> {
    match lagged_correlation_scan(series, spread, config.max_lag, config.permutations, seed) {
        Ok(rows) => Ok(CorrelationTable {
            series: series.label.clone(),
            rows,
            skipped: None,
        }),
        Err(Error::Undefined(why)) => {
            log::warn!("correlation of `{}` skipped: {why}", series.label);
            Ok(CorrelationTable {
                series: series.label.clone(),
                rows: Vec::new(),
                skipped: Some(why),
            })
        }
        Err(e) => Err(e),
    }
}

/// Runs the selected stages. Errors carry the name of the failing stage.
pub fn run_stages(config: &PipelineConfig, stages: Stages) -> Result<ReportBundle> {
    config.validate()?;
    let inputs = ingest(config).map_err(|e| e.in_stage("ingest"))?;
    let need_topics = stages.topics || stages.causality;
    let fitted = if need_topics {
        Some(fit_topics(config, &inputs)?)
    } else {
        None
    };
    let factors = fitted.as_ref().map(|(f, _)| f);
    let scorer = if stages.sentiment {
        Some(scorer(config).map_err(|e| e.in_stage("sentiment"))?)
    } else {
        None
    };

    let mut outlets = Vec::new();
    for (idx, (name, articles)) in inputs.outlets.iter().enumerate() {
        let span = DateSpan::covering(articles.iter().map(|a| a.date))
            .expect("ingest rejects empty outlets");
        let mention_counts = inputs
            .entities
            .iter()
            .map(|e| mention_counts_over(articles, e, config.window_days, &span))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.in_stage("ingest"))?;

        let coverage = match factors {
            Some(f) => Some(
                topic_weight_series_over(f, articles, config.window_days, config.normalization, &span)
                    .map_err(|e| e.in_stage("coverage"))?,
            ),
            None => None,
        };
        let agenda = match &coverage {
            Some(c) => Some(agenda_profile(c).map_err(|e| e.in_stage("coverage"))?),
            None => None,
        };

        let sentiment = match &scorer {
            Some(s) => Some(analyze_sentiment(
                config,
                idx,
                articles,
                &inputs.entities,
                s.as_ref(),
                factors,
            )?),
            None => None,
        };

        let mut correlations = Vec::new();
        if stages.correlation {
            let mut candidates: Vec<&DatedSeries> = mention_counts.iter().collect();
            if let Some(s) = &sentiment {
                candidates.push(&s.series);
            }
            if let Some(c) = &coverage {
                candidates.extend(c.series.iter());
            }
            for (k, s) in candidates.into_iter().enumerate() {
                let seed = sub_seed(config.seed, &[idx as u64, 1 << 32 | k as u64]);
                correlations.push(
                    correlation_table(config, seed, s, &inputs.spread)
                        .map_err(|e| e.in_stage("correlation"))?,
                );
            }
        }

        let granger = match (&coverage, stages.causality) {
            (Some(c), true) => Some(
                granger_scan(&inputs.spread, c, config.max_lag)
                    .map_err(|e| e.in_stage("granger"))?,
            ),
            _ => None,
        };

        outlets.push(OutletReport {
            name: name.clone(),
            n_articles: articles.len(),
            span,
            mention_counts,
            agenda: if stages.topics { agenda } else { None },
            coverage: if stages.topics || stages.causality { coverage } else { None },
            sentiment,
            correlations,
            granger,
        });
    }

    Ok(ReportBundle {
        tool: ToolInfo {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            rng: RNG_ALGORITHM.to_string(),
            sentiment_scorer: scorer_name(config).to_string(),
        },
        config: config.clone(),
        entities: [
            inputs.entities[0].label.clone(),
            inputs.entities[1].label.clone(),
        ],
        spread: inputs.spread,
        topic_model: fitted.map(|(_, r)| r),
        outlets,
    })
}

/// Runs every stage: ingest, vectorize, NMF, coverage, sentiment, SB,
/// correlation scan, Granger scan and bootstrap.
pub fn run_pipeline(config: &PipelineConfig) -> Result<ReportBundle> {
    run_stages(config, Stages::ALL)
}
