//! Synthetic corpus generator with planted structure: distinct topic
//! vocabularies, per-topic sentiment tendencies, an agenda shift in one
//! outlet, and a spread whose daily changes follow one topic's coverage
//! changes after a fixed lag.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::{Days, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::{
    BootstrapConfig, EntityConfig, LexiconConfig, NmfConfig, OutletConfig, PipelineConfig,
};
use crate::corpus::{write_articles, Article};
use crate::coverage::{document_length, Normalization};
use crate::error::{Error, Result};
use crate::text::tokenize;
use crate::sentiment::{sentiment_bias, LabeledMention, Polarity, SentimentTally, Side};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSpec {
    pub name: String,
    pub words: Vec<String>,
    /// Expected sentiment bias of mentions in this topic's articles.
    pub sb: f64,
}

/// `ΔCT(t) = β·Δu_topic(t − tau) + sigma·ε_t`, where `u_topic` is the
/// topic's daily token mass pooled over outlets, scaled to unit area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CausalLink {
    /// 1-based index into `topics`.
    pub topic: usize,
    pub tau: usize,
    pub beta: f64,
    pub sigma: f64,
}

/// From `day` on, `outlet` publishes `factor` times as much on `topic`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgendaShift {
    pub outlet: usize,
    pub day: usize,
    pub topic: usize,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureSpec {
    pub start_date: NaiveDate,
    pub days: usize,
    pub outlets: Vec<String>,
    pub entities: [EntityConfig; 2],
    pub topics: Vec<TopicSpec>,
    /// Mean articles per outlet, topic and day.
    pub articles_per_topic_day: f64,
    /// Article rates are `base·max(1 + a_t, 0.05)` with `a` a zero-mean
    /// AR(1) per topic, shared by all outlets.
    pub intensity_phi: f64,
    pub intensity_sigma: f64,
    pub neutral_share: f64,
    pub causal: CausalLink,
    pub shift: Option<AgendaShift>,
    pub initial_spread: f64,
    pub max_lag: usize,
    pub permutations: usize,
    pub resamples: usize,
}

fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

impl Default for FixtureSpec {
    fn default() -> Self {
        FixtureSpec {
            start_date: NaiveDate::from_ymd_opt(2016, 6, 1).expect("valid date"),
            days: 150,
            outlets: vec!["herald".into(), "courier".into()],
            entities: [
                EntityConfig {
                    label: "Smith".into(),
                    aliases: vec!["Smith".into(), "Alex Smith".into()],
                },
                EntityConfig {
                    label: "Jones".into(),
                    aliases: vec!["Jones".into(), "Robin Jones".into()],
                },
            ],
            topics: vec![
                TopicSpec {
                    name: "economy".into(),
                    words: words(
                        "taxes wages jobs inflation tariffs budget deficit factories \
                         manufacturing mortgages pensions salaries unemployment exports \
                         imports recession payroll bankers markets stocks lending subsidies \
                         revenue paychecks",
                    ),
                    sb: 0.3,
                },
                TopicSpec {
                    name: "security".into(),
                    words: words(
                        "military troops border terrorism veterans missiles defense alliance \
                         intelligence sanctions navy soldiers cyberattacks weapons treaty \
                         generals embassy drones patrols militias airstrikes bases deployment \
                         nuclear",
                    ),
                    sb: -0.4,
                },
                TopicSpec {
                    name: "health".into(),
                    words: words(
                        "hospitals insurance medicare doctors nurses prescriptions clinics \
                         vaccines patients premiums pharmacies surgeons opioids diagnoses \
                         caregivers therapies medicaid dentists epidemics deductibles \
                         physicians wards midwives outbreaks",
                    ),
                    sb: 0.4,
                },
                TopicSpec {
                    name: "inquiry".into(),
                    words: words(
                        "emails servers subpoenas investigators leaks hearings testimony \
                         indictments prosecutors documents archives lawyers allegations donors \
                         foundations audits transcripts wiretaps whistleblowers inquiries \
                         depositions affidavits clerks memos",
                    ),
                    sb: -0.3,
                },
            ],
            articles_per_topic_day: 5.0,
            intensity_phi: 0.8,
            intensity_sigma: 0.15,
            neutral_share: 0.3,
            causal: CausalLink {
                topic: 2,
                tau: 5,
                beta: 750.0,
                sigma: 0.5,
            },
            shift: Some(AgendaShift {
                outlet: 2,
                day: 75,
                topic: 4,
                factor: 2.5,
            }),
            initial_spread: 3.0,
            max_lag: 10,
            permutations: 10_000,
            resamples: 10_000,
        }
    }
}

impl FixtureSpec {
    fn validate(&self) -> Result<()> {
        let k = self.topics.len();
        if k < 2 {
            return Err(Error::invalid("a fixture needs at least two topics"));
        }
        if self.outlets.is_empty() || self.days < 30 {
            return Err(Error::invalid("a fixture needs an outlet and at least 30 days"));
        }
        if self.causal.topic == 0 || self.causal.topic > k {
            return Err(Error::invalid("causal.topic is not a topic index"));
        }
        if let Some(s) = self.shift {
            if s.outlet == 0 || s.outlet > self.outlets.len() || s.topic == 0 || s.topic > k {
                return Err(Error::invalid("shift refers to an unknown outlet or topic"));
            }
            if s.day >= self.days || !(s.factor > 0.0) {
                return Err(Error::invalid("shift day or factor out of range"));
            }
        }
        if self.topics.iter().any(|t| t.words.len() < 2) {
            return Err(Error::invalid("each topic needs at least two words"));
        }
        let bound = 1.0 - self.neutral_share;
        if !(0.0..1.0).contains(&self.neutral_share) || self.topics.iter().any(|t| t.sb.abs() > bound) {
            return Err(Error::invalid(format!(
                "topic SB must lie within ±{bound} given neutral_share {}",
                self.neutral_share
            )));
        }
        if !(self.articles_per_topic_day > 0.0) || !(self.intensity_phi.abs() < 1.0) {
            return Err(Error::invalid("articles_per_topic_day must be positive and |phi| < 1"));
        }
        if 2 * self.max_lag >= self.days {
            return Err(Error::invalid("max_lag must be below half the number of days"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicTruth {
    pub index: usize,
    pub name: String,
    pub words: Vec<String>,
    pub planted_sb: f64,
    /// SB of the generated labels of this topic's mentions.
    pub realized_sb: Option<f64>,
    pub n_mentions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalTruth {
    pub present: bool,
    pub topic: usize,
    pub tau: usize,
    pub beta: f64,
    pub sigma: f64,
    /// Cells `(topic, τ)` with `|τ − tau| ≤ region_halfwidth` count as the
    /// planted region.
    pub region_halfwidth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub start_date: NaiveDate,
    pub days: usize,
    pub entities: [String; 2],
    pub topics: Vec<TopicTruth>,
    pub causal: CausalTruth,
    pub agenda_shift: Option<AgendaShift>,
    pub realized_sb: f64,
    pub outlet_sb: BTreeMap<String, f64>,
    /// Planted topic (1-based) of every article.
    pub article_topics: BTreeMap<String, usize>,
}

/// Generated files, by path relative to the fixture directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub files: Vec<(String, String)>,
    pub ground_truth: GroundTruth,
}

pub const CONFIG_FILE: &str = "config.toml";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.json";

impl Fixture {
    /// Writes every file under `dir`; returns the config path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        for (rel, contents) in &self.files {
            let path = dir.join(rel);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        }
        Ok(dir.join(CONFIG_FILE))
    }

    pub fn file(&self, rel: &str) -> Option<&str> {
        self.files.iter().find(|(p, _)| p == rel).map(|(_, c)| c.as_str())
    }
}

const POSITIVE: &[(&str, i8)] = &[
    ("strong", 1), ("honest", 1), ("clear", 1), ("thoughtful", 1), ("impressive", 1),
    ("credible", 1), ("effective", 1), ("steady", 1), ("sensible", 1), ("inspiring", 1),
    ("capable", 1), ("brilliant", 2), ("outstanding", 2), ("excellent", 2),
];
const NEGATIVE: &[(&str, i8)] = &[
    ("weak", -1), ("dishonest", -1), ("confusing", -1), ("careless", -1), ("reckless", -1),
    ("vague", -1), ("misleading", -1), ("shaky", -1), ("incoherent", -1), ("evasive", -1),
    ("clumsy", -1), ("disastrous", -2), ("dreadful", -2), ("terrible", -2),
];
const NEGATORS: &[&str] = &["not", "never", "no", "hardly"];
const INTENSIFIERS: &[&str] = &["very", "extremely", "remarkably"];
const DIMINISHERS: &[&str] = &["somewhat", "slightly", "fairly"];
const STOPWORDS: &[&str] = &[
    "a", "about", "across", "alike", "and", "as", "at", "back", "came", "did", "for", "from", "in",
    "is", "it", "new", "of", "on", "put", "the", "this", "to", "turns", "was", "were", "what",
    "with",
];

const TOPIC_SENTENCES: &[&str] = &[
    "The {a} debate returned to the front page as new {b} figures arrived.",
    "Analysts tracked {a} and {b} across several regions.",
    "Local officials discussed {a} with residents focused on {b}.",
    "Fresh reports on {a} and {b} were released this week.",
    "Reporters asked campaign aides about {a} and {b}.",
    "The latest {a} numbers put {b} back on the agenda.",
];
const HEADLINES: &[&str] = &["{A} and {b} in focus", "{A} debate turns to {b}", "What {a} means for {b}"];
const OPINION: &[&str] = &[
    "{E} offered a {M}{J} plan on {a}.",
    "{E} gave a {M}{J} answer about {a}.",
    "Observers described the record of {E} on {a} as {M}{J}.",
    "Supporters found {E} {M}{J} on {a}.",
];
const NEGATED_OPINION: &[&str] = &[
    "{E} did not give a {J} answer about {a}.",
    "{E} was never {J} on {a}.",
];
const NEUTRAL: &[&str] = &[
    "{E} spoke about {a} on {D}.",
    "{E} visited a {a} forum in {C}.",
    "{E} released a statement on {a}.",
];
const WEEKDAYS: &[&str] = &["Monday", "Tuesday", "Wednesday", "Thursday", "Friday"];
const CITIES: &[&str] = &["Denver", "Tampa", "Columbus", "Reno", "Raleigh", "Madison"];
const POLLSTERS: &[&str] = &["Northfield", "Baywater", "Crestline"];

fn fill(template: &str, slots: &[(&str, &str)]) -> String {
    let mut s = template.to_string();
    for (k, v) in slots {
        s = s.replace(&format!("{{{k}}}"), v);
    }
    s
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("non-empty list")
}

/// A mention sentence whose lexicon score has the requested polarity.
fn mention_sentence(
    rng: &mut ChaCha8Rng,
    alias: &str,
    topic_word: &str,
    polarity: Polarity,
) -> String {
    let base = [("E", alias), ("a", topic_word)];
    match polarity {
        Polarity::Neutral => {
            let day = *pick(rng, WEEKDAYS);
            let city = *pick(rng, CITIES);
            fill(pick(rng, NEUTRAL), &[base[0], base[1], ("D", day), ("C", city)])
        }
        _ => {
            let want_positive = polarity == Polarity::Positive;
            // A third of opinions are phrased through negation of the
            // opposite adjective.
            let negated = rng.gen_bool(1.0 / 3.0);
            let adjectives = if want_positive != negated { POSITIVE } else { NEGATIVE };
            let adj = pick(rng, adjectives).0;
            if negated {
                fill(pick(rng, NEGATED_OPINION), &[base[0], base[1], ("J", adj)])
            } else {
                let modifier = if rng.gen_bool(0.25) {
                    format!("{} ", pick(rng, INTENSIFIERS))
                } else {
                    String::new()
                };
                fill(pick(rng, OPINION), &[base[0], base[1], ("J", adj), ("M", &modifier)])
            }
        }
    }
}

fn draw_label(rng: &mut ChaCha8Rng, sb: f64, neutral_share: f64) -> LabeledMention {
    let side = if rng.gen_bool(0.5) { Side::A } else { Side::B };
    // Contribution +1 with probability (1 − n + sb)/2, −1 with (1 − n − sb)/2.
    let u: f64 = rng.gen();
    let p_plus = (1.0 - neutral_share + sb) / 2.0;
    let p_minus = (1.0 - neutral_share - sb) / 2.0;
    let contribution = if u < p_plus {
        1
    } else if u < p_plus + p_minus {
        -1
    } else {
        0
    };
    let polarity = match (contribution, side) {
        (0, _) => Polarity::Neutral,
        (1, Side::A) | (-1, Side::B) => Polarity::Positive,
        _ => Polarity::Negative,
    };
    LabeledMention::new(side, polarity)
}

fn lexicon_files(entities: &[EntityConfig]) -> Vec<(String, String)> {
    let mut valences = String::from("# term\tvalence\n");
    for (w, v) in POSITIVE.iter().chain(NEGATIVE) {
        valences.push_str(&format!("{w}\t{v}\n"));
    }
    let list = |items: &[&str]| items.iter().map(|w| format!("{w}\n")).collect::<String>();
    vec![
        ("lexicon/valences.tsv".into(), valences),
        ("lexicon/negators.txt".into(), list(NEGATORS)),
        ("lexicon/intensifiers.txt".into(), list(INTENSIFIERS)),
        ("lexicon/diminishers.txt".into(), list(DIMINISHERS)),
        ("stopwords.txt".into(), stopwords(entities)),
    ]
}

/// Every template word outside the topic vocabularies and the sentiment
/// lexicon, plus entity alias words: the corpus-specific stoplist a user
/// would build after a first look at the keywords.
fn stopwords(entities: &[EntityConfig]) -> String {
    let mut words: Vec<String> = STOPWORDS.iter().map(|w| w.to_string()).collect();
    let templates = TOPIC_SENTENCES
        .iter()
        .chain(HEADLINES)
        .chain(OPINION)
        .chain(NEGATED_OPINION)
        .chain(NEUTRAL)
        .chain(WEEKDAYS)
        .chain(CITIES);
    for t in templates {
        let without_slots: String = t.split(['{', '}']).step_by(2).collect::<Vec<_>>().join(" ");
        words.extend(tokenize(&without_slots));
    }
    for e in entities {
        for a in &e.aliases {
            words.extend(tokenize(a));
        }
    }
    let lexical: Vec<&str> = NEGATORS.iter().chain(INTENSIFIERS).chain(DIMINISHERS).copied().collect();
    words.retain(|w| !lexical.contains(&w.as_str()));
    words.sort();
    words.dedup();
    words.iter().map(|w| format!("{w}\n")).collect()
}

/// Generates a fixture; the same seed and spec give identical bytes.
pub fn generate_fixture(seed: u64, spec: &FixtureSpec) -> Result<Fixture> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_topics = spec.topics.len();
    let days = spec.days;

    // Shared intensity deviation per topic and day.
    let stationary_sd = spec.intensity_sigma / (1.0 - spec.intensity_phi.powi(2)).sqrt();
    let mut intensity = vec![vec![0.0; days]; n_topics];
    for row in intensity.iter_mut() {
        let mut x = stationary_sd * rng.sample::<f64, _>(StandardNormal);
        for v in row.iter_mut() {
            *v = x;
            x = spec.intensity_phi * x + spec.intensity_sigma * rng.sample::<f64, _>(StandardNormal);
        }
    }

    let mut outlet_articles: Vec<Vec<Article>> = vec![Vec::new(); spec.outlets.len()];
    let mut article_topics = BTreeMap::new();
    let mut topic_labels: Vec<Vec<LabeledMention>> = vec![Vec::new(); n_topics];
    let mut outlet_labels: Vec<Vec<LabeledMention>> = vec![Vec::new(); spec.outlets.len()];
    let mut token_mass = vec![vec![0.0; days]; n_topics];

    for day in 0..days {
        let date = spec.start_date + Days::new(day as u64);
        for (o, outlet) in spec.outlets.iter().enumerate() {
            let mut seq = 0;
            for k in 0..n_topics {
                let mut lambda = spec.articles_per_topic_day * (1.0 + intensity[k][day]).max(0.05);
                if let Some(s) = spec.shift {
                    if s.outlet == o + 1 && s.topic == k + 1 && day >= s.day {
                        lambda *= s.factor;
                    }
                }
                let count = lambda.floor() as usize + usize::from(rng.gen::<f64>() < lambda.fract());
                let topic = &spec.topics[k];
                for _ in 0..count {
                    seq += 1;
                    let id = format!("{outlet}-{date}-{seq:03}");
                    let w = |rng: &mut ChaCha8Rng| pick(rng, &topic.words).clone();
                    let (a, b) = (w(&mut rng), w(&mut rng));
                    let title = capitalize(&fill(
                        pick(&mut rng, HEADLINES),
                        &[("A", &capitalize(&a)), ("a", &a), ("b", &b)],
                    ));
                    let mut sentences = Vec::new();
                    for _ in 0..3 {
                        let (a, b) = (w(&mut rng), w(&mut rng));
                        sentences.push(fill(pick(&mut rng, TOPIC_SENTENCES), &[("a", &a), ("b", &b)]));
                    }
                    for _ in 0..2 {
                        let label = draw_label(&mut rng, topic.sb, spec.neutral_share);
                        let entity = &spec.entities[if label.side == Side::A { 0 } else { 1 }];
                        let alias = pick(&mut rng, &entity.aliases).clone();
                        let tw = w(&mut rng);
                        sentences.push(mention_sentence(&mut rng, &alias, &tw, label.polarity));
                        topic_labels[k].push(label);
                        outlet_labels[o].push(label);
                    }
                    sentences.shuffle(&mut rng);
                    let article = Article {
                        id: id.clone(),
                        outlet: outlet.clone(),
                        date,
                        title,
                        body: sentences.join(" "),
                    };
                    token_mass[k][day] += document_length(&article) as f64;
                    article_topics.insert(id, k + 1);
                    outlet_articles[o].push(article);
                }
            }
        }
    }

    // Spread: a random walk whose steps follow the causal topic's coverage
    // changes `tau` days earlier.
    let c = &spec.causal;
    let mass = &token_mass[c.topic - 1];
    let total: f64 = mass.iter().sum();
    let unit: Vec<f64> = mass.iter().map(|m| m / total).collect();
    let mut spread = vec![spec.initial_spread; days];
    for t in 1..days {
        let driven = if t > c.tau {
            c.beta * (unit[t - c.tau] - unit[t - c.tau - 1])
        } else {
            0.0
        };
        spread[t] = spread[t - 1] + driven + c.sigma * rng.sample::<f64, _>(StandardNormal);
    }
    let mut polls = String::from("date,pollster,pct_a,pct_b\n");
    for (t, s) in spread.iter().enumerate() {
        let s = s.clamp(-80.0, 80.0);
        let date = spec.start_date + Days::new(t as u64);
        let pollster = POLLSTERS[t % POLLSTERS.len()];
        polls.push_str(&format!("{date},{pollster},{:.2},{:.2}\n", 45.0 + s / 2.0, 45.0 - s / 2.0));
    }

    let sb_of = |labels: &[LabeledMention]| -> Option<f64> {
        sentiment_bias(&SentimentTally::from_labels(labels)).ok().map(|s| s.value)
    };
    let all_labels: Vec<LabeledMention> = topic_labels.iter().flatten().copied().collect();
    let ground_truth = GroundTruth {
        seed,
        start_date: spec.start_date,
        days,
        entities: [spec.entities[0].label.clone(), spec.entities[1].label.clone()],
        topics: spec
            .topics
            .iter()
            .enumerate()
            .map(|(k, t)| TopicTruth {
                index: k + 1,
                name: t.name.clone(),
                words: t.words.clone(),
                planted_sb: t.sb,
                realized_sb: sb_of(&topic_labels[k]),
                n_mentions: topic_labels[k].len(),
            })
            .collect(),
        causal: CausalTruth {
            present: c.beta != 0.0,
            topic: c.topic,
            tau: c.tau,
            beta: c.beta,
            sigma: c.sigma,
            region_halfwidth: 1,
        },
        agenda_shift: spec.shift,
        realized_sb: sb_of(&all_labels).unwrap_or(0.0),
        outlet_sb: spec
            .outlets
            .iter()
            .zip(&outlet_labels)
            .filter_map(|(name, l)| sb_of(l).map(|v| (name.clone(), v)))
            .collect(),
        article_topics,
    };

    let mut files = lexicon_files(&spec.entities);
    let mut outlets = Vec::new();
    for (name, articles) in spec.outlets.iter().zip(&outlet_articles) {
        let mut buf = Vec::new();
        write_articles(&mut buf, articles).map_err(|e| Error::io(name, e))?;
        let rel = format!("articles/{name}.jsonl");
        files.push((rel.clone(), String::from_utf8(buf).expect("JSON is UTF-8")));
        outlets.push(OutletConfig {
            name: name.clone(),
            articles: rel.into(),
        });
    }
    files.push(("polls.csv".into(), polls));

    let config = PipelineConfig {
        seed,
        n_topics,
        drop_topics: Vec::new(),
        window_days: 1,
        max_lag: spec.max_lag,
        min_df: 2,
        permutations: spec.permutations,
        membership_threshold: 0.34,
        min_support: 30,
        top_keywords: 10,
        normalization: Normalization::UnitArea,
        polls: "polls.csv".into(),
        stopwords: "stopwords.txt".into(),
        lexicon: LexiconConfig {
            valences: "lexicon/valences.tsv".into(),
            negators: "lexicon/negators.txt".into(),
            intensifiers: "lexicon/intensifiers.txt".into(),
            diminishers: "lexicon/diminishers.txt".into(),
            labels: None,
        },
        bootstrap: BootstrapConfig {
            resamples: spec.resamples,
            gamma: 0.95,
        },
        nmf: NmfConfig::default(),
        output_dir: Some("out".into()),
        outlets,
        entities: spec.entities.to_vec(),
        base_dir: PathBuf::new(),
    };
    files.push((CONFIG_FILE.into(), config.to_toml()?));
    let mut truth = serde_json::to_string_pretty(&ground_truth)
        .map_err(|e| Error::invalid(e.to_string()))?;
    truth.push('\n');
    files.push((GROUND_TRUTH_FILE.into(), truth));
    Ok(Fixture { files, ground_truth })
}
