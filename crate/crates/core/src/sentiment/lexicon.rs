//! Valence lexicon, the rule-based clause scorer, and injection of
//! externally computed labels.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use super::SentimentClass;
use crate::error::{Error, Result};
use crate::text::{load_term_list, parse_term_list};

/// Tokens before a valenced word that are searched for a negator.
pub const NEGATION_WINDOW: usize = 3;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    pub valences: HashMap<String, i8>,
    pub negators: BTreeSet<String>,
    pub intensifiers: BTreeSet<String>,
    pub diminishers: BTreeSet<String>,
}

/// Locations of the lexicon files.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LexiconPaths {
    pub valences: std::path::PathBuf,
    pub negators: std::path::PathBuf,
    pub intensifiers: std::path::PathBuf,
    pub diminishers: std::path::PathBuf,
}

impl Lexicon {
    pub fn load(paths: &LexiconPaths) -> Result<Self> {
        let text = std::fs::read_to_string(&paths.valences)
            .map_err(|e| Error::io(&paths.valences, e))?;
        Ok(Lexicon {
            valences: parse_valences(&text, &paths.valences)?,
            negators: load_term_list(&paths.negators)?,
            intensifiers: load_term_list(&paths.intensifiers)?,
            diminishers: load_term_list(&paths.diminishers)?,
        })
    }

    /// Builds a lexicon from in-memory file contents.
    pub fn from_strs(valences: &str, negators: &str, intensifiers: &str, diminishers: &str) -> Result<Self> {
        Ok(Lexicon {
            valences: parse_valences(valences, Path::new("<valences>"))?,
            negators: parse_term_list(negators),
            intensifiers: parse_term_list(intensifiers),
            diminishers: parse_term_list(diminishers),
        })
    }

    fn is_marker(&self, token: &str) -> bool {
        self.negators.contains(token)
            || self.intensifiers.contains(token)
            || self.diminishers.contains(token)
    }
}

/// Parses `term<TAB>valence` lines; valence must be one of -2, -1, 1, 2.
pub fn parse_valences(text: &str, path: &Path) -> Result<HashMap<String, i8>> {
    let mut out = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (term, val) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, idx + 1, "expected `term<TAB>valence`"))?;
        let val: i8 = val
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, idx + 1, format!("bad valence `{val}`")))?;
        if !matches!(val, -2 | -1 | 1 | 2) {
            return Err(Error::parse(path, idx + 1, format!("valence {val} not in {{-2,-1,1,2}}")));
        }
        let term: String = term.trim().nfc().collect::<String>().to_lowercase();
        if term.is_empty() {
            return Err(Error::parse(path, idx + 1, "empty term"));
        }
        out.insert(term, val);
    }
    Ok(out)
}

/// Lowercased word tokens for scoring. Apostrophes stay inside words so that
/// contractions like "don't" survive as one token.
pub fn scoring_tokens(text: &str) -> Vec<String> {
    let normalized: String = text.nfc().collect::<String>().replace('’', "'");
    normalized
        .split(|c: char| !(c.is_alphabetic() || c == '\''))
        .map(|t| t.trim_matches('\''))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Sum of token valences after negation and intensity adjustments.
pub fn clause_score(clause: &str, lexicon: &Lexicon) -> f64 {
    let tokens = scoring_tokens(clause);
    let mut score = 0.0;
    for (i, tok) in tokens.iter().enumerate() {
        if lexicon.is_marker(tok) {
            continue;
        }
        let Some(&val) = lexicon.valences.get(tok) else {
            continue;
        };
        let mut v = f64::from(val);
        let window = &tokens[i.saturating_sub(NEGATION_WINDOW)..i];
        if window.iter().any(|t| lexicon.negators.contains(t)) {
            v = -v;
        }
        if let Some(prev) = i.checked_sub(1).map(|p| &tokens[p]) {
            if lexicon.intensifiers.contains(prev) {
                v *= 2.0;
            } else if lexicon.diminishers.contains(prev) {
                v *= 0.5;
            }
        }
        score += v;
    }
    score
}

pub fn score_sentence(clause: &str, lexicon: &Lexicon) -> SentimentClass {
    SentimentClass::from_score(clause_score(clause, lexicon))
}

/// Where a clause came from, for scorers keyed by position.
#[derive(Debug, Clone, Copy)]
pub struct ClauseContext<'a> {
    pub article_id: &'a str,
    pub sentence_index: usize,
    pub text: &'a str,
}

pub trait SentimentScorer: Send + Sync {
    fn classify(&self, clause: &ClauseContext<'_>) -> Result<SentimentClass>;

    fn name(&self) -> &'static str;
}

#[derive(Debug, Clone)]
pub struct LexiconScorer {
    pub lexicon: Lexicon,
}

impl SentimentScorer for LexiconScorer {
    fn classify(&self, clause: &ClauseContext<'_>) -> Result<SentimentClass> {
        Ok(score_sentence(clause.text, &self.lexicon))
    }

    fn name(&self) -> &'static str {
        "lexicon"
    }
}

/// Labels supplied per `(article_id, sentence_index)` by an external model.
#[derive(Debug, Clone, Default)]
pub struct PrecomputedScorer {
    labels: HashMap<(String, usize), SentimentClass>,
}

#[derive(serde::Deserialize)]
struct LabelRow {
    article_id: String,
    sentence_index: usize,
    class: SentimentClass,
}

impl PrecomputedScorer {
    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(file, path)
    }

    /// Reads `article_id,sentence_index,class` CSV.
    pub fn read<R: std::io::Read>(reader: R, path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut labels = HashMap::new();
        for (idx, row) in rdr.deserialize::<LabelRow>().enumerate() {
            let row = row.map_err(|e| Error::parse(path, idx + 2, e.to_string()))?;
            labels.insert((row.article_id, row.sentence_index), row.class);
        }
        Ok(PrecomputedScorer { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

impl SentimentScorer for PrecomputedScorer {
    fn classify(&self, clause: &ClauseContext<'_>) -> Result<SentimentClass> {
        self.labels
            .get(&(clause.article_id.to_string(), clause.sentence_index))
            .copied()
            .ok_or_else(|| {
                Error::invalid(format!(
                    "no precomputed label for article `{}` sentence {}",
                    clause.article_id, clause.sentence_index
                ))
            })
    }

    fn name(&self) -> &'static str {
        "precomputed"
    }
}
