//! Pipeline configuration, read from TOML (or JSON when the file name ends
//! in `.json`). Relative paths are resolved against the config file's
//! directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bootstrap::{DEFAULT_GAMMA, DEFAULT_RESAMPLES};
use crate::corpus::{validate_entities, EntitySpec};
use crate::coverage::Normalization;
use crate::error::{Error, Result};
use crate::sentiment::{LexiconPaths, MIN_TOPIC_SUPPORT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutletConfig {
    pub name: String,
    pub articles: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntityConfig {
    pub label: String,
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconConfig {
    pub valences: PathBuf,
    pub negators: PathBuf,
    pub intensifiers: PathBuf,
    pub diminishers: PathBuf,
    /// Optional CSV of precomputed `article_id,sentence_index,class` labels
    /// that replaces the lexicon scorer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub gamma: f64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            resamples: DEFAULT_RESAMPLES,
            gamma: DEFAULT_GAMMA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NmfConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NmfConfig {
    fn default() -> Self {
        NmfConfig {
            tol: 1e-5,
            max_iter: 500,
        }
    }
}

fn default_window() -> usize {
    7
}
fn default_max_lag() -> usize {
    20
}
fn default_min_df() -> usize {
    2
}
fn default_permutations() -> usize {
    10_000
}
fn default_membership() -> f64 {
    0.34
}
fn default_min_support() -> u64 {
    MIN_TOPIC_SUPPORT
}
fn default_keywords() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub n_topics: usize,
    #[serde(default)]
    pub drop_topics: Vec<usize>,
    #[serde(default = "default_window")]
    pub window_days: usize,
    #[serde(default = "default_max_lag")]
    pub max_lag: usize,
    #[serde(default = "default_min_df")]
    pub min_df: usize,
    #[serde(default = "default_permutations")]
    pub permutations: usize,
    #[serde(default = "default_membership")]
    pub membership_threshold: f64,
    #[serde(default = "default_min_support")]
    pub min_support: u64,
    #[serde(default = "default_keywords")]
    pub top_keywords: usize,
    #[serde(default)]
    pub normalization: Normalization,
    pub polls: PathBuf,
    pub stopwords: PathBuf,
    pub lexicon: LexiconConfig,
    #[serde(default)]
    pub bootstrap: BootstrapConfig,
    #[serde(default)]
    pub nmf: NmfConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub outlets: Vec<OutletConfig>,
    pub entities: Vec<EntityConfig>,
    /// Directory relative paths are resolved against; not part of the file.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let mut cfg = if is_json {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        cfg.base_dir = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default();
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn lexicon_paths(&self) -> LexiconPaths {
        LexiconPaths {
            valences: self.resolve(&self.lexicon.valences),
            negators: self.resolve(&self.lexicon.negators),
            intensifiers: self.resolve(&self.lexicon.intensifiers),
            diminishers: self.resolve(&self.lexicon.diminishers),
        }
    }

    pub fn entity_specs(&self) -> Result<Vec<EntitySpec>> {
        let specs = self
            .entities
            .iter()
            .map(|e| EntitySpec::new(e.label.clone(), &e.aliases))
            .collect::<Result<Vec<_>>>()?;
        validate_entities(&specs)?;
        Ok(specs)
    }

    fn referenced_files(&self) -> Vec<(&'static str, PathBuf)> {
        let mut files = vec![
            ("polls", self.resolve(&self.polls)),
            ("stopwords", self.resolve(&self.stopwords)),
            ("lexicon.valences", self.resolve(&self.lexicon.valences)),
            ("lexicon.negators", self.resolve(&self.lexicon.negators)),
            ("lexicon.intensifiers", self.resolve(&self.lexicon.intensifiers)),
            ("lexicon.diminishers", self.resolve(&self.lexicon.diminishers)),
        ];
        if let Some(l) = &self.lexicon.labels {
            files.push(("lexicon.labels", self.resolve(l)));
        }
        for o in &self.outlets {
            files.push(("outlets.articles", self.resolve(&o.articles)));
        }
        files
    }

    /// Checks values and that every referenced file exists, without reading
    /// any data.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_topics < 2 {
            return bad(format!("n_topics must be at least 2, got {}", self.n_topics));
        }
        for &t in &self.drop_topics {
            if t == 0 || t > self.n_topics {
                return bad(format!("drop_topics: {t} is not a topic id in 1..={}", self.n_topics));
            }
        }
        let mut drops = self.drop_topics.clone();
        drops.sort_unstable();
        drops.dedup();
        if drops.len() >= self.n_topics {
            return bad("drop_topics removes every topic".into());
        }
        if self.window_days == 0 {
            return bad("window_days must be at least 1".into());
        }
        if self.min_df == 0 {
            return bad("min_df must be at least 1".into());
        }
        if self.permutations == 0 {
            return bad("permutations must be at least 1".into());
        }
        if !(self.membership_threshold > 0.0 && self.membership_threshold < 1.0) {
            return bad("membership_threshold must lie in (0, 1)".into());
        }
        if self.bootstrap.resamples < 100 {
            return bad("bootstrap.resamples must be at least 100".into());
        }
        if !(self.bootstrap.gamma > 0.0 && self.bootstrap.gamma < 1.0) {
            return bad("bootstrap.gamma must lie in (0, 1)".into());
        }
        if !(self.nmf.tol > 0.0) || self.nmf.max_iter == 0 {
            return bad("nmf.tol must be positive and nmf.max_iter at least 1".into());
        }
        if self.outlets.is_empty() {
            return bad("at least one [[outlets]] entry is required".into());
        }
        let mut names: Vec<&str> = self.outlets.iter().map(|o| o.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return bad("outlet names must be unique".into());
        }
        if names.iter().any(|n| !is_safe_name(n)) {
            return bad("outlet names may contain only letters, digits, '-' and '_'".into());
        }
        if self.entities.len() != 2 {
            return bad(format!(
                "exactly two [[entities]] (A then B) are required, got {}",
                self.entities.len()
            ));
        }
        self.entity_specs()?;
        for (key, path) in self.referenced_files() {
            if !path.is_file() {
                return bad(format!("{key}: file {} does not exist", path.display()));
            }
        }
        Ok(())
    }
}

pub(crate) fn is_safe_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}
