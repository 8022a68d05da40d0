//! Tokenization and word-boundary matching shared by the vectorizer, the
//! corpus filter and the sentiment scorer.

use std::collections::BTreeSet;
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Lowercased alphabetic tokens of at least two characters.
///
/// Text is NFC-normalized first. Any non-alphabetic character (digits,
/// punctuation, hyphens, apostrophes) ends a token.
pub fn tokenize(text: &str) -> Vec<String> {
    let normalized: String = text.nfc().collect();
    normalized
        .split(|c: char| !c.is_alphabetic())
        .filter(|t| t.chars().count() >= 2)
        .map(str::to_lowercase)
        .collect()
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Lowercased word tokens as used for alias matching: maximal runs of
/// alphanumerics and underscores, the same notion of "word" as a regex `\b`.
pub(crate) fn match_words(text: &str) -> Vec<String> {
    let normalized: String = text.nfc().collect();
    normalized
        .split(|c: char| !is_word_char(c))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// A case-insensitive, word-bounded phrase matcher.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseMatcher {
    phrases: Vec<Vec<String>>,
}

impl PhraseMatcher {
    pub fn new<I, S>(phrases: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let phrases: Vec<Vec<String>> = phrases
            .into_iter()
            .map(|p| match_words(p.as_ref()))
            .collect();
        if phrases.is_empty() || phrases.iter().any(Vec::is_empty) {
            return Err(Error::invalid("alias list must contain non-empty words"));
        }
        Ok(PhraseMatcher { phrases })
    }

    /// True if any phrase occurs in the pre-split word list.
    pub fn matches_words(&self, words: &[String]) -> bool {
        self.phrases.iter().any(|p| {
            words
                .windows(p.len())
                .any(|w| w.iter().zip(p).all(|(a, b)| a == b))
        })
    }

    pub fn matches(&self, text: &str) -> bool {
        self.matches_words(&match_words(text))
    }
}

/// Reads a one-term-per-line list. Blank lines and `#` comments are skipped;
/// terms are lowercased and NFC-normalized.
pub fn load_term_list(path: &Path) -> Result<BTreeSet<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_term_list(&text))
}

pub fn parse_term_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.nfc().collect::<String>().to_lowercase())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_basic_sentence() {
        assert_eq!(
            tokenize("Clinton and Trump debate!"),
            vec!["clinton", "and", "trump", "debate"]
        );
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn tokenize_hyphen_digits_and_short_tokens() {
        assert_eq!(tokenize("e-mail server 2016"), vec!["mail", "server"]);
    }

    #[test]
    fn tokenize_normalizes_composed_forms() {
        // "é" as e + combining acute composes to a single alphabetic char.
        assert_eq!(tokenize("Cafe\u{301} au lait"), vec!["café", "au", "lait"]);
    }

    #[test]
    fn phrase_matcher_is_case_insensitive_and_word_bounded() {
        let m = PhraseMatcher::new(["Trump"]).unwrap();
        assert!(m.matches("trump rally"));
        assert!(!m.matches("trumpet solo"));
        let multi = PhraseMatcher::new(["Hillary Clinton"]).unwrap();
        assert!(multi.matches("said hillary   clinton."));
        assert!(!multi.matches("Hillary met Clinton"));
    }

    #[test]
    fn term_list_skips_comments() {
        let set = parse_term_list("# header\nThe\n\n and # inline\n");
        assert_eq!(set.into_iter().collect::<Vec<_>>(), vec!["and", "the"]);
    }
}
