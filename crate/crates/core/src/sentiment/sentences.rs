//! Rule-based sentence and clause segmentation.

use crate::text::is_word_char;

/// Tokens ending in a period that do not close a sentence.
pub const ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "prof.", "sen.", "rep.", "gov.", "gen.", "col.", "lt.", "sgt.",
    "capt.", "cmdr.", "adm.", "maj.", "pres.", "sec.", "amb.", "rev.", "hon.", "jr.", "sr.",
    "st.", "mt.", "ft.", "no.", "vs.", "etc.", "inc.", "corp.", "co.", "ltd.", "dept.", "univ.",
    "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.", "sept.", "oct.", "nov.",
    "dec.", "u.s.", "u.k.", "u.n.", "d.c.", "e.g.", "i.e.", "a.m.", "p.m.", "approx.", "est.",
];

const COORDINATING: &[&str] = &["and", "but", "or", "nor", "yet", "so"];

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '”' | '’' | '»')
}

fn is_opening(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '“' | '‘' | '«')
}

/// Whitespace-delimited token that ends at byte `end` (exclusive).
fn token_before(text: &str, end: usize) -> &str {
    let start = text[..end]
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_whitespace())
        .map_or(0, |(i, c)| i + c.len_utf8());
    &text[start..end]
}

fn is_abbreviation(token: &str) -> bool {
    let token = token.trim_start_matches(is_opening);
    let lower = token.to_lowercase();
    if ABBREVIATIONS.contains(&lower.as_str()) {
        return true;
    }
    // Single-letter initials such as "J."
    let mut chars = token.chars();
    matches!((chars.next(), chars.next(), chars.next()), (Some(c), Some('.'), None) if c.is_alphabetic())
}

/// Splits text after `.`, `!` or `?` (plus any closing quotes) when the
/// next non-space character is a capital letter, possibly behind an
/// opening quote. Periods ending a known abbreviation or an initial do not
/// split. Sentences are returned trimmed; whitespace between them is
/// dropped.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if !is_terminal(c) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && (is_terminal(chars[j].1) || is_closing(chars[j].1)) {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(p, _)| p);
        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let has_space = k > j;
        let mut m = k;
        while m < chars.len() && is_opening(chars[m].1) {
            m += 1;
        }
        let capital_next = chars.get(m).is_some_and(|&(_, n)| n.is_uppercase());
        let abbreviation = c == '.' && is_abbreviation(token_before(text, pos + 1));
        if has_space && capital_next && !abbreviation {
            push_trimmed(&mut out, &text[start..end]);
            start = chars[k].0;
            i = k;
        } else {
            i = j;
        }
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn push_trimmed(out: &mut Vec<String>, s: &str) {
    let s = s.trim();
    if !s.is_empty() {
        out.push(s.to_string());
    }
}

/// Strips surrounding whitespace and separator punctuation from a clause.
pub fn clean_clause(s: &str) -> String {
    s.trim_matches(|c: char| c.is_whitespace() || matches!(c, '.' | '!' | '?' | ',' | ';' | ':'))
        .to_string()
}

/// Splits a sentence at commas, semicolons and the coordinating
/// conjunctions `and`, `but`, `or`, `nor`, `yet`, `so` (which are dropped).
/// Empty pieces are discarded.
pub fn split_clauses(sentence: &str) -> Vec<String> {
    let mut clauses = Vec::new();
    for piece in sentence.split([',', ';']) {
        let mut start = 0;
        let mut word_start: Option<usize> = None;
        let bytes_end = piece.len();
        let cut = |from: usize, to: usize, clauses: &mut Vec<String>| {
            let c = clean_clause(&piece[from..to]);
            if !c.is_empty() {
                clauses.push(c);
            }
        };
        for (i, ch) in piece.char_indices().chain(std::iter::once((bytes_end, ' '))) {
            match (word_start, i < bytes_end && is_word_char(ch)) {
                (None, true) => word_start = Some(i),
                (Some(ws), false) => {
                    if COORDINATING.contains(&piece[ws..i].to_lowercase().as_str()) {
                        cut(start, ws, &mut clauses);
                        start = i;
                    }
                    word_start = None;
                }
                _ => {}
            }
        }
        cut(start, bytes_end, &mut clauses);
    }
    clauses
}
