//! Vocabulary construction and the sparse tf-idf document-term matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::corpus::Article;
use crate::error::{Error, Result};
use crate::text::tokenize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Builds a vocabulary from distinct terms; they are sorted.
    pub fn from_terms<I: IntoIterator<Item = String>>(terms: I) -> Result<Self> {
        let sorted: BTreeSet<String> = terms.into_iter().collect();
        if sorted.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let terms: Vec<String> = sorted.into_iter().collect();
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(Vocabulary { terms, index })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, id: usize) -> &str {
        &self.terms[id]
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }
}

fn term_counts(article: &Article) -> BTreeMap<String, u32> {
    let mut counts = BTreeMap::new();
    for t in tokenize(&article.full_text()) {
        *counts.entry(t).or_insert(0) += 1;
    }
    counts
}

/// Terms (not stop-words) that occur in at least `min_df` documents.
pub fn build_vocabulary(
    articles: &[Article],
    stopwords: &BTreeSet<String>,
    min_df: usize,
) -> Result<Vocabulary> {
    if min_df == 0 {
        return Err(Error::invalid("min_df must be at least 1"));
    }
    let per_doc: Vec<BTreeSet<String>> = articles
        .par_iter()
        .map(|a| tokenize(&a.full_text()).into_iter().collect())
        .collect();
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in &per_doc {
        for t in doc {
            *df.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    Vocabulary::from_terms(
        df.into_iter()
            .filter(|(t, n)| *n >= min_df && !stopwords.contains(*t))
            .map(|(t, _)| t.to_string()),
    )
}

/// Smoothed inverse document frequency `ln((1 + d) / (1 + df)) + 1`.
pub fn smoothed_idf(n_docs: usize, doc_freq: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + doc_freq as f64)).ln() + 1.0
}

/// Row-compressed sparse matrix of L2-normalized tf-idf rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DocTermMatrix {
    n_cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
    pub doc_ids: Vec<String>,
    pub vocab: Vocabulary,
    /// Documents left without any vocabulary term, in id order.
    pub dropped: Vec<String>,
}

impl DocTermMatrix {
    pub fn n_rows(&self) -> usize {
        self.indptr.len() - 1
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, j: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.indptr[j], self.indptr[j + 1]);
        (&self.indices[lo..hi], &self.values[lo..hi])
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        let (cols, vals) = self.row(j);
        cols.binary_search(&k).map(|p| vals[p]).unwrap_or(0.0)
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n_rows())
            .map(|j| {
                let mut row = vec![0.0; self.n_cols];
                let (cols, vals) = self.row(j);
                for (&c, &v) in cols.iter().zip(vals) {
                    row[c] = v;
                }
                row
            })
            .collect()
    }

    /// Wraps an arbitrary nonnegative dense matrix, stored as given (no
    /// normalization). Terms are named `t0000`, `t0001`, ... and rows `d0000`, ...
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || n_cols == 0 {
            return Err(Error::Dimension("matrix must be non-empty".into()));
        }
        let mut indptr = vec![0];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for (k, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::invalid(format!("entry {v} is not a finite nonnegative value")));
                }
                if v > 0.0 {
                    indices.push(k);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        let width = 4.max(n_cols.to_string().len());
        let vocab = Vocabulary::from_terms((0..n_cols).map(|k| format!("t{k:0width$}")))?;
        let rwidth = 4.max(rows.len().to_string().len());
        Ok(DocTermMatrix {
            n_cols,
            indptr,
            indices,
            values,
            doc_ids: (0..rows.len()).map(|j| format!("d{j:0rwidth$}")).collect(),
            vocab,
            dropped: Vec::new(),
        })
    }
}

/// Builds the tf-idf matrix. Rows follow ascending article id; documents
/// with no vocabulary term are dropped with a warning.
pub fn tfidf_matrix(articles: &[Article], vocab: &Vocabulary) -> Result<DocTermMatrix> {
    if articles.is_empty() {
        return Err(Error::invalid("no documents"));
    }
    let mut order: Vec<&Article> = articles.iter().collect();
    order.sort_by(|a, b| a.id.cmp(&b.id));

    let counts: Vec<Vec<(usize, u32)>> = order
        .par_iter()
        .map(|a| {
            term_counts(a)
                .into_iter()
                .filter_map(|(t, c)| vocab.id(&t).map(|k| (k, c)))
                .collect::<BTreeMap<usize, u32>>()
                .into_iter()
                .collect()
        })
        .collect();

    let mut df = vec![0usize; vocab.len()];
    for row in &counts {
        for &(k, _) in row {
            df[k] += 1;
        }
    }
    let n_docs = order.len();
    let idf: Vec<f64> = df.iter().map(|&f| smoothed_idf(n_docs, f)).collect();

    let mut indptr = vec![0];
    let mut indices = Vec::new();
    let mut values = Vec::new();
    let mut doc_ids = Vec::new();
    let mut dropped = Vec::new();
    for (article, row) in order.iter().zip(&counts) {
        if row.is_empty() {
            log::warn!("article `{}` has no vocabulary terms; dropped from the matrix", article.id);
            dropped.push(article.id.clone());
            continue;
        }
        let weights: Vec<f64> = row.iter().map(|&(k, c)| c as f64 * idf[k]).collect();
        let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        for (&(k, _), w) in row.iter().zip(&weights) {
            indices.push(k);
            values.push(w / norm);
        }
        indptr.push(indices.len());
        doc_ids.push(article.id.clone());
    }
    if doc_ids.is_empty() {
        return Err(Error::invalid("every document was emptied by vocabulary pruning"));
    }
    Ok(DocTermMatrix {
        n_cols: vocab.len(),
        indptr,
        indices,
        values,
        doc_ids,
        vocab: vocab.clone(),
        dropped,
    })
}
