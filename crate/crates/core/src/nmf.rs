//! Non-negative matrix factorization `M ≈ H·W` by Lee–Seung multiplicative
//! updates on the Frobenius objective.
//!
//! `M` is the sparse `d × t` document-term matrix, `H` the dense `d × n`
//! document-topic matrix and `W` the dense `n × t` topic-term matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vectorizer::DocTermMatrix;

const EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NmfParams {
    pub n_topics: usize,
    pub seed: u64,
    /// Stop once the relative error improvement of one sweep falls below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl NmfParams {
    pub fn new(n_topics: usize, seed: u64) -> Self {
        NmfParams {
            n_topics,
            seed,
            tol: 1e-5,
            max_iter: 500,
        }
    }
}

/// Factorization result. `W` rows have unit L2 norm; the scale is carried by
/// the matching columns of `H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NmfFactors {
    pub doc_ids: Vec<String>,
    pub terms: Vec<String>,
    /// 1-based topic identifiers; stable when topics are dropped.
    pub topic_ids: Vec<usize>,
    h: Vec<f64>,
    w: Vec<f64>,
    pub final_error: f64,
    pub iterations: usize,
    /// Frobenius error before the first sweep and after each sweep.
    pub error_history: Vec<f64>,
}

impl NmfFactors {
    /// Assembles factors from row-major dense `H` (`d × n`) and `W` (`n × t`).
    pub fn from_parts(
        doc_ids: Vec<String>,
        terms: Vec<String>,
        h: Vec<f64>,
        w: Vec<f64>,
    ) -> Result<Self> {
        let d = doc_ids.len();
        let t = terms.len();
        if d == 0 || t == 0 || h.len() % d != 0 {
            return Err(Error::Dimension(format!("H has {} entries for {d} documents", h.len())));
        }
        let n = h.len() / d;
        if w.len() != n * t {
            return Err(Error::Dimension(format!(
                "W has {} entries, expected {n} x {t}",
                w.len()
            )));
        }
        if h.iter().chain(&w).any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("factors must be finite and nonnegative"));
        }
        Ok(NmfFactors {
            doc_ids,
            terms,
            topic_ids: (1..=n).collect(),
            h,
            w,
            final_error: 0.0,
            iterations: 0,
            error_history: Vec::new(),
        })
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn n_topics(&self) -> usize {
        self.topic_ids.len()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn h(&self, doc: usize, topic: usize) -> f64 {
        self.h[doc * self.n_topics() + topic]
    }

    pub fn w(&self, topic: usize, term: usize) -> f64 {
        self.w[topic * self.n_terms() + term]
    }

    pub fn h_row(&self, doc: usize) -> &[f64] {
        let n = self.n_topics();
        &self.h[doc * n..(doc + 1) * n]
    }

    pub fn w_row(&self, topic: usize) -> &[f64] {
        let t = self.n_terms();
        &self.w[topic * t..(topic + 1) * t]
    }

    pub fn doc_index(&self, id: &str) -> Option<usize> {
        self.doc_ids.iter().position(|d| d == id)
    }

    /// Removes the topics with the given 1-based ids.
    pub fn without_topics(&self, drop: &[usize]) -> Result<NmfFactors> {
        for id in drop {
            if !self.topic_ids.contains(id) {
                return Err(Error::invalid(format!("no topic with id {id}")));
            }
        }
        let keep: Vec<usize> = (0..self.n_topics())
            .filter(|&i| !drop.contains(&self.topic_ids[i]))
            .collect();
        if keep.is_empty() {
            return Err(Error::invalid("cannot drop every topic"));
        }
        let h = (0..self.n_docs())
            .flat_map(|j| keep.iter().map(move |&i| (j, i)))
            .map(|(j, i)| self.h(j, i))
            .collect();
        let w = keep.iter().flat_map(|&i| self.w_row(i).iter().copied()).collect();
        Ok(NmfFactors {
            topic_ids: keep.iter().map(|&i| self.topic_ids[i]).collect(),
            h,
            w,
            ..self.clone()
        })
    }
}

/// Frobenius norm of `M - H·W`.
pub fn reconstruction_error(m: &DocTermMatrix, f: &NmfFactors) -> Result<f64> {
    if m.n_rows() != f.n_docs() || m.n_cols() != f.n_terms() {
        return Err(Error::Dimension(format!(
            "M is {} x {}, factors are {} x {} x {}",
            m.n_rows(),
            m.n_cols(),
            f.n_docs(),
            f.n_topics(),
            f.n_terms()
        )));
    }
    Ok(frobenius_error(m, &f.h, &f.w, f.n_topics()))
}

/// `‖M − HW‖_F` in `O(nnz·n + (d + t)·n²)`.
///
/// Split as the exact residual over the stored entries plus `‖HW‖²` minus
/// its part on those entries, so dense inputs incur no cancellation.
fn frobenius_error(m: &DocTermMatrix, h: &[f64], w: &[f64], n: usize) -> f64 {
    let t = m.n_cols();
    let mut on_support = 0.0;
    let mut hw_on_support = 0.0;
    for j in 0..m.n_rows() {
        let hj = &h[j * n..(j + 1) * n];
        let (cols, vals) = m.row(j);
        for (&k, &v) in cols.iter().zip(vals) {
            let r: f64 = (0..n).map(|i| hj[i] * w[i * t + k]).sum();
            on_support += (v - r) * (v - r);
            hw_on_support += r * r;
        }
    }
    let hth = gram_rows_t(h, m.n_rows(), n);
    let wwt = gram_rows(w, n, t);
    let hw_sq: f64 = hth.iter().zip(&wwt).map(|(a, b)| a * b).sum();
    (on_support + (hw_sq - hw_on_support).max(0.0)).sqrt()
}

/// `A·Aᵀ` for a row-major `rows × cols` matrix.
fn gram_rows(a: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut g = vec![0.0; rows * rows];
    for p in 0..rows {
        for q in p..rows {
            let v: f64 = (0..cols).map(|k| a[p * cols + k] * a[q * cols + k]).sum();
            g[p * rows + q] = v;
            g[q * rows + p] = v;
        }
    }
    g
}

/// `Aᵀ·A` for a row-major `rows × cols` matrix.
fn gram_rows_t(a: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut g = vec![0.0; cols * cols];
    for r in 0..rows {
        let row = &a[r * cols..(r + 1) * cols];
        for p in 0..cols {
            for q in 0..cols {
                g[p * cols + q] += row[p] * row[q];
            }
        }
    }
    g
}

pub fn nmf_factorize(m: &DocTermMatrix, params: &NmfParams) -> Result<NmfFactors> {
    let (d, t, n) = (m.n_rows(), m.n_cols(), params.n_topics);
    if n == 0 || n > d.min(t) {
        return Err(Error::invalid(format!(
            "n_topics={n} must be in 1..={} for a {d} x {t} matrix",
            d.min(t)
        )));
    }
    if !(params.tol > 0.0) {
        return Err(Error::invalid("tol must be positive"));
    }
    if params.max_iter == 0 {
        return Err(Error::invalid("max_iter must be at least 1"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    // gen::<f64>() is in [0, 1); flip it into (0, 1].
    let mut h: Vec<f64> = (0..d * n).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let mut w: Vec<f64> = (0..n * t).map(|_| 1.0 - rng.gen::<f64>()).collect();

    let mut history = vec![frobenius_error(m, &h, &w, n)];
    let mut iterations = 0;
    for iter in 1..=params.max_iter {
        update_h(m, &mut h, &w, n);
        update_w(m, &h, &mut w, n);
        if h.iter().chain(&w).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { iteration: iter });
        }
        let err = frobenius_error(m, &h, &w, n);
        if !err.is_finite() {
            return Err(Error::NonFinite { iteration: iter });
        }
        let prev = *history.last().expect("history starts non-empty");
        history.push(err);
        iterations = iter;
        if prev == 0.0 || (prev - err) / prev < params.tol {
            break;
        }
    }

    normalize_topics(&mut h, &mut w, d, n, t);
    let final_error = frobenius_error(m, &h, &w, n);
    Ok(NmfFactors {
        doc_ids: m.doc_ids.clone(),
        terms: m.vocab.terms().to_vec(),
        topic_ids: (1..=n).collect(),
        h,
        w,
        final_error,
        iterations,
        error_history: history,
    })
}

/// `H ← H ∘ (M Wᵀ) / (H W Wᵀ + ε)`
fn update_h(m: &DocTermMatrix, h: &mut [f64], w: &[f64], n: usize) {
    let t = m.n_cols();
    let wwt = gram_rows(w, n, t);
    let mut numer = vec![0.0; n];
    for j in 0..m.n_rows() {
        numer.iter_mut().for_each(|x| *x = 0.0);
        let (cols, vals) = m.row(j);
        for (&k, &v) in cols.iter().zip(vals) {
            for i in 0..n {
                numer[i] += v * w[i * t + k];
            }
        }
        let hj = &mut h[j * n..(j + 1) * n];
        let denom: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|p| hj[p] * wwt[p * n + i]).sum::<f64>())
            .collect();
        for i in 0..n {
            hj[i] *= numer[i] / (denom[i] + EPS);
        }
    }
}

/// `W ← W ∘ (Hᵀ M) / (Hᵀ H W + ε)`
fn update_w(m: &DocTermMatrix, h: &[f64], w: &mut [f64], n: usize) {
    let t = m.n_cols();
    let hth = gram_rows_t(h, m.n_rows(), n);
    let mut numer = vec![0.0; n * t];
    for j in 0..m.n_rows() {
        let hj = &h[j * n..(j + 1) * n];
        let (cols, vals) = m.row(j);
        for (&k, &v) in cols.iter().zip(vals) {
            for i in 0..n {
                numer[i * t + k] += hj[i] * v;
            }
        }
    }
    let mut denom = vec![0.0; n * t];
    for i in 0..n {
        for p in 0..n {
            let c = hth[i * n + p];
            if c == 0.0 {
                continue;
            }
            let wp = &w[p * t..(p + 1) * t];
            for (dst, &src) in denom[i * t..(i + 1) * t].iter_mut().zip(wp) {
                *dst += c * src;
            }
        }
    }
    for ((wv, nu), de) in w.iter_mut().zip(&numer).zip(&denom) {
        *wv *= nu / (de + EPS);
    }
}

fn normalize_topics(h: &mut [f64], w: &mut [f64], d: usize, n: usize, t: usize) {
    for i in 0..n {
        let row = &mut w[i * t..(i + 1) * t];
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        row.iter_mut().for_each(|v| *v /= norm);
        for j in 0..d {
            h[j * n + i] *= norm;
        }
    }
}

/// The `k` heaviest terms of every topic, heaviest first. Equal weights are
/// ordered lexicographically.
pub fn top_keywords(f: &NmfFactors, k: usize) -> Result<Vec<Vec<String>>> {
    if k == 0 || k > f.n_terms() {
        return Err(Error::invalid(format!("k={k} must be in 1..={}", f.n_terms())));
    }
    Ok((0..f.n_topics())
        .map(|i| {
            let row = f.w_row(i);
            let mut idx: Vec<usize> = (0..f.n_terms()).collect();
            idx.sort_by(|&a, &b| {
                row[b]
                    .total_cmp(&row[a])
                    .then_with(|| f.terms[a].cmp(&f.terms[b]))
            });
            idx.into_iter().take(k).map(|c| f.terms[c].clone()).collect()
        })
        .collect())
}
