//! Assignment rules and scores: matching accuracy and adjusted mutual
//! information.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::types::Coupling;

/// Row-wise argmax, lowest column on ties.
pub fn hard_assignment(pi: &Coupling) -> Vec<usize> {
    pi.as_array()
        .rows()
        .into_iter()
        .map(|row| {
            let mut best = 0;
            for (j, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Percentage of source nodes whose predicted partner is the true one.
pub fn alignment_accuracy(pred: &[usize], ground_truth: &[usize]) -> Result<f64> {
    if pred.len() < ground_truth.len() {
        return Err(Error::mismatch("prediction vs ground truth length", pred.len(), ground_truth.len()));
    }
    if ground_truth.is_empty() {
        return Err(Error::InvalidInput("empty ground truth".into()));
    }
    let hits = ground_truth.iter().zip(pred).filter(|(g, p)| g == p).count();
    Ok(100.0 * hits as f64 / ground_truth.len() as f64)
}

/// Cluster label per node for a coupling onto `k` super nodes.
pub fn partition_assign(pi: &Coupling, k: usize) -> Result<Vec<usize>> {
    if pi.cols() != k {
        return Err(Error::mismatch("coupling columns vs k", pi.cols(), k));
    }
    Ok(hard_assignment(pi))
}

struct Contingency {
    n: usize,
    a: Vec<usize>,
    b: Vec<usize>,
    cells: Vec<Vec<usize>>,
}

fn relabel(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut ids = HashMap::new();
    let dense = labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(*l).or_insert(next)
        })
        .collect();
    (dense, ids.len())
}

fn contingency(x: &[usize], y: &[usize]) -> Contingency {
    let (x, r) = relabel(x);
    let (y, c) = relabel(y);
    let mut cells = vec![vec![0usize; c]; r];
    for (&i, &j) in x.iter().zip(&y) {
        cells[i][j] += 1;
    }
    let a = cells.iter().map(|row| row.iter().sum()).collect();
    let b = (0..c).map(|j| cells.iter().map(|row| row[j]).sum()).collect();
    Contingency { n: x.len(), a, b, cells }
}

fn entropy_of_counts(counts: &[usize], n: usize) -> f64 {
    let n = n as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

fn mutual_information(t: &Contingency) -> f64 {
    let n = t.n as f64;
    let mut mi = 0.0;
    for (i, row) in t.cells.iter().enumerate() {
        for (j, &nij) in row.iter().enumerate() {
            if nij > 0 {
                let nij = nij as f64;
                mi += nij / n * (n * nij / (t.a[i] as f64 * t.b[j] as f64)).ln();
            }
        }
    }
    mi
}

/// Expected mutual information under the hypergeometric (permutation) model.
fn expected_mutual_information(t: &Contingency) -> f64 {
    let n = t.n;
    let mut ln_fact = vec![0.0f64; n + 1];
    for i in 1..=n {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let nf = n as f64;
    let mut emi = 0.0;
    for &ai in &t.a {
        for &bj in &t.b {
            let lo = (ai + bj).saturating_sub(n).max(1);
            let hi = ai.min(bj);
            for nij in lo..=hi {
                let term = nij as f64 / nf * (nf * nij as f64 / (ai as f64 * bj as f64)).ln();
                let log_p = ln_fact[ai] + ln_fact[bj] + ln_fact[n - ai] + ln_fact[n - bj]
                    - ln_fact[n]
                    - ln_fact[nij]
                    - ln_fact[ai - nij]
                    - ln_fact[bj - nij]
                    - ln_fact[n + nij - ai - bj];
                emi += term * log_p.exp();
            }
        }
    }
    emi
}

/// Adjusted mutual information with arithmetic-mean normalization:
/// `(MI - E[MI]) / (mean(H_a, H_b) - E[MI])`, or 0 when the denominator
/// vanishes.
pub fn ami_score(labels_a: &[usize], labels_b: &[usize]) -> Result<f64> {
    if labels_a.len() != labels_b.len() {
        return Err(Error::mismatch("label vectors", labels_a.len(), labels_b.len()));
    }
    if labels_a.is_empty() {
        return Err(Error::InvalidInput("AMI needs at least one label".into()));
    }
    let t = contingency(labels_a, labels_b);
    let mi = mutual_information(&t);
    let emi = expected_mutual_information(&t);
    let ha = entropy_of_counts(&t.a, t.n);
    let hb = entropy_of_counts(&t.b, t.n);
    let denom = 0.5 * (ha + hb) - emi;
    if denom <= 1e-15 {
        return Ok(0.0);
    }
    Ok((mi - emi) / denom)
}
