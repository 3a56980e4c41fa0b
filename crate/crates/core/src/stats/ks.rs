use serde::{Deserialize, Serialize};

use super::Ecdf;
use crate::error::Result;

/// Two-sample Kolmogorov–Smirnov distance between labelled score sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub label_a: String,
    pub label_b: String,
    pub d: f64,
    pub n_a: usize,
    pub n_b: usize,
}

/// `sup_s |F_a(s) - F_b(s)|` over the pooled sample points.
///
/// Both ECDFs are step functions that only change at sample points, so the
/// supremum is attained at one of them. No p-value is computed.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<KsReport> {
    ks_between("a", a, "b", b)
}

pub fn ks_between(label_a: &str, a: &[f64], label_b: &str, b: &[f64]) -> Result<KsReport> {
    let fa = Ecdf::labeled(label_a, a)?;
    let fb = Ecdf::labeled(label_b, b)?;
    Ok(KsReport {
        label_a: label_a.to_string(),
        label_b: label_b.to_string(),
        d: sup_distance(fa.samples(), fb.samples()),
        n_a: a.len(),
        n_b: b.len(),
    })
}

/// Merge walk over two sorted samples. At each distinct value both cursors
/// advance past every copy of it, so `i`/`j` are the `<=` counts there.
fn sup_distance(xs: &[f64], ys: &[f64]) -> f64 {
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xs.len() || j < ys.len() {
        let next = match (xs.get(i), ys.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < xs.len() && xs[i] <= next {
            i += 1;
        }
        while j < ys.len() && ys[j] <= next {
            j += 1;
        }
        let diff = (i as f64 / n - j as f64 / m).abs();
        if diff > d {
            d = diff;
        }
    }
    d
}
