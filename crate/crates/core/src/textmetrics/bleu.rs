use serde::{Deserialize, Serialize};

use super::ngram_counts;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothing {
    None,
    /// Add one to numerator and denominator of every precision with n >= 2.
    #[default]
    AddOne,
}

pub const DEFAULT_MAX_N: usize = 4;

/// Sentence BLEU: geometric mean of clipped n-gram precisions (orders
/// 1..=max_n) times the brevity penalty `min(1, exp(1 - r/c))`, where `r` is
/// the reference length closest to the hypothesis length `c` (shorter wins
/// ties). Clipping uses the maximum count of each n-gram over all references.
pub fn bleu<S: AsRef<str>>(
    hypothesis: &[S],
    references: &[Vec<S>],
    max_n: usize,
    smoothing: Smoothing,
) -> Result<f64> {
    if max_n == 0 {
        return Err(Error::InvalidArgument("BLEU max_n must be at least 1".into()));
    }
    if !references.iter().any(|r| !r.is_empty()) {
        return Err(Error::InvalidArgument("BLEU needs a non-empty reference".into()));
    }
    let hyp: Vec<&str> = hypothesis.iter().map(AsRef::as_ref).collect();
    if hyp.is_empty() {
        return Ok(0.0);
    }
    let refs: Vec<Vec<&str>> = references
        .iter()
        .map(|r| r.iter().map(AsRef::as_ref).collect())
        .collect();

    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let hyp_counts = ngram_counts(&hyp, n);
        let total: usize = hyp_counts.values().sum();
        let ref_counts: Vec<_> = refs.iter().map(|r| ngram_counts(r, n)).collect();
        let matched: usize = hyp_counts
            .iter()
            .map(|(gram, &c)| {
                let max_ref = ref_counts
                    .iter()
                    .map(|rc| rc.get(gram).copied().unwrap_or(0))
                    .max()
                    .unwrap_or(0);
                c.min(max_ref)
            })
            .sum();
        let (num, den) = match smoothing {
            Smoothing::AddOne if n >= 2 => (matched + 1, total + 1),
            _ => (matched, total),
        };
        if num == 0 || den == 0 {
            return Ok(0.0);
        }
        log_sum += (num as f64 / den as f64).ln();
    }

    let c = hyp.len();
    let r = refs
        .iter()
        .map(Vec::len)
        .filter(|&l| l > 0)
        .min_by_key(|&l| (l.abs_diff(c), l))
        .expect("checked non-empty reference");
    let bp = if c >= r {
        1.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    };
    Ok((bp * (log_sum / max_n as f64).exp()).clamp(0.0, 1.0))
}
