use serde::{Deserialize, Serialize};

use super::{ngram_counts, RefAggregation};
use crate::error::{Error, Result};

/// Clipped n-gram overlap against one reference set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NgramScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub n: usize,
}

impl NgramScore {
    fn from_counts(matched: usize, hyp_total: usize, ref_total: usize, n: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(matched, hyp_total);
        let recall = ratio(matched, ref_total);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        NgramScore {
            precision,
            recall,
            f1,
            n,
        }
    }
}

fn rouge_single(hyp: &[&str], reference: &[&str], n: usize) -> NgramScore {
    let hyp_counts = ngram_counts(hyp, n);
    let ref_counts = ngram_counts(reference, n);
    let matched = ref_counts
        .iter()
        .map(|(gram, &c)| c.min(hyp_counts.get(gram).copied().unwrap_or(0)))
        .sum();
    NgramScore::from_counts(
        matched,
        hyp_counts.values().sum(),
        ref_counts.values().sum(),
        n,
    )
}

/// ROUGE-N with the default multi-reference aggregation (mean).
pub fn rouge_n<S: AsRef<str>>(hypothesis: &[S], references: &[Vec<S>], n: usize) -> Result<NgramScore> {
    rouge_n_with(hypothesis, references, n, RefAggregation::Mean)
}

/// ROUGE-N scored per reference, then averaged or maximised (by F1).
/// A reference shorter than `n` contributes zero n-grams and scores zero.
pub fn rouge_n_with<S: AsRef<str>>(
    hypothesis: &[S],
    references: &[Vec<S>],
    n: usize,
    aggregation: RefAggregation,
) -> Result<NgramScore> {
    if n == 0 {
        return Err(Error::InvalidArgument("ROUGE-N needs n >= 1".into()));
    }
    let hyp: Vec<&str> = hypothesis.iter().map(AsRef::as_ref).collect();
    let per_ref: Vec<NgramScore> = references
        .iter()
        .map(|r| {
            let r: Vec<&str> = r.iter().map(AsRef::as_ref).collect();
            rouge_single(&hyp, &r, n)
        })
        .collect();
    if per_ref.is_empty() {
        return Ok(NgramScore::from_counts(0, 0, 0, n));
    }
    Ok(match aggregation {
        RefAggregation::Best => per_ref
            .into_iter()
            .max_by(|a, b| a.f1.total_cmp(&b.f1).then(a.recall.total_cmp(&b.recall)))
            .expect("non-empty"),
        RefAggregation::Mean => {
            let k = per_ref.len() as f64;
            NgramScore {
                precision: per_ref.iter().map(|s| s.precision).sum::<f64>() / k,
                recall: per_ref.iter().map(|s| s.recall).sum::<f64>() / k,
                f1: per_ref.iter().map(|s| s.f1).sum::<f64>() / k,
                n,
            }
        }
    })
}
