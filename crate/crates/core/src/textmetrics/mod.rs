//! Surface-level metrics computed natively from text: BLEU, ROUGE-N and
//! token edit distance.

mod bleu;
mod rouge;
mod tokenize;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use bleu::{bleu, Smoothing, DEFAULT_MAX_N};
pub use rouge::{rouge_n, rouge_n_with, NgramScore};
pub use tokenize::{tokenize, TokenizerOptions};

use crate::corpus::Record;
use crate::error::Result;

/// Token-level Levenshtein distance; same routine as the preference module.
pub fn token_edit_distance<S: AsRef<str>>(a: &[S], b: &[S]) -> usize {
    let a: Vec<&str> = a.iter().map(AsRef::as_ref).collect();
    let b: Vec<&str> = b.iter().map(AsRef::as_ref).collect();
    crate::preference::edit_distance(&a, &b)
}

pub(crate) fn ngram_counts<'t, 'a>(tokens: &'t [&'a str], n: usize) -> HashMap<&'t [&'a str], usize> {
    let mut counts = HashMap::new();
    if n == 0 || tokens.len() < n {
        return counts;
    }
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// How several references are combined into one score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefAggregation {
    #[default]
    Mean,
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RougeStat {
    Precision,
    Recall,
    #[default]
    F1,
}

/// Settings for adding native metric columns to records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScoreOptions {
    pub tokenizer: TokenizerOptions,
    pub bleu_max_n: usize,
    pub smoothing: Smoothing,
    pub rouge_orders: Vec<usize>,
    pub rouge_stat: RougeStat,
    pub aggregation: RefAggregation,
    /// Overwrite an existing score with the same column name.
    pub replace: bool,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        ScoreOptions {
            tokenizer: TokenizerOptions::default(),
            bleu_max_n: DEFAULT_MAX_N,
            smoothing: Smoothing::AddOne,
            rouge_orders: vec![1, 2],
            rouge_stat: RougeStat::F1,
            aggregation: RefAggregation::Mean,
            replace: false,
        }
    }
}

impl ScoreOptions {
    /// Column name for BLEU, carrying the variant so native scores are never
    /// mistaken for a benchmark's own columns.
    pub fn bleu_column(&self) -> String {
        let smoothing = match self.smoothing {
            Smoothing::None => "nosmooth",
            Smoothing::AddOne => "add1",
        };
        format!("bleu{}_{}_{}", self.bleu_max_n, smoothing, agg_name(self.aggregation))
    }

    pub fn rouge_column(&self, n: usize) -> String {
        let stat = match self.rouge_stat {
            RougeStat::Precision => "p",
            RougeStat::Recall => "r",
            RougeStat::F1 => "f",
        };
        format!("rouge{n}_{stat}_{}", agg_name(self.aggregation))
    }
}

fn agg_name(a: RefAggregation) -> &'static str {
    match a {
        RefAggregation::Mean => "mean",
        RefAggregation::Best => "best",
    }
}

/// Add BLEU and ROUGE-N columns to every record that has a non-empty
/// reference. Returns the number of records scored.
pub fn score_records(records: &mut [Record], options: &ScoreOptions) -> Result<usize> {
    let bleu_col = options.bleu_column();
    let mut scored = 0;
    for record in records.iter_mut() {
        let hyp = tokenize(&record.output_text, &options.tokenizer);
        let refs: Vec<Vec<String>> = record
            .references
            .iter()
            .map(|r| tokenize(r, &options.tokenizer))
            .filter(|r| !r.is_empty())
            .collect();
        if refs.is_empty() {
            continue;
        }
        let per_ref: Vec<f64> = refs
            .iter()
            .map(|r| bleu(&hyp, std::slice::from_ref(r), options.bleu_max_n, options.smoothing))
            .collect::<Result<_>>()?;
        let b = match options.aggregation {
            RefAggregation::Mean => per_ref.iter().sum::<f64>() / per_ref.len() as f64,
            RefAggregation::Best => per_ref.iter().copied().fold(0.0, f64::max),
        };
        put(record, &bleu_col, b, options.replace);
        for &n in &options.rouge_orders {
            let s = rouge_n_with(&hyp, &refs, n, options.aggregation)?;
            let v = match options.rouge_stat {
                RougeStat::Precision => s.precision,
                RougeStat::Recall => s.recall,
                RougeStat::F1 => s.f1,
            };
            put(record, &options.rouge_column(n), v, options.replace);
        }
        scored += 1;
    }
    Ok(scored)
}

fn put(record: &mut Record, column: &str, value: f64, replace: bool) {
    if replace || !record.metric_scores.contains_key(column) {
        record.metric_scores.insert(column.to_string(), value);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_distance_matches_preference_routine() {
        assert_eq!(token_edit_distance(&["a", "b"], &["b", "a"]), 2);
        assert_eq!(token_edit_distance::<&str>(&[], &[]), 0);
    }

    #[test]
    fn score_adds_labelled_columns() {
        let mut r = Record::new("d", "1", "a", "The cat sat.");
        r.references = vec!["the cat sat".into()];
        let mut records = vec![r, Record::new("d", "2", "a", "no refs")];
        let opts = ScoreOptions {
            bleu_max_n: 2,
            ..ScoreOptions::default()
        };
        assert_eq!(score_records(&mut records, &opts).unwrap(), 1);
        assert_eq!(records[0].metric("bleu2_add1_mean"), Some(1.0));
        assert_eq!(records[0].metric("rouge1_f_mean"), Some(1.0));
        assert_eq!(records[0].metric("rouge2_f_mean"), Some(1.0));
        assert!(records[1].metric_scores.is_empty());
    }

    #[test]
    fn score_keeps_existing_unless_replace() {
        let mut r = Record::new("d", "1", "a", "x y").with_metric("rouge1_f_mean", 0.123);
        r.references = vec!["x y".into()];
        let mut records = vec![r];
        score_records(&mut records, &ScoreOptions::default()).unwrap();
        assert_eq!(records[0].metric("rouge1_f_mean"), Some(0.123));
        let opts = ScoreOptions {
            replace: true,
            ..ScoreOptions::default()
        };
        score_records(&mut records, &opts).unwrap();
        assert_eq!(records[0].metric("rouge1_f_mean"), Some(1.0));
    }
}
