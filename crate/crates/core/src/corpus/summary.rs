use std::collections::BTreeMap;

use serde::Serialize;

use super::Record;
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanN {
    pub mean: f64,
    pub n: usize,
}

/// Per-system averages: the utility of a system under each aspect or metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemSummary {
    pub system_id: String,
    pub aspects: BTreeMap<String, MeanN>,
    pub metrics: BTreeMap<String, MeanN>,
    pub n: usize,
}

fn means(values: BTreeMap<&str, Vec<f64>>) -> BTreeMap<String, MeanN> {
    values
        .into_iter()
        .map(|(k, mut v)| {
            let n = v.len();
            (k.to_string(), MeanN { mean: stats::mean(&mut v), n })
        })
        .collect()
}

/// Summaries sorted by system id. Missing and non-finite values are skipped;
/// a key absent from all of a system's records is absent from its summary.
pub fn system_summaries(records: &[Record]) -> Vec<SystemSummary> {
    type Acc<'a> = (BTreeMap<&'a str, Vec<f64>>, BTreeMap<&'a str, Vec<f64>>, usize);
    let mut by_system: BTreeMap<&str, Acc> = BTreeMap::new();
    for r in records {
        let (aspects, metrics, n) = by_system.entry(&r.system_id).or_default();
        *n += 1;
        for (k, &v) in &r.human_ratings {
            if v.is_finite() {
                aspects.entry(k).or_default().push(v);
            }
        }
        for (k, &v) in &r.metric_scores {
            if v.is_finite() {
                metrics.entry(k).or_default().push(v);
            }
        }
    }
    by_system
        .into_iter()
        .map(|(system, (aspects, metrics, n))| SystemSummary {
            system_id: system.to_string(),
            aspects: means(aspects),
            metrics: means(metrics),
            n,
        })
        .collect()
}
