use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::Record;
use crate::error::{Error, Result};
use crate::stats;

/// How repeated annotator rows for the same output are merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    #[default]
    Mean,
    Median,
}

/// Metric scores of merged rows must agree to within this tolerance.
const METRIC_AGREEMENT: f64 = 1e-12;

/// Merge rows sharing (dataset, sample, system) into one record whose
/// ratings are the per-aspect mean or median. First-occurrence order is kept.
pub fn aggregate_annotators(records: &[Record], policy: Aggregation) -> Result<Vec<Record>> {
    let mut index: HashMap<(&str, &str, &str), usize> = HashMap::new();
    let mut groups: Vec<Vec<&Record>> = Vec::new();
    for r in records {
        let key = (r.dataset_id.as_str(), r.sample_id.as_str(), r.system_id.as_str());
        match index.get(&key) {
            Some(&i) => groups[i].push(r),
            None => {
                index.insert(key, groups.len());
                groups.push(vec![r]);
            }
        }
    }

    groups
        .into_iter()
        .map(|rows| {
            if rows.len() == 1 {
                return Ok(rows[0].clone());
            }
            let mut merged = rows[0].clone();
            let mut ratings: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
            for row in &rows {
                for (aspect, &v) in &row.human_ratings {
                    ratings.entry(aspect).or_default().push(v);
                }
                for (metric, &v) in &row.metric_scores {
                    match merged.metric_scores.get(metric) {
                        Some(&prev) if (prev - v).abs() > METRIC_AGREEMENT => {
                            return Err(Error::ConflictingMetric {
                                dataset: row.dataset_id.clone(),
                                sample: row.sample_id.clone(),
                                system: row.system_id.clone(),
                                metric: metric.clone(),
                                first: prev,
                                second: v,
                            });
                        }
                        Some(_) => {}
                        None => {
                            merged.metric_scores.insert(metric.clone(), v);
                        }
                    }
                }
                if merged.pair_group.is_none() {
                    merged.pair_group = row.pair_group.clone();
                }
            }
            merged.human_ratings = ratings
                .into_iter()
                .map(|(aspect, mut values)| {
                    let v = match policy {
                        Aggregation::Mean => stats::mean(&mut values),
                        Aggregation::Median => stats::median(&mut values),
                    };
                    (aspect.to_string(), v)
                })
                .collect();
            Ok(merged)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(fluency: f64) -> Record {
        Record::new("d", "s", "a", "x").with_rating("Fluency", fluency)
    }

    #[test]
    fn mean_of_two_rows() {
        let out = aggregate_annotators(&[row(4.0), row(5.0)], Aggregation::Mean).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].rating("Fluency"), Some(4.5));
    }

    #[test]
    fn median_of_three_rows() {
        let out =
            aggregate_annotators(&[row(1.0), row(5.0), row(4.0)], Aggregation::Median).unwrap();
        assert_eq!(out[0].rating("Fluency"), Some(4.0));
    }

    #[test]
    fn single_row_unchanged() {
        let r = row(3.0).with_metric("bleu", 0.3);
        let out = aggregate_annotators(std::slice::from_ref(&r), Aggregation::Mean).unwrap();
        assert_eq!(out, vec![r]);
    }

    #[test]
    fn conflicting_metric_scores() {
        let err = aggregate_annotators(
            &[row(4.0).with_metric("bleu", 0.3), row(5.0).with_metric("bleu", 0.4)],
            Aggregation::Mean,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ConflictingMetric { ref metric, .. } if metric == "bleu"));
    }

    #[test]
    fn idempotent() {
        let rows = vec![
            row(4.0).with_metric("bleu", 0.3),
            row(5.0),
            Record::new("d", "t", "a", "y").with_rating("Fluency", 2.0),
        ];
        let once = aggregate_annotators(&rows, Aggregation::Mean).unwrap();
        let twice = aggregate_annotators(&once, Aggregation::Mean).unwrap();
        assert_eq!(once, twice);
        assert_eq!(once.len(), 2);
        assert_eq!(once[0].metric("bleu"), Some(0.3));
    }
}
