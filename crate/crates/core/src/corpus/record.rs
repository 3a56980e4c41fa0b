use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One system output together with its human ratings and metric scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    #[serde(rename = "dataset")]
    pub dataset_id: String,
    #[serde(rename = "sample")]
    pub sample_id: String,
    #[serde(rename = "system")]
    pub system_id: String,
    #[serde(rename = "source", default, skip_serializing_if = "Option::is_none")]
    pub source_text: Option<String>,
    #[serde(rename = "output")]
    pub output_text: String,
    #[serde(default)]
    pub references: Vec<String>,
    #[serde(rename = "human", default)]
    pub human_ratings: BTreeMap<String, f64>,
    #[serde(rename = "metrics", default)]
    pub metric_scores: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_group: Option<String>,
}

impl Record {
    pub fn new(
        dataset_id: impl Into<String>,
        sample_id: impl Into<String>,
        system_id: impl Into<String>,
        output_text: impl Into<String>,
    ) -> Self {
        Record {
            dataset_id: dataset_id.into(),
            sample_id: sample_id.into(),
            system_id: system_id.into(),
            source_text: None,
            output_text: output_text.into(),
            references: Vec::new(),
            human_ratings: BTreeMap::new(),
            metric_scores: BTreeMap::new(),
            pair_group: None,
        }
    }

    pub fn with_rating(mut self, aspect: impl Into<String>, value: f64) -> Self {
        self.human_ratings.insert(aspect.into(), value);
        self
    }

    pub fn with_metric(mut self, metric: impl Into<String>, value: f64) -> Self {
        self.metric_scores.insert(metric.into(), value);
        self
    }

    pub fn with_pair_group(mut self, group: impl Into<String>) -> Self {
        self.pair_group = Some(group.into());
        self
    }

    pub fn key(&self) -> RecordKey<'_> {
        RecordKey {
            dataset: &self.dataset_id,
            sample: &self.sample_id,
            system: &self.system_id,
        }
    }

    /// Finite rating for `aspect`, if present.
    pub fn rating(&self, aspect: &str) -> Option<f64> {
        self.human_ratings
            .get(aspect)
            .copied()
            .filter(|v| v.is_finite())
    }

    /// Finite score for `metric`, if present.
    pub fn metric(&self, metric: &str) -> Option<f64> {
        self.metric_scores
            .get(metric)
            .copied()
            .filter(|v| v.is_finite())
    }
}

/// Identity of a record within a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RecordKey<'a> {
    pub dataset: &'a str,
    pub sample: &'a str,
    pub system: &'a str,
}

impl std::fmt::Display for RecordKey<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.dataset, self.sample, self.system)
    }
}
