use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::{DatasetSpec, Record, DEFAULT_RATING_MAX, DEFAULT_RATING_MIN};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub locator: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
    pub counts: BTreeMap<String, usize>,
}

impl ValidationReport {
    pub fn is_accepted(&self) -> bool {
        self.errors.is_empty()
    }

    fn error(&mut self, locator: impl Into<String>, message: impl Into<String>) {
        self.errors.push(Issue {
            locator: locator.into(),
            message: message.into(),
        });
    }

    fn warn(&mut self, locator: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(Issue {
            locator: locator.into(),
            message: message.into(),
        });
    }
}

/// Check rating bounds, key uniqueness, non-empty outputs and the
/// consistency of dataset specs with the records they describe.
pub fn validate(records: &[Record], specs: &[DatasetSpec]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let by_id: HashMap<&str, &DatasetSpec> =
        specs.iter().map(|s| (s.dataset_id.as_str(), s)).collect();

    for spec in specs {
        let loc = format!("dataset:{}", spec.dataset_id);
        if spec.rating_min.partial_cmp(&spec.rating_max) != Some(std::cmp::Ordering::Less) {
            report.error(
                &loc,
                format!(
                    "rating_min ({}) must be below rating_max ({})",
                    spec.rating_min, spec.rating_max
                ),
            );
        }
    }
    if by_id.len() != specs.len() {
        report.error("datasets", "dataset ids are not unique");
    }

    let mut seen = HashSet::with_capacity(records.len());
    let mut systems: HashMap<&str, BTreeSet<&str>> = HashMap::new();
    let mut metrics: HashMap<&str, BTreeSet<&str>> = HashMap::new();
    let mut unspecified: BTreeSet<&str> = BTreeSet::new();

    for r in records {
        let key = r.key();
        *report.counts.entry(r.dataset_id.clone()).or_default() += 1;
        if !seen.insert(key) {
            report.error(key.to_string(), "duplicate (dataset, sample, system)");
        }
        if r.output_text.trim().is_empty() {
            report.error(key.to_string(), "output is empty");
        }
        let (lo, hi) = match by_id.get(r.dataset_id.as_str()) {
            Some(spec) => (spec.rating_min, spec.rating_max),
            None => {
                unspecified.insert(&r.dataset_id);
                (DEFAULT_RATING_MIN, DEFAULT_RATING_MAX)
            }
        };
        for (aspect, &value) in &r.human_ratings {
            if !value.is_finite() {
                report.error(key.to_string(), format!("rating `{aspect}` is not finite"));
            } else if value < lo || value > hi {
                report.error(
                    key.to_string(),
                    format!("rating `{aspect}` = {value} outside [{lo}, {hi}]"),
                );
            }
        }
        systems
            .entry(&r.dataset_id)
            .or_default()
            .insert(&r.system_id);
        metrics
            .entry(&r.dataset_id)
            .or_default()
            .extend(r.metric_scores.keys().map(String::as_str));
    }

    for ds in unspecified {
        report.warn(
            format!("dataset:{ds}"),
            "no dataset spec; using default rating scale [1, 5]",
        );
    }

    let empty = BTreeSet::new();
    for spec in specs {
        let loc = format!("dataset:{}", spec.dataset_id);
        if !report.counts.contains_key(&spec.dataset_id) {
            report.warn(&loc, "no records for dataset");
        }
        let present = metrics.get(spec.dataset_id.as_str()).unwrap_or(&empty);
        for metric in spec.metric_domains.keys() {
            if !present.contains(metric.as_str()) {
                report.warn(&loc, format!("metric `{metric}` has no scores in any record"));
            }
        }
        let Some(pairs) = &spec.pair_lists else {
            continue;
        };
        let known = systems.get(spec.dataset_id.as_str()).unwrap_or(&empty);
        for (difficulty, (a, b)) in pairs.iter() {
            let ploc = format!("{loc}/pairs/{difficulty}");
            if a == b {
                report.error(&ploc, format!("pair ({a}, {b}) compares a system with itself"));
            }
            for system in [a, b] {
                if !known.contains(system.as_str()) {
                    report.error(&ploc, format!("unknown system `{system}`"));
                }
            }
        }
    }
    report
}
