use std::collections::{BTreeMap, BTreeSet};

use super::{DatasetSpec, Record, Task};

/// One dataset's spec together with its records.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub spec: DatasetSpec,
    pub records: Vec<Record>,
}

impl Dataset {
    /// Aspects listed in the spec, or every aspect seen on a record.
    pub fn aspects(&self) -> Vec<String> {
        if !self.spec.aspects.is_empty() {
            return self.spec.aspects.clone();
        }
        let seen: BTreeSet<&String> = self.records.iter().flat_map(|r| r.human_ratings.keys()).collect();
        seen.into_iter().cloned().collect()
    }

    pub fn metrics(&self) -> BTreeSet<&str> {
        self.records
            .iter()
            .flat_map(|r| r.metric_scores.keys().map(String::as_str))
            .collect()
    }

    pub fn has_pair_groups(&self) -> bool {
        self.records.iter().any(|r| r.pair_group.is_some())
    }
}

/// Group records under their dataset specs, sorted by dataset id. Records of
/// a dataset without a spec get a default one (task `Other`, scale 1–5).
pub fn assemble(specs: &[DatasetSpec], records: Vec<Record>) -> Vec<Dataset> {
    let mut grouped: BTreeMap<String, Vec<Record>> = BTreeMap::new();
    for r in records {
        grouped.entry(r.dataset_id.clone()).or_default().push(r);
    }
    let mut out: Vec<Dataset> = specs
        .iter()
        .map(|spec| Dataset {
            records: grouped.remove(&spec.dataset_id).unwrap_or_default(),
            spec: spec.clone(),
        })
        .collect();
    out.extend(grouped.into_iter().map(|(id, records)| Dataset {
        spec: DatasetSpec::new(id, Task::Other),
        records,
    }));
    out.sort_by(|a, b| a.spec.dataset_id.cmp(&b.spec.dataset_id));
    out
}
