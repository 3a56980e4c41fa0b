use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{DatasetSpec, Domain, Record, Task};
use crate::stats::{self, correlation, CorrelationResult, Method};

/// Which human score a record is correlated against.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum AspectPolicy {
    /// The dataset's Overall aspect when it has one, else the mean of its aspects.
    #[default]
    Default,
    /// Mean of the record's ratings over the dataset's (non-Overall) aspects.
    Mean,
    Named(String),
}

impl From<String> for AspectPolicy {
    fn from(s: String) -> Self {
        match s.as_str() {
            "default" => AspectPolicy::Default,
            "mean" => AspectPolicy::Mean,
            _ => AspectPolicy::Named(s),
        }
    }
}

impl From<AspectPolicy> for String {
    fn from(p: AspectPolicy) -> Self {
        p.to_string()
    }
}

impl fmt::Display for AspectPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AspectPolicy::Default => f.write_str("default"),
            AspectPolicy::Mean => f.write_str("mean"),
            AspectPolicy::Named(a) => f.write_str(a),
        }
    }
}

type Scorer<'s> = Box<dyn Fn(&Record) -> Option<f64> + 's>;

/// Resolve the policy for one dataset into a label and a scoring function.
fn human_score<'s>(
    spec: &'s DatasetSpec,
    policy: &'s AspectPolicy,
) -> (String, Scorer<'s>) {
    let mean_over = move |r: &Record| -> Option<f64> {
        let mut values: Vec<f64> = if spec.aspects.is_empty() {
            r.human_ratings
                .iter()
                .filter(|(k, _)| !k.eq_ignore_ascii_case("overall"))
                .map(|(_, &v)| v)
                .filter(|v| v.is_finite())
                .collect()
        } else {
            spec.aspects
                .iter()
                .filter(|a| !a.eq_ignore_ascii_case("overall"))
                .filter_map(|a| r.rating(a))
                .collect()
        };
        (!values.is_empty()).then(|| stats::mean(&mut values))
    };
    match policy {
        AspectPolicy::Named(a) => (a.clone(), Box::new(move |r| r.rating(a))),
        AspectPolicy::Mean => ("mean".into(), Box::new(mean_over)),
        AspectPolicy::Default => match spec.overall_aspect() {
            Some(overall) => (overall.to_string(), Box::new(move |r| r.rating(overall))),
            None => ("mean".into(), Box::new(mean_over)),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferEntry {
    pub dataset_id: String,
    pub task: Task,
    pub domain: Domain,
    /// Human score actually used (aspect name or "mean").
    pub aspect: String,
    pub pearson: CorrelationResult,
    pub spearman: CorrelationResult,
}

impl TransferEntry {
    pub fn rho(&self, method: Method) -> Option<f64> {
        match method {
            Method::Pearson => self.pearson.rho,
            Method::Spearman => self.spearman.rho,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMean {
    pub group: String,
    pub mean_rho: Option<f64>,
    /// Datasets contributing a defined coefficient.
    pub datasets: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferResult {
    pub metric: String,
    pub policy: AspectPolicy,
    pub method: Method,
    pub per_dataset: Vec<TransferEntry>,
    pub by_domain: Vec<GroupMean>,
    pub by_task: Vec<GroupMean>,
    pub skipped: Vec<(String, String)>,
}

fn group_means<K: Ord + ToString>(entries: impl Iterator<Item = (K, Option<f64>)>) -> Vec<GroupMean> {
    let mut groups: BTreeMap<K, Vec<f64>> = BTreeMap::new();
    for (k, rho) in entries {
        let values = groups.entry(k).or_default();
        if let Some(r) = rho {
            values.push(r);
        }
    }
    groups
        .into_iter()
        .map(|(k, mut v)| GroupMean {
            group: k.to_string(),
            datasets: v.len(),
            mean_rho: (!v.is_empty()).then(|| stats::mean(&mut v)),
        })
        .collect()
}

/// Correlate a metric with human scores in every dataset that tags it with
/// a domain, then average the coefficients per domain tag and per task.
pub fn transfer_experiment(
    corpora: &[(&DatasetSpec, &[Record])],
    metric: &str,
    policy: &AspectPolicy,
    method: Method,
) -> TransferResult {
    let mut per_dataset = Vec::new();
    let mut skipped = Vec::new();
    for (spec, records) in corpora {
        let Some(&domain) = spec.metric_domains.get(metric) else {
            log::warn!("transfer: metric `{metric}` has no domain tag in `{}`", spec.dataset_id);
            skipped.push((spec.dataset_id.clone(), format!("metric `{metric}` is not tagged for this dataset")));
            continue;
        };
        let (aspect, score) = human_score(spec, policy);
        let (xs, ys): (Vec<f64>, Vec<f64>) = records
            .iter()
            .map(|r| {
                (
                    r.metric(metric).unwrap_or(f64::NAN),
                    score(r).unwrap_or(f64::NAN),
                )
            })
            .unzip();
        if !xs.iter().any(|x| x.is_finite()) {
            skipped.push((spec.dataset_id.clone(), format!("metric `{metric}` has no scores")));
            continue;
        }
        let pearson = correlation(&xs, &ys, Method::Pearson).expect("equal lengths");
        let spearman = correlation(&xs, &ys, Method::Spearman).expect("equal lengths");
        per_dataset.push(TransferEntry {
            dataset_id: spec.dataset_id.clone(),
            task: spec.task,
            domain,
            aspect,
            pearson,
            spearman,
        });
    }
    let by_domain = group_means(per_dataset.iter().map(|e| (e.domain, e.rho(method))));
    let by_task = group_means(per_dataset.iter().map(|e| (e.task, e.rho(method))));
    TransferResult {
        metric: metric.to_string(),
        policy: policy.clone(),
        method,
        per_dataset,
        by_domain,
        by_task,
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(id: &str, task: Task, domain: Domain, sign: f64) -> (DatasetSpec, Vec<Record>) {
        let spec = DatasetSpec::new(id, task)
            .with_aspects(["Fluency", "Overall"])
            .with_domain("m", domain);
        let records = (0..20)
            .map(|i| {
                let h = 1.0 + (i % 5) as f64;
                Record::new(id, i.to_string(), "s", "x")
                    .with_rating("Overall", h)
                    .with_rating("Fluency", 6.0 - h)
                    .with_metric("m", sign * h)
            })
            .collect();
        (spec, records)
    }

    #[test]
    fn perfect_and_negated_metric() {
        let a = dataset("a", Task::TextSumm, Domain::InDomain, 1.0);
        let b = dataset("b", Task::DiagGen, Domain::DomainShift, -1.0);
        let corpora = [(&a.0, a.1.as_slice()), (&b.0, b.1.as_slice())];
        let t = transfer_experiment(&corpora, "m", &AspectPolicy::Default, Method::Spearman);
        assert_eq!(t.per_dataset.len(), 2);
        assert_eq!(t.per_dataset[0].aspect, "Overall");
        assert_eq!(t.per_dataset[0].spearman.rho, Some(1.0));
        assert_eq!(t.per_dataset[1].spearman.rho, Some(-1.0));
        assert_eq!(t.by_domain.len(), 2);
        assert_eq!(t.by_domain[0].group, "InDomain");
        assert_eq!(t.by_domain[0].mean_rho, Some(1.0));
        assert_eq!(t.by_task.iter().find(|g| g.group == "DiagGen").unwrap().mean_rho, Some(-1.0));
    }

    #[test]
    fn named_and_mean_policies() {
        let a = dataset("a", Task::TextSumm, Domain::InDomain, 1.0);
        let corpora = [(&a.0, a.1.as_slice())];
        let t = transfer_experiment(&corpora, "m", &AspectPolicy::Named("Fluency".into()), Method::Pearson);
        assert!((t.per_dataset[0].pearson.rho.unwrap() + 1.0).abs() < 1e-12);
        // mean over non-Overall aspects == Fluency here
        let t = transfer_experiment(&corpora, "m", &AspectPolicy::Mean, Method::Spearman);
        assert_eq!(t.per_dataset[0].aspect, "mean");
        assert_eq!(t.per_dataset[0].spearman.rho, Some(-1.0));
    }

    #[test]
    fn untagged_dataset_skipped() {
        let mut a = dataset("a", Task::TextSumm, Domain::InDomain, 1.0);
        a.0.metric_domains.clear();
        let corpora = [(&a.0, a.1.as_slice())];
        let t = transfer_experiment(&corpora, "m", &AspectPolicy::Default, Method::Spearman);
        assert!(t.per_dataset.is_empty());
        assert_eq!(t.skipped.len(), 1);
    }

    #[test]
    fn policy_strings() {
        assert_eq!(AspectPolicy::from("default".to_string()), AspectPolicy::Default);
        assert_eq!(AspectPolicy::from("Fluency".to_string()), AspectPolicy::Named("Fluency".into()));
        assert_eq!(String::from(AspectPolicy::Mean), "mean");
    }
}
