use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    aspect_level_ks, aspect_level_preference, make_pairs, system_level_ks, system_level_preference,
    transfer_experiment, win_matrix, AspectKs, AspectPolicy, BandPreference, Outcome, PairMode,
    PairParams, PairSpec, Pairing, QualityThresholds, ScoreKey, SystemPreference, TransferResult,
    WinMatrix, WinTiePolicy,
};
use crate::corpus::{system_summaries, Dataset};
use crate::exec::Execution;
use crate::preference::DEFAULT_EPSILON;
use crate::stats::{KsReport, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairModeSetting {
    /// Configured lists when the dataset has them, generated otherwise.
    #[default]
    Auto,
    Configured,
    Generated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingSetting {
    /// Matched by `pair_group` when the dataset has groups, cross product otherwise.
    #[default]
    Auto,
    ByPairGroup,
    CrossProduct,
}

/// Which assessments a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sections {
    pub transfer: bool,
    pub aspect_eval: bool,
    pub aspect_pref: bool,
    pub system_eval: bool,
    pub system_pref: bool,
    pub win_matrix: bool,
}

impl Sections {
    pub const ALL: Sections = Sections {
        transfer: true,
        aspect_eval: true,
        aspect_pref: true,
        system_eval: true,
        system_pref: true,
        win_matrix: true,
    };

    pub const NONE: Sections = Sections {
        transfer: false,
        aspect_eval: false,
        aspect_pref: false,
        system_eval: false,
        system_pref: false,
        win_matrix: false,
    };
}

impl Default for Sections {
    fn default() -> Self {
        Sections::ALL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChecklistParams {
    /// Metrics to assess; empty means every metric tagged or scored anywhere.
    pub metrics: Vec<String>,
    /// Aspects to assess; empty means each dataset's own aspects.
    pub aspects: Vec<String>,
    pub thresholds: QualityThresholds,
    pub epsilon: f64,
    pub correlation: Method,
    pub transfer_aspect_policy: AspectPolicy,
    pub pair_mode: PairModeSetting,
    pub pair_k: usize,
    pub pair_delta: Option<f64>,
    pub win_pairing: PairingSetting,
    pub tie_policy: WinTiePolicy,
    pub execution: Execution,
    #[serde(skip)]
    pub sections: Sections,
}

impl Default for ChecklistParams {
    fn default() -> Self {
        ChecklistParams {
            metrics: Vec::new(),
            aspects: Vec::new(),
            thresholds: QualityThresholds::default(),
            epsilon: DEFAULT_EPSILON,
            correlation: Method::Spearman,
            transfer_aspect_policy: AspectPolicy::Default,
            pair_mode: PairModeSetting::Auto,
            pair_k: 1,
            pair_delta: None,
            win_pairing: PairingSetting::Auto,
            tie_policy: WinTiePolicy::Half,
            execution: Execution::Parallel,
            sections: Sections::ALL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetPairs {
    pub dataset_id: String,
    pub pairs: Outcome<Vec<PairSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AspectKsEntry {
    pub dataset_id: String,
    pub metric: String,
    pub aspect: String,
    pub result: Outcome<AspectKs>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AspectPrefEntry {
    pub dataset_id: String,
    pub metric: String,
    pub aspect: String,
    pub result: Outcome<BandPreference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemKsEntry {
    pub dataset_id: String,
    pub key: ScoreKey,
    pub pair: PairSpec,
    pub result: Outcome<KsReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemPrefEntry {
    pub dataset_id: String,
    pub metric: String,
    pub aspect: String,
    pub result: Outcome<SystemPreference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinMatrixEntry {
    pub dataset_id: String,
    pub key: ScoreKey,
    pub pairing: Pairing,
    pub result: Outcome<WinMatrix>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChecklistReport {
    pub transfer: Vec<TransferResult>,
    pub pairs: Vec<DatasetPairs>,
    pub aspect_eval: Vec<AspectKsEntry>,
    pub aspect_pref: Vec<AspectPrefEntry>,
    pub system_eval: Vec<SystemKsEntry>,
    pub system_pref: Vec<SystemPrefEntry>,
    pub win_matrices: Vec<WinMatrixEntry>,
}

enum Job<'a> {
    Transfer(&'a str),
    Cell {
        ds: usize,
        metric: &'a str,
        aspect: String,
    },
    Key {
        ds: usize,
        key: ScoreKey,
    },
}

#[allow(clippy::large_enum_variant)]
enum JobOutput {
    Transfer(TransferResult),
    Cell(Option<AspectKsEntry>, Option<AspectPrefEntry>, Option<SystemPrefEntry>),
    Key(Vec<SystemKsEntry>, Option<WinMatrixEntry>),
}

fn resolve_metrics(datasets: &[Dataset], params: &ChecklistParams) -> Vec<String> {
    if !params.metrics.is_empty() {
        return params.metrics.clone();
    }
    let mut all: BTreeSet<&str> = BTreeSet::new();
    for d in datasets {
        all.extend(d.spec.metric_domains.keys().map(String::as_str));
        all.extend(d.metrics());
    }
    all.into_iter().map(str::to_string).collect()
}

fn aspects_for(dataset: &Dataset, params: &ChecklistParams) -> Vec<String> {
    if params.aspects.is_empty() {
        dataset.aspects()
    } else {
        params.aspects.clone()
    }
}

fn pairs_for(dataset: &Dataset, params: &ChecklistParams) -> Outcome<Vec<PairSpec>> {
    let mode = match params.pair_mode {
        PairModeSetting::Configured => PairMode::Configured,
        PairModeSetting::Generated => PairMode::Generated,
        PairModeSetting::Auto if dataset.spec.pair_lists.is_some() => PairMode::Configured,
        PairModeSetting::Auto => PairMode::Generated,
    };
    let pair_params = PairParams {
        k: params.pair_k,
        delta: params.pair_delta,
        overall_aspect: dataset.spec.overall_aspect().map(str::to_string),
    };
    let summaries = system_summaries(&dataset.records);
    make_pairs(&summaries, mode, &pair_params, dataset.spec.pair_lists.as_ref()).into()
}

fn pairing_for(dataset: &Dataset, setting: PairingSetting) -> Pairing {
    match setting {
        PairingSetting::ByPairGroup => Pairing::ByPairGroup,
        PairingSetting::CrossProduct => Pairing::CrossProduct,
        PairingSetting::Auto if dataset.has_pair_groups() => Pairing::ByPairGroup,
        PairingSetting::Auto => Pairing::CrossProduct,
    }
}

/// Run the selected assessments over every dataset.
///
/// Cells are independent and may be evaluated in parallel; the report is
/// assembled in a fixed order (datasets by id, then metric and aspect order),
/// so output does not depend on the execution mode.
pub fn run_checklist(datasets: &[Dataset], params: &ChecklistParams) -> ChecklistReport {
    let mut order: Vec<usize> = (0..datasets.len()).collect();
    order.sort_by(|&a, &b| datasets[a].spec.dataset_id.cmp(&datasets[b].spec.dataset_id));
    let metrics = resolve_metrics(datasets, params);
    let sections = params.sections;

    let pairs: Vec<Outcome<Vec<PairSpec>>> = datasets
        .iter()
        .map(|d| {
            if sections.system_eval {
                pairs_for(d, params)
            } else {
                Outcome::skipped("system-level evaluation not requested")
            }
        })
        .collect();

    let mut jobs: Vec<Job> = Vec::new();
    if sections.transfer {
        jobs.extend(metrics.iter().map(|m| Job::Transfer(m)));
    }
    for &ds in &order {
        let aspects = aspects_for(&datasets[ds], params);
        if sections.aspect_eval || sections.aspect_pref || sections.system_pref {
            for metric in &metrics {
                for aspect in &aspects {
                    jobs.push(Job::Cell {
                        ds,
                        metric,
                        aspect: aspect.clone(),
                    });
                }
            }
        }
        if sections.system_eval || sections.win_matrix {
            let keys = aspects
                .iter()
                .map(ScoreKey::human)
                .chain(metrics.iter().map(ScoreKey::metric));
            jobs.extend(keys.map(|key| Job::Key { ds, key }));
        }
    }

    let transfer_corpora: Vec<_> = order
        .iter()
        .map(|&i| (&datasets[i].spec, datasets[i].records.as_slice()))
        .collect();

    let outputs = params.execution.map(&jobs, |job| match job {
        Job::Transfer(metric) => JobOutput::Transfer(transfer_experiment(
            &transfer_corpora,
            metric,
            &params.transfer_aspect_policy,
            params.correlation,
        )),
        Job::Cell { ds, metric, aspect } => {
            let d = &datasets[*ds];
            let id = &d.spec.dataset_id;
            let ks = sections.aspect_eval.then(|| AspectKsEntry {
                dataset_id: id.clone(),
                metric: metric.to_string(),
                aspect: aspect.clone(),
                result: aspect_level_ks(&d.records, aspect, metric, &params.thresholds).into(),
            });
            let pref = sections.aspect_pref.then(|| AspectPrefEntry {
                dataset_id: id.clone(),
                metric: metric.to_string(),
                aspect: aspect.clone(),
                result: match aspect_level_preference(
                    &d.records,
                    aspect,
                    metric,
                    &params.thresholds,
                    params.epsilon,
                ) {
                    Ok(o) => o,
                    Err(e) => Outcome::skipped(e.to_string()),
                },
            });
            let sys = sections.system_pref.then(|| SystemPrefEntry {
                dataset_id: id.clone(),
                metric: metric.to_string(),
                aspect: aspect.clone(),
                result: system_level_preference(&d.records, aspect, metric, params.epsilon).into(),
            });
            JobOutput::Cell(ks, pref, sys)
        }
        Job::Key { ds, key } => {
            let d = &datasets[*ds];
            let id = &d.spec.dataset_id;
            let ks = match (&pairs[*ds], sections.system_eval) {
                (Outcome::Computed(ps), true) => ps
                    .iter()
                    .map(|pair| SystemKsEntry {
                        dataset_id: id.clone(),
                        key: key.clone(),
                        pair: pair.clone(),
                        result: system_level_ks(&d.records, pair, key),
                    })
                    .collect(),
                _ => Vec::new(),
            };
            let wm = sections.win_matrix.then(|| {
                let pairing = pairing_for(d, params.win_pairing);
                WinMatrixEntry {
                    dataset_id: id.clone(),
                    key: key.clone(),
                    pairing,
                    result: win_matrix(&d.records, key, pairing, params.tie_policy).into(),
                }
            });
            JobOutput::Key(ks, wm)
        }
    });

    let mut report = ChecklistReport::default();
    if sections.system_eval {
        report.pairs = order
            .iter()
            .map(|&i| DatasetPairs {
                dataset_id: datasets[i].spec.dataset_id.clone(),
                pairs: pairs[i].clone(),
            })
            .collect();
    }
    for out in outputs {
        match out {
            JobOutput::Transfer(t) => report.transfer.push(t),
            JobOutput::Cell(ks, pref, sys) => {
                report.aspect_eval.extend(ks);
                report.aspect_pref.extend(pref);
                report.system_pref.extend(sys);
            }
            JobOutput::Key(ks, wm) => {
                report.system_eval.extend(ks);
                report.win_matrices.extend(wm);
            }
        }
    }
    report
}
