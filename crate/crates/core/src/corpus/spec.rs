use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Record;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Task {
    TextSumm,
    DiagGen,
    CtrlGen,
    Other,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Task::TextSumm => "TextSumm",
            Task::DiagGen => "DiagGen",
            Task::CtrlGen => "CtrlGen",
            Task::Other => "Other",
        };
        f.write_str(s)
    }
}

/// Where a dataset sits relative to the data a metric was introduced or tuned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Domain {
    InDomain,
    SemanticShift,
    DomainShift,
}

impl Domain {
    pub const ALL: [Domain; 3] = [Domain::InDomain, Domain::SemanticShift, Domain::DomainShift];
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Domain::InDomain => "InDomain",
            Domain::SemanticShift => "SemanticShift",
            Domain::DomainShift => "DomainShift",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Difficulty {
    Easy,
    Hard,
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Difficulty::Easy => "Easy",
            Difficulty::Hard => "Hard",
        })
    }
}

/// Configured Easy/Hard system pairs for one dataset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PairLists {
    #[serde(default)]
    pub easy: Vec<(String, String)>,
    #[serde(default)]
    pub hard: Vec<(String, String)>,
}

impl PairLists {
    pub fn iter(&self) -> impl Iterator<Item = (Difficulty, &(String, String))> {
        self.easy
            .iter()
            .map(|p| (Difficulty::Easy, p))
            .chain(self.hard.iter().map(|p| (Difficulty::Hard, p)))
    }
}

pub const DEFAULT_RATING_MIN: f64 = 1.0;
pub const DEFAULT_RATING_MAX: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub dataset_id: String,
    pub task: Task,
    pub aspects: Vec<String>,
    pub rating_min: f64,
    pub rating_max: f64,
    pub metric_domains: BTreeMap<String, Domain>,
    pub pair_lists: Option<PairLists>,
}

impl DatasetSpec {
    pub fn new(dataset_id: impl Into<String>, task: Task) -> Self {
        DatasetSpec {
            dataset_id: dataset_id.into(),
            task,
            aspects: Vec::new(),
            rating_min: DEFAULT_RATING_MIN,
            rating_max: DEFAULT_RATING_MAX,
            metric_domains: BTreeMap::new(),
            pair_lists: None,
        }
    }

    pub fn with_aspects<I, S>(mut self, aspects: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.aspects = aspects.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_domain(mut self, metric: impl Into<String>, domain: Domain) -> Self {
        self.metric_domains.insert(metric.into(), domain);
        self
    }

    pub fn in_bounds(&self, rating: f64) -> bool {
        rating >= self.rating_min && rating <= self.rating_max
    }

    /// The aspect used as a dataset-wide quality summary, when the dataset has one.
    pub fn overall_aspect(&self) -> Option<&str> {
        self.aspects
            .iter()
            .find(|a| a.eq_ignore_ascii_case("overall"))
            .map(String::as_str)
    }
}

/// Case-insensitive aspect name normalization.
///
/// Keys are folded to lowercase with non-alphanumerics removed, so
/// `"Maintains Context"`, `"maintains_context"` and `"MaintainsContext"`
/// all resolve to the same canonical name.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AliasMap {
    map: BTreeMap<String, String>,
}

const DEFAULT_ASPECTS: &[&str] = &[
    "Coherence",
    "Consistency",
    "Fluency",
    "Relevance",
    "Informativeness",
    "Overall",
    "Understandable",
    "Natural",
    "MaintainsContext",
    "Engaging",
    "UsesKnowledge",
    "Understandability",
    "Naturalness",
    "Engagingness",
    "Groundedness",
];

fn fold(name: &str) -> String {
    name.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

impl AliasMap {
    pub fn empty() -> Self {
        AliasMap::default()
    }

    pub fn insert(&mut self, alias: &str, canonical: &str) {
        self.map.insert(fold(alias), canonical.to_string());
        self.map.insert(fold(canonical), canonical.to_string());
    }

    /// Canonical spelling of `name`; unknown names come back unchanged.
    pub fn canonical(&self, name: &str) -> String {
        self.map
            .get(&fold(name))
            .cloned()
            .unwrap_or_else(|| name.to_string())
    }

    /// Rewrite human-rating keys of every record to their canonical names.
    pub fn normalize_records(&self, records: &mut [Record]) {
        for record in records {
            if record.human_ratings.keys().all(|k| self.canonical(k) == *k) {
                continue;
            }
            let ratings = std::mem::take(&mut record.human_ratings);
            for (aspect, value) in ratings {
                let canonical = self.canonical(&aspect);
                if record.human_ratings.insert(canonical.clone(), value).is_some() {
                    log::warn!(
                        "{}: aspect `{aspect}` collides with `{canonical}` after alias normalization",
                        record.key()
                    );
                }
            }
        }
    }

    pub fn normalize_spec(&self, spec: &mut DatasetSpec) {
        for aspect in &mut spec.aspects {
            *aspect = self.canonical(aspect);
        }
    }
}

impl Default for AliasMapBuilder {
    fn default() -> Self {
        AliasMapBuilder(AliasMap::with_defaults())
    }
}

/// Convenience for layering user aliases on top of the shipped defaults.
pub struct AliasMapBuilder(AliasMap);

impl AliasMapBuilder {
    pub fn alias(mut self, alias: &str, canonical: &str) -> Self {
        self.0.insert(alias, canonical);
        self
    }

    pub fn build(self) -> AliasMap {
        self.0
    }
}

impl AliasMap {
    /// Canonical names for the aspect sets of the common summarization,
    /// dialogue and controlled-generation benchmarks.
    pub fn with_defaults() -> Self {
        let mut map = AliasMap::empty();
        for aspect in DEFAULT_ASPECTS {
            map.insert(aspect, aspect);
        }
        map
    }

    pub fn builder() -> AliasMapBuilder {
        AliasMapBuilder::default()
    }
}
