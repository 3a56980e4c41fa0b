use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Outcome, PairSpec};
use crate::corpus::Record;
use crate::error::{Error, Result};
use crate::preference::{
    linearize, preference_order, preference_similarity, SimilarityScore, TiePolicy, UtilityTable,
};
use crate::stats::{self, ks_between, KsReport};

/// A score column: a human aspect or an automatic metric. Both go through
/// the same machinery.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "name")]
pub enum ScoreKey {
    Human(String),
    Metric(String),
}

impl ScoreKey {
    pub fn human(aspect: impl Into<String>) -> Self {
        ScoreKey::Human(aspect.into())
    }

    pub fn metric(name: impl Into<String>) -> Self {
        ScoreKey::Metric(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            ScoreKey::Human(n) | ScoreKey::Metric(n) => n,
        }
    }

    pub fn score(&self, record: &Record) -> Option<f64> {
        match self {
            ScoreKey::Human(a) => record.rating(a),
            ScoreKey::Metric(m) => record.metric(m),
        }
    }
}

impl fmt::Display for ScoreKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreKey::Human(a) => write!(f, "human:{a}"),
            ScoreKey::Metric(m) => f.write_str(m),
        }
    }
}

pub(crate) fn scores_by_system<'a>(records: &'a [Record], key: &ScoreKey) -> BTreeMap<&'a str, Vec<f64>> {
    let mut out: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in records {
        if let Some(v) = key.score(r) {
            out.entry(&r.system_id).or_default().push(v);
        }
    }
    out
}

fn system_scores(records: &[Record], system: &str, key: &ScoreKey) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.system_id == system)
        .filter_map(|r| key.score(r))
        .collect()
}

const MIN_SYSTEM_SCORES: usize = 2;

/// KS distance between the per-record score distributions of the two
/// systems of `pair`.
pub fn system_level_ks(records: &[Record], pair: &PairSpec, key: &ScoreKey) -> Outcome<KsReport> {
    let a = system_scores(records, &pair.system_a, key);
    let b = system_scores(records, &pair.system_b, key);
    for (system, scores) in [(&pair.system_a, &a), (&pair.system_b, &b)] {
        if scores.len() < MIN_SYSTEM_SCORES {
            return Outcome::skipped(format!(
                "system `{system}` has {} score(s) for `{key}`, need {MIN_SYSTEM_SCORES}",
                scores.len()
            ));
        }
    }
    ks_between(&pair.system_a, &a, &pair.system_b, &b).into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemPreference {
    pub similarity: SimilarityScore,
    pub human_sequence: Vec<String>,
    pub metric_sequence: Vec<String>,
    pub tied: bool,
}

pub(crate) fn utilities(records: &[Record], key: &ScoreKey) -> UtilityTable {
    let mut table = UtilityTable::new(key.to_string());
    for (system, mut scores) in scores_by_system(records, key) {
        table
            .utilities
            .insert(system.to_string(), stats::mean(&mut scores));
    }
    table
}

/// Compare the system ranking by mean human rating with the ranking by mean
/// metric score, over the systems that have both.
pub fn system_level_preference(
    records: &[Record],
    aspect: &str,
    metric: &str,
    epsilon: f64,
) -> Result<SystemPreference> {
    let mut human = utilities(records, &ScoreKey::human(aspect));
    let mut auto = utilities(records, &ScoreKey::metric(metric));
    human.utilities.retain(|s, _| auto.utilities.contains_key(s));
    auto.utilities.retain(|s, _| human.utilities.contains_key(s));
    if human.utilities.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 systems with both `{aspect}` and `{metric}`, found {}",
            human.utilities.len()
        )));
    }
    let human_order = preference_order(&human, epsilon);
    let metric_order = preference_order(&auto, epsilon);
    let human_sequence = linearize(&human_order, TiePolicy::LabelAscending);
    let metric_sequence = linearize(&metric_order, TiePolicy::LabelAscending);
    Ok(SystemPreference {
        similarity: preference_similarity(&metric_sequence, &human_sequence)?,
        tied: human_order.has_ties() || metric_order.has_ties(),
        human_sequence,
        metric_sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checklist::PairOrigin;
    use crate::corpus::Difficulty;

    fn rec(i: usize, system: &str, human: f64, metric: f64) -> Record {
        Record::new("d", i.to_string(), system, "x")
            .with_rating("F", human)
            .with_metric("m", metric)
    }

    fn pair(a: &str, b: &str) -> PairSpec {
        PairSpec {
            system_a: a.into(),
            system_b: b.into(),
            difficulty: Difficulty::Easy,
            origin: PairOrigin::Configured,
        }
    }

    #[test]
    fn separated_systems() {
        let records: Vec<_> = (0..4)
            .map(|i| rec(i, "A", 5.0, 0.9 + i as f64 * 0.01))
            .chain((0..4).map(|i| rec(i, "B", 1.0, 0.1 + i as f64 * 0.01)))
            .collect();
        let ks = system_level_ks(&records, &pair("A", "B"), &ScoreKey::metric("m"));
        assert_eq!(ks.computed().unwrap().d, 1.0);
    }

    #[test]
    fn identical_and_shifted() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [3.0, 4.0, 5.0, 6.0];
        let records: Vec<_> = a
            .iter()
            .enumerate()
            .map(|(i, &v)| rec(i, "A", 3.0, v))
            .chain(b.iter().enumerate().map(|(i, &v)| rec(i, "B", 3.0, v)))
            .chain(a.iter().enumerate().map(|(i, &v)| rec(i, "C", 3.0, v)))
            .collect();
        let key = ScoreKey::metric("m");
        assert_eq!(system_level_ks(&records, &pair("A", "B"), &key).computed().unwrap().d, 0.5);
        assert_eq!(system_level_ks(&records, &pair("A", "C"), &key).computed().unwrap().d, 0.0);
        let human = system_level_ks(&records, &pair("A", "B"), &ScoreKey::human("F"));
        assert_eq!(human.computed().unwrap().d, 0.0);
    }

    #[test]
    fn too_few_scores_skips() {
        let records = vec![rec(0, "A", 3.0, 0.1), rec(0, "B", 3.0, 0.2), rec(1, "B", 3.0, 0.3)];
        let ks = system_level_ks(&records, &pair("A", "B"), &ScoreKey::metric("m"));
        assert!(ks.skip_reason().unwrap().contains("`A`"));
    }

    #[test]
    fn perfect_and_reversed_preference() {
        let records = vec![rec(0, "A", 2.0, 2.0), rec(0, "B", 4.0, 4.0)];
        let p = system_level_preference(&records, "F", "m", 1e-9).unwrap();
        assert_eq!(p.similarity.s, 1.0);
        let records = vec![rec(0, "A", 2.0, 4.0), rec(0, "B", 4.0, 2.0)];
        let p = system_level_preference(&records, "F", "m", 1e-9).unwrap();
        assert_eq!(p.human_sequence, ["A", "B"]);
        assert_eq!(p.metric_sequence, ["B", "A"]);
        assert_eq!(p.similarity.lev, 2);
        assert_eq!(p.similarity.s, 0.0);
    }

    #[test]
    fn five_system_shift() {
        // human order a<b<c<d<e; metric order c<d<a<b<e
        let metric_rank = [("a", 3.0), ("b", 4.0), ("c", 1.0), ("d", 2.0), ("e", 5.0)];
        let records: Vec<_> = metric_rank
            .iter()
            .enumerate()
            .map(|(i, &(s, m))| rec(0, s, (i + 1) as f64, m))
            .collect();
        let p = system_level_preference(&records, "F", "m", 1e-9).unwrap();
        assert_eq!(p.metric_sequence, ["c", "d", "a", "b", "e"]);
        assert_eq!(p.similarity.lev, 4);
        assert_eq!(p.similarity.s, 0.2);
    }

    #[test]
    fn single_system_is_an_error() {
        let records = vec![rec(0, "A", 2.0, 2.0)];
        assert!(system_level_preference(&records, "F", "m", 1e-9).is_err());
    }
}
