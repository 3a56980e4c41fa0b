use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::system::scores_by_system;
use super::ScoreKey;
use crate::corpus::Record;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// Compare only records sharing a `pair_group` (matched prompts).
    ByPairGroup,
    /// Compare every score of A with every score of B.
    CrossProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WinTiePolicy {
    /// A tie counts half a win for each side.
    #[default]
    Half,
    /// Ties are left out of the comparison count.
    Drop,
}

/// `wins[i][j]` is the fraction of comparisons system `i` wins against
/// system `j`; `None` on the diagonal and where nothing was compared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinMatrix {
    pub systems: Vec<String>,
    pub wins: Vec<Vec<Option<f64>>>,
    pub counts: Vec<Vec<usize>>,
}

impl WinMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.systems.iter().position(|s| s == a)?;
        let j = self.systems.iter().position(|s| s == b)?;
        self.wins[i][j]
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    greater: usize,
    less: usize,
    ties: usize,
}

impl Tally {
    fn add(&mut self, other: Tally) {
        self.greater += other.greater;
        self.less += other.less;
        self.ties += other.ties;
    }

    fn flipped(self) -> Tally {
        Tally {
            greater: self.less,
            less: self.greater,
            ties: self.ties,
        }
    }

    fn fraction(self, policy: WinTiePolicy) -> (Option<f64>, usize) {
        match policy {
            WinTiePolicy::Half => {
                let n = self.greater + self.less + self.ties;
                // half units keep the numerator integral
                let v = (n > 0).then(|| (2 * self.greater + self.ties) as f64 / (2 * n) as f64);
                (v, n)
            }
            WinTiePolicy::Drop => {
                let n = self.greater + self.less;
                ((n > 0).then(|| self.greater as f64 / n as f64), n)
            }
        }
    }
}

/// Count how often each score in `a` is above, below or equal to each in `b`.
/// `b` must be sorted.
fn tally_sorted(a: &[f64], b_sorted: &[f64]) -> Tally {
    let mut t = Tally::default();
    for &x in a {
        let below = b_sorted.partition_point(|&y| y < x);
        let not_above = b_sorted.partition_point(|&y| y <= x);
        t.greater += below;
        t.ties += not_above - below;
        t.less += b_sorted.len() - not_above;
    }
    t
}

pub fn win_matrix(
    records: &[Record],
    key: &ScoreKey,
    pairing: Pairing,
    tie_policy: WinTiePolicy,
) -> Result<WinMatrix> {
    let by_system = scores_by_system(records, key);
    if by_system.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "win matrix for `{key}` needs at least 2 systems, found {}",
            by_system.len()
        )));
    }
    let systems: Vec<String> = by_system.keys().map(|s| s.to_string()).collect();
    let index: BTreeMap<&str, usize> = by_system.keys().enumerate().map(|(i, s)| (*s, i)).collect();
    let n = systems.len();
    let mut tallies = vec![vec![Tally::default(); n]; n];

    match pairing {
        Pairing::CrossProduct => {
            let sorted: Vec<Vec<f64>> = by_system
                .values()
                .map(|v| {
                    let mut v = v.clone();
                    v.sort_unstable_by(f64::total_cmp);
                    v
                })
                .collect();
            for i in 0..n {
                for j in i + 1..n {
                    let t = tally_sorted(&sorted[i], &sorted[j]);
                    tallies[i][j].add(t);
                    tallies[j][i].add(t.flipped());
                }
            }
        }
        Pairing::ByPairGroup => {
            let mut groups: BTreeMap<&str, Vec<Vec<f64>>> = BTreeMap::new();
            for r in records {
                let (Some(group), Some(v)) = (r.pair_group.as_deref(), key.score(r)) else {
                    continue;
                };
                let slots = groups.entry(group).or_insert_with(|| vec![Vec::new(); n]);
                slots[index[r.system_id.as_str()]].push(v);
            }
            for slots in groups.values_mut() {
                for s in slots.iter_mut() {
                    s.sort_unstable_by(f64::total_cmp);
                }
                for i in 0..n {
                    for j in i + 1..n {
                        if slots[i].is_empty() || slots[j].is_empty() {
                            continue;
                        }
                        let t = tally_sorted(&slots[i], &slots[j]);
                        tallies[i][j].add(t);
                        tallies[j][i].add(t.flipped());
                    }
                }
            }
        }
    }

    let mut wins = vec![vec![None; n]; n];
    let mut counts = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let (w, c) = tallies[i][j].fraction(tie_policy);
                wins[i][j] = w;
                counts[i][j] = c;
            }
        }
    }
    Ok(WinMatrix {
        systems,
        wins,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(system: &str, group: &str, v: f64) -> Record {
        Record::new("d", group, system, "x")
            .with_metric("m", v)
            .with_pair_group(group)
    }

    #[test]
    fn matched_domination() {
        let records = vec![rec("A", "g1", 0.9), rec("A", "g2", 0.8), rec("B", "g1", 0.1), rec("B", "g2", 0.2)];
        let w = win_matrix(&records, &ScoreKey::metric("m"), Pairing::ByPairGroup, WinTiePolicy::Half).unwrap();
        assert_eq!(w.get("A", "B"), Some(1.0));
        assert_eq!(w.get("B", "A"), Some(0.0));
        assert_eq!(w.counts[0][1], 2);
        assert_eq!(w.get("A", "A"), None);
    }

    #[test]
    fn all_ties_half_credit() {
        let records = vec![rec("A", "g1", 0.5), rec("B", "g1", 0.5), rec("C", "g1", 0.5)];
        let w = win_matrix(&records, &ScoreKey::metric("m"), Pairing::ByPairGroup, WinTiePolicy::Half).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(w.wins[i][j], Some(0.5));
                }
            }
        }
        let w = win_matrix(&records, &ScoreKey::metric("m"), Pairing::ByPairGroup, WinTiePolicy::Drop).unwrap();
        assert_eq!(w.wins[0][1], None);
        assert_eq!(w.counts[0][1], 0);
    }

    #[test]
    fn cross_product_enumeration() {
        // (2,3) (2,3) (4,3) (4,3): A wins 2 of 4
        let records = vec![rec("A", "1", 2.0), rec("A", "2", 4.0), rec("B", "3", 3.0), rec("B", "4", 3.0)];
        let w = win_matrix(&records, &ScoreKey::metric("m"), Pairing::CrossProduct, WinTiePolicy::Half).unwrap();
        assert_eq!(w.get("A", "B"), Some(0.5));
        assert_eq!(w.counts[0][1], 4);
    }

    #[test]
    fn unmatched_groups_leave_cells_missing() {
        let records = vec![rec("A", "g1", 1.0), rec("B", "g2", 2.0)];
        let w = win_matrix(&records, &ScoreKey::metric("m"), Pairing::ByPairGroup, WinTiePolicy::Half).unwrap();
        assert_eq!(w.get("A", "B"), None);
        assert_eq!(w.counts[0][1], 0);
    }

    #[test]
    fn needs_two_systems() {
        let records = vec![rec("A", "g1", 1.0)];
        assert!(win_matrix(&records, &ScoreKey::metric("m"), Pairing::CrossProduct, WinTiePolicy::Half).is_err());
    }
}
