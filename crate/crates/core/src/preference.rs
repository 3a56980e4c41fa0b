//! Utility-induced preference orders over systems and their comparison by
//! length-normalized Levenshtein similarity.
//!
//! Sequences run in ascending preference: the least preferred system comes
//! first, so `[a, b]` reads "a ≺ b".

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Unit-cost Levenshtein distance (insertions, deletions, substitutions).
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0usize; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            curr[j + 1] = sub.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// Utility (mean score) of each system under one aspect or metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityTable {
    pub source: String,
    pub utilities: BTreeMap<String, f64>,
}

impl UtilityTable {
    pub fn new(source: impl Into<String>) -> Self {
        UtilityTable {
            source: source.into(),
            utilities: BTreeMap::new(),
        }
    }

    pub fn with(mut self, system: impl Into<String>, utility: f64) -> Self {
        self.utilities.insert(system.into(), utility);
        self
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for UtilityTable {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        UtilityTable {
            source: String::new(),
            utilities: iter.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }
}

/// Ascending tie groups: every member of a group is strictly less preferred
/// than every member of the next one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceOrder {
    pub tie_groups: Vec<Vec<String>>,
    pub epsilon: f64,
}

impl PreferenceOrder {
    pub fn has_ties(&self) -> bool {
        self.tie_groups.iter().any(|g| g.len() > 1)
    }

    pub fn len(&self) -> usize {
        self.tie_groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.tie_groups.is_empty()
    }
}

/// Sort systems by ascending utility and merge neighbours whose utilities
/// differ by at most `epsilon`. Merging chains, so a run of small steps
/// lands in one group.
pub fn preference_order(table: &UtilityTable, epsilon: f64) -> PreferenceOrder {
    let mut ranked: Vec<(&str, f64)> = table
        .utilities
        .iter()
        .map(|(k, &v)| (k.as_str(), v))
        .collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));

    let mut groups: Vec<Vec<String>> = Vec::new();
    let mut last: Option<f64> = None;
    for (system, u) in ranked {
        match (last, groups.last_mut()) {
            (Some(prev), Some(group)) if u - prev <= epsilon => group.push(system.to_string()),
            _ => groups.push(vec![system.to_string()]),
        }
        last = Some(u);
    }
    for g in &mut groups {
        g.sort();
    }
    PreferenceOrder {
        tie_groups: groups,
        epsilon,
    }
}

/// How members of a tie group are laid out in a flat sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    #[default]
    LabelAscending,
}

pub fn linearize(order: &PreferenceOrder, policy: TiePolicy) -> Vec<String> {
    match policy {
        TiePolicy::LabelAscending => order
            .tie_groups
            .iter()
            .flat_map(|g| {
                let mut g = g.clone();
                g.sort();
                g
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScore {
    pub s: f64,
    pub lev: usize,
    pub len_a: usize,
    pub len_b: usize,
}

/// `((L_a + L_b) - 2·lev) / (L_a + L_b)`. Not clamped: sequences of very
/// different lengths can score below zero.
pub fn preference_similarity<T: PartialEq>(a: &[T], b: &[T]) -> Result<SimilarityScore> {
    let total = a.len() + b.len();
    if total == 0 {
        return Err(Error::InvalidArgument(
            "preference similarity of two empty sequences is undefined".into(),
        ));
    }
    let lev = edit_distance(a, b);
    Ok(SimilarityScore {
        s: (total as f64 - 2.0 * lev as f64) / total as f64,
        lev,
        len_a: a.len(),
        len_b: b.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn swap_costs_two() {
        assert_eq!(edit_distance(&chars("ab"), &chars("ba")), 2);
    }

    #[test]
    fn five_and_four_symbol_pairs() {
        assert_eq!(edit_distance(&chars("cdabe"), &chars("abcde")), 4);
        // c->a, e->c, insert e: three edits suffice
        assert_eq!(edit_distance(&chars("cbed"), &chars("abcde")), 3);
        assert_eq!(edit_distance(&chars("abc"), &chars("abc")), 0);
        assert_eq!(edit_distance::<char>(&[], &chars("abc")), 3);
    }

    #[test]
    fn similarity_examples() {
        let s = preference_similarity(&chars("cdabe"), &chars("abcde")).unwrap();
        assert_eq!(s.s, 0.2);
        let s = preference_similarity(&chars("cbed"), &chars("abcde")).unwrap();
        assert_eq!(s.lev, 3);
        assert!((s.s - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(preference_similarity(&chars("xyz"), &chars("xyz")).unwrap().s, 1.0);
    }

    #[test]
    fn unequal_lengths_can_go_negative() {
        let s = preference_similarity(&chars("a"), &chars("bcdef")).unwrap();
        assert_eq!(s.lev, 5);
        assert!(s.s < 0.0);
    }

    #[test]
    fn both_empty_is_an_error() {
        assert!(preference_similarity::<char>(&[], &[]).is_err());
    }

    #[test]
    fn exact_ties_merge() {
        let t = UtilityTable::new("x").with("A", 0.5).with("B", 0.7).with("C", 0.7);
        let order = preference_order(&t, DEFAULT_EPSILON);
        assert_eq!(order.tie_groups, vec![vec!["A"], vec!["B", "C"]]);
        assert!(order.has_ties());
    }

    #[test]
    fn strict_order_and_singleton() {
        let t = UtilityTable::new("x").with("C", 3.0).with("A", 1.0).with("B", 2.0);
        let order = preference_order(&t, 0.0);
        assert_eq!(order.tie_groups, vec![vec!["A"], vec!["B"], vec!["C"]]);
        let t = UtilityTable::new("x").with("A", 1.0);
        assert_eq!(preference_order(&t, 10.0).tie_groups, vec![vec!["A"]]);
    }

    #[test]
    fn epsilon_chains_transitively() {
        let t = UtilityTable::new("x").with("A", 1.0).with("B", 1.4).with("C", 1.8).with("D", 3.0);
        let order = preference_order(&t, 0.5);
        assert_eq!(order.tie_groups, vec![vec!["A", "B", "C"], vec!["D"]]);
    }

    #[test]
    fn linearize_expands_by_label() {
        let order = PreferenceOrder {
            tie_groups: vec![vec!["A".into()], vec!["B".into(), "C".into()]],
            epsilon: 0.0,
        };
        assert_eq!(linearize(&order, TiePolicy::LabelAscending), ["A", "B", "C"]);
        let order = PreferenceOrder {
            tie_groups: vec![vec!["C".into(), "B".into()], vec!["A".into()]],
            epsilon: 0.0,
        };
        assert_eq!(linearize(&order, TiePolicy::LabelAscending), ["B", "C", "A"]);
    }
}
