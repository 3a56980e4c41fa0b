use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{Difficulty, PairLists, SystemSummary};
use crate::error::{Error, Result};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairOrigin {
    Configured,
    Generated,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairSpec {
    pub system_a: String,
    pub system_b: String,
    pub difficulty: Difficulty,
    pub origin: PairOrigin,
}

impl PairSpec {
    pub fn label(&self) -> String {
        format!("{}|{}", self.system_a, self.system_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairMode {
    Configured,
    Generated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    /// Easy pairs cross the `k` weakest with the `k` strongest systems.
    pub k: usize,
    /// Hard pairs are rank neighbours at most this far apart. `None` uses the
    /// 0.25 quantile of the neighbour gaps.
    pub delta: Option<f64>,
    /// Aspect used as the overall human score; falls back to the mean of a
    /// system's aspect means.
    pub overall_aspect: Option<String>,
}

impl Default for PairParams {
    fn default() -> Self {
        PairParams {
            k: 1,
            delta: None,
            overall_aspect: None,
        }
    }
}

pub const DEFAULT_HARD_GAP_QUANTILE: f64 = 0.25;

fn overall_utility(summary: &SystemSummary, aspect: Option<&str>) -> Option<f64> {
    if let Some(m) = aspect.and_then(|a| summary.aspects.get(a)) {
        return Some(m.mean);
    }
    if summary.aspects.is_empty() {
        return None;
    }
    let mut means: Vec<f64> = summary.aspects.values().map(|m| m.mean).collect();
    Some(stats::mean(&mut means))
}

/// Build Easy/Hard system pairs, either verbatim from configuration or from
/// the systems' human-score ranking.
pub fn make_pairs(
    summaries: &[SystemSummary],
    mode: PairMode,
    params: &PairParams,
    configured: Option<&PairLists>,
) -> Result<Vec<PairSpec>> {
    match mode {
        PairMode::Configured => {
            let lists = configured.ok_or_else(|| {
                Error::InvalidArgument("configured pair mode but no pair lists".into())
            })?;
            Ok(lists
                .iter()
                .map(|(difficulty, (a, b))| PairSpec {
                    system_a: a.clone(),
                    system_b: b.clone(),
                    difficulty,
                    origin: PairOrigin::Configured,
                })
                .collect())
        }
        PairMode::Generated => generate(summaries, params),
    }
}

fn generate(summaries: &[SystemSummary], params: &PairParams) -> Result<Vec<PairSpec>> {
    let mut ranked: Vec<(&str, f64)> = summaries
        .iter()
        .filter_map(|s| {
            overall_utility(s, params.overall_aspect.as_deref()).map(|u| (s.system_id.as_str(), u))
        })
        .collect();
    if ranked.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "pair generation needs at least 2 rated systems, found {}",
            ranked.len()
        )));
    }
    if params.k == 0 {
        return Err(Error::InvalidArgument("pair generation needs k >= 1".into()));
    }
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
    let n = ranked.len();
    let k = params.k.min(n);

    let pair = |a: &str, b: &str, difficulty| PairSpec {
        system_a: a.to_string(),
        system_b: b.to_string(),
        difficulty,
        origin: PairOrigin::Generated,
    };

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &(low, _) in &ranked[..k] {
        for &(high, _) in &ranked[n - k..] {
            if low != high && seen.insert((low, high)) {
                out.push(pair(low, high, Difficulty::Easy));
            }
        }
    }

    let gaps: Vec<f64> = ranked.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let delta = params
        .delta
        .unwrap_or_else(|| stats::quantile(&mut gaps.clone(), DEFAULT_HARD_GAP_QUANTILE));
    for (w, gap) in ranked.windows(2).zip(&gaps) {
        if *gap <= delta {
            out.push(pair(w[0].0, w[1].0, Difficulty::Hard));
        }
    }
    Ok(out)
}
