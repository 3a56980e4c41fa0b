//! The five checklist assessments as batch pipelines over a corpus:
//! transfer correlation, aspect-level evaluation and preference,
//! system-level evaluation and preference, plus pairwise win matrices.

mod aspect;
mod pairs;
mod quality;
mod run;
mod system;
mod transfer;
mod winmatrix;

use serde::{Deserialize, Serialize};

pub use aspect::{aspect_level_ks, aspect_level_preference, AspectKs, BandPreference};
pub use pairs::{make_pairs, PairMode, PairOrigin, PairParams, PairSpec};
pub use quality::{split_quality, QualityBand, QualitySplit, QualityThresholds, BAND_TOLERANCE};
pub use run::{
    run_checklist, AspectKsEntry, AspectPrefEntry, ChecklistParams, ChecklistReport, DatasetPairs,
    PairModeSetting, PairingSetting, Sections, SystemKsEntry, SystemPrefEntry, WinMatrixEntry,
};
pub use system::{system_level_ks, system_level_preference, ScoreKey, SystemPreference};
pub use transfer::{transfer_experiment, AspectPolicy, GroupMean, TransferEntry, TransferResult};
pub use winmatrix::{win_matrix, Pairing, WinMatrix, WinTiePolicy};

/// A computed value, or the reason it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Computed(T),
    Skipped { reason: String },
}

impl<T> Outcome<T> {
    pub fn skipped(reason: impl Into<String>) -> Self {
        Outcome::Skipped {
            reason: reason.into(),
        }
    }

    pub fn computed(&self) -> Option<&T> {
        match self {
            Outcome::Computed(v) => Some(v),
            Outcome::Skipped { .. } => None,
        }
    }

    pub fn skip_reason(&self) -> Option<&str> {
        match self {
            Outcome::Computed(_) => None,
            Outcome::Skipped { reason } => Some(reason),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Computed(v) => Outcome::Computed(f(v)),
            Outcome::Skipped { reason } => Outcome::Skipped { reason },
        }
    }
}

impl<T> From<crate::Result<T>> for Outcome<T> {
    fn from(r: crate::Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Computed(v),
            Err(e) => Outcome::skipped(e.to_string()),
        }
    }
}
