//! Meta-evaluation of automatic NLG metrics against human judgments.
//!
//! Given benchmark records carrying human aspect ratings and automatic metric
//! scores for several generation systems, the crate measures
//!
//! * how well a metric separates quality bands and systems (two-sample
//!   Kolmogorov–Smirnov distance),
//! * whether it ranks bands and systems the way humans do (utility orders
//!   compared with a length-normalized Levenshtein similarity),
//! * how its correlation with humans changes between in-domain and shifted
//!   data, and
//! * pairwise win fractions between systems.
//!
//! Everything is driven from [`checklist::run_checklist`]; the individual
//! assessments are also exposed as standalone functions.

pub mod checklist;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod preference;
pub mod report;
pub mod stats;
pub mod synthetic;
pub mod textmetrics;

pub use error::{Error, Result};
