//! Benchmark records, dataset descriptions, and the loading/validation
//! machinery every pipeline consumes.

mod aggregate;
mod dataset;
mod io;
mod record;
mod spec;
mod summary;
mod validate;

pub use aggregate::{aggregate_annotators, Aggregation};
pub use dataset::{assemble, Dataset};
pub use io::{
    load_records, load_records_with, read_csv, read_jsonl, write_csv, write_jsonl, Format,
    LoadOptions, Loaded,
};
pub use record::{Record, RecordKey};
pub use spec::{
    AliasMap, AliasMapBuilder, DatasetSpec, Difficulty, Domain, PairLists, Task,
    DEFAULT_RATING_MAX, DEFAULT_RATING_MIN,
};
pub use summary::{system_summaries, MeanN, SystemSummary};
pub use validate::{validate, Issue, ValidationReport};
