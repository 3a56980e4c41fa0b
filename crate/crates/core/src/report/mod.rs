//! Run configuration and report rendering.

mod config;
mod render;

pub use config::{parse_config, parse_config_str, AnnotatorMerge, OutputFormat, RunConfig, SCHEMA_VERSION};
pub use render::{csv_rows, parse_csv, render, render_csv, render_json, render_markdown, write_report, CsvRow};
