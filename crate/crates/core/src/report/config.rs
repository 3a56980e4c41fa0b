use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::checklist::ChecklistParams;
use crate::corpus::{
    aggregate_annotators, load_records_with, Aggregation, AliasMap, DatasetSpec, Domain, Format,
    LoadOptions, PairLists, Record, Task, DEFAULT_RATING_MAX, DEFAULT_RATING_MIN,
};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Markdown,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 3] = [OutputFormat::Json, OutputFormat::Csv, OutputFormat::Markdown];

    pub fn file_name(self) -> &'static str {
        match self {
            OutputFormat::Json => "report.json",
            OutputFormat::Csv => "report.csv",
            OutputFormat::Markdown => "report.md",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::InvalidArgument(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnotatorMerge {
    /// Duplicate (dataset, sample, system) rows are an error.
    #[default]
    None,
    Mean,
    Median,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: u32,
    corpus: RawCorpus,
    #[serde(default)]
    aliases: BTreeMap<String, String>,
    #[serde(default)]
    datasets: Vec<RawDataset>,
    #[serde(default)]
    checklist: ChecklistParams,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    paths: Vec<PathBuf>,
    format: Option<Format>,
    #[serde(default)]
    aggregation: AnnotatorMerge,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    id: String,
    #[serde(default = "default_task")]
    task: Task,
    #[serde(default)]
    aspects: Vec<String>,
    rating_min: Option<f64>,
    rating_max: Option<f64>,
    #[serde(default)]
    metric_domains: BTreeMap<String, Domain>,
    pairs: Option<RawPairs>,
}

fn default_task() -> Task {
    Task::Other
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPairs {
    #[serde(default)]
    easy: Vec<[String; 2]>,
    #[serde(default)]
    hard: Vec<[String; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(default = "default_out_dir")]
    dir: PathBuf,
    #[serde(default = "default_formats")]
    formats: Vec<OutputFormat>,
}

impl Default for RawOutput {
    fn default() -> Self {
        RawOutput {
            dir: default_out_dir(),
            formats: default_formats(),
        }
    }
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<OutputFormat> {
    OutputFormat::ALL.to_vec()
}

/// A fully resolved run: paths are absolute or relative to the working
/// directory, aliases are applied, defaults are filled.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus_paths: Vec<PathBuf>,
    pub corpus_format: Option<Format>,
    pub aggregation: AnnotatorMerge,
    pub aliases: AliasMap,
    pub datasets: Vec<DatasetSpec>,
    pub checklist: ChecklistParams,
    pub output_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    parse_config_str(&text, base)
}

/// Parse TOML text; relative paths are resolved against `base`.
pub fn parse_config_str(text: &str, base: &Path) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            raw.schema_version
        )));
    }

    let mut aliases = AliasMap::with_defaults();
    for (alias, canonical) in &raw.aliases {
        aliases.insert(alias, canonical);
    }

    let corpus_paths: Vec<PathBuf> = raw.corpus.paths.iter().map(|p| base.join(p)).collect();
    if corpus_paths.is_empty() {
        return Err(Error::Config("corpus.paths is empty".into()));
    }
    for p in &corpus_paths {
        if !p.is_file() {
            return Err(Error::Config(format!("corpus file not found: {}", p.display())));
        }
    }

    let mut datasets = Vec::with_capacity(raw.datasets.len());
    for d in raw.datasets {
        let mut spec = DatasetSpec {
            dataset_id: d.id,
            task: d.task,
            aspects: d.aspects,
            rating_min: d.rating_min.unwrap_or(DEFAULT_RATING_MIN),
            rating_max: d.rating_max.unwrap_or(DEFAULT_RATING_MAX),
            metric_domains: d.metric_domains,
            pair_lists: d.pairs.map(|p| PairLists {
                easy: p.easy.into_iter().map(|[a, b]| (a, b)).collect(),
                hard: p.hard.into_iter().map(|[a, b]| (a, b)).collect(),
            }),
        };
        if spec.rating_min.partial_cmp(&spec.rating_max) != Some(Ordering::Less) {
            return Err(Error::Config(format!(
                "dataset `{}`: rating_min must be below rating_max",
                spec.dataset_id
            )));
        }
        aliases.normalize_spec(&mut spec);
        datasets.push(spec);
    }

    let mut checklist = raw.checklist;
    for a in &mut checklist.aspects {
        *a = aliases.canonical(a);
    }
    if let crate::checklist::AspectPolicy::Named(a) = &mut checklist.transfer_aspect_policy {
        *a = aliases.canonical(a);
    }
    let t = checklist.thresholds;
    if t.low_below.partial_cmp(&t.high_above).is_none_or(|o| o == Ordering::Greater) {
        return Err(Error::Config("thresholds: low_below must not exceed high_above".into()));
    }
    if checklist.epsilon.is_nan() || checklist.epsilon < 0.0 {
        return Err(Error::Config("epsilon must be non-negative".into()));
    }
    if checklist.pair_k == 0 {
        return Err(Error::Config("pair_k must be at least 1".into()));
    }

    Ok(RunConfig {
        corpus_paths,
        corpus_format: raw.corpus.format,
        aggregation: raw.corpus.aggregation,
        aliases,
        datasets,
        checklist,
        output_dir: base.join(raw.output.dir),
        formats: raw.output.formats,
    })
}

impl RunConfig {
    /// Load every corpus file, merge annotator rows if configured, and
    /// normalize aspect names. Returns records plus loader warnings.
    pub fn load_records(&self) -> Result<(Vec<Record>, Vec<String>)> {
        let options = LoadOptions {
            allow_duplicates: self.aggregation != AnnotatorMerge::None,
        };
        let mut records = Vec::new();
        let mut warnings = Vec::new();
        for path in &self.corpus_paths {
            let format = self.corpus_format.unwrap_or_else(|| Format::from_path(path));
            let loaded = load_records_with(path, format, options)?;
            records.extend(loaded.records);
            warnings.extend(loaded.warnings);
        }
        self.aliases.normalize_records(&mut records);
        let records = match self.aggregation {
            AnnotatorMerge::None => records,
            AnnotatorMerge::Mean => aggregate_annotators(&records, Aggregation::Mean)?,
            AnnotatorMerge::Median => aggregate_annotators(&records, Aggregation::Median)?,
        };
        Ok((records, warnings))
    }

    /// Every requested metric and aspect must exist somewhere in the corpus
    /// or the dataset specs.
    pub fn check_names(&self, records: &[Record]) -> Result<()> {
        for metric in &self.checklist.metrics {
            let known = self.datasets.iter().any(|d| d.metric_domains.contains_key(metric))
                || records.iter().any(|r| r.metric_scores.contains_key(metric));
            if !known {
                return Err(Error::Config(format!("unknown metric `{metric}`")));
            }
        }
        for aspect in &self.checklist.aspects {
            let known = self.datasets.iter().any(|d| d.aspects.contains(aspect))
                || records.iter().any(|r| r.human_ratings.contains_key(aspect));
            if !known {
                return Err(Error::Config(format!("unknown aspect `{aspect}`")));
            }
        }
        Ok(())
    }
}
