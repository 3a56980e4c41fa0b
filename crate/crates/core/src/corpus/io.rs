use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::Record;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Jsonl,
    Csv,
}

impl Format {
    /// Guess from the file extension; anything that is not `.csv` is JSONL.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Jsonl,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidArgument(format!("unknown corpus format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Accept repeated (dataset, sample, system) keys, e.g. one row per annotator.
    pub allow_duplicates: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Loaded {
    pub records: Vec<Record>,
    pub warnings: Vec<String>,
}

const KNOWN_FIELDS: &[&str] = &[
    "dataset",
    "sample",
    "system",
    "source",
    "output",
    "references",
    "human",
    "metrics",
    "pair_group",
];

pub fn load_records(path: &Path, format: Format) -> Result<Loaded> {
    load_records_with(path, format, LoadOptions::default())
}

pub fn load_records_with(path: &Path, format: Format, options: LoadOptions) -> Result<Loaded> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut loaded = match format {
        Format::Jsonl => read_jsonl(BufReader::new(file))?,
        Format::Csv => read_csv(file)?,
    };
    if !options.allow_duplicates {
        check_unique(&loaded.records, 1 + usize::from(format == Format::Csv))?;
    }
    if loaded.records.is_empty() {
        loaded.warnings.push(format!("{}: no records", path.display()));
    }
    for w in &loaded.warnings {
        log::warn!("{w}");
    }
    Ok(loaded)
}

/// Line numbers in errors are 1-based; `first_line` is the line holding record 0.
fn check_unique(records: &[Record], first_line: usize) -> Result<()> {
    let mut seen = HashSet::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        if !seen.insert(r.key()) {
            return Err(Error::DuplicateRecord {
                dataset: r.dataset_id.clone(),
                sample: r.sample_id.clone(),
                system: r.system_id.clone(),
                line: first_line + i,
            });
        }
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Loaded> {
    let mut loaded = Loaded::default();
    let mut unknown: BTreeSet<String> = BTreeSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let Value::Object(map) = value else {
            return Err(Error::Parse {
                line: lineno,
                message: "expected a JSON object".into(),
            });
        };
        for key in map.keys() {
            if !KNOWN_FIELDS.contains(&key.as_str()) && unknown.insert(key.clone()) {
                loaded
                    .warnings
                    .push(format!("line {lineno}: unknown field `{key}` ignored"));
            }
        }
        loaded.records.push(record_from_object(&map, lineno)?);
    }
    Ok(loaded)
}

fn field_err(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Field {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

fn id_field(map: &Map<String, Value>, field: &str, line: usize) -> Result<String> {
    match map.get(field) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(Value::Number(n)) => Ok(n.to_string()),
        Some(other) => Err(field_err(line, field, format!("expected string, got {other}"))),
        None => Err(field_err(line, field, "missing")),
    }
}

fn opt_string(map: &Map<String, Value>, field: &str, line: usize) -> Result<Option<String>> {
    match map.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(other) => Err(field_err(line, field, format!("expected string, got {other}"))),
    }
}

fn score_map(map: &Map<String, Value>, field: &str, line: usize) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    match map.get(field) {
        None | Some(Value::Null) => {}
        Some(Value::Object(scores)) => {
            for (k, v) in scores {
                match v {
                    Value::Null => {}
                    Value::Number(n) => {
                        let x = n.as_f64().unwrap_or(f64::NAN);
                        out.insert(k.clone(), x);
                    }
                    other => {
                        return Err(field_err(
                            line,
                            &format!("{field}.{k}"),
                            format!("expected number, got {other}"),
                        ))
                    }
                }
            }
        }
        Some(other) => return Err(field_err(line, field, format!("expected object, got {other}"))),
    }
    Ok(out)
}

fn record_from_object(map: &Map<String, Value>, line: usize) -> Result<Record> {
    let references = match map.get("references") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::String(s)) => vec![s.clone()],
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => Ok(s.clone()),
                other => Err(field_err(
                    line,
                    "references",
                    format!("expected string entries, got {other}"),
                )),
            })
            .collect::<Result<_>>()?,
        Some(other) => return Err(field_err(line, "references", format!("expected array, got {other}"))),
    };
    let output_text = match map.get("output") {
        Some(Value::String(s)) => s.clone(),
        Some(other) => return Err(field_err(line, "output", format!("expected string, got {other}"))),
        None => return Err(field_err(line, "output", "missing")),
    };
    Ok(Record {
        dataset_id: id_field(map, "dataset", line)?,
        sample_id: id_field(map, "sample", line)?,
        system_id: id_field(map, "system", line)?,
        source_text: opt_string(map, "source", line)?,
        output_text,
        references,
        human_ratings: score_map(map, "human", line)?,
        metric_scores: score_map(map, "metrics", line)?,
        pair_group: opt_string(map, "pair_group", line)?,
    })
}

pub fn write_jsonl<W: Write>(records: &[Record], mut writer: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut writer, r)?;
        writer
            .write_all(b"\n")
            .map_err(|e| Error::io("<jsonl output>", e))?;
    }
    Ok(())
}

enum Column {
    Dataset,
    Sample,
    System,
    Source,
    Output,
    PairGroup,
    Reference,
    Human(String),
    Metric(String),
    Unknown,
}

fn classify(header: &str) -> Column {
    match header {
        "dataset" => Column::Dataset,
        "sample" => Column::Sample,
        "system" => Column::System,
        "source" => Column::Source,
        "output" => Column::Output,
        "pair_group" => Column::PairGroup,
        "references" => Column::Reference,
        h => {
            if let Some(aspect) = h.strip_prefix("human.") {
                Column::Human(aspect.to_string())
            } else if let Some(metric) = h.strip_prefix("metrics.") {
                Column::Metric(metric.to_string())
            } else if h.starts_with("references.") {
                Column::Reference
            } else {
                Column::Unknown
            }
        }
    }
}

/// CSV with dotted headers: `human.<aspect>`, `metrics.<metric>`,
/// `references.<i>`. Empty cells mean "absent".
pub fn read_csv<R: Read>(reader: R) -> Result<Loaded> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let columns: Vec<Column> = headers.iter().map(classify).collect();
    let mut loaded = Loaded::default();
    for (h, c) in headers.iter().zip(&columns) {
        if matches!(c, Column::Unknown) {
            loaded.warnings.push(format!("unknown column `{h}` ignored"));
        }
    }
    for required in ["dataset", "sample", "system", "output"] {
        if !headers.iter().any(|h| h == required) {
            return Err(field_err(1, required, "missing column"));
        }
    }
    for (idx, row) in rdr.records().enumerate() {
        let line = idx + 2;
        let row = row?;
        let mut rec = Record::new("", "", "", "");
        for ((cell, column), header) in row.iter().zip(&columns).zip(headers.iter()) {
            match column {
                Column::Dataset => rec.dataset_id = cell.to_string(),
                Column::Sample => rec.sample_id = cell.to_string(),
                Column::System => rec.system_id = cell.to_string(),
                Column::Output => rec.output_text = cell.to_string(),
                Column::Source if !cell.is_empty() => rec.source_text = Some(cell.to_string()),
                Column::PairGroup if !cell.is_empty() => rec.pair_group = Some(cell.to_string()),
                Column::Reference if !cell.is_empty() => rec.references.push(cell.to_string()),
                Column::Human(aspect) if !cell.trim().is_empty() => {
                    rec.human_ratings
                        .insert(aspect.clone(), parse_cell(cell, header, line)?);
                }
                Column::Metric(metric) if !cell.trim().is_empty() => {
                    rec.metric_scores
                        .insert(metric.clone(), parse_cell(cell, header, line)?);
                }
                _ => {}
            }
        }
        for (field, value) in [
            ("dataset", &rec.dataset_id),
            ("sample", &rec.sample_id),
            ("system", &rec.system_id),
        ] {
            if value.is_empty() {
                return Err(field_err(line, field, "empty"));
            }
        }
        loaded.records.push(rec);
    }
    Ok(loaded)
}

fn parse_cell(cell: &str, header: &str, line: usize) -> Result<f64> {
    cell.trim()
        .parse::<f64>()
        .map_err(|e| field_err(line, header, format!("`{cell}`: {e}")))
}

pub fn write_csv<W: Write>(records: &[Record], writer: W) -> Result<()> {
    let aspects: BTreeSet<&str> = records
        .iter()
        .flat_map(|r| r.human_ratings.keys().map(String::as_str))
        .collect();
    let metrics: BTreeSet<&str> = records
        .iter()
        .flat_map(|r| r.metric_scores.keys().map(String::as_str))
        .collect();
    let max_refs = records.iter().map(|r| r.references.len()).max().unwrap_or(0);

    let mut header: Vec<String> = ["dataset", "sample", "system", "source", "output", "pair_group"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((0..max_refs).map(|i| format!("references.{i}")));
    header.extend(aspects.iter().map(|a| format!("human.{a}")));
    header.extend(metrics.iter().map(|m| format!("metrics.{m}")));

    let mut w = csv::Writer::from_writer(writer);
    w.write_record(&header)?;
    for r in records {
        let mut row: Vec<String> = vec![
            r.dataset_id.clone(),
            r.sample_id.clone(),
            r.system_id.clone(),
            r.source_text.clone().unwrap_or_default(),
            r.output_text.clone(),
            r.pair_group.clone().unwrap_or_default(),
        ];
        row.extend((0..max_refs).map(|i| r.references.get(i).cloned().unwrap_or_default()));
        row.extend(aspects.iter().map(|a| fmt_opt(r.human_ratings.get(*a))));
        row.extend(metrics.iter().map(|m| fmt_opt(r.metric_scores.get(*m))));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

fn fmt_opt(v: Option<&f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_line_maps_fields() {
        let line = r#"{"dataset":"newsroom","sample":"s1","system":"lede3","output":"a b","human":{"Fluency":4},"metrics":{"bleu":0.31}}"#;
        let loaded = read_jsonl(line.as_bytes()).unwrap();
        assert_eq!(loaded.records.len(), 1);
        let r = &loaded.records[0];
        assert_eq!(r.dataset_id, "newsroom");
        assert_eq!(r.system_id, "lede3");
        assert_eq!(r.human_ratings.len(), 1);
        assert_eq!(r.metric("bleu"), Some(0.31));
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn unknown_fields_warn_once() {
        let text = concat!(
            r#"{"dataset":"d","sample":"1","system":"a","output":"x","extra":1}"#,
            "\n",
            r#"{"system":"b","output":"y","extra":2,"sample":"1","dataset":"d"}"#,
            "\n"
        );
        let loaded = read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(loaded.records.len(), 2);
        assert_eq!(loaded.warnings.len(), 1);
        assert!(loaded.warnings[0].contains("extra"));
    }

    #[test]
    fn malformed_field_names_line_and_field() {
        let text = concat!(
            r#"{"dataset":"d","sample":"1","system":"a","output":"x"}"#,
            "\n",
            r#"{"dataset":"d","sample":"2","system":"a","output":"x","human":{"Fluency":"high"}}"#,
        );
        let err = read_jsonl(text.as_bytes()).unwrap_err();
        match err {
            Error::Field { line, field, .. } => {
                assert_eq!(line, 2);
                assert_eq!(field, "human.Fluency");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_output_is_an_error() {
        let err = read_jsonl(r#"{"dataset":"d","sample":"1","system":"a"}"#.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("output"), "{err}");
    }

    #[test]
    fn empty_file_warns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        std::fs::write(&path, "").unwrap();
        let loaded = load_records(&path, Format::Jsonl).unwrap();
        assert!(loaded.records.is_empty());
        assert!(loaded.warnings.iter().any(|w| w.contains("no records")));
    }

    #[test]
    fn duplicates_rejected_unless_allowed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dup.jsonl");
        let line = r#"{"dataset":"d","sample":"1","system":"a","output":"x"}"#;
        std::fs::write(&path, format!("{line}\n{line}\n")).unwrap();
        let err = load_records(&path, Format::Jsonl).unwrap_err();
        assert!(matches!(err, Error::DuplicateRecord { line: 2, .. }), "{err}");
        let ok = load_records_with(&path, Format::Jsonl, LoadOptions { allow_duplicates: true }).unwrap();
        assert_eq!(ok.records.len(), 2);
    }

    #[test]
    fn csv_dotted_headers() {
        let text = "dataset,sample,system,output,human.Fluency,metrics.bleu,references.0\nd,1,a,hello,4,0.5,hi there\nd,2,a,bye,,0.25,\n";
        let loaded = read_csv(text.as_bytes()).unwrap();
        assert_eq!(loaded.records.len(), 2);
        assert_eq!(loaded.records[0].rating("Fluency"), Some(4.0));
        assert_eq!(loaded.records[0].references, vec!["hi there".to_string()]);
        assert_eq!(loaded.records[1].rating("Fluency"), None);
        assert_eq!(loaded.records[1].metric("bleu"), Some(0.25));
    }

    #[test]
    fn csv_bad_number_names_column() {
        let text = "dataset,sample,system,output,human.Fluency\nd,1,a,hello,four\n";
        let err = read_csv(text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Field { line: 2, ref field, .. } if field == "human.Fluency"), "{err}");
    }
}
