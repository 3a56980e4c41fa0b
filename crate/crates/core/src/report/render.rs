use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::OutputFormat;
use crate::checklist::{ChecklistReport, Outcome, PairSpec, Pairing, ScoreKey};
use crate::corpus::{Difficulty, Domain, Task};
use crate::error::{Error, Result};
use crate::stats::KsReport;

/// One line of the long-format CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub dataset: String,
    pub metric: String,
    pub aspect: String,
    pub assessment: String,
    pub statistic: String,
    /// A number, empty when undefined, or the reason on `skipped` rows.
    pub value: String,
    pub n: usize,
}

impl CsvRow {
    fn new(dataset: &str, metric: &str, aspect: &str, assessment: &str, statistic: impl Into<String>) -> Self {
        CsvRow {
            dataset: dataset.to_string(),
            metric: metric.to_string(),
            aspect: aspect.to_string(),
            assessment: assessment.to_string(),
            statistic: statistic.into(),
            value: String::new(),
            n: 0,
        }
    }

    fn value(mut self, v: Option<f64>, n: usize) -> Self {
        self.value = v.map(|x| x.to_string()).unwrap_or_default();
        self.n = n;
        self
    }

    fn skipped(mut self, reason: &str) -> Self {
        self.statistic = "skipped".into();
        self.value = reason.to_string();
        self
    }

    pub fn numeric(&self) -> Option<f64> {
        self.value.parse().ok()
    }
}

fn key_columns(key: &ScoreKey) -> (&str, &str) {
    match key {
        ScoreKey::Human(aspect) => ("human", aspect.as_str()),
        ScoreKey::Metric(metric) => (metric.as_str(), ""),
    }
}

fn pairing_name(p: Pairing) -> &'static str {
    match p {
        Pairing::ByPairGroup => "by_pair_group",
        Pairing::CrossProduct => "cross_product",
    }
}

pub fn csv_rows(report: &ChecklistReport) -> Vec<CsvRow> {
    let mut rows = Vec::new();

    for t in &report.transfer {
        for e in &t.per_dataset {
            for c in [&e.pearson, &e.spearman] {
                let stat = c.method.to_string();
                rows.push(CsvRow::new(&e.dataset_id, &t.metric, &e.aspect, "transfer", stat).value(c.rho, c.n));
            }
        }
        for (ds, reason) in &t.skipped {
            rows.push(CsvRow::new(ds, &t.metric, &t.policy.to_string(), "transfer", "").skipped(reason));
        }
        for (prefix, groups) in [("domain", &t.by_domain), ("task", &t.by_task)] {
            for g in groups {
                let group = format!("{prefix}:{}", g.group);
                let stat = format!("mean_{}", t.method);
                rows.push(
                    CsvRow::new(&group, &t.metric, &t.policy.to_string(), "transfer", stat).value(g.mean_rho, g.datasets),
                );
            }
        }
    }

    for p in &report.pairs {
        match &p.pairs {
            Outcome::Computed(list) => {
                for pair in list {
                    let stat = format!("pair[{}:{}]", pair.difficulty, pair.label());
                    rows.push(CsvRow::new(&p.dataset_id, "", "", "pairs", stat).value(None, 2));
                }
            }
            Outcome::Skipped { reason } => rows.push(CsvRow::new(&p.dataset_id, "", "", "pairs", "").skipped(reason)),
        }
    }

    for e in &report.aspect_eval {
        let base = |stat: String| CsvRow::new(&e.dataset_id, &e.metric, &e.aspect, "aspect_ks", stat);
        match &e.result {
            Outcome::Computed(ks) => {
                for (label, outcome) in ks.comparisons() {
                    let stat = format!("d[{label}]");
                    rows.push(match outcome {
                        Outcome::Computed(r) => base(stat).value(Some(r.d), r.n_a + r.n_b),
                        Outcome::Skipped { reason } => base(stat).skipped(reason),
                    });
                }
            }
            Outcome::Skipped { reason } => rows.push(base(String::new()).skipped(reason)),
        }
    }

    for e in &report.aspect_pref {
        let base = |stat: &str| CsvRow::new(&e.dataset_id, &e.metric, &e.aspect, "aspect_pref", stat);
        match &e.result {
            Outcome::Computed(p) => {
                let len = p.similarity.len_a + p.similarity.len_b;
                rows.push(base("similarity").value(Some(p.similarity.s), len));
                rows.push(base("edit_distance").value(Some(p.similarity.lev as f64), len));
            }
            Outcome::Skipped { reason } => rows.push(base("").skipped(reason)),
        }
    }

    for e in &report.system_eval {
        let (metric, aspect) = key_columns(&e.key);
        let stat = format!("d[{}:{}]", e.pair.difficulty, e.pair.label());
        let row = CsvRow::new(&e.dataset_id, metric, aspect, "system_ks", stat);
        rows.push(match &e.result {
            Outcome::Computed(r) => row.value(Some(r.d), r.n_a + r.n_b),
            Outcome::Skipped { reason } => row.skipped(reason),
        });
    }

    for e in &report.system_pref {
        let base = |stat: &str| CsvRow::new(&e.dataset_id, &e.metric, &e.aspect, "system_pref", stat);
        match &e.result {
            Outcome::Computed(p) => {
                let len = p.similarity.len_a + p.similarity.len_b;
                rows.push(base("similarity").value(Some(p.similarity.s), len));
                rows.push(base("edit_distance").value(Some(p.similarity.lev as f64), len));
            }
            Outcome::Skipped { reason } => rows.push(base("").skipped(reason)),
        }
    }

    for e in &report.win_matrices {
        let (metric, aspect) = key_columns(&e.key);
        let assessment = format!("win_matrix:{}", pairing_name(e.pairing));
        match &e.result {
            Outcome::Computed(m) => {
                for (i, a) in m.systems.iter().enumerate() {
                    for (j, b) in m.systems.iter().enumerate() {
                        if i != j {
                            let stat = format!("win[{a}>{b}]");
                            rows.push(
                                CsvRow::new(&e.dataset_id, metric, aspect, &assessment, stat)
                                    .value(m.wins[i][j], m.counts[i][j]),
                            );
                        }
                    }
                }
            }
            Outcome::Skipped { reason } => {
                rows.push(CsvRow::new(&e.dataset_id, metric, aspect, &assessment, "").skipped(reason))
            }
        }
    }
    rows
}

pub fn render_csv(report: &ChecklistReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in csv_rows(report) {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn render_json(report: &ChecklistReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

fn fmt4(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.4}"),
        None => "n/a".into(),
    }
}

fn table_header(out: &mut String, columns: &[String]) {
    let _ = writeln!(out, "| {} |", columns.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(columns.len()));
}

fn table_row(out: &mut String, cells: &[String]) {
    let _ = writeln!(out, "| {} |", cells.join(" | "));
}

fn md_pair(p: &PairSpec) -> String {
    format!("{} vs {}", p.system_a, p.system_b)
}

fn ks_d(o: &Outcome<KsReport>) -> Option<f64> {
    o.computed().map(|r| r.d)
}

fn mean(mut values: Vec<f64>) -> Option<f64> {
    (!values.is_empty()).then(|| crate::stats::mean(&mut values))
}

pub fn render_markdown(report: &ChecklistReport) -> String {
    let mut out = String::from("# Metric preference checklist\n");

    if !report.transfer.is_empty() {
        let method = report.transfer[0].method;
        let _ = writeln!(out, "\n## Transfer ({method})\n");
        let mut cols = vec!["Metric".to_string(), "Aspect".to_string()];
        cols.extend(Domain::ALL.iter().map(|d| d.to_string()));
        table_header(&mut out, &cols);
        for t in &report.transfer {
            let mut cells = vec![t.metric.clone(), t.policy.to_string()];
            for d in Domain::ALL {
                let g = t.by_domain.iter().find(|g| g.group == d.to_string());
                cells.push(fmt4(g.and_then(|g| g.mean_rho)));
            }
            table_row(&mut out, &cells);
        }

        let tasks: Vec<String> = {
            let mut seen: Vec<Task> = report
                .transfer
                .iter()
                .flat_map(|t| t.per_dataset.iter().map(|e| e.task))
                .collect();
            seen.sort();
            seen.dedup();
            seen.iter().map(|t| t.to_string()).collect()
        };
        if !tasks.is_empty() {
            out.push('\n');
            let mut cols = vec!["Metric".to_string(), "Aspect".to_string()];
            cols.extend(tasks.iter().cloned());
            table_header(&mut out, &cols);
            for t in &report.transfer {
                let mut cells = vec![t.metric.clone(), t.policy.to_string()];
                for task in &tasks {
                    let g = t.by_task.iter().find(|g| &g.group == task);
                    cells.push(fmt4(g.and_then(|g| g.mean_rho)));
                }
                table_row(&mut out, &cells);
            }
        }

        out.push_str("\n### Per dataset\n\n");
        let cols = ["Metric", "Dataset", "Task", "Domain", "Aspect", "Pearson", "Spearman", "n"];
        table_header(&mut out, &cols.map(String::from));
        for t in &report.transfer {
            for e in &t.per_dataset {
                table_row(
                    &mut out,
                    &[
                        t.metric.clone(),
                        e.dataset_id.clone(),
                        e.task.to_string(),
                        e.domain.to_string(),
                        e.aspect.clone(),
                        fmt4(e.pearson.rho),
                        fmt4(e.spearman.rho),
                        e.spearman.n.to_string(),
                    ],
                );
            }
            for (ds, reason) in &t.skipped {
                let _ = writeln!(out, "\nSkipped {} on {ds}: {reason}", t.metric);
            }
        }
    }

    if !report.aspect_eval.is_empty() || !report.aspect_pref.is_empty() {
        out.push_str("\n## Aspect-level evaluation\n\n");
        let cols = ["Dataset", "Metric", "Aspect", "Lo-Hi", "Lo-Mod", "Hi-Mod", "Similarity"];
        table_header(&mut out, &cols.map(String::from));
        let mut cells: BTreeMap<(&str, &str, &str), [Option<f64>; 4]> = BTreeMap::new();
        let mut order = Vec::new();
        for e in &report.aspect_eval {
            let k = (e.dataset_id.as_str(), e.metric.as_str(), e.aspect.as_str());
            let slot = cells.entry(k).or_insert_with(|| {
                order.push(k);
                [None; 4]
            });
            if let Outcome::Computed(ks) = &e.result {
                slot[0] = ks_d(&ks.low_high);
                slot[1] = ks_d(&ks.low_moderate);
                slot[2] = ks_d(&ks.high_moderate);
            }
        }
        for e in &report.aspect_pref {
            let k = (e.dataset_id.as_str(), e.metric.as_str(), e.aspect.as_str());
            let slot = cells.entry(k).or_insert_with(|| {
                order.push(k);
                [None; 4]
            });
            slot[3] = e.result.computed().map(|p| p.similarity.s);
        }
        for k in order {
            let v = cells[&k];
            let mut row = vec![k.0.to_string(), k.1.to_string(), k.2.to_string()];
            row.extend(v.iter().map(|x| fmt4(*x)));
            table_row(&mut out, &row);
        }
    }

    if !report.system_eval.is_empty() {
        out.push_str("\n## System-level evaluation (mean KS distance over pairs)\n\n");
        let mut keys: Vec<&ScoreKey> = Vec::new();
        for e in &report.system_eval {
            if !keys.contains(&&e.key) {
                keys.push(&e.key);
            }
        }
        let mut groups: Vec<(&str, Difficulty)> = Vec::new();
        for e in &report.system_eval {
            let g = (e.dataset_id.as_str(), e.pair.difficulty);
            if !groups.contains(&g) {
                groups.push(g);
            }
        }
        let mut cols = vec!["Dataset".to_string(), "Difficulty".to_string()];
        cols.extend(keys.iter().map(|k| k.to_string()));
        table_header(&mut out, &cols);
        for (ds, diff) in &groups {
            let mut row = vec![ds.to_string(), diff.to_string()];
            for key in &keys {
                let ds_values: Vec<f64> = report
                    .system_eval
                    .iter()
                    .filter(|e| e.dataset_id == *ds && e.pair.difficulty == *diff && &e.key == *key)
                    .filter_map(|e| ks_d(&e.result))
                    .collect();
                row.push(fmt4(mean(ds_values)));
            }
            table_row(&mut out, &row);
        }

        out.push_str("\n### Per pair\n\n");
        let mut cols = vec!["Dataset".to_string(), "Difficulty".to_string(), "Pair".to_string()];
        cols.extend(keys.iter().map(|k| k.to_string()));
        table_header(&mut out, &cols);
        let mut pairs: Vec<(&str, Difficulty, String)> = Vec::new();
        for e in &report.system_eval {
            let p = (e.dataset_id.as_str(), e.pair.difficulty, md_pair(&e.pair));
            if !pairs.contains(&p) {
                pairs.push(p);
            }
        }
        for (ds, diff, label) in &pairs {
            let mut row = vec![ds.to_string(), diff.to_string(), label.clone()];
            for key in &keys {
                let d = report
                    .system_eval
                    .iter()
                    .find(|e| e.dataset_id == *ds && e.pair.difficulty == *diff && &md_pair(&e.pair) == label && &e.key == *key)
                    .and_then(|e| ks_d(&e.result));
                row.push(fmt4(d));
            }
            table_row(&mut out, &row);
        }
    }

    if !report.system_pref.is_empty() {
        out.push_str("\n## System-level preference similarity\n\n");
        let mut metrics: Vec<&str> = Vec::new();
        let mut rows: Vec<(&str, &str)> = Vec::new();
        for e in &report.system_pref {
            if !metrics.contains(&e.metric.as_str()) {
                metrics.push(&e.metric);
            }
            let r = (e.dataset_id.as_str(), e.aspect.as_str());
            if !rows.contains(&r) {
                rows.push(r);
            }
        }
        let mut cols = vec!["Dataset".to_string(), "Aspect".to_string()];
        cols.extend(metrics.iter().map(|m| m.to_string()));
        table_header(&mut out, &cols);
        for (ds, aspect) in &rows {
            let mut row = vec![ds.to_string(), aspect.to_string()];
            for m in &metrics {
                let s = report
                    .system_pref
                    .iter()
                    .find(|e| e.dataset_id == *ds && e.aspect == *aspect && e.metric == *m)
                    .and_then(|e| e.result.computed())
                    .map(|p| p.similarity.s);
                row.push(fmt4(s));
            }
            table_row(&mut out, &row);
        }
    }

    if !report.win_matrices.is_empty() {
        out.push_str("\n## Win matrices\n");
        for e in &report.win_matrices {
            let _ = writeln!(out, "\n### {} / {} ({})\n", e.dataset_id, e.key, pairing_name(e.pairing));
            match &e.result {
                Outcome::Computed(m) => {
                    let mut cols = vec!["row beats column".to_string()];
                    cols.extend(m.systems.iter().cloned());
                    table_header(&mut out, &cols);
                    for (i, a) in m.systems.iter().enumerate() {
                        let mut row = vec![a.clone()];
                        row.extend(m.wins[i].iter().map(|w| fmt4(*w)));
                        table_row(&mut out, &row);
                    }
                }
                Outcome::Skipped { reason } => {
                    let _ = writeln!(out, "Skipped: {reason}");
                }
            }
        }
    }
    out
}

pub fn render(report: &ChecklistReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => render_json(report),
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Markdown => Ok(render_markdown(report)),
    }
}

/// Write one file per format into `dir`, creating it if needed.
pub fn write_report(report: &ChecklistReport, dir: &Path, formats: &[OutputFormat]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::with_capacity(formats.len());
    for &format in formats {
        let path = dir.join(format.file_name());
        let text = render(report, format)?;
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checklist::{run_checklist, ChecklistParams};
    use crate::corpus::{assemble, DatasetSpec, Record};

    fn report() -> ChecklistReport {
        let spec = DatasetSpec::new("d", Task::TextSumm)
            .with_aspects(["Fluency"])
            .with_domain("m", Domain::InDomain);
        let mut records = Vec::new();
        for (si, sys) in ["a", "b", "c"].iter().enumerate() {
            for s in 0..6 {
                let rating = 1.0 + ((si * 2 + s) % 5) as f64;
                records.push(
                    Record::new("d", format!("s{s}"), *sys, "x")
                        .with_rating("Fluency", rating)
                        .with_metric("m", rating * 0.1 + 1.0 / 3.0)
                        .with_pair_group(format!("g{s}")),
                );
            }
        }
        let datasets = assemble(&[spec], records);
        run_checklist(&datasets, &ChecklistParams::default())
    }

    #[test]
    fn csv_round_trip_full_precision() {
        let r = report();
        let text = render_csv(&r).unwrap();
        assert!(text.starts_with("dataset,metric,aspect,assessment,statistic,value,n\n"));
        let rows = parse_csv(&text).unwrap();
        assert_eq!(rows, csv_rows(&r));
        let d = r.aspect_eval[0].result.computed().unwrap().low_high.computed().unwrap().d;
        let row = rows.iter().find(|x| x.statistic == "d[Lo-Hi]").unwrap();
        assert_eq!(row.numeric().unwrap().to_bits(), d.to_bits());
    }

    #[test]
    fn json_round_trip() {
        let r = report();
        let text = render_json(&r).unwrap();
        let back: ChecklistReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn markdown_has_every_section() {
        let md = render_markdown(&report());
        for heading in [
            "## Transfer (spearman)",
            "## Aspect-level evaluation",
            "## System-level evaluation",
            "## System-level preference similarity",
            "## Win matrices",
        ] {
            assert!(md.contains(heading), "missing {heading}\n{md}");
        }
        assert!(md.contains("| Lo-Hi |"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = report();
        let b = report();
        for f in OutputFormat::ALL {
            assert_eq!(render(&a, f).unwrap(), render(&b, f).unwrap());
        }
    }

    #[test]
    fn unwritable_dir_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "").unwrap();
        let err = write_report(&report(), &blocker.join("sub"), &OutputFormat::ALL).unwrap_err();
        assert!(err.to_string().contains("file"), "{err}");
    }

    #[test]
    fn writes_one_file_per_format() {
        let dir = tempfile::tempdir().unwrap();
        let paths = write_report(&report(), dir.path(), &OutputFormat::ALL).unwrap();
        assert_eq!(paths.len(), 3);
        assert!(paths.iter().all(|p| p.is_file()));
    }
}
