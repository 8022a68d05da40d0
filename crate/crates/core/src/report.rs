//! Writing a [`ReportBundle`] to disk: `report.json`, `series/*.csv`,
//! `charts/*.svg` and a `manifest.json` of content hashes.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::pipeline::{OutletReport, ReportBundle};
use crate::series::DatedSeries;
use crate::svg::{line_chart, radar_chart, Line};

pub const REPORT_FILE: &str = "report.json";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Path relative to the output directory, `/`-separated.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

pub fn report_json(bundle: &ReportBundle) -> Result<String> {
    let mut s = serde_json::to_string_pretty(bundle)
        .map_err(|e| Error::invalid(format!("cannot serialize report: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Table with a `date` column followed by one column per series. Every
/// series must start on the same day and have the same length.
pub fn series_csv(columns: &[(&str, &DatedSeries)]) -> Result<String> {
    let Some((_, first)) = columns.first() else {
        return Err(Error::invalid("no series to write"));
    };
    if columns
        .iter()
        .any(|(_, s)| s.start_date != first.start_date || s.len() != first.len())
    {
        return Err(Error::Dimension("series in one table must share their dates".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["date".to_string()];
    header.extend(columns.iter().map(|(name, _)| name.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for (i, date) in first.dates().enumerate() {
        let mut row = vec![date.to_string()];
        row.extend(columns.iter().map(|(_, s)| s.values[i].to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

fn csv_err(e: csv::Error) -> Error {
    Error::invalid(format!("csv: {e}"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
}

/// `topic,lag,rho_or_beta,stat,p` rows: lag correlations carry the overlap
/// length as `stat`, β-regressions carry the t-statistic.
fn lag_table_csv(rows: impl Iterator<Item = (String, usize, f64, f64, f64)>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["topic", "lag", "rho_or_beta", "stat", "p"]).map_err(csv_err)?;
    for (topic, lag, value, stat, p) in rows {
        w.write_record([topic, lag.to_string(), value.to_string(), stat.to_string(), p.to_string()])
            .map_err(csv_err)?;
    }
    finish(w)
}

fn outlet_files(bundle: &ReportBundle, o: &OutletReport) -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    let n = &o.name;
    let [a, b] = &bundle.entities;

    let mentions: Vec<(&str, &DatedSeries)> =
        vec![(a.as_str(), &o.mention_counts[0]), (b.as_str(), &o.mention_counts[1])];
    files.push((format!("series/{n}_mentions.csv"), series_csv(&mentions)?));
    files.push((
        format!("charts/{n}_mentions.svg"),
        line_chart(
            &format!("{n}: sentences naming each entity"),
            "mentions per day",
            &mentions
                .iter()
                .map(|(l, s)| Line { label: l, start: s.start_date, values: &s.values })
                .collect::<Vec<_>>(),
        ),
    ));

    if let Some(cov) = &o.coverage {
        let names: Vec<String> = cov.topic_ids.iter().map(|t| format!("topic_{t}")).collect();
        let cols: Vec<(&str, &DatedSeries)> =
            names.iter().map(String::as_str).zip(cov.series.iter()).collect();
        if !cols.is_empty() {
            files.push((format!("series/{n}_coverage.csv"), series_csv(&cols)?));
        }
        files.push((
            format!("charts/{n}_coverage.svg"),
            line_chart(
                &format!("{n}: topic coverage"),
                "coverage",
                &cols
                    .iter()
                    .map(|(l, s)| Line { label: l, start: s.start_date, values: &s.values })
                    .collect::<Vec<_>>(),
            ),
        ));
    }
    if let Some(agenda) = &o.agenda {
        let topic_names: Vec<String> = match &bundle.topic_model {
            Some(tm) => tm
                .topics
                .iter()
                .map(|t| {
                    let head = t.keywords.iter().take(2).cloned().collect::<Vec<_>>().join(" ");
                    format!("{}: {head}", t.topic_id)
                })
                .collect(),
            None => (1..=agenda.len()).map(|i| i.to_string()).collect(),
        };
        files.push((
            format!("charts/{n}_agenda.svg"),
            radar_chart(&format!("{n}: media agenda"), &topic_names, agenda),
        ));
    }

    if let Some(s) = &o.sentiment {
        files.push((format!("series/{n}_sb.csv"), series_csv(&[("sb", &s.series)])?));
        files.push((
            format!("charts/{n}_sb.svg"),
            line_chart(
                &format!("{n}: sentiment bias {a} vs {b}"),
                "SB",
                &[Line { label: "SB", start: s.series.start_date, values: &s.series.values }],
            ),
        ));
        if !s.per_topic.is_empty() {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "topic", "a_pos", "a_neg", "a_neu", "b_pos", "b_neg", "b_neu", "sb", "significant",
                "ci_low", "ci_high", "stderr",
            ])
            .map_err(csv_err)?;
            for t in &s.per_topic {
                let bs = s.topic_bootstrap.iter().find(|b| b.topic_id == t.topic_id);
                let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                w.write_record([
                    t.topic_id.to_string(),
                    t.tally.a.positive.to_string(),
                    t.tally.a.negative.to_string(),
                    t.tally.a.neutral.to_string(),
                    t.tally.b.positive.to_string(),
                    t.tally.b.negative.to_string(),
                    t.tally.b.neutral.to_string(),
                    opt(t.value),
                    t.significant.to_string(),
                    opt(bs.map(|b| b.result.ci_low)),
                    opt(bs.map(|b| b.result.ci_high)),
                    opt(bs.map(|b| b.result.stderr)),
                ])
                .map_err(csv_err)?;
            }
            files.push((format!("series/{n}_topic_sb.csv"), finish(w)?));
        }
    }

    if !o.correlations.is_empty() {
        let rows = o.correlations.iter().flat_map(|t| {
            t.rows
                .iter()
                .map(|r| (t.series.clone(), r.lag, r.rho, r.n_effective as f64, r.p_value))
        });
        files.push((format!("series/{n}_correlations.csv"), lag_table_csv(rows)?));
    }
    if let Some(g) = &o.granger {
        let rows = g
            .results
            .iter()
            .map(|r| (format!("topic_{}", r.topic_id), r.tau, r.beta, r.t_stat, r.p_value));
        files.push((format!("series/{n}_granger.csv"), lag_table_csv(rows)?));
    }
    Ok(files)
}

/// Every output file's relative path and content, in a fixed order.
pub fn render_outputs(bundle: &ReportBundle) -> Result<Vec<(String, String)>> {
    let mut files = vec![(REPORT_FILE.to_string(), report_json(bundle)?)];
    files.push(("series/spread.csv".into(), series_csv(&[("spread", &bundle.spread)])?));
    files.push((
        "charts/spread.svg".into(),
        line_chart(
            &format!("Poll spread {} minus {}", bundle.entities[0], bundle.entities[1]),
            "percentage points",
            &[Line {
                label: "spread",
                start: bundle.spread.start_date,
                values: &bundle.spread.values,
            }],
        ),
    ));
    for o in &bundle.outlets {
        files.extend(outlet_files(bundle, o)?);
    }
    Ok(files)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes every output under `dir` and returns the manifest, which is also
/// written as `manifest.json`. On failure, files written so far are removed.
pub fn emit_outputs(bundle: &ReportBundle, dir: &Path) -> Result<Manifest> {
    let files = render_outputs(bundle)?;
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| {
        let mut entries = Vec::new();
        for (rel, contents) in &files {
            let path = dir.join(rel);
            write_file(&path, contents.as_bytes())?;
            written.push(path);
            entries.push(ManifestEntry {
                path: rel.clone(),
                sha256: sha256_hex(contents.as_bytes()),
                bytes: contents.len() as u64,
            });
        }
        entries.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest { files: entries };
        let mut json = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Error::invalid(e.to_string()))?;
        json.push('\n');
        let path = dir.join(MANIFEST_FILE);
        write_file(&path, json.as_bytes())?;
        written.push(path);
        Ok(manifest)
    })();
    if result.is_err() {
        for p in &written {
            let _ = std::fs::remove_file(p);
        }
    }
    result
}
