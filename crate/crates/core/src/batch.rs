//! Evaluating many prediction/ground-truth pairs listed in a manifest.
//!
//! A manifest has one whitespace-separated `prediction ground_truth` pair per
//! line. Blank lines and text after `#` are ignored. Relative paths resolve
//! against the manifest's directory.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{emit_report, load_label_pair, ConfigDocument};
use crate::pipeline::{evaluate, EvalOptions};
use crate::types::{EvaluationReport, ReportInputs, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub prediction: PathBuf,
    pub ground_truth: PathBuf,
    /// One-based manifest line.
    pub line: usize,
}

pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<Vec<ManifestEntry>> {
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [pred, gt] = fields[..] else {
            return Err(Error::InvalidInput(format!(
                "manifest line {}: expected \"prediction ground_truth\", got {} fields",
                idx + 1,
                fields.len()
            )));
        };
        entries.push(ManifestEntry {
            prediction: base_dir.join(pred),
            ground_truth: base_dir.join(gt),
            line: idx + 1,
        });
    }
    Ok(entries)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestEntry>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_manifest(&text, path.parent().unwrap_or(Path::new("")))
}

#[derive(Clone, Debug, Default)]
pub struct BatchOptions {
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    /// Fail the whole batch when any image fails.
    pub strict: bool,
    pub profile: bool,
    /// Where per-image reports go, when set.
    pub report_dir: Option<PathBuf>,
    pub config_label: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ImageSummary {
    pub index: usize,
    pub prediction: String,
    pub ground_truth: String,
    pub verdict: Option<String>,
    pub pcm: Option<f64>,
    pub residual_errors: Option<u64>,
    pub report: Option<String>,
    pub error: Option<String>,
}

/// Aggregate over a manifest, in manifest order.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BatchSummary {
    pub n_images: usize,
    pub n_unsafe: usize,
    pub n_failed: usize,
    pub mean_pcm: Option<f64>,
    pub images: Vec<ImageSummary>,
}

impl BatchSummary {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

fn report_name(index: usize, entry: &ManifestEntry) -> String {
    let stem = entry
        .prediction
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("image");
    format!("{index:04}_{stem}.json")
}

fn evaluate_entry(
    index: usize,
    entry: &ManifestEntry,
    doc: &ConfigDocument,
    opts: &BatchOptions,
) -> Result<(EvaluationReport, Option<String>)> {
    let (pred, gt) = load_label_pair(&entry.prediction, &entry.ground_truth, &doc.labels)?;
    let eval_opts = EvalOptions {
        profile: opts.profile,
        inputs: ReportInputs {
            prediction: Some(entry.prediction.display().to_string()),
            ground_truth: Some(entry.ground_truth.display().to_string()),
            config: opts.config_label.clone(),
        },
    };
    let report = evaluate(&pred, &gt, &doc.safety, &eval_opts)?.report;
    let written = match &opts.report_dir {
        Some(dir) => {
            let path = dir.join(report_name(index, entry));
            emit_report(&report, &path)?;
            Some(path.display().to_string())
        }
        None => None,
    };
    Ok((report, written))
}

/// Evaluates every entry, in parallel across images.
pub fn run_batch(entries: &[ManifestEntry], doc: &ConfigDocument, opts: &BatchOptions) -> Result<BatchSummary> {
    if let Some(dir) = &opts.report_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<(EvaluationReport, Option<String>)>> = pool.install(|| {
        entries
            .par_iter()
            .enumerate()
            .map(|(i, e)| evaluate_entry(i, e, doc, opts))
            .collect()
    });

    let mut images = Vec::with_capacity(entries.len());
    let (mut n_unsafe, mut n_failed, mut pcm_sum, mut n_ok) = (0, 0, 0.0, 0usize);
    for (index, (entry, result)) in entries.iter().zip(results).enumerate() {
        let mut summary = ImageSummary {
            index,
            prediction: entry.prediction.display().to_string(),
            ground_truth: entry.ground_truth.display().to_string(),
            verdict: None,
            pcm: None,
            residual_errors: None,
            report: None,
            error: None,
        };
        match result {
            Ok((report, written)) => {
                if report.scan.verdict == Verdict::Unsafe {
                    n_unsafe += 1;
                }
                pcm_sum += report.pcm;
                n_ok += 1;
                summary.verdict = Some(report.scan.verdict.as_str().to_string());
                summary.pcm = Some(report.pcm);
                summary.residual_errors = Some(report.residual_errors);
                summary.report = written;
            }
            Err(e) if opts.strict => {
                return Err(Error::InvalidInput(format!("manifest line {}: {e}", entry.line)));
            }
            Err(e) => {
                n_failed += 1;
                summary.error = Some(e.to_string());
            }
        }
        images.push(summary);
    }
    Ok(BatchSummary {
        n_images: entries.len(),
        n_unsafe,
        n_failed,
        mean_pcm: (n_ok > 0).then(|| pcm_sum / n_ok as f64),
        images,
    })
}
