//! JSON evaluation reports.
//!
//! Densities are written twice: as the exact unreduced fraction
//! `"count/k²"` and as an advisory decimal.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{
    DensityProfile, EvaluationReport, OffendingWindow, QuantitativeMetrics, ReportInputs, ScanOutcome, TraceStep,
    Verdict, WindowDensity,
};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub inputs: InputsDoc,
    pub pcm: f64,
    pub suppression: SuppressionDoc,
    pub scan: ScanDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantitative: Option<QuantitativeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<BTreeMap<usize, String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq, Default)]
pub struct InputsDoc {
    pub prediction: Option<String>,
    pub ground_truth: Option<String>,
    pub config: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SuppressionDoc {
    pub original: u64,
    pub step1: u64,
    pub step2: u64,
    pub residual: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ScanDoc {
    pub verdict: String,
    pub offending_window: Option<WindowDoc>,
    pub trace: Vec<TraceDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct WindowDoc {
    pub row: usize,
    pub col: usize,
    pub k: usize,
    pub count: u64,
    pub density_frac: String,
    pub density: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TraceDoc {
    pub k: usize,
    pub max_count: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct QuantitativeDoc {
    pub max_unsafe_k: Option<usize>,
    pub max_density_frac: String,
    pub max_density: f64,
}

impl From<&EvaluationReport> for ReportDocument {
    fn from(r: &EvaluationReport) -> Self {
        let window = r.scan.offending_window.map(|w| WindowDoc {
            row: w.row,
            col: w.col,
            k: w.k,
            count: w.count,
            density_frac: w.density().to_string(),
            density: w.density().to_f64(),
        });
        ReportDocument {
            inputs: InputsDoc {
                prediction: r.inputs.prediction.clone(),
                ground_truth: r.inputs.ground_truth.clone(),
                config: r.inputs.config.clone(),
            },
            pcm: r.pcm,
            suppression: SuppressionDoc {
                original: r.original_errors,
                step1: r.suppressed_step1,
                step2: r.suppressed_step2,
                residual: r.residual_errors,
            },
            scan: ScanDoc {
                verdict: r.scan.verdict.as_str().to_string(),
                offending_window: window,
                trace: r
                    .scan
                    .trace
                    .iter()
                    .map(|t| TraceDoc {
                        k: t.k,
                        max_count: t.max_count,
                    })
                    .collect(),
            },
            quantitative: r.quantitative.map(|q| QuantitativeDoc {
                max_unsafe_k: q.max_unsafe_k,
                max_density_frac: q.max_density.to_string(),
                max_density: q.max_density.to_f64(),
            }),
            profile: r
                .scan
                .density_profile
                .as_ref()
                .map(|p| p.iter().map(|d| (d.k, d.to_string())).collect()),
        }
    }
}

impl TryFrom<ReportDocument> for EvaluationReport {
    type Error = Error;

    fn try_from(doc: ReportDocument) -> Result<Self> {
        let verdict = match doc.scan.verdict.as_str() {
            "safe" => Verdict::Safe,
            "unsafe" => Verdict::Unsafe,
            other => return Err(Error::Report(format!("unknown verdict {other:?}"))),
        };
        let offending_window = doc
            .scan
            .offending_window
            .map(|w| {
                let d = WindowDensity::parse_fraction(&w.density_frac)?;
                if d.k != w.k || d.count != w.count {
                    return Err(Error::Report(format!(
                        "window fraction {} disagrees with k={} count={}",
                        w.density_frac, w.k, w.count
                    )));
                }
                Ok(OffendingWindow {
                    row: w.row,
                    col: w.col,
                    k: w.k,
                    count: w.count,
                })
            })
            .transpose()?;
        if (verdict == Verdict::Unsafe) != offending_window.is_some() {
            return Err(Error::Report("offending window must be present exactly when unsafe".into()));
        }
        let density_profile = doc
            .profile
            .map(|p| {
                let mut max_counts = BTreeMap::new();
                for (k, frac) in p {
                    let d = WindowDensity::parse_fraction(&frac)?;
                    if d.k != k {
                        return Err(Error::Report(format!("profile entry {k} has fraction {frac}")));
                    }
                    max_counts.insert(k, d.count);
                }
                Ok(DensityProfile { max_counts })
            })
            .transpose()?;
        let quantitative = doc
            .quantitative
            .map(|q| {
                Ok::<_, Error>(QuantitativeMetrics {
                    max_unsafe_k: q.max_unsafe_k,
                    max_density: WindowDensity::parse_fraction(&q.max_density_frac)?,
                })
            })
            .transpose()?;
        if doc.suppression.step1 + doc.suppression.step2 + doc.suppression.residual != doc.suppression.original {
            return Err(Error::Report("suppression counts do not add up to the original error count".into()));
        }
        Ok(EvaluationReport {
            inputs: ReportInputs {
                prediction: doc.inputs.prediction,
                ground_truth: doc.inputs.ground_truth,
                config: doc.inputs.config,
            },
            pcm: doc.pcm,
            original_errors: doc.suppression.original,
            suppressed_step1: doc.suppression.step1,
            suppressed_step2: doc.suppression.step2,
            residual_errors: doc.suppression.residual,
            scan: ScanOutcome {
                verdict,
                offending_window,
                trace: doc
                    .scan
                    .trace
                    .into_iter()
                    .map(|t| TraceStep {
                        k: t.k,
                        max_count: t.max_count,
                    })
                    .collect(),
                density_profile,
            },
            quantitative,
        })
    }
}

/// Pretty-printed JSON text of a report, newline terminated.
pub fn report_to_json(report: &EvaluationReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(&ReportDocument::from(report))?;
    text.push('\n');
    Ok(text)
}

pub fn parse_report(text: &str) -> Result<EvaluationReport> {
    let doc: ReportDocument = serde_json::from_str(text)?;
    doc.try_into()
}

pub fn emit_report(report: &EvaluationReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, report_to_json(report)?).map_err(|e| Error::io(path, e))
}

pub fn read_report(path: impl AsRef<Path>) -> Result<EvaluationReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_report(&text)
}
