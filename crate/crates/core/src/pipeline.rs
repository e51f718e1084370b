//! End-to-end evaluation of one prediction against its ground truth.

use crate::correctness::error_map;
use crate::density::{profile_with_table, quantitative_from_profile, scan_with_table, SummedAreaTable};
use crate::error::{Error, Result};
use crate::pixel_metrics::pcm;
use crate::suppression::{apply_suppression, SuppressedErrors};
use crate::types::{ErrorMap, EvaluationReport, LabelMap, ReportInputs, SafetyConfig};

#[derive(Clone, Debug, Default)]
pub struct EvalOptions {
    /// Also record the density of every filter side and the quantitative metrics.
    pub profile: bool,
    pub inputs: ReportInputs,
}

/// Report plus the intermediate error maps, which the overlay writer needs.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub report: EvaluationReport,
    pub original: ErrorMap,
    pub suppressed: SuppressedErrors,
}

/// Error map, region suppression, edge suppression, then the density scan.
pub fn evaluate(pred: &LabelMap, gt: &LabelMap, cfg: &SafetyConfig, opts: &EvalOptions) -> Result<Evaluation> {
    cfg.validate()?;
    let pcm = pcm(pred, gt)?;
    let original = error_map(pred, gt, &cfg.ignore_labels)?;
    let suppressed = apply_suppression(&original, pred, gt, cfg)?;

    let filtered = &suppressed.filtered;
    let k_start = filtered.width().min(filtered.height());
    if cfg.k_safe > k_start {
        return Err(Error::FilterTooLarge {
            k: cfg.k_safe,
            max: k_start,
        });
    }
    let sat = SummedAreaTable::new(filtered);
    let mut scan = scan_with_table(&sat, k_start, cfg);
    let quantitative = if opts.profile {
        let profile = profile_with_table(&sat, cfg.k_safe, k_start);
        let q = quantitative_from_profile(&profile, cfg.alpha);
        scan.density_profile = Some(profile);
        q
    } else {
        None
    };

    let original_errors = original.count();
    let report = EvaluationReport {
        inputs: opts.inputs.clone(),
        pcm,
        original_errors,
        suppressed_step1: suppressed.stats.step1_suppressed,
        suppressed_step2: suppressed.stats.step2_suppressed,
        residual_errors: filtered.count(),
        scan,
        quantitative,
    };
    Ok(Evaluation {
        report,
        original,
        suppressed,
    })
}
