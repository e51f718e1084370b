use std::collections::BTreeMap;

use rayon::prelude::*;

use super::sat::SummedAreaTable;
use crate::error::{Error, Result};
use crate::types::{
    DensityProfile, ErrorMap, ExactRatio, OffendingWindow, QuantitativeMetrics, SafetyConfig, ScanOutcome,
    TraceStep, Verdict,
};

/// Smallest positive side `K` such that `count / K² < alpha`.
///
/// Any window of side `K` or more holding at most `count` errors therefore
/// stays below the threshold.
pub fn min_filter_bound(count: u64, alpha: ExactRatio) -> usize {
    let (p, q) = (alpha.numer() as u128, alpha.denom() as u128);
    assert!(p > 0, "density threshold must be positive");
    let below = |k: u128| count as u128 * q < p * k * k;
    // floor(sqrt(count * q / p)) is within one of the answer.
    let mut k = ((count as u128 * q) / p).isqrt().max(1);
    while k > 1 && below(k - 1) {
        k -= 1;
    }
    while !below(k) {
        k += 1;
    }
    k as usize
}

fn check_k_safe(errors: &ErrorMap, cfg: &SafetyConfig) -> Result<usize> {
    let k_start = errors.min_side();
    if cfg.k_safe == 0 || cfg.k_safe > k_start {
        return Err(Error::FilterTooLarge {
            k: cfg.k_safe,
            max: k_start,
        });
    }
    Ok(k_start)
}

/// Decides whether any `k x k` window with `k >= k_safe` reaches the density
/// threshold, visiting only the filter sides that the error counts cannot rule out.
///
/// The search starts at the smaller image side. After each safe scan the next
/// side is one below the smallest side guaranteed to stay under the threshold
/// given the largest count just observed. The first bound uses the total error
/// count of the map, so non-square images get the same conservative start as
/// square ones. The loop stops at the first offending window.
pub fn qualitative_scan(errors: &ErrorMap, cfg: &SafetyConfig) -> Result<ScanOutcome> {
    let k_start = check_k_safe(errors, cfg)?;
    let sat = SummedAreaTable::new(errors);
    Ok(scan_with_table(&sat, k_start, cfg))
}

pub(crate) fn scan_with_table(sat: &SummedAreaTable, k_start: usize, cfg: &SafetyConfig) -> ScanOutcome {
    let alpha = cfg.alpha;
    let mut trace = Vec::new();
    let mut k = k_start;
    let mut first = true;
    while k >= cfg.k_safe {
        let stats = sat.max_window(k).expect("filter side stays within the image");
        trace.push(TraceStep {
            k,
            max_count: stats.max_count,
        });
        let area = (k as u64) * (k as u64);
        if alpha.is_reached_by(stats.max_count, area) {
            let (row, col) = stats.argmax_window;
            return ScanOutcome {
                verdict: Verdict::Unsafe,
                offending_window: Some(OffendingWindow {
                    row,
                    col,
                    k,
                    count: stats.max_count,
                }),
                trace,
                density_profile: None,
            };
        }
        let next = if first {
            (min_filter_bound(sat.total(), alpha) - 1).min(k - 1)
        } else {
            min_filter_bound(stats.max_count, alpha) - 1
        };
        debug_assert!(next < k, "filter side must strictly decrease");
        k = next;
        first = false;
    }
    ScanOutcome {
        verdict: Verdict::Safe,
        offending_window: None,
        trace,
        density_profile: None,
    }
}

/// Maximum window error count for every side in `k_safe..=min(width, height)`.
///
/// Sides are evaluated in parallel; the result does not depend on scheduling.
pub fn density_profile(errors: &ErrorMap, cfg: &SafetyConfig) -> Result<DensityProfile> {
    let k_start = check_k_safe(errors, cfg)?;
    let sat = SummedAreaTable::new(errors);
    Ok(profile_with_table(&sat, cfg.k_safe, k_start))
}

pub(crate) fn profile_with_table(sat: &SummedAreaTable, k_safe: usize, k_start: usize) -> DensityProfile {
    let max_counts: BTreeMap<usize, u64> = (k_safe..=k_start)
        .into_par_iter()
        .map(|k| (k, sat.max_window(k).expect("side within bounds").max_count))
        .collect();
    DensityProfile { max_counts }
}

/// Summarizes a density profile against the configured threshold.
pub fn quantitative_from_profile(profile: &DensityProfile, alpha: ExactRatio) -> Option<QuantitativeMetrics> {
    let max_density = profile.max_density()?;
    let max_unsafe_k = profile.iter().filter(|d| d.reaches(alpha)).map(|d| d.k).max();
    Some(QuantitativeMetrics {
        max_unsafe_k,
        max_density,
    })
}

/// Largest unsafe filter side and the maximum density over all sides `>= k_safe`.
pub fn quantitative_metrics(errors: &ErrorMap, cfg: &SafetyConfig) -> Result<QuantitativeMetrics> {
    let profile = density_profile(errors, cfg)?;
    Ok(quantitative_from_profile(&profile, cfg.alpha).expect("profile covers at least k_safe"))
}
