//! Error suppression applied before the density scan.
//!
//! Step 1 clears errors outside the critical region. Step 2 clears errors on
//! ground-truth class boundaries whose predicted class already occurs in the
//! surrounding 3x3 patch. Both steps only ever clear errors.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::types::{ClassId, CriticalRegion, ErrorMap, LabelMap, OutsideRegionPolicy, PixelRect, SafetyConfig};

/// How many errors each step removed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuppressionStats {
    pub step1_suppressed: u64,
    pub step2_suppressed: u64,
}

/// Error maps after each suppression stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuppressedErrors {
    pub region: PixelRect,
    /// After step 1.
    pub after_region: ErrorMap,
    /// Step 2 applied to the original errors alone.
    pub edge_only: ErrorMap,
    /// Step 1 followed by step 2; this is what the density scan sees.
    pub filtered: ErrorMap,
    pub stats: SuppressionStats,
}

/// Resolves the configured critical region to pixels.
///
/// Fractional regions are anchored at the bottom edge and centered
/// horizontally; extents round half up and a leftover odd column goes to the
/// right margin.
pub fn resolve_critical_region(region: &CriticalRegion, width: usize, height: usize) -> Result<PixelRect> {
    match *region {
        CriticalRegion::Fractions {
            vertical,
            horizontal,
        } => {
            let h = vertical.scale_round_half_up(height).min(height);
            let w = horizontal.scale_round_half_up(width).min(width);
            if h == 0 || w == 0 {
                return Err(Error::DegenerateRegion { width, height });
            }
            let left = (width - w) / 2;
            Ok(PixelRect {
                top: height - h,
                left,
                bottom: height - 1,
                right: left + w - 1,
            })
        }
        CriticalRegion::Rect(rect) => {
            if rect.fits(width, height) {
                Ok(rect)
            } else {
                Err(Error::RegionOutOfBounds(rect.to_string()))
            }
        }
    }
}

/// Step 1: clears every error outside `region`.
pub fn suppress_outside_region(errors: &ErrorMap, region: &PixelRect) -> Result<ErrorMap> {
    if !region.fits(errors.width(), errors.height()) {
        return Err(Error::RegionOutOfBounds(region.to_string()));
    }
    ErrorMap::from_fn(errors.width(), errors.height(), |r, c| {
        errors.get(r, c) && region.contains(r, c)
    })
}

fn neighborhood(gt: &LabelMap, row: usize, col: usize) -> impl Iterator<Item = ClassId> + '_ {
    let rows = row.saturating_sub(1)..=(row + 1).min(gt.height() - 1);
    rows.flat_map(move |r| {
        let cols = col.saturating_sub(1)..=(col + 1).min(gt.width() - 1);
        cols.map(move |c| gt.get(r, c))
    })
}

/// Distinct ground-truth classes in the 3x3 patch centered at `(row, col)`,
/// truncated at the image border.
pub fn edge_correct_labels(gt: &LabelMap, row: usize, col: usize) -> BTreeSet<ClassId> {
    neighborhood(gt, row, col).collect()
}

/// Whether `(row, col)` differs in ground truth from any of its 8 neighbors.
pub fn is_on_edge(gt: &LabelMap, row: usize, col: usize) -> bool {
    let center = gt.get(row, col);
    neighborhood(gt, row, col).any(|id| id != center)
}

/// Step 2: clears errors on ground-truth edges whose predicted class appears
/// in the local 3x3 patch.
pub fn suppress_edge_errors(errors: &ErrorMap, pred: &LabelMap, gt: &LabelMap) -> Result<ErrorMap> {
    pred.check_compatible(gt)?;
    if errors.dims() != gt.dims() {
        return Err(Error::DimensionMismatch {
            expected: gt.dims(),
            actual: errors.dims(),
        });
    }
    ErrorMap::from_fn(errors.width(), errors.height(), |r, c| {
        if !errors.get(r, c) {
            return false;
        }
        let tolerated = is_on_edge(gt, r, c) && neighborhood(gt, r, c).any(|id| id == pred.get(r, c));
        !tolerated
    })
}

/// Runs step 1 then step 2 as the configuration dictates.
pub fn apply_suppression(
    errors: &ErrorMap,
    pred: &LabelMap,
    gt: &LabelMap,
    cfg: &SafetyConfig,
) -> Result<SuppressedErrors> {
    let (width, height) = (errors.width(), errors.height());
    let region = resolve_critical_region(&cfg.critical_region, width, height)?;
    let after_region = match cfg.outside_region_policy {
        OutsideRegionPolicy::Suppress => suppress_outside_region(errors, &region)?,
        OutsideRegionPolicy::Keep => errors.clone(),
    };
    let (edge_only, filtered) = if cfg.edge_filter {
        (
            suppress_edge_errors(errors, pred, gt)?,
            suppress_edge_errors(&after_region, pred, gt)?,
        )
    } else {
        (errors.clone(), after_region.clone())
    };
    let original = errors.count();
    let kept_after_region = after_region.count();
    let stats = SuppressionStats {
        step1_suppressed: original - kept_after_region,
        step2_suppressed: kept_after_region - filtered.count(),
    };
    Ok(SuppressedErrors {
        region,
        after_region,
        edge_only,
        filtered,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correctness::error_map;
    use crate::types::ExactRatio;

    fn fractions(v: &str, h: &str) -> CriticalRegion {
        CriticalRegion::Fractions {
            vertical: v.parse().unwrap(),
            horizontal: h.parse().unwrap(),
        }
    }

    #[test]
    fn default_region_on_square_image() {
        let rect = resolve_critical_region(&fractions("0.7", "0.6"), 100, 100).unwrap();
        assert_eq!(
            rect,
            PixelRect {
                top: 30,
                left: 20,
                bottom: 99,
                right: 79
            }
        );
    }

    #[test]
    fn full_fractions_cover_image() {
        let rect = resolve_critical_region(&fractions("1", "1.0"), 37, 11).unwrap();
        assert_eq!(rect, PixelRect::whole(37, 11));
    }

    #[test]
    fn explicit_rect_passes_through() {
        let rect = PixelRect {
            top: 1,
            left: 2,
            bottom: 3,
            right: 4,
        };
        assert_eq!(resolve_critical_region(&CriticalRegion::Rect(rect), 10, 10).unwrap(), rect);
        assert!(resolve_critical_region(&CriticalRegion::Rect(rect), 4, 10).is_err());
    }

    #[test]
    fn tiny_fraction_degenerates() {
        let region = CriticalRegion::Fractions {
            vertical: ExactRatio::new(1, 100).unwrap(),
            horizontal: ExactRatio::new(1, 2).unwrap(),
        };
        assert!(matches!(
            resolve_critical_region(&region, 10, 10),
            Err(Error::DegenerateRegion { .. })
        ));
    }

    #[test]
    fn errors_outside_region_are_cleared() {
        let errors = ErrorMap::from_ascii(
            "#....#
             ......
             ..##..
             ..#...
             ......
             #....#",
        )
        .unwrap();
        let region = PixelRect {
            top: 2,
            left: 1,
            bottom: 4,
            right: 4,
        };
        let kept = suppress_outside_region(&errors, &region).unwrap();
        // Set intersection with the rectangle.
        let expected = ErrorMap::from_fn(6, 6, |r, c| errors.get(r, c) && (2..=4).contains(&r) && (1..=4).contains(&c)).unwrap();
        assert_eq!(kept, expected);
        assert_eq!(kept.count(), 3);

        let whole = suppress_outside_region(&errors, &PixelRect::whole(6, 6)).unwrap();
        assert_eq!(whole, errors);

        let corner = PixelRect {
            top: 1,
            left: 1,
            bottom: 1,
            right: 1,
        };
        assert_eq!(suppress_outside_region(&errors, &corner).unwrap().count(), 0);
    }

    // Orange (1) on the left two columns, white (2) elsewhere.
    fn two_region_gt() -> LabelMap {
        LabelMap::from_fn(5, 5, 3, |_, c| if c < 2 { 1 } else { 2 }).unwrap()
    }

    #[test]
    fn edge_labels_on_boundary_pixel() {
        let gt = two_region_gt();
        // One-based pixel (3, 2) sits on the orange/white edge.
        assert_eq!(edge_correct_labels(&gt, 2, 1), BTreeSet::from([1, 2]));
        assert!(is_on_edge(&gt, 2, 1));
        assert_eq!(edge_correct_labels(&gt, 2, 4), BTreeSet::from([2]));
        assert!(!is_on_edge(&gt, 2, 4));
    }

    #[test]
    fn edge_labels_truncate_at_corners() {
        let gt = LabelMap::new(3, 3, 9, (1..=9).collect()).unwrap();
        // Truncated neighborhood of (0, 0) is rows 0..=1, cols 0..=1.
        assert_eq!(edge_correct_labels(&gt, 0, 0), BTreeSet::from([1, 2, 4, 5]));
        assert_eq!(edge_correct_labels(&gt, 2, 2), BTreeSet::from([5, 6, 8, 9]));
    }

    #[test]
    fn edge_error_predicted_as_neighbor_class_is_neglected() {
        let gt = two_region_gt();
        let mut pred = gt.clone();
        pred.set(2, 1, 2).unwrap(); // edge pixel predicted as the other side
        pred.set(2, 4, 1).unwrap(); // interior pixel
        pred.set(0, 2, 3).unwrap(); // edge pixel with a class absent from the patch
        let errors = error_map(&pred, &gt, &BTreeSet::new()).unwrap();
        assert_eq!(errors.count(), 3);
        let kept = suppress_edge_errors(&errors, &pred, &gt).unwrap();
        assert!(!kept.get(2, 1));
        assert!(kept.get(2, 4));
        assert!(kept.get(0, 2));
        assert_eq!(kept.count(), 2);
    }

    #[test]
    fn steps_are_idempotent() {
        let gt = two_region_gt();
        let pred = LabelMap::from_fn(5, 5, 3, |r, c| if (r + c) % 2 == 0 { 2 } else { 1 }).unwrap();
        let errors = error_map(&pred, &gt, &BTreeSet::new()).unwrap();
        let once = suppress_edge_errors(&errors, &pred, &gt).unwrap();
        assert_eq!(suppress_edge_errors(&once, &pred, &gt).unwrap(), once);
        let rect = PixelRect {
            top: 1,
            left: 0,
            bottom: 4,
            right: 3,
        };
        let once = suppress_outside_region(&errors, &rect).unwrap();
        assert_eq!(suppress_outside_region(&once, &rect).unwrap(), once);
    }

    #[test]
    fn keep_policy_and_disabled_edge_filter() {
        let gt = two_region_gt();
        let mut pred = gt.clone();
        pred.set(0, 1, 2).unwrap();
        let errors = error_map(&pred, &gt, &BTreeSet::new()).unwrap();
        let mut cfg = SafetyConfig::scan_only("0.5".parse().unwrap(), 1);
        let out = apply_suppression(&errors, &pred, &gt, &cfg).unwrap();
        assert_eq!(out.filtered, errors);
        assert_eq!(out.stats, SuppressionStats::default());

        cfg.edge_filter = true;
        let out = apply_suppression(&errors, &pred, &gt, &cfg).unwrap();
        assert_eq!(out.filtered.count(), 0);
        assert_eq!(out.stats.step2_suppressed, 1);
    }
}
