//! Per-pixel predictions and the correctness map derived from them.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::types::{ClassId, ErrorMap, LabelMap, ScoreVolume};

/// Picks the highest-scoring class per pixel; ties go to the smallest class id.
pub fn argmax_prediction(scores: &ScoreVolume) -> LabelMap {
    let (width, height) = (scores.width(), scores.height());
    let mut data = Vec::with_capacity(width * height);
    for row in 0..height {
        for col in 0..width {
            let mut best = 0;
            let pixel = scores.pixel(row, col);
            for (idx, &v) in pixel.iter().enumerate().skip(1) {
                if v > pixel[best] {
                    best = idx;
                }
            }
            data.push(best as ClassId + 1);
        }
    }
    LabelMap::new(width, height, scores.num_classes(), data)
        .expect("argmax of a validated score volume is a valid label map")
}

/// Marks every pixel whose prediction disagrees with the ground truth.
///
/// Pixels whose ground-truth class is in `ignore_labels` are always correct.
pub fn error_map(pred: &LabelMap, gt: &LabelMap, ignore_labels: &BTreeSet<ClassId>) -> Result<ErrorMap> {
    pred.check_compatible(gt)?;
    let data = pred
        .data()
        .iter()
        .zip(gt.data())
        .map(|(&p, &g)| p != g && !ignore_labels.contains(&g))
        .collect();
    ErrorMap::new(pred.width(), pred.height(), data)
}
