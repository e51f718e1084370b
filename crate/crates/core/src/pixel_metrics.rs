//! Pixel-level correctness (pcm) and perturbation robustness (prm) ratios.

use crate::error::{Error, Result};
use crate::types::LabelMap;

/// Fraction of pixels whose prediction equals the ground truth.
pub fn pcm(pred: &LabelMap, gt: &LabelMap) -> Result<f64> {
    pred.check_compatible(gt)?;
    let correct = pred.data().iter().zip(gt.data()).filter(|(p, g)| p == g).count();
    Ok(correct as f64 / pred.data().len() as f64)
}

/// Largest fraction of correctly predicted pixels that any perturbed
/// prediction turns incorrect.
///
/// `perturbed` holds the network outputs on perturbed inputs; producing them
/// (e.g. under an L-infinity budget) is the caller's job. Only
/// correct-to-incorrect flips count.
pub fn prm(pred: &LabelMap, gt: &LabelMap, perturbed: &[LabelMap]) -> Result<f64> {
    pred.check_compatible(gt)?;
    if perturbed.is_empty() {
        return Err(Error::EmptyPerturbedSet);
    }
    for p in perturbed {
        p.check_compatible(gt)?;
    }
    let correct: Vec<usize> = pred
        .data()
        .iter()
        .zip(gt.data())
        .enumerate()
        .filter_map(|(idx, (p, g))| (p == g).then_some(idx))
        .collect();
    if correct.is_empty() {
        return Err(Error::NoCorrectPixels);
    }
    let truth = gt.data();
    let worst = perturbed
        .iter()
        .map(|p| {
            let data = p.data();
            correct.iter().filter(|&&idx| data[idx] != truth[idx]).count()
        })
        .max()
        .unwrap_or(0);
    Ok(worst as f64 / correct.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_correct() {
        let gt = LabelMap::uniform(8, 8, 3, 2).unwrap();
        assert_eq!(pcm(&gt, &gt).unwrap(), 1.0);
    }

    #[test]
    fn one_wrong_pixel_in_hundred() {
        let gt = LabelMap::uniform(10, 10, 2, 1).unwrap();
        let mut pred = gt.clone();
        pred.set(4, 4, 2).unwrap();
        assert_eq!(pcm(&pred, &gt).unwrap(), 0.99);
    }

    #[test]
    fn unperturbed_prediction_is_fully_robust() {
        let gt = LabelMap::from_fn(4, 4, 2, |r, _| if r < 2 { 1 } else { 2 }).unwrap();
        let mut pred = gt.clone();
        pred.set(0, 0, 2).unwrap();
        assert_eq!(prm(&pred, &gt, std::slice::from_ref(&pred)).unwrap(), 0.0);
    }

    #[test]
    fn full_flip_of_correct_pixels() {
        let gt = LabelMap::uniform(4, 4, 2, 1).unwrap();
        let flipped = LabelMap::uniform(4, 4, 2, 2).unwrap();
        assert_eq!(prm(&gt, &gt, &[flipped]).unwrap(), 1.0);
    }

    #[test]
    fn incorrect_to_correct_flips_do_not_count() {
        let gt = LabelMap::new(2, 1, 2, vec![1, 1]).unwrap();
        let pred = LabelMap::new(2, 1, 2, vec![1, 2]).unwrap();
        let perturbed = LabelMap::new(2, 1, 2, vec![1, 1]).unwrap();
        assert_eq!(prm(&pred, &gt, &[perturbed]).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_inputs() {
        let gt = LabelMap::uniform(2, 2, 2, 1).unwrap();
        let wrong = LabelMap::uniform(2, 2, 2, 2).unwrap();
        assert!(matches!(prm(&gt, &gt, &[]), Err(Error::EmptyPerturbedSet)));
        assert!(matches!(
            prm(&wrong, &gt, std::slice::from_ref(&gt)),
            Err(Error::NoCorrectPixels)
        ));
    }
}
