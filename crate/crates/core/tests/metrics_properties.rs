use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use segsafe::correctness::{argmax_prediction, error_map};
use segsafe::density::qualitative_scan;
use segsafe::pixel_metrics::{pcm, prm};
use segsafe::suppression::{suppress_edge_errors, suppress_outside_region};
use segsafe::{ClassId, LabelMap, PixelRect, SafetyConfig, ScoreVolume, Verdict};

fn random_labels(width: usize, height: usize, classes: ClassId, seed: u64) -> LabelMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LabelMap::from_fn(width, height, classes, |_, _| rng.random_range(1..=classes)).unwrap()
}

/// Blocky ground truth with a prediction that mostly agrees.
fn scene(width: usize, height: usize, seed: u64) -> (LabelMap, LabelMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bands = rng.random_range(1..5usize);
    let gt = LabelMap::from_fn(width, height, 4, |r, c| ((r * bands / height + c * 2 / width) % 4) as ClassId + 1)
        .unwrap();
    let flip = rng.random_range(0.0..0.4);
    let pred = LabelMap::from_fn(width, height, 4, |r, c| {
        if rng.random_bool(flip) {
            rng.random_range(1..=4)
        } else {
            gt.get(r, c)
        }
    })
    .unwrap();
    (pred, gt)
}

#[test]
fn argmax_matches_exhaustive_comparison() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        // Coarse values force plenty of ties.
        let scores: Vec<f32> = (0..4 * 4 * 3).map(|_| rng.random_range(0..4) as f32 / 4.0).collect();
        let volume = ScoreVolume::new(4, 4, 3, scores.clone()).unwrap();
        let labels = argmax_prediction(&volume);
        for pixel in 0..16 {
            let v = &scores[pixel * 3..pixel * 3 + 3];
            let mut expected = 1;
            for class in 1..=3 {
                if (1..=3).all(|other| v[class - 1] >= v[other - 1]) {
                    expected = class;
                    break;
                }
            }
            assert_eq!(labels.data()[pixel] as usize, expected);
        }
    }
}

#[test]
fn pcm_matches_double_loop_count() {
    for seed in 0..10 {
        let gt = random_labels(16, 16, 3, seed);
        let pred = random_labels(16, 16, 3, seed + 1000);
        let mut correct = 0;
        for r in 0..16 {
            for c in 0..16 {
                if pred.get(r, c) == gt.get(r, c) {
                    correct += 1;
                }
            }
        }
        assert_eq!(pcm(&pred, &gt).unwrap(), correct as f64 / 256.0);
    }
}

#[test]
fn prm_is_max_of_individual_ratios() {
    let gt = random_labels(8, 8, 3, 1);
    let mut pred = gt.clone();
    for c in 0..8 {
        pred.set(0, c, (gt.get(0, c) % 3) + 1).unwrap();
    }
    let perturbed: Vec<LabelMap> = (0..3).map(|s| random_labels(8, 8, 3, 50 + s)).collect();
    let ratio = |p: &LabelMap| {
        let mut s = 0;
        let mut flipped = 0;
        for r in 0..8 {
            for c in 0..8 {
                if pred.get(r, c) == gt.get(r, c) {
                    s += 1;
                    if p.get(r, c) != gt.get(r, c) {
                        flipped += 1;
                    }
                }
            }
        }
        flipped as f64 / s as f64
    };
    let expected = perturbed.iter().map(ratio).fold(0.0, f64::max);
    assert_eq!(prm(&pred, &gt, &perturbed).unwrap(), expected);
}

proptest! {
    #[test]
    fn pcm_complements_error_count(seed in any::<u64>(), w in 1usize..20, h in 1usize..20) {
        let (pred, gt) = scene(w, h, seed);
        let p = pcm(&pred, &gt).unwrap();
        let errors = error_map(&pred, &gt, &BTreeSet::new()).unwrap().count();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((p - (1.0 - errors as f64 / (w * h) as f64)).abs() < 1e-12);
        let reverse = error_map(&gt, &pred, &BTreeSet::new()).unwrap().count();
        prop_assert_eq!(errors, reverse);
        prop_assert_eq!(error_map(&gt, &gt, &BTreeSet::new()).unwrap().count(), 0);
    }

    #[test]
    fn prm_is_bounded_and_monotone(seed in any::<u64>(), extra in any::<u64>()) {
        let (pred, gt) = scene(9, 7, seed);
        prop_assume!(pcm(&pred, &gt).unwrap() > 0.0);
        let first = random_labels(9, 7, 4, extra);
        let second = random_labels(9, 7, 4, extra.wrapping_add(1));
        let one = prm(&pred, &gt, std::slice::from_ref(&first)).unwrap();
        let two = prm(&pred, &gt, &[first, second]).unwrap();
        prop_assert!((0.0..=1.0).contains(&one));
        prop_assert!(two >= one);
    }

    #[test]
    fn argmax_is_covariant_under_pixel_permutation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 12;
        let scores: Vec<f32> = (0..n * 4).map(|_| rng.random_range(0..5) as f32).collect();
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let permuted: Vec<f32> = order.iter().flat_map(|&p| scores[p * 4..p * 4 + 4].to_vec()).collect();
        let base = argmax_prediction(&ScoreVolume::new(n, 1, 4, scores).unwrap());
        let moved = argmax_prediction(&ScoreVolume::new(n, 1, 4, permuted).unwrap());
        for (i, &p) in order.iter().enumerate() {
            prop_assert_eq!(moved.data()[i], base.data()[p]);
        }
    }

    #[test]
    fn suppression_only_clears_and_is_idempotent(seed in any::<u64>(), w in 3usize..24, h in 3usize..24) {
        let (pred, gt) = scene(w, h, seed);
        let errors = error_map(&pred, &gt, &BTreeSet::new()).unwrap();
        let rect = PixelRect { top: h / 3, left: w / 4, bottom: h - 1, right: w - 1 - w / 4 };
        let step1 = suppress_outside_region(&errors, &rect).unwrap();
        let step2 = suppress_edge_errors(&step1, &pred, &gt).unwrap();
        prop_assert!(step1.is_subset_of(&errors));
        prop_assert!(step2.is_subset_of(&step1));
        prop_assert_eq!(&suppress_outside_region(&step1, &rect).unwrap(), &step1);
        prop_assert_eq!(&suppress_edge_errors(&step2, &pred, &gt).unwrap(), &step2);
    }

    #[test]
    fn suppression_never_turns_safe_into_unsafe(seed in any::<u64>(), k_safe in 1usize..6) {
        let (pred, gt) = scene(20, 16, seed);
        let errors = error_map(&pred, &gt, &BTreeSet::new()).unwrap();
        let rect = PixelRect { top: 4, left: 3, bottom: 15, right: 16 };
        let suppressed = suppress_edge_errors(&suppress_outside_region(&errors, &rect).unwrap(), &pred, &gt).unwrap();
        let cfg = SafetyConfig::scan_only("0.4".parse().unwrap(), k_safe);
        let before = qualitative_scan(&errors, &cfg).unwrap().verdict;
        let after = qualitative_scan(&suppressed, &cfg).unwrap().verdict;
        if before == Verdict::Safe {
            prop_assert_eq!(after, Verdict::Safe);
        }
    }
}

#[test]
fn uniform_ground_truth_has_no_edges() {
    let gt = LabelMap::uniform(6, 6, 2, 1).unwrap();
    let pred = LabelMap::uniform(6, 6, 2, 2).unwrap();
    let errors = error_map(&pred, &gt, &BTreeSet::new()).unwrap();
    assert_eq!(suppress_edge_errors(&errors, &pred, &gt).unwrap(), errors);
}
