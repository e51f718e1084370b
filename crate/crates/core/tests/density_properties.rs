use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use segsafe::density::oracle::{naive_max_window, naive_window_count, oracle_scan};
use segsafe::density::{
    density_profile, max_window_errors, min_filter_bound, qualitative_scan, quantitative_metrics, summed_area_table,
};
use segsafe::{fixtures, ErrorMap, ExactRatio, SafetyConfig, TraceStep, Verdict};

fn random_map(width: usize, height: usize, density: f64, seed: u64) -> ErrorMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ErrorMap::from_fn(width, height, |_, _| rng.random_bool(density)).unwrap()
}

/// Uniform noise plus a few solid or sparse blobs, so verdicts vary.
fn clustered_map(width: usize, height: usize, seed: u64) -> ErrorMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = rng.random_range(0.0..0.3);
    let mut map = ErrorMap::from_fn(width, height, |_, _| rng.random_bool(noise)).unwrap();
    for _ in 0..rng.random_range(0..4) {
        let side = rng.random_range(1..=width.min(height));
        let row = rng.random_range(0..=height - side);
        let col = rng.random_range(0..=width - side);
        let fill = rng.random_range(0.2..1.0);
        for r in row..row + side {
            for c in col..col + side {
                if rng.random_bool(fill) {
                    map.set(r, c, true);
                }
            }
        }
    }
    map
}

fn alpha(s: &str) -> ExactRatio {
    s.parse().unwrap()
}

#[test]
fn summed_area_sums_match_naive_sums_exhaustively() {
    for seed in 0..6u64 {
        let map = random_map(12 + seed as usize % 5, 12, 0.3, seed);
        let sat = summed_area_table(&map);
        for k in 1..=12 {
            for row in 0..=map.height() - k {
                for col in 0..=map.width() - k {
                    assert_eq!(sat.window_sum(row, col, k), naive_window_count(&map, row, col, k));
                }
            }
        }
        // Rectangles too.
        for rows in 1..=map.height() {
            for cols in 1..=map.width() {
                let naive: u64 = (0..rows)
                    .flat_map(|r| (0..cols).map(move |c| (r, c)))
                    .filter(|&(r, c)| map.get(r, c))
                    .count() as u64;
                assert_eq!(sat.rect_sum(0, 0, rows, cols), naive);
            }
        }
    }
}

#[test]
fn window_maxima_match_naive_scan() {
    for seed in 0..20u64 {
        let map = random_map(16, 16, 0.05 + 0.02 * seed as f64, 100 + seed);
        for k in 2..=16 {
            let stats = max_window_errors(&map, k).unwrap();
            let (count, at) = naive_max_window(&map, k);
            assert_eq!((stats.max_count, stats.argmax_window), (count, at), "seed {seed} k {k}");
        }
    }
}

#[test]
fn profile_matches_naive_per_side() {
    for seed in 0..10u64 {
        let map = clustered_map(10, 10, seed);
        let cfg = SafetyConfig::scan_only(alpha("0.5"), 1);
        let profile = density_profile(&map, &cfg).unwrap();
        for k in 1..=10 {
            assert_eq!(profile.max_counts[&k], naive_max_window(&map, k).0);
        }
        for d in profile.iter() {
            assert!(d.to_f64() >= 0.0 && d.to_f64() <= 1.0);
        }
    }
}

#[test]
fn corner_pattern_breaks_monotonicity() {
    let map = fixtures::corner_pattern(8, 7, 2, 3);
    let cfg = SafetyConfig::scan_only(alpha("0.4"), 2);
    let profile = density_profile(&map, &cfg).unwrap();
    assert_eq!(profile.density(2).unwrap().to_string(), "1/4");
    assert_eq!(profile.density(3).unwrap().to_string(), "4/9");

    let q = quantitative_metrics(&map, &cfg).unwrap();
    assert_eq!(q.max_unsafe_k, Some(3));
    assert_eq!(q.max_density.to_string(), "4/9");

    let scan = qualitative_scan(&map, &cfg).unwrap();
    assert_eq!(scan.verdict, Verdict::Unsafe);
    assert_eq!(scan.offending_window.unwrap().k, 3);
    assert_eq!(oracle_scan(&map, &cfg).unwrap(), Verdict::Unsafe);
}

#[test]
fn cluster_fixture_is_unsafe_at_eight_of_twenty_five() {
    let map = fixtures::cluster_errors();
    assert_eq!(map.count(), 8);
    let cfg = SafetyConfig::scan_only(alpha("0.2"), 5);
    let scan = qualitative_scan(&map, &cfg).unwrap();
    assert_eq!(scan.verdict, Verdict::Unsafe);
    let w = scan.offending_window.unwrap();
    assert_eq!((w.row, w.col, w.k, w.count), (0, 2, 5, 8));
    assert_eq!(w.density().to_string(), "8/25");
    assert_eq!(naive_window_count(&map, 0, 2, 5), 8);
}

#[test]
fn sparse_blocks_follow_the_worked_bound_sequence() {
    let map = fixtures::sparse_blocks();
    assert_eq!(map.count(), 10_000);
    // Window maxima from the naive counter.
    assert_eq!(naive_max_window(&map, 150).0, 1000);
    assert_eq!(naive_max_window(&map, 141).0, 1000);
    let c44 = naive_max_window(&map, 44).0;
    assert_eq!(c44, 44 * 18);

    let cfg = SafetyConfig::scan_only(alpha("0.5"), 20);
    let scan = qualitative_scan(&map, &cfg).unwrap();
    assert_eq!(
        &scan.trace[..3],
        &[
            TraceStep { k: 150, max_count: 1000 },
            TraceStep { k: 141, max_count: 1000 },
            TraceStep { k: 44, max_count: c44 },
        ]
    );
    assert_eq!(min_filter_bound(10_000, cfg.alpha) - 1, 141);
    assert_eq!(min_filter_bound(1_000, cfg.alpha) - 1, 44);
    assert_eq!(scan.verdict, Verdict::Safe);
}

#[test]
fn dense_block_quantitative_metrics_match_full_profile_oracle() {
    let map = ErrorMap::from_fn(20, 20, |r, c| (7..13).contains(&r) && (4..10).contains(&c)).unwrap();
    let cfg = SafetyConfig::scan_only(alpha("0.5"), 2);
    let q = quantitative_metrics(&map, &cfg).unwrap();
    let mut best_unsafe = None;
    let mut best = (0u64, 1usize);
    for k in 2..=20 {
        let (count, _) = naive_max_window(&map, k);
        if 2 * count >= (k * k) as u64 {
            best_unsafe = Some(k);
        }
        if count * (best.1 * best.1) as u64 > best.0 * (k * k) as u64 {
            best = (count, k);
        }
    }
    assert_eq!(q.max_unsafe_k, best_unsafe);
    assert_eq!(best_unsafe, Some(8)); // 36 / 64 >= 0.5 > 36 / 81
    assert_eq!((q.max_density.count, q.max_density.k), best);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn filter_sides_strictly_decrease(
        width in 1usize..=64,
        height in 1usize..=64,
        density in 0.0f64..=0.3,
        seed in any::<u64>(),
        alpha_idx in 0usize..5,
        k_frac in 0.0f64..1.0,
    ) {
        let map = random_map(width, height, density, seed);
        let a = alpha(["0.1", "0.2", "0.4", "0.5", "0.8"][alpha_idx]);
        let k_safe = 1 + (k_frac * width.min(height) as f64) as usize;
        let k_safe = k_safe.min(width.min(height));
        let scan = qualitative_scan(&map, &SafetyConfig::scan_only(a, k_safe)).unwrap();
        prop_assert!(!scan.trace.is_empty());
        prop_assert_eq!(scan.trace[0].k, width.min(height));
        for pair in scan.trace.windows(2) {
            prop_assert!(pair[1].k < pair[0].k);
        }
        prop_assert!(scan.trace.iter().all(|t| t.k >= k_safe));
        if let Some(w) = scan.offending_window {
            prop_assert!(w.density().reaches(a));
        }
    }

    #[test]
    fn bound_is_tight(count in 0u64..5_000_000, p in 1u64..=100, q_extra in 0u64..100) {
        let a = ExactRatio::new(p, p + q_extra).unwrap();
        let k = min_filter_bound(count, a) as u128;
        let (n, d) = (a.numer() as u128, a.denom() as u128);
        prop_assert!((count as u128) * d < n * k * k);
        if k >= 2 {
            prop_assert!((count as u128) * d >= n * (k - 1) * (k - 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn iterative_scan_agrees_with_oracle(
        seed in any::<u64>(),
        alpha_idx in 0usize..4,
        k_idx in 0usize..3,
    ) {
        let map = clustered_map(32, 32, seed);
        let a = alpha(["0.2", "0.4", "0.5", "0.8"][alpha_idx]);
        let cfg = SafetyConfig::scan_only(a, [2, 5, 10][k_idx]);
        prop_assert_eq!(qualitative_scan(&map, &cfg).unwrap().verdict, oracle_scan(&map, &cfg).unwrap());
    }

    #[test]
    fn quantitative_agrees_with_verdict(seed in any::<u64>(), alpha_idx in 0usize..4) {
        let map = clustered_map(24, 18, seed);
        let cfg = SafetyConfig::scan_only(alpha(["0.2", "0.4", "0.5", "0.8"][alpha_idx]), 3);
        let verdict = qualitative_scan(&map, &cfg).unwrap().verdict;
        let q = quantitative_metrics(&map, &cfg).unwrap();
        let profile = density_profile(&map, &cfg).unwrap();
        prop_assert_eq!(q.max_unsafe_k.is_some(), verdict == Verdict::Unsafe);
        prop_assert_eq!(q.max_density.ratio(), profile.iter().map(|d| d.ratio()).max().unwrap());
        if verdict == Verdict::Safe {
            prop_assert!(!q.max_density.reaches(cfg.alpha));
        }
    }
}
