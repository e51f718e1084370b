//! Brute-force reference implementations.
//!
//! These count every window cell by cell and try every filter side. They are
//! meant for small maps in tests and share no code with the summed-area path.

use crate::error::Result;
use crate::types::{ErrorMap, SafetyConfig, Verdict};

/// Errors inside the `k x k` window with top-left `(row, col)`, counted cell by cell.
pub fn naive_window_count(errors: &ErrorMap, row: usize, col: usize, k: usize) -> u64 {
    let mut count = 0;
    for r in row..row + k {
        for c in col..col + k {
            if errors.get(r, c) {
                count += 1;
            }
        }
    }
    count
}

/// Largest window count for side `k` and its first row-major position.
pub fn naive_max_window(errors: &ErrorMap, k: usize) -> (u64, (usize, usize)) {
    let mut best = (0, (0, 0));
    for row in 0..=(errors.height() - k) {
        for col in 0..=(errors.width() - k) {
            let count = naive_window_count(errors, row, col, k);
            if count > best.0 {
                best = (count, (row, col));
            }
        }
    }
    best
}

/// Unsafe iff some `k x k` window with `k_safe <= k <= min(width, height)`
/// has density at least alpha. Checks every side exhaustively.
pub fn oracle_scan(errors: &ErrorMap, cfg: &SafetyConfig) -> Result<Verdict> {
    let max_side = errors.width().min(errors.height());
    for k in cfg.k_safe..=max_side {
        let area = (k * k) as u64;
        let (count, _) = naive_max_window(errors, k);
        if cfg.alpha.is_reached_by(count, area) {
            return Ok(Verdict::Unsafe);
        }
    }
    Ok(Verdict::Safe)
}
