//! Small synthetic maps for examples and tests.

use crate::types::{ErrorMap, LabelMap};

/// Errors at the four corners of a 3x3 block with top-left `(row, col)`.
///
/// Every 2x2 window holds at most one error (density 1/4) while the 3x3
/// window holds four (4/9): density can grow with the filter side.
pub fn corner_pattern(width: usize, height: usize, row: usize, col: usize) -> ErrorMap {
    assert!(row + 3 <= height && col + 3 <= width, "pattern must fit");
    ErrorMap::from_fn(width, height, |r, c| {
        (r == row || r == row + 2) && (c == col || c == col + 2)
    })
    .expect("non-empty map")
}

const CLUSTER: [(usize, usize); 8] = [(1, 3), (1, 5), (2, 2), (2, 4), (2, 6), (3, 3), (3, 5), (4, 4)];

/// A 5-row, 9-column scene: ground truth is class 1 everywhere and the
/// prediction has 8 pixels of class 2 clustered inside the 5x5 window at
/// column 2. Returns `(prediction, ground_truth)`.
pub fn cluster_scene() -> (LabelMap, LabelMap) {
    let gt = LabelMap::uniform(9, 5, 2, 1).expect("valid map");
    let mut pred = gt.clone();
    for (r, c) in CLUSTER {
        pred.set(r, c, 2).expect("class in range");
    }
    (pred, gt)
}

/// The error map of [`cluster_scene`].
pub fn cluster_errors() -> ErrorMap {
    ErrorMap::from_fn(9, 5, |r, c| CLUSTER.contains(&(r, c))).expect("non-empty map")
}

/// 150 x 2000 map with ten 50x50 blocks, 1000 errors each (two out of every
/// five columns), spaced so no 150-wide window touches two blocks.
///
/// With alpha = 0.5 the total of 10000 errors bounds the first filter side
/// to 141, and the per-window maximum of 1000 then bounds the next to 44.
pub fn sparse_blocks() -> ErrorMap {
    ErrorMap::from_fn(2000, 150, |r, c| {
        let in_block = (50..100).contains(&r) && c % 200 < 50;
        in_block && c % 5 < 2
    })
    .expect("non-empty map")
}
