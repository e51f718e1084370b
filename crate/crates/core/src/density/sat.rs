use crate::error::{Error, Result};
use crate::types::ErrorMap;

/// Summed-area table over an [`ErrorMap`].
///
/// Stored with one extra leading row and column of zeros, so cell
/// `(r + 1, c + 1)` holds the number of errors in `[0..=r] x [0..=c]`.
#[derive(Clone, Debug)]
pub struct SummedAreaTable {
    width: usize,
    height: usize,
    stride: usize,
    sums: Vec<u32>,
}

/// Largest error count over all fully contained `k x k` windows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowStatistics {
    pub k: usize,
    pub max_count: u64,
    /// Top-left `(row, col)` of the first window, in row-major order, reaching `max_count`.
    pub argmax_window: (usize, usize),
}

impl SummedAreaTable {
    pub fn new(errors: &ErrorMap) -> Self {
        let (width, height) = (errors.width(), errors.height());
        let stride = width + 1;
        let mut sums = vec![0u32; stride * (height + 1)];
        for row in 0..height {
            let mut running = 0u32;
            let src = &errors.data()[row * width..(row + 1) * width];
            let (above, current) = sums.split_at_mut((row + 1) * stride);
            let above = &above[row * stride..];
            for (col, &e) in src.iter().enumerate() {
                running += e as u32;
                current[col + 1] = above[col + 1] + running;
            }
        }
        Self {
            width,
            height,
            stride,
            sums,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Errors in `[0..=row] x [0..=col]`.
    pub fn prefix(&self, row: usize, col: usize) -> u64 {
        self.sums[(row + 1) * self.stride + col + 1] as u64
    }

    pub fn total(&self) -> u64 {
        self.sums[self.height * self.stride + self.width] as u64
    }

    /// Errors in the `rows x cols` rectangle with top-left `(row, col)`.
    #[inline]
    pub fn rect_sum(&self, row: usize, col: usize, rows: usize, cols: usize) -> u64 {
        let s = self.stride;
        let top = row * s;
        let bottom = (row + rows) * s;
        let a = self.sums[top + col];
        let b = self.sums[top + col + cols];
        let c = self.sums[bottom + col];
        let d = self.sums[bottom + col + cols];
        ((d - b) - (c - a)) as u64
    }

    #[inline]
    pub fn window_sum(&self, row: usize, col: usize, k: usize) -> u64 {
        self.rect_sum(row, col, k, k)
    }

    /// Scans every `rows x cols` placement with stride 1.
    pub fn max_rect(&self, rows: usize, cols: usize) -> Result<(u64, (usize, usize))> {
        if rows == 0 || cols == 0 || rows > self.height || cols > self.width {
            return Err(Error::FilterTooLarge {
                k: rows.max(cols),
                max: self.width.min(self.height),
            });
        }
        let s = self.stride;
        let full = (rows * cols) as u32;
        let mut best = 0u32;
        let mut at = (0, 0);
        for row in 0..=(self.height - rows) {
            let top = &self.sums[row * s..(row + 1) * s];
            let bottom = &self.sums[(row + rows) * s..(row + rows + 1) * s];
            for col in 0..=(self.width - cols) {
                let count = (bottom[col + cols] - top[col + cols]) - (bottom[col] - top[col]);
                if count > best {
                    best = count;
                    at = (row, col);
                    if best == full {
                        return Ok((best as u64, at));
                    }
                }
            }
        }
        Ok((best as u64, at))
    }

    pub fn max_window(&self, k: usize) -> Result<WindowStatistics> {
        let (max_count, argmax_window) = self.max_rect(k, k)?;
        Ok(WindowStatistics {
            k,
            max_count,
            argmax_window,
        })
    }
}

/// Builds the prefix-sum grid of an error map.
pub fn summed_area_table(errors: &ErrorMap) -> SummedAreaTable {
    SummedAreaTable::new(errors)
}

/// Largest error count over all `k x k` windows of `errors`.
pub fn max_window_errors(errors: &ErrorMap, k: usize) -> Result<WindowStatistics> {
    if k == 0 || k > errors.min_side() {
        return Err(Error::FilterTooLarge {
            k,
            max: errors.min_side(),
        });
    }
    SummedAreaTable::new(errors).max_window(k)
}
