//! Domain types shared across the evaluation pipeline.
//!
//! Pixel coordinates are `(row, col)` and zero-based throughout the crate.
//! Class identifiers are one-based: a map with `num_classes = n` stores ids
//! in `1..=n`. The I/O layer translates zero-based encodings on ingestion.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// One-based semantic class identifier.
pub type ClassId = u16;

/// Grid of class identifiers, used both for ground truth and predictions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    num_classes: ClassId,
    data: Vec<ClassId>,
}

impl LabelMap {
    /// Builds a map from row-major data, checking every id against `num_classes`.
    pub fn new(width: usize, height: usize, num_classes: ClassId, data: Vec<ClassId>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("label map must have non-zero size".into()));
        }
        if data.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "label data has {} entries, expected {}x{}",
                data.len(),
                width,
                height
            )));
        }
        if let Some(idx) = data.iter().position(|&id| id == 0 || id > num_classes) {
            return Err(Error::ClassOutOfRange {
                row: idx / width,
                col: idx % width,
                id: data[idx],
                num_classes,
            });
        }
        Ok(Self {
            width,
            height,
            num_classes,
            data,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        num_classes: ClassId,
        mut f: impl FnMut(usize, usize) -> ClassId,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(row, col));
            }
        }
        Self::new(width, height, num_classes, data)
    }

    /// Map filled with a single class.
    pub fn uniform(width: usize, height: usize, num_classes: ClassId, id: ClassId) -> Result<Self> {
        Self::new(width, height, num_classes, vec![id; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn num_classes(&self) -> ClassId {
        self.num_classes
    }

    pub fn data(&self) -> &[ClassId] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> ClassId {
        self.data[row * self.width + col]
    }

    /// Returns a copy with the label set widened to `num_classes`.
    pub fn with_num_classes(mut self, num_classes: ClassId) -> Result<Self> {
        if let Some(idx) = self.data.iter().position(|&id| id > num_classes) {
            return Err(Error::ClassOutOfRange {
                row: idx / self.width,
                col: idx % self.width,
                id: self.data[idx],
                num_classes,
            });
        }
        self.num_classes = num_classes;
        Ok(self)
    }

    /// Replaces the class at one pixel.
    pub fn set(&mut self, row: usize, col: usize, id: ClassId) -> Result<()> {
        if id == 0 || id > self.num_classes {
            return Err(Error::ClassOutOfRange {
                row,
                col,
                id,
                num_classes: self.num_classes,
            });
        }
        self.data[row * self.width + col] = id;
        Ok(())
    }

    pub(crate) fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub(crate) fn check_compatible(&self, other: &LabelMap) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                actual: other.dims(),
            });
        }
        if self.num_classes != other.num_classes {
            return Err(Error::ClassCountMismatch {
                left: self.num_classes,
                right: other.num_classes,
            });
        }
        Ok(())
    }
}

/// Per-pixel activation vectors produced by a segmentation network.
///
/// Scores are stored pixel-major: the `num_classes` scores of pixel
/// `(row, col)` are contiguous.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreVolume {
    width: usize,
    height: usize,
    num_classes: ClassId,
    scores: Vec<f32>,
}

impl ScoreVolume {
    pub fn new(width: usize, height: usize, num_classes: ClassId, scores: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 || num_classes == 0 {
            return Err(Error::InvalidInput("score volume must have non-zero size".into()));
        }
        let per_pixel = num_classes as usize;
        if scores.len() != width * height * per_pixel {
            return Err(Error::InvalidInput(format!(
                "score volume has {} entries, expected {}x{}x{}",
                scores.len(),
                width,
                height,
                num_classes
            )));
        }
        if let Some(idx) = scores.iter().position(|s| !s.is_finite()) {
            let pixel = idx / per_pixel;
            return Err(Error::NonFiniteScore {
                row: pixel / width,
                col: pixel % width,
                class: (idx % per_pixel) as ClassId + 1,
            });
        }
        Ok(Self {
            width,
            height,
            num_classes,
            scores,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn num_classes(&self) -> ClassId {
        self.num_classes
    }

    /// Scores of one pixel, indexed by `class - 1`.
    pub fn pixel(&self, row: usize, col: usize) -> &[f32] {
        let n = self.num_classes as usize;
        let start = (row * self.width + col) * n;
        &self.scores[start..start + n]
    }
}

/// Boolean grid where `true` marks a pixel counted as an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorMap {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl ErrorMap {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("error map must have non-zero size".into()));
        }
        if data.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "error data has {} entries, expected {}x{}",
                data.len(),
                width,
                height
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(row, col));
            }
        }
        Self::new(width, height, data)
    }

    /// Parses an ASCII picture: one line per row, `#`/`x`/`X`/`1` are errors.
    pub fn from_ascii(picture: &str) -> Result<Self> {
        let rows: Vec<&str> = picture
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut data = Vec::with_capacity(width * height);
        for row in &rows {
            if row.chars().count() != width {
                return Err(Error::InvalidInput("ragged error picture".into()));
            }
            data.extend(row.chars().map(|c| matches!(c, '#' | 'x' | 'X' | '1')));
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.data[row * self.width + col] = value;
    }

    pub fn count(&self) -> u64 {
        self.data.iter().filter(|&&e| e).count() as u64
    }

    /// Every error of `self` is also an error of `other`.
    pub fn is_subset_of(&self, other: &ErrorMap) -> bool {
        self.dims() == other.dims() && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }

    pub(crate) fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub(crate) fn min_side(&self) -> usize {
        self.width.min(self.height)
    }
}

/// A non-negative rational held exactly, ingested from decimal text.
///
/// Used for the density threshold and region fractions so that comparisons
/// at the boundary never depend on floating-point rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactRatio(Ratio<u64>);

impl ExactRatio {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Self(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// `count / area >= self`, evaluated by cross-multiplication.
    #[inline]
    pub fn is_reached_by(&self, count: u64, area: u64) -> bool {
        count as u128 * self.denom() as u128 >= self.numer() as u128 * area as u128
    }

    /// `round_half_up(self * n)`.
    pub fn scale_round_half_up(&self, n: usize) -> usize {
        let num = 2 * self.numer() as u128 * n as u128 + self.denom() as u128;
        (num / (2 * self.denom() as u128)) as usize
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) || frac_part.len() > 18 {
            return None;
        }
        let denom = 10u64.checked_pow(frac_part.len() as u32)?;
        let int: u64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
        let frac: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().ok()? };
        let numer = int.checked_mul(denom)?.checked_add(frac)?;
        Some(Self(Ratio::new(numer, denom)))
    }
}

impl FromStr for ExactRatio {
    type Err = Error;

    /// Accepts decimal text (`"0.5"`, `"1"`) or a fraction (`"2/5"`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parsed = match s.split_once('/') {
            Some((n, d)) => match (n.trim().parse::<u64>(), d.trim().parse::<u64>()) {
                (Ok(n), Ok(d)) if d > 0 => Some(Self(Ratio::new(n, d))),
                _ => None,
            },
            None => Self::parse_decimal(s),
        };
        parsed.ok_or_else(|| Error::InvalidInput(format!("not an exact non-negative number: {s:?}")))
    }
}

impl fmt::Display for ExactRatio {
    /// Decimal form when the denominator is a product of 2s and 5s, else `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        for digits in 0..=18u32 {
            let scale = 10u128.pow(digits);
            if scale % d as u128 == 0 {
                let scaled = n as u128 * (scale / d as u128);
                let int = scaled / scale;
                let frac = scaled % scale;
                return if digits == 0 {
                    write!(f, "{int}")
                } else {
                    let frac = format!("{:0width$}", frac, width = digits as usize);
                    write!(f, "{int}.{}", frac.trim_end_matches('0'))
                };
            }
        }
        write!(f, "{n}/{d}")
    }
}

impl PartialOrd for ExactRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

/// Inclusive pixel rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PixelRect {
    pub top: usize,
    pub left: usize,
    pub bottom: usize,
    pub right: usize,
}

impl PixelRect {
    pub fn whole(width: usize, height: usize) -> Self {
        Self {
            top: 0,
            left: 0,
            bottom: height - 1,
            right: width - 1,
        }
    }

    #[inline]
    pub fn contains(&self, row: usize, col: usize) -> bool {
        (self.top..=self.bottom).contains(&row) && (self.left..=self.right).contains(&col)
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.top <= self.bottom && self.left <= self.right && self.bottom < height && self.right < width
    }
}

impl fmt::Display for PixelRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows [{}, {}] cols [{}, {}]",
            self.top, self.bottom, self.left, self.right
        )
    }
}

/// Where errors carry safety weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalRegion {
    /// Bottom-centered rectangle covering the given fractions of the image.
    Fractions {
        vertical: ExactRatio,
        horizontal: ExactRatio,
    },
    Rect(PixelRect),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutsideRegionPolicy {
    /// Errors outside the critical region never count.
    #[default]
    Suppress,
    Keep,
}

/// Parameters of the safety analysis.
///
/// Edge membership is always evaluated on the 8-neighborhood of the ground truth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetyConfig {
    pub alpha: ExactRatio,
    pub k_safe: usize,
    pub critical_region: CriticalRegion,
    pub outside_region_policy: OutsideRegionPolicy,
    pub edge_filter: bool,
    pub ignore_labels: BTreeSet<ClassId>,
}

impl Default for SafetyConfig {
    fn default() -> Self {
        Self {
            alpha: ExactRatio::new(1, 2).unwrap(),
            k_safe: 20,
            critical_region: CriticalRegion::Fractions {
                vertical: ExactRatio::new(7, 10).unwrap(),
                horizontal: ExactRatio::new(6, 10).unwrap(),
            },
            outside_region_policy: OutsideRegionPolicy::Suppress,
            edge_filter: true,
            ignore_labels: BTreeSet::new(),
        }
    }
}

impl SafetyConfig {
    /// Config that only runs the density scan, with no suppression.
    pub fn scan_only(alpha: ExactRatio, k_safe: usize) -> Self {
        Self {
            alpha,
            k_safe,
            outside_region_policy: OutsideRegionPolicy::Keep,
            edge_filter: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let one = ExactRatio::new(1, 1)?;
        if self.alpha.numer() == 0 || self.alpha > one {
            return Err(Error::Config(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        if self.k_safe == 0 {
            return Err(Error::Config("k_safe must be at least 1".into()));
        }
        if let CriticalRegion::Fractions {
            vertical,
            horizontal,
        } = self.critical_region
        {
            for (name, frac) in [("vfrac", vertical), ("hfrac", horizontal)] {
                if frac.numer() == 0 || frac > one {
                    return Err(Error::Config(format!("{name} must lie in (0, 1], got {frac}")));
                }
            }
        }
        if let CriticalRegion::Rect(rect) = self.critical_region {
            if rect.top > rect.bottom || rect.left > rect.right {
                return Err(Error::Config(format!("critical rectangle is inverted: {rect}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Safe,
    Unsafe,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Safe => "safe",
            Verdict::Unsafe => "unsafe",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error count of a `k x k` window, kept unreduced so it prints as `count/k²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowDensity {
    pub count: u64,
    pub k: usize,
}

impl WindowDensity {
    pub fn area(&self) -> u64 {
        (self.k as u64) * (self.k as u64)
    }

    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.count, self.area())
    }

    pub fn to_f64(&self) -> f64 {
        self.count as f64 / self.area() as f64
    }

    pub fn reaches(&self, alpha: ExactRatio) -> bool {
        alpha.is_reached_by(self.count, self.area())
    }

    /// Parses `"count/area"` where `area` must be a perfect square.
    pub fn parse_fraction(s: &str) -> Result<Self> {
        let bad = || Error::Report(format!("bad density fraction {s:?}"));
        let (c, a) = s.split_once('/').ok_or_else(bad)?;
        let count: u64 = c.trim().parse().map_err(|_| bad())?;
        let area: u64 = a.trim().parse().map_err(|_| bad())?;
        let k = area.isqrt();
        if k == 0 || k * k != area {
            return Err(bad());
        }
        Ok(Self { count, k: k as usize })
    }
}

impl fmt::Display for WindowDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.count, self.area())
    }
}

/// The `k x k` window that witnessed an unsafe verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OffendingWindow {
    pub row: usize,
    pub col: usize,
    pub k: usize,
    pub count: u64,
}

impl OffendingWindow {
    pub fn density(&self) -> WindowDensity {
        WindowDensity {
            count: self.count,
            k: self.k,
        }
    }
}

/// One iteration of the filter-size search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub k: usize,
    pub max_count: u64,
}

/// Maximum window error count for every filter side in a range.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DensityProfile {
    pub max_counts: BTreeMap<usize, u64>,
}

impl DensityProfile {
    pub fn density(&self, k: usize) -> Option<WindowDensity> {
        self.max_counts.get(&k).map(|&count| WindowDensity { count, k })
    }

    pub fn iter(&self) -> impl Iterator<Item = WindowDensity> + '_ {
        self.max_counts.iter().map(|(&k, &count)| WindowDensity { count, k })
    }

    /// Largest density over the profile; the smallest `k` wins ties.
    pub fn max_density(&self) -> Option<WindowDensity> {
        self.iter().fold(None, |best, d| match best {
            Some(b) if b.ratio() >= d.ratio() => Some(b),
            _ => Some(d),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOutcome {
    pub verdict: Verdict,
    pub offending_window: Option<OffendingWindow>,
    pub trace: Vec<TraceStep>,
    pub density_profile: Option<DensityProfile>,
}

/// Degree-of-violation summary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantitativeMetrics {
    /// Largest unsafe filter side, absent when every side is safe.
    pub max_unsafe_k: Option<usize>,
    pub max_density: WindowDensity,
}

/// Pinhole camera setup used to translate physical sizes into pixels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CameraGeometry {
    /// Informational only; the projection uses the reference object instead.
    pub focal_length_mm: f64,
    /// Number of pixels along the sensor height.
    pub sensor_pixels_height: f64,
    /// Height of an object that exactly fills the sensor at the reference distance.
    pub reference_object_height_m: f64,
    pub reference_distance_m: f64,
}

impl CameraGeometry {
    pub fn new(
        sensor_pixels_height: f64,
        reference_object_height_m: f64,
        reference_distance_m: f64,
    ) -> Result<Self> {
        let geom = Self {
            focal_length_mm: 28.0,
            sensor_pixels_height,
            reference_object_height_m,
            reference_distance_m,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("focal length", self.focal_length_mm),
            ("sensor pixel height", self.sensor_pixels_height),
            ("reference object height", self.reference_object_height_m),
            ("reference distance", self.reference_distance_m),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }
}

/// Identifiers of the evaluated inputs, carried into the report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportInputs {
    pub prediction: Option<String>,
    pub ground_truth: Option<String>,
    pub config: Option<String>,
}

/// Everything computed for one prediction/ground-truth pair.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub inputs: ReportInputs,
    pub pcm: f64,
    pub original_errors: u64,
    pub suppressed_step1: u64,
    pub suppressed_step2: u64,
    pub residual_errors: u64,
    pub scan: ScanOutcome,
    pub quantitative: Option<QuantitativeMetrics>,
}
