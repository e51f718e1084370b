//! Safety-aware evaluation of semantic segmentation predictions.
//!
//! Besides plain pixel accuracy ([`pixel_metrics::pcm`]) and perturbation
//! robustness ([`pixel_metrics::prm`]), the crate decides whether a
//! prediction is *safe*: errors outside a critical region and tolerable
//! errors on class boundaries are suppressed, then the remaining errors are
//! searched for a `k x k` window (with `k >= k_safe`) whose error density
//! reaches a threshold alpha.
//!
//! ```
//! use segsafe::{fixtures, density, SafetyConfig, Verdict};
//!
//! let errors = fixtures::cluster_errors();
//! let cfg = SafetyConfig::scan_only("0.2".parse().unwrap(), 5);
//! let outcome = density::qualitative_scan(&errors, &cfg).unwrap();
//! assert_eq!(outcome.verdict, Verdict::Unsafe);
//! assert_eq!(outcome.offending_window.unwrap().density().to_string(), "8/25");
//! ```
//!
//! The [`pipeline::evaluate`] function chains everything for a pair of label
//! maps; [`io`] reads masks and configuration and writes reports and panels.

pub mod batch;
pub mod cli;
pub mod correctness;
pub mod density;
mod error;
pub mod fixtures;
pub mod io;
pub mod pipeline;
pub mod pixel_metrics;
pub mod suppression;
pub mod types;

pub use error::{Error, Result};
pub use pipeline::{evaluate, EvalOptions, Evaluation};
pub use types::{
    CameraGeometry, ClassId, CriticalRegion, DensityProfile, ErrorMap, EvaluationReport, ExactRatio, LabelMap,
    OffendingWindow, OutsideRegionPolicy, PixelRect, QuantitativeMetrics, ReportInputs, SafetyConfig, ScanOutcome,
    ScoreVolume, TraceStep, Verdict, WindowDensity,
};
