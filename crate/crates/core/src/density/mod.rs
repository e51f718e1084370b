//! Dense error-cluster detection.
//!
//! A map is unsafe when some `k x k` window with `k >= k_safe` has an error
//! density of at least alpha. Density is not monotone in `k`, so every side
//! has to be accounted for; [`qualitative_scan`] skips the sides that the
//! observed counts already rule out. [`oracle`] holds the exhaustive version.

mod calibrate;
pub mod oracle;
mod sat;
mod scan;

pub use calibrate::{calibrate_k_safe, pixel_extent, Calibration};
pub use oracle::oracle_scan;
pub use sat::{max_window_errors, summed_area_table, SummedAreaTable, WindowStatistics};
pub(crate) use scan::{profile_with_table, scan_with_table};
pub use scan::{
    density_profile, min_filter_bound, qualitative_scan, quantitative_from_profile, quantitative_metrics,
};
