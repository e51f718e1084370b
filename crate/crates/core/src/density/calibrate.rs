use crate::error::{Error, Result};
use crate::types::CameraGeometry;

/// Physical size of a pixel at a distance, and the filter side it implies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    pub pixel_extent_m: f64,
    pub k_safe: usize,
}

/// Height in meters covered by a single pixel at `distance_m`.
///
/// An object of the reference height fills all sensor rows at the reference
/// distance, and the covered extent scales linearly with distance.
pub fn pixel_extent(geom: &CameraGeometry, distance_m: f64) -> Result<f64> {
    geom.validate()?;
    if !(distance_m.is_finite() && distance_m > 0.0) {
        return Err(Error::InvalidInput(format!("distance must be positive, got {distance_m}")));
    }
    Ok(geom.reference_object_height_m / geom.sensor_pixels_height * (distance_m / geom.reference_distance_m))
}

/// Smallest filter side whose back-projection at `distance_m` spans `min_hazard_m`.
pub fn calibrate_k_safe(geom: &CameraGeometry, distance_m: f64, min_hazard_m: f64) -> Result<Calibration> {
    let extent = pixel_extent(geom, distance_m)?;
    if !(min_hazard_m.is_finite() && min_hazard_m > 0.0) {
        return Err(Error::InvalidInput(format!("hazard size must be positive, got {min_hazard_m}")));
    }
    // Absorb rounding so that an exact multiple of the extent is not bumped up a pixel.
    let pixels = (min_hazard_m / extent * (1.0 - 1e-12)).ceil().max(1.0);
    Ok(Calibration {
        pixel_extent_m: extent,
        k_safe: pixels as usize,
    })
}
