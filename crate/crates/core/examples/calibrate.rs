//! Converting a hazard size in metres into a minimum filter side.
use segsafe::density::{calibrate_k_safe, pixel_extent};
use segsafe::CameraGeometry;

fn main() -> segsafe::Result<()> {
    // A 10 m object spans the full 1080 px sensor height at 50 m.
    let geom = CameraGeometry::new(1080.0, 10.0, 50.0)?;
    for distance in [10.0, 25.0, 50.0, 100.0] {
        let extent = pixel_extent(&geom, distance)?;
        let cal = calibrate_k_safe(&geom, distance, 0.2)?;
        println!(
            "{distance:>5} m: one pixel covers {:.2} cm, a 20 cm hazard needs k_safe = {}",
            extent * 100.0,
            cal.k_safe
        );
    }
    Ok(())
}
