//! Density is not monotone in the window side, so every side down to k_safe matters.
use segsafe::density::{density_profile, max_window_errors, quantitative_metrics};
use segsafe::{fixtures, SafetyConfig};

fn main() -> segsafe::Result<()> {
    let errors = fixtures::corner_pattern(9, 9, 3, 3);
    let cfg = SafetyConfig::scan_only("0.4".parse()?, 2);
    for k in [2, 3] {
        let stats = max_window_errors(&errors, k)?;
        println!("k={k}: max {} errors at {:?}", stats.max_count, stats.argmax_window);
    }
    let profile = density_profile(&errors, &cfg)?;
    for d in profile.iter() {
        println!("  k={:>2} density {:>5} = {:.4}", d.k, d.to_string(), d.to_f64());
    }
    let q = quantitative_metrics(&errors, &cfg)?;
    println!("max unsafe side: {:?}, max density: {}", q.max_unsafe_k, q.max_density);
    Ok(())
}
