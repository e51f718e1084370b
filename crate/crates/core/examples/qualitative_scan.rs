//! Iterative filter-size search: a compact cluster against the same number of scattered errors.
use segsafe::density::{min_filter_bound, qualitative_scan};
use segsafe::{fixtures, ErrorMap, SafetyConfig};

fn report(name: &str, errors: &ErrorMap, cfg: &SafetyConfig) -> segsafe::Result<()> {
    let scan = qualitative_scan(errors, cfg)?;
    let trace: Vec<String> = scan.trace.iter().map(|t| format!("k={} max={}", t.k, t.max_count)).collect();
    println!("{name}: {} [{}]", scan.verdict, trace.join(", "));
    if let Some(w) = scan.offending_window {
        println!("  window at row {} col {}, side {}, density {}", w.row, w.col, w.k, w.density());
    }
    Ok(())
}

fn main() -> segsafe::Result<()> {
    let alpha = "0.2".parse()?;
    let cfg = SafetyConfig::scan_only(alpha, 5);
    report("cluster", &fixtures::cluster_errors(), &cfg)?;

    // Eight errors spread out over the same 5x9 frame.
    let spread = ErrorMap::from_ascii(
        "#..#....#
         .........
         ..#..##..
         .........
         #.......#",
    )?;
    report("spread", &spread, &cfg)?;

    let half = "0.5".parse()?;
    println!("smallest safe side for 10000 errors at alpha 0.5: {}", min_filter_bound(10_000, half));
    println!("smallest safe side for 1000 errors at alpha 0.5: {}", min_filter_bound(1_000, half));
    report("sparse blocks", &fixtures::sparse_blocks(), &SafetyConfig::scan_only(half, 20))?;
    Ok(())
}
