//! The two suppression steps on a small road scene.
use std::collections::BTreeSet;

use segsafe::correctness::error_map;
use segsafe::suppression::{apply_suppression, resolve_critical_region};
use segsafe::{ErrorMap, LabelMap, SafetyConfig};

fn show(name: &str, map: &ErrorMap) {
    println!("{name} ({} errors)", map.count());
    for r in 0..map.height() {
        let line: String = (0..map.width()).map(|c| if map.get(r, c) { '#' } else { '.' }).collect();
        println!("  {line}");
    }
}

fn main() -> segsafe::Result<()> {
    // Sky (2) above row 3, road (1) below, a pole (3) in columns 5..=6.
    let gt = LabelMap::from_fn(10, 10, 3, |r, c| match (r, c) {
        (_, 5..=6) => 3,
        (0..=2, _) => 2,
        _ => 1,
    })?;
    // The prediction misses sky pixels, widens the pole by one column and
    // has a blob on the road.
    let pred = LabelMap::from_fn(10, 10, 3, |r, c| match (r, c) {
        (0..=1, 0..=2) => 1,
        (_, 4) => 3,
        (6..=8, 1..=3) => 2,
        _ => gt.get(r, c),
    })?;
    let cfg = SafetyConfig::default();
    println!("critical region: {}", resolve_critical_region(&cfg.critical_region, 10, 10)?);
    let errors = error_map(&pred, &gt, &BTreeSet::new())?;
    let out = apply_suppression(&errors, &pred, &gt, &cfg)?;
    show("original", &errors);
    show("inside critical region", &out.after_region);
    show("after edge tolerance", &out.filtered);
    println!("step 1 cleared {}, step 2 cleared {}", out.stats.step1_suppressed, out.stats.step2_suppressed);
    Ok(())
}
