//! Evaluating a manifest of image pairs in parallel.
use std::fmt::Write as _;

use segsafe::batch::{read_manifest, run_batch, BatchOptions};
use segsafe::io::{save_label_map, ConfigDocument, IdBase};
use segsafe::{LabelMap, SafetyConfig};

fn main() -> segsafe::Result<()> {
    let dir = std::env::temp_dir().join("segsafe-batch-manifest");
    let io = |e: std::io::Error| segsafe::Error::InvalidInput(e.to_string());
    std::fs::create_dir_all(&dir).map_err(io)?;

    let gt = LabelMap::uniform(40, 40, 2, 1)?;
    save_label_map(&gt, dir.join("gt.png"), IdBase::One)?;
    let mut manifest = String::from("# prediction ground_truth\n");
    for (i, blob) in [0usize, 6, 12, 18].into_iter().enumerate() {
        let pred = LabelMap::from_fn(40, 40, 2, |r, c| if r >= 40 - blob && c < blob { 2 } else { 1 })?;
        let name = format!("pred{i}.png");
        save_label_map(&pred, dir.join(&name), IdBase::One)?;
        writeln!(manifest, "{name} gt.png").unwrap();
    }
    writeln!(manifest, "missing.png gt.png").unwrap();
    std::fs::write(dir.join("manifest.txt"), manifest).map_err(io)?;

    let entries = read_manifest(dir.join("manifest.txt"))?;
    let doc = ConfigDocument { safety: SafetyConfig { k_safe: 10, ..SafetyConfig::default() }, ..Default::default() };
    let summary = run_batch(&entries, &doc, &BatchOptions { jobs: 4, ..Default::default() })?;
    println!("{}", summary.to_json()?);
    Ok(())
}
