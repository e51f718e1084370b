//! Pixel accuracy and perturbation robustness from raw class scores.
use segsafe::correctness::argmax_prediction;
use segsafe::pixel_metrics::{pcm, prm};
use segsafe::{LabelMap, ScoreVolume};

fn main() -> segsafe::Result<()> {
    // 4x3 image, two classes; the score of class 2 grows to the right.
    let (w, h) = (4, 3);
    let scores: Vec<f32> = (0..w * h)
        .flat_map(|i| {
            let c = (i % w) as f32;
            [1.0, c * 0.6]
        })
        .collect();
    let pred = argmax_prediction(&ScoreVolume::new(w, h, 2, scores)?);
    let gt = LabelMap::from_fn(w, h, 2, |_, c| if c < 2 { 1 } else { 2 })?;
    println!("prediction rows:");
    for r in 0..h {
        println!("  {:?}", (0..w).map(|c| pred.get(r, c)).collect::<Vec<_>>());
    }
    println!("pcm = {:.4}", pcm(&pred, &gt)?);

    // Two perturbed predictions: one flips a column, one flips a single pixel.
    let column = LabelMap::from_fn(w, h, 2, |r, c| if c == 3 { 1 } else { pred.get(r, c) })?;
    let mut single = pred.clone();
    single.set(0, 0, 2)?;
    println!("prm = {:.4}", prm(&pred, &gt, &[column, single])?);
    Ok(())
}
