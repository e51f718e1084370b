//! End to end: PNG masks in, JSON report and overlay panels out.
use segsafe::io::{emit_overlays, emit_report, load_label_pair, parse_config, save_label_map, ErrorStages, IdBase};
use segsafe::{evaluate, EvalOptions, LabelMap, ReportInputs};

fn main() -> segsafe::Result<()> {
    let dir = std::env::temp_dir().join("segsafe-evaluate-masks");
    std::fs::create_dir_all(&dir).map_err(|e| segsafe::Error::InvalidInput(e.to_string()))?;

    // 60x80 scene: sky over road, with a 14x14 patch of road predicted as sky.
    let gt = LabelMap::from_fn(80, 60, 2, |r, _| if r < 20 { 2 } else { 1 })?;
    let pred = LabelMap::from_fn(80, 60, 2, |r, c| {
        if (35..49).contains(&r) && (30..44).contains(&c) {
            2
        } else {
            gt.get(r, c)
        }
    })?;
    let (pred_path, gt_path) = (dir.join("pred.png"), dir.join("gt.png"));
    save_label_map(&pred, &pred_path, IdBase::Zero)?;
    save_label_map(&gt, &gt_path, IdBase::Zero)?;

    let doc = parse_config("alpha = \"0.5\"\nk_safe = 10\nid_base = 0\n")?;
    let (pred, gt) = load_label_pair(&pred_path, &gt_path, &doc.labels)?;
    let opts = EvalOptions {
        profile: true,
        inputs: ReportInputs {
            prediction: Some(pred_path.display().to_string()),
            ground_truth: Some(gt_path.display().to_string()),
            config: None,
        },
    };
    let eval = evaluate(&pred, &gt, &doc.safety, &opts)?;
    let report = dir.join("report.json");
    emit_report(&eval.report, &report)?;
    let panels = emit_overlays(&pred, &gt, ErrorStages::from(&eval), &eval.report.scan, dir.join("panels"), None, None)?;

    println!("verdict {} with pcm {:.4}", eval.report.scan.verdict, eval.report.pcm);
    if let Some(w) = eval.report.scan.offending_window {
        println!("offending window row {} col {} side {} density {}", w.row, w.col, w.k, w.density());
    }
    println!("report: {}", report.display());
    for p in panels {
        println!("panel: {}", p.display());
    }
    Ok(())
}
