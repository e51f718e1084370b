//! Driving the command-line entry point in-process.
use segsafe::cli;
use segsafe::io::{save_label_map, IdBase};
use segsafe::{fixtures, LabelMap};

fn main() -> segsafe::Result<()> {
    let dir = std::env::temp_dir().join("segsafe-cli-eval");
    std::fs::create_dir_all(&dir).map_err(|e| segsafe::Error::InvalidInput(e.to_string()))?;
    let (pred, gt): (LabelMap, LabelMap) = fixtures::cluster_scene();
    let (p, g) = (dir.join("pred.png"), dir.join("gt.png"));
    save_label_map(&pred, &p, IdBase::One)?;
    save_label_map(&gt, &g, IdBase::One)?;

    let runs: [&[&str]; 2] = [
        &["eval", "--alpha", "0.2", "--k-safe", "5", "--no-region-filter", "--out"],
        &["calibrate", "--sensor-pixels", "1080", "--object-height", "10", "--reference-distance", "50", "--distance", "25", "--hazard-size", "0.05"],
    ];
    for args in runs {
        let mut argv: Vec<String> = vec!["segsafe".into()];
        argv.extend(args.iter().map(|s| s.to_string()));
        if args[0] == "eval" {
            argv.push(dir.join("report.json").display().to_string());
            argv.push(p.display().to_string());
            argv.push(g.display().to_string());
        }
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cli::run(argv, &mut out, &mut err);
        print!("{}", String::from_utf8_lossy(&out));
        eprint!("{}", String::from_utf8_lossy(&err));
        println!("exit code {code}");
    }
    Ok(())
}
