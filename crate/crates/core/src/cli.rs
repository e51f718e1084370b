//! Command-line front end: `eval`, `batch` and `calibrate`.
//!
//! Exit codes: 0 safe, 1 unsafe, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::batch::{read_manifest, run_batch, BatchOptions};
use crate::density::calibrate_k_safe;
use crate::error::{Error, Result};
use crate::io::{
    emit_overlays, emit_report, load_config_document, load_label_pair, report_to_json, ConfigDocument, ErrorStages,
};
use crate::pipeline::{evaluate, EvalOptions};
use crate::types::{CameraGeometry, ExactRatio, OutsideRegionPolicy, ReportInputs, Verdict};

pub const EXIT_SAFE: i32 = 0;
pub const EXIT_UNSAFE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "segsafe", version, about = "Safety-aware evaluation of semantic segmentation masks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one prediction against its ground truth.
    Eval(EvalArgs),
    /// Evaluate every pair listed in a manifest.
    Batch(BatchArgs),
    /// Suggest k_safe from camera geometry.
    Calibrate(CalibrateArgs),
}

#[derive(Args, Debug)]
struct SafetyFlags {
    /// TOML configuration; defaults apply when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Density threshold, e.g. 0.5 or 2/5.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    k_safe: Option<usize>,
    /// Keep errors outside the critical region.
    #[arg(long)]
    no_region_filter: bool,
    /// Keep errors on ground-truth edges.
    #[arg(long)]
    no_edge_filter: bool,
    /// Record the density of every filter side and the quantitative metrics.
    #[arg(long)]
    profile: bool,
}

impl SafetyFlags {
    fn resolve(&self) -> Result<ConfigDocument> {
        let mut doc = match &self.config {
            Some(path) => load_config_document(path)?,
            None => ConfigDocument::default(),
        };
        if let Some(alpha) = &self.alpha {
            doc.safety.alpha = alpha
                .parse::<ExactRatio>()
                .map_err(|_| Error::Config(format!("--alpha: {alpha:?} is not an exact number")))?;
        }
        if let Some(k) = self.k_safe {
            doc.safety.k_safe = k;
        }
        if self.no_region_filter {
            doc.safety.outside_region_policy = OutsideRegionPolicy::Keep;
        }
        if self.no_edge_filter {
            doc.safety.edge_filter = false;
        }
        doc.safety.validate()?;
        Ok(doc)
    }

    fn config_label(&self) -> Option<String> {
        self.config.as_ref().map(|p| p.display().to_string())
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Predicted label raster.
    pred: PathBuf,
    /// Ground-truth label raster.
    gt: PathBuf,
    #[command(flatten)]
    safety: SafetyFlags,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write diagnostic panels into this directory.
    #[arg(long)]
    viz_dir: Option<PathBuf>,
    /// Camera image copied in as the first panel.
    #[arg(long, requires = "viz_dir")]
    input_image: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BatchArgs {
    manifest: PathBuf,
    #[command(flatten)]
    safety: SafetyFlags,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Abort on the first failing image.
    #[arg(long)]
    strict: bool,
    /// Directory for per-image reports.
    #[arg(long)]
    report_dir: Option<PathBuf>,
    /// Write the aggregate report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    /// Sensor height in pixels.
    #[arg(long)]
    sensor_pixels: f64,
    /// Height in meters of an object filling the sensor at the reference distance.
    #[arg(long)]
    object_height: f64,
    /// Reference distance in meters.
    #[arg(long)]
    reference_distance: f64,
    /// Distance in meters at which hazards must be detected.
    #[arg(long)]
    distance: f64,
    /// Smallest hazard size in meters.
    #[arg(long)]
    hazard_size: Option<f64>,
    /// Focal length in millimeters (informational).
    #[arg(long, default_value_t = 28.0)]
    focal_length: f64,
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32> {
    let doc = args.safety.resolve()?;
    let (pred, gt) = load_label_pair(&args.pred, &args.gt, &doc.labels)?;
    let opts = EvalOptions {
        profile: args.safety.profile,
        inputs: ReportInputs {
            prediction: Some(args.pred.display().to_string()),
            ground_truth: Some(args.gt.display().to_string()),
            config: args.safety.config_label(),
        },
    };
    let eval = evaluate(&pred, &gt, &doc.safety, &opts)?;
    let report = &eval.report;
    match &args.out {
        Some(path) => {
            emit_report(report, path)?;
            let detail = match report.scan.offending_window {
                Some(w) => format!(
                    " window row {} col {} k {} density {} ({:.4})",
                    w.row,
                    w.col,
                    w.k,
                    w.density(),
                    w.density().to_f64()
                ),
                None => String::new(),
            };
            writeln!(out, "{}{detail}; pcm {:.4}", report.scan.verdict, report.pcm).map_err(|e| Error::io("<stdout>", e))?;
        }
        None => out
            .write_all(report_to_json(report)?.as_bytes())
            .map_err(|e| Error::io("<stdout>", e))?,
    }
    if let Some(dir) = &args.viz_dir {
        emit_overlays(
            &pred,
            &gt,
            ErrorStages::from(&eval),
            &report.scan,
            dir,
            args.input_image.as_deref(),
            doc.labels.palette.as_ref(),
        )?;
    }
    Ok(match report.scan.verdict {
        Verdict::Safe => EXIT_SAFE,
        Verdict::Unsafe => EXIT_UNSAFE,
    })
}

fn cmd_batch(args: &BatchArgs, out: &mut dyn Write) -> Result<i32> {
    let doc = args.safety.resolve()?;
    let entries = read_manifest(&args.manifest)?;
    let opts = BatchOptions {
        jobs: args.jobs,
        strict: args.strict,
        profile: args.safety.profile,
        report_dir: args.report_dir.clone(),
        config_label: args.safety.config_label(),
    };
    let summary = run_batch(&entries, &doc, &opts)?;
    let json = summary.to_json()?;
    match &args.out {
        Some(path) => std::fs::write(path, json).map_err(|e| Error::io(path, e))?,
        None => out.write_all(json.as_bytes()).map_err(|e| Error::io("<stdout>", e))?,
    }
    Ok(if summary.n_unsafe > 0 {
        EXIT_UNSAFE
    } else if summary.n_failed > 0 {
        EXIT_ERROR
    } else {
        EXIT_SAFE
    })
}

fn cmd_calibrate(args: &CalibrateArgs, out: &mut dyn Write) -> Result<i32> {
    let geom = CameraGeometry {
        focal_length_mm: args.focal_length,
        sensor_pixels_height: args.sensor_pixels,
        reference_object_height_m: args.object_height,
        reference_distance_m: args.reference_distance,
    };
    let extent = crate::density::pixel_extent(&geom, args.distance)?;
    let w = |e: std::io::Error| Error::io("<stdout>", e);
    writeln!(out, "pixel_extent_m = {extent:.9}").map_err(w)?;
    writeln!(out, "pixel_extent_cm = {:.4}", extent * 100.0).map_err(w)?;
    if let Some(hazard) = args.hazard_size {
        let cal = calibrate_k_safe(&geom, args.distance, hazard)?;
        writeln!(out, "k_safe = {}", cal.k_safe).map_err(w)?;
    }
    Ok(EXIT_SAFE)
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_SAFE
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_ERROR
                }
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Batch(a) => cmd_batch(a, out),
        Command::Calibrate(a) => cmd_calibrate(a, out),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_ERROR
    })
}
