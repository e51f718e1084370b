//! Diagnostic PNG panels for one evaluated image.

use std::path::{Path, PathBuf};

use image::{ImageBuffer, Rgb, RgbImage};

use super::labels::PaletteMapping;
use crate::error::{Error, Result};
use crate::pipeline::Evaluation;
use crate::types::{ClassId, ErrorMap, LabelMap, ScanOutcome};

pub const ERROR_COLOR: [u8; 3] = [255, 255, 255];
pub const BACKGROUND_COLOR: [u8; 3] = [0, 0, 0];
pub const MARKER_COLOR: [u8; 3] = [255, 0, 0];

// Cityscapes-like colors, cycled for larger label sets.
const CLASS_COLORS: [[u8; 3]; 19] = [
    [128, 64, 128],
    [244, 35, 232],
    [70, 70, 70],
    [102, 102, 156],
    [190, 153, 153],
    [153, 153, 153],
    [250, 170, 30],
    [220, 220, 0],
    [107, 142, 35],
    [152, 251, 152],
    [70, 130, 180],
    [220, 20, 60],
    [255, 0, 0],
    [0, 0, 142],
    [0, 0, 70],
    [0, 60, 100],
    [0, 80, 100],
    [0, 0, 230],
    [119, 11, 32],
];

/// Error maps for panels 4 to 7.
#[derive(Clone, Copy, Debug)]
pub struct ErrorStages<'a> {
    pub original: &'a ErrorMap,
    pub after_region: &'a ErrorMap,
    pub edge_only: &'a ErrorMap,
    pub filtered: &'a ErrorMap,
}

impl<'a> From<&'a Evaluation> for ErrorStages<'a> {
    fn from(eval: &'a Evaluation) -> Self {
        Self {
            original: &eval.original,
            after_region: &eval.suppressed.after_region,
            edge_only: &eval.suppressed.edge_only,
            filtered: &eval.suppressed.filtered,
        }
    }
}

fn class_color(id: ClassId, palette: Option<&PaletteMapping>) -> [u8; 3] {
    palette
        .and_then(|p| p.color_of(id))
        .unwrap_or(CLASS_COLORS[(id as usize - 1) % CLASS_COLORS.len()])
}

fn label_panel(map: &LabelMap, palette: Option<&PaletteMapping>) -> RgbImage {
    ImageBuffer::from_fn(map.width() as u32, map.height() as u32, |x, y| {
        Rgb(class_color(map.get(y as usize, x as usize), palette))
    })
}

fn error_panel(errors: &ErrorMap) -> RgbImage {
    ImageBuffer::from_fn(errors.width() as u32, errors.height() as u32, |x, y| {
        Rgb(if errors.get(y as usize, x as usize) {
            ERROR_COLOR
        } else {
            BACKGROUND_COLOR
        })
    })
}

fn draw_square_outline(img: &mut RgbImage, row: usize, col: usize, k: usize) {
    let (top, left) = (row as u32, col as u32);
    let (bottom, right) = (top + k as u32 - 1, left + k as u32 - 1);
    for x in left..=right {
        img.put_pixel(x, top, Rgb(MARKER_COLOR));
        img.put_pixel(x, bottom, Rgb(MARKER_COLOR));
    }
    for y in top..=bottom {
        img.put_pixel(left, y, Rgb(MARKER_COLOR));
        img.put_pixel(right, y, Rgb(MARKER_COLOR));
    }
}

fn save(img: &RgbImage, path: &Path) -> Result<()> {
    img.save(path).map_err(|e| Error::image(path, e))
}

/// Writes the panel set into `out_dir` and returns the written paths in panel order.
///
/// Panel 1 is a copy of `camera_image` when one is given. The unsafe marker
/// panel shows the filtered errors with the offending window outlined.
pub fn emit_overlays(
    pred: &LabelMap,
    gt: &LabelMap,
    stages: ErrorStages<'_>,
    scan: &ScanOutcome,
    out_dir: impl AsRef<Path>,
    camera_image: Option<&Path>,
    palette: Option<&PaletteMapping>,
) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    pred.check_compatible(gt)?;
    for map in [stages.original, stages.after_region, stages.edge_only, stages.filtered] {
        if map.dims() != gt.dims() {
            return Err(Error::DimensionMismatch {
                expected: gt.dims(),
                actual: map.dims(),
            });
        }
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut written = Vec::with_capacity(8);
    if let Some(src) = camera_image {
        let ext = src.extension().and_then(|e| e.to_str()).unwrap_or("png");
        let dst = out_dir.join(format!("1_input.{ext}"));
        std::fs::copy(src, &dst).map_err(|e| Error::io(src, e))?;
        written.push(dst);
    }

    let mut marker = error_panel(stages.filtered);
    if let Some(w) = scan.offending_window {
        draw_square_outline(&mut marker, w.row, w.col, w.k);
    }
    let panels = [
        ("2_ground_truth.png", label_panel(gt, palette)),
        ("3_prediction.png", label_panel(pred, palette)),
        ("4_original_errors.png", error_panel(stages.original)),
        ("5_critical_region_errors.png", error_panel(stages.after_region)),
        ("6_edge_neglected_errors.png", error_panel(stages.edge_only)),
        ("7_filtered_errors.png", error_panel(stages.filtered)),
        ("8_unsafe_marker.png", marker),
    ];
    for (name, img) in panels {
        let path = out_dir.join(name);
        save(&img, &path)?;
        written.push(path);
    }
    Ok(written)
}
