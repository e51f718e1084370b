//! Files in and out: label rasters, configuration, reports and overlay panels.

mod config;
mod labels;
mod overlay;
mod report;

pub use config::{load_config, load_config_document, parse_config, ConfigDocument};
pub use labels::{
    load_label_map, load_label_pair, save_label_map, save_label_map_rgb, IdBase, LoadOptions, PaletteEntry,
    PaletteKey, PaletteMapping,
};
pub use overlay::{emit_overlays, ErrorStages, BACKGROUND_COLOR, ERROR_COLOR, MARKER_COLOR};
pub use report::{emit_report, parse_report, read_report, report_to_json, ReportDocument};
