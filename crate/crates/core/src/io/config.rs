//! TOML configuration.
//!
//! ```toml
//! alpha = "0.5"                  # decimal string (or number), held exactly
//! k_safe = 20
//! outside_region_policy = "suppress"   # or "keep"
//! edge_filter = true
//! ignore_labels = [20]
//! num_classes = 20
//! id_base = 1                    # 0 when rasters store zero-based ids
//!
//! [critical_region]
//! mode = "fractions"             # or "rect" with top/left/bottom/right
//! vfrac = "0.7"
//! hfrac = "0.6"
//!
//! [[palette]]
//! rgb = [128, 64, 128]
//! class = 1
//! ```
//!
//! Every key is optional; missing keys take the values of
//! [`SafetyConfig::default`].

use std::path::Path;

use serde::Deserialize;

use super::labels::{IdBase, LoadOptions, PaletteEntry, PaletteKey, PaletteMapping};
use crate::error::{Error, Result};
use crate::types::{ClassId, CriticalRegion, ExactRatio, OutsideRegionPolicy, PixelRect, SafetyConfig};

/// Safety parameters plus how label rasters are decoded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigDocument {
    pub safety: SafetyConfig,
    pub labels: LoadOptions,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberText {
    Text(String),
    Int(i64),
    Float(f64),
}

impl NumberText {
    fn exact(&self, key: &str) -> Result<ExactRatio> {
        let text = match self {
            NumberText::Text(s) => s.clone(),
            NumberText::Int(i) => i.to_string(),
            // Display gives the shortest text that round-trips, e.g. "0.7".
            NumberText::Float(f) => f.to_string(),
        };
        text.parse()
            .map_err(|_| Error::Config(format!("{key}: {text:?} is not a non-negative decimal")))
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    alpha: Option<NumberText>,
    k_safe: Option<i64>,
    critical_region: Option<RawRegion>,
    outside_region_policy: Option<String>,
    edge_filter: Option<bool>,
    ignore_labels: Option<Vec<i64>>,
    num_classes: Option<i64>,
    id_base: Option<i64>,
    palette: Option<Vec<RawPaletteEntry>>,
    palette_default: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegion {
    mode: String,
    vfrac: Option<NumberText>,
    hfrac: Option<NumberText>,
    top: Option<i64>,
    left: Option<i64>,
    bottom: Option<i64>,
    right: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPaletteEntry {
    rgb: Option<[u8; 3]>,
    raw: Option<u16>,
    class: i64,
}

fn class_id(key: &str, v: i64) -> Result<ClassId> {
    ClassId::try_from(v)
        .ok()
        .filter(|&id| id >= 1)
        .ok_or_else(|| Error::Config(format!("{key}: class id {v} outside [1, {}]", ClassId::MAX)))
}

fn non_negative(key: &str, v: Option<i64>) -> Result<usize> {
    let v = v.ok_or_else(|| Error::Config(format!("critical_region: missing {key}")))?;
    usize::try_from(v).map_err(|_| Error::Config(format!("critical_region.{key} must be non-negative")))
}

fn region(raw: RawRegion) -> Result<CriticalRegion> {
    match raw.mode.as_str() {
        "fractions" => {
            let defaults = match SafetyConfig::default().critical_region {
                CriticalRegion::Fractions { vertical, horizontal } => (vertical, horizontal),
                CriticalRegion::Rect(_) => unreachable!("default region is fractional"),
            };
            let vertical = match raw.vfrac {
                Some(v) => v.exact("critical_region.vfrac")?,
                None => defaults.0,
            };
            let horizontal = match raw.hfrac {
                Some(v) => v.exact("critical_region.hfrac")?,
                None => defaults.1,
            };
            Ok(CriticalRegion::Fractions { vertical, horizontal })
        }
        "rect" => Ok(CriticalRegion::Rect(PixelRect {
            top: non_negative("top", raw.top)?,
            left: non_negative("left", raw.left)?,
            bottom: non_negative("bottom", raw.bottom)?,
            right: non_negative("right", raw.right)?,
        })),
        other => Err(Error::Config(format!(
            "critical_region.mode must be \"fractions\" or \"rect\", got {other:?}"
        ))),
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ConfigDocument> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut safety = SafetyConfig::default();
    if let Some(alpha) = raw.alpha {
        safety.alpha = alpha.exact("alpha")?;
    }
    if let Some(k) = raw.k_safe {
        safety.k_safe = usize::try_from(k).map_err(|_| Error::Config(format!("k_safe must be positive, got {k}")))?;
    }
    if let Some(r) = raw.critical_region {
        safety.critical_region = region(r)?;
    }
    if let Some(policy) = raw.outside_region_policy {
        safety.outside_region_policy = match policy.as_str() {
            "suppress" => OutsideRegionPolicy::Suppress,
            "keep" => OutsideRegionPolicy::Keep,
            other => {
                return Err(Error::Config(format!(
                    "outside_region_policy must be \"suppress\" or \"keep\", got {other:?}"
                )))
            }
        };
    }
    if let Some(edge) = raw.edge_filter {
        safety.edge_filter = edge;
    }
    if let Some(ids) = raw.ignore_labels {
        safety.ignore_labels = ids
            .into_iter()
            .map(|v| class_id("ignore_labels", v))
            .collect::<Result<_>>()?;
    }
    safety.validate()?;

    let mut labels = LoadOptions::default();
    if let Some(n) = raw.num_classes {
        labels.num_classes = Some(class_id("num_classes", n)?);
    }
    labels.id_base = match raw.id_base {
        None | Some(1) => IdBase::One,
        Some(0) => IdBase::Zero,
        Some(other) => return Err(Error::Config(format!("id_base must be 0 or 1, got {other}"))),
    };
    let default = raw
        .palette_default
        .map(|v| class_id("palette_default", v))
        .transpose()?;
    if let Some(entries) = raw.palette {
        let entries = entries
            .into_iter()
            .map(|e| {
                let key = match (e.rgb, e.raw) {
                    (Some(rgb), None) => PaletteKey::Rgb(rgb),
                    (None, Some(raw)) => PaletteKey::Raw(raw),
                    _ => return Err(Error::Config("palette entry needs exactly one of rgb or raw".into())),
                };
                Ok(PaletteEntry {
                    key,
                    class: class_id("palette.class", e.class)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        labels.palette = Some(PaletteMapping::new(entries, default)?);
    } else if default.is_some() {
        return Err(Error::Config("palette_default given without a palette".into()));
    }
    Ok(ConfigDocument { safety, labels })
}

/// Reads the full configuration document from disk.
pub fn load_config_document(path: impl AsRef<Path>) -> Result<ConfigDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Reads only the safety parameters.
pub fn load_config(path: impl AsRef<Path>) -> Result<SafetyConfig> {
    Ok(load_config_document(path)?.safety)
}
