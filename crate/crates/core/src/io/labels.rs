//! Label raster ingestion.
//!
//! Single-channel rasters (8 or 16 bit) carry class ids directly, one-based
//! unless [`IdBase::Zero`] is selected. RGB rasters need a [`PaletteMapping`].
//! Only lossless PNG is written.

use std::path::Path;

use image::{DynamicImage, ImageBuffer, Luma, Rgb};

use crate::error::{Error, Result};
use crate::types::{ClassId, LabelMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PaletteKey {
    Rgb([u8; 3]),
    Raw(u16),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PaletteEntry {
    pub key: PaletteKey,
    pub class: ClassId,
}

/// Pixel value to class id table. Several values may share a class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PaletteMapping {
    entries: Vec<PaletteEntry>,
    default: Option<ClassId>,
}

impl PaletteMapping {
    pub fn new(entries: Vec<PaletteEntry>, default: Option<ClassId>) -> Result<Self> {
        if let Some(e) = entries.iter().find(|e| e.class == 0) {
            return Err(Error::Config(format!("palette maps {:?} to class 0", e.key)));
        }
        if default == Some(0) {
            return Err(Error::Config("palette default class must be at least 1".into()));
        }
        Ok(Self { entries, default })
    }

    pub fn entries(&self) -> &[PaletteEntry] {
        &self.entries
    }

    pub fn default_class(&self) -> Option<ClassId> {
        self.default
    }

    pub fn lookup(&self, key: PaletteKey) -> Option<ClassId> {
        self.entries
            .iter()
            .find(|e| e.key == key)
            .map(|e| e.class)
            .or(self.default)
    }

    /// First color registered for `class`.
    pub fn color_of(&self, class: ClassId) -> Option<[u8; 3]> {
        self.entries.iter().find_map(|e| match e.key {
            PaletteKey::Rgb(rgb) if e.class == class => Some(rgb),
            _ => None,
        })
    }
}

/// How raw single-channel values map onto one-based class ids.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IdBase {
    /// Raw value `v` is class `v`; `0` is invalid.
    #[default]
    One,
    /// Raw value `v` is class `v + 1`.
    Zero,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadOptions {
    pub palette: Option<PaletteMapping>,
    pub id_base: IdBase,
    /// Size of the label set; inferred from the largest id when absent.
    pub num_classes: Option<ClassId>,
}

enum Pixels {
    Raw(Vec<u16>),
    Rgb(Vec<[u8; 3]>),
}

fn read_pixels(path: &Path) -> Result<(usize, usize, Pixels)> {
    let img = image::open(path).map_err(|e| Error::image(path, e))?;
    let (width, height) = (img.width() as usize, img.height() as usize);
    if width == 0 || height == 0 {
        return Err(Error::InvalidInput(format!("{}: zero-sized image", path.display())));
    }
    let pixels = match img {
        DynamicImage::ImageLuma8(buf) => Pixels::Raw(buf.into_raw().into_iter().map(u16::from).collect()),
        DynamicImage::ImageLuma16(buf) => Pixels::Raw(buf.into_raw()),
        DynamicImage::ImageRgb8(buf) => Pixels::Rgb(buf.pixels().map(|p| p.0).collect()),
        DynamicImage::ImageRgba8(buf) => Pixels::Rgb(buf.pixels().map(|p| [p[0], p[1], p[2]]).collect()),
        other => {
            return Err(Error::InvalidInput(format!(
                "{}: unsupported pixel layout {:?}",
                path.display(),
                other.color()
            )))
        }
    };
    Ok((width, height, pixels))
}

fn unmapped(idx: usize, width: usize, value: String) -> Error {
    Error::UnmappedValue {
        row: idx / width,
        col: idx % width,
        value,
    }
}

/// Reads a label raster into a [`LabelMap`].
pub fn load_label_map(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<LabelMap> {
    let path = path.as_ref();
    let (width, height, pixels) = read_pixels(path)?;
    let mut ids = Vec::with_capacity(width * height);
    match (&pixels, &opts.palette) {
        (Pixels::Raw(raw), Some(palette)) => {
            for (idx, &v) in raw.iter().enumerate() {
                let id = palette
                    .lookup(PaletteKey::Raw(v))
                    .ok_or_else(|| unmapped(idx, width, v.to_string()))?;
                ids.push(id);
            }
        }
        (Pixels::Raw(raw), None) => {
            for (idx, &v) in raw.iter().enumerate() {
                let id = match opts.id_base {
                    IdBase::One if v == 0 => return Err(unmapped(idx, width, "0".into())),
                    IdBase::One => v,
                    IdBase::Zero => v
                        .checked_add(1)
                        .ok_or_else(|| unmapped(idx, width, v.to_string()))?,
                };
                ids.push(id);
            }
        }
        (Pixels::Rgb(rgb), Some(palette)) => {
            for (idx, &px) in rgb.iter().enumerate() {
                let id = palette
                    .lookup(PaletteKey::Rgb(px))
                    .ok_or_else(|| unmapped(idx, width, format!("{px:?}")))?;
                ids.push(id);
            }
        }
        (Pixels::Rgb(_), None) => {
            return Err(Error::InvalidInput(format!(
                "{}: color mask needs a palette mapping",
                path.display()
            )))
        }
    }
    let num_classes = match opts.num_classes {
        Some(n) => n,
        None => ids.iter().copied().max().unwrap_or(1),
    };
    LabelMap::new(width, height, num_classes, ids)
}

/// Loads a prediction and ground truth sharing one label set.
pub fn load_label_pair(
    pred_path: impl AsRef<Path>,
    gt_path: impl AsRef<Path>,
    opts: &LoadOptions,
) -> Result<(LabelMap, LabelMap)> {
    let pred = load_label_map(pred_path, opts)?;
    let gt = load_label_map(gt_path, opts)?;
    let n = pred.num_classes().max(gt.num_classes());
    Ok((pred.with_num_classes(n)?, gt.with_num_classes(n)?))
}

/// Writes class ids as a single-channel PNG (8-bit when every value fits).
pub fn save_label_map(map: &LabelMap, path: impl AsRef<Path>, id_base: IdBase) -> Result<()> {
    let path = path.as_ref();
    let offset = match id_base {
        IdBase::One => 0,
        IdBase::Zero => 1,
    };
    let raw: Vec<u16> = map.data().iter().map(|&id| id - offset).collect();
    let (w, h) = (map.width() as u32, map.height() as u32);
    let result = if raw.iter().all(|&v| v <= u8::MAX as u16) {
        let buf: ImageBuffer<Luma<u8>, _> =
            ImageBuffer::from_raw(w, h, raw.iter().map(|&v| v as u8).collect::<Vec<_>>()).expect("buffer size");
        buf.save(path)
    } else {
        let buf: ImageBuffer<Luma<u16>, _> = ImageBuffer::from_raw(w, h, raw).expect("buffer size");
        buf.save(path)
    };
    result.map_err(|e| Error::image(path, e))
}

/// Writes a color mask using the first palette color of each class.
pub fn save_label_map_rgb(map: &LabelMap, path: impl AsRef<Path>, palette: &PaletteMapping) -> Result<()> {
    let path = path.as_ref();
    let mut buf: ImageBuffer<Rgb<u8>, Vec<u8>> = ImageBuffer::new(map.width() as u32, map.height() as u32);
    for (idx, px) in buf.pixels_mut().enumerate() {
        let id = map.data()[idx];
        let rgb = palette
            .color_of(id)
            .ok_or_else(|| Error::Config(format!("palette has no color for class {id}")))?;
        *px = Rgb(rgb);
    }
    buf.save(path).map_err(|e| Error::image(path, e))
}
