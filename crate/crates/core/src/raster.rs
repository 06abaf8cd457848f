//! Raster types shared by every other module.
//!
//! Storage is row-major with a top-left origin. Intensities are kept as
//! `f64` so that interpolated values survive untouched until they are
//! quantized at file I/O.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A class label. Masks are 8-bit single-channel rasters with literal values.
pub type Label = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Size {
    pub width: usize,
    pub height: usize,
}

impl Size {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!(
                "raster size must be at least 1x1, got {width}x{height}"
            )));
        }
        Ok(Size { width, height })
    }

    /// Square size, panicking on zero. Handy for literals.
    pub fn square(side: usize) -> Self {
        Size::new(side, side).expect("square side must be non-zero")
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    pub fn diagonal(&self) -> f64 {
        ((self.width * self.width + self.height * self.height) as f64).sqrt()
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl std::str::FromStr for Size {
    type Err = Error;

    /// Parses `WxH`, or a single number for a square.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad size `{s}`")))
        };
        match s.split_once(['x', 'X']) {
            Some((w, h)) => Size::new(parse(w)?, parse(h)?),
            None => {
                let side = parse(s)?;
                Size::new(side, side)
            }
        }
    }
}

/// Grayscale raster of real intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    size: Size,
    pixels: Vec<f64>,
    range: (f64, f64),
}

impl Image {
    pub const DEFAULT_RANGE: (f64, f64) = (0.0, 255.0);

    /// Builds an image with the default `[0, 255]` value range.
    pub fn new(size: Size, pixels: Vec<f64>) -> Result<Self> {
        Image::with_range(size, pixels, Image::DEFAULT_RANGE)
    }

    pub fn with_range(size: Size, pixels: Vec<f64>, range: (f64, f64)) -> Result<Self> {
        if pixels.len() != size.len() {
            return Err(Error::invalid(format!(
                "{} pixels supplied for a {size} image",
                pixels.len()
            )));
        }
        if range.0.partial_cmp(&range.1).is_none_or(|o| o.is_gt()) {
            return Err(Error::invalid(format!("empty value range {range:?}")));
        }
        if let Some(p) = pixels.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite pixel value {p}")));
        }
        Ok(Image {
            size,
            pixels,
            range,
        })
    }

    pub fn filled(size: Size, value: f64) -> Self {
        Image {
            size,
            pixels: vec![value; size.len()],
            range: Image::DEFAULT_RANGE,
        }
    }

    pub fn from_fn(size: Size, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut pixels = Vec::with_capacity(size.len());
        for y in 0..size.height {
            for x in 0..size.width {
                pixels.push(f(x, y));
            }
        }
        Image {
            size,
            pixels,
            range: Image::DEFAULT_RANGE,
        }
    }

    /// Crate-internal constructor for outputs whose length is known to match.
    pub(crate) fn from_parts(size: Size, pixels: Vec<f64>, range: (f64, f64)) -> Self {
        debug_assert_eq!(pixels.len(), size.len());
        Image {
            size,
            pixels,
            range,
        }
    }

    pub fn size(&self) -> Size {
        self.size
    }

    pub fn width(&self) -> usize {
        self.size.width
    }

    pub fn height(&self) -> usize {
        self.size.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn value_range(&self) -> (f64, f64) {
        self.range
    }

    /// Stored intensity at column `x`, row `y`.
    ///
    /// Panics when the index is outside the raster; there is no boundary
    /// extension at this layer.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        assert!(
            x < self.size.width && y < self.size.height,
            "pixel ({x}, {y}) outside {} image",
            self.size
        );
        self.pixels[self.size.index(x, y)]
    }

    /// Smallest and largest stored value.
    pub fn min_max(&self) -> (f64, f64) {
        self.pixels
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Sorted distinct values, compared bitwise.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut values = self.pixels.clone();
        values.sort_by(f64::total_cmp);
        values.dedup();
        values
    }

    /// Rounds every pixel to the nearest integer and clamps into `[0, 255]`,
    /// the quantization applied when writing 8-bit files.
    pub fn to_u8(&self) -> Vec<u8> {
        self.pixels.iter().map(|&v| quantize(v)).collect()
    }
}

#[inline]
pub(crate) fn quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Ordered list of admissible class labels.
///
/// Position is priority: earlier labels win when class regions overlap. The
/// last label is the background.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Label>", into = "Vec<Label>")]
pub struct LabelSet {
    labels: Vec<Label>,
}

impl LabelSet {
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::invalid("label set must not be empty"));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::invalid(format!("label {l} listed twice")));
            }
        }
        Ok(LabelSet { labels })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn background(&self) -> Label {
        *self.labels.last().expect("label set is non-empty")
    }

    /// Non-background labels in priority order.
    pub fn foreground(&self) -> &[Label] {
        &self.labels[..self.labels.len() - 1]
    }

    pub fn contains(&self, label: Label) -> bool {
        self.labels.contains(&label)
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// 256-entry lookup from label value to class index.
    pub(crate) fn lookup(&self) -> [Option<u8>; 256] {
        let mut table = [None; 256];
        for (i, &l) in self.labels.iter().enumerate() {
            table[l as usize] = Some(i as u8);
        }
        table
    }
}

impl Default for LabelSet {
    /// `{255, 128, 0}` with 255 highest priority and 0 as background.
    fn default() -> Self {
        LabelSet {
            labels: vec![255, 128, 0],
        }
    }
}

impl TryFrom<Vec<Label>> for LabelSet {
    type Error = Error;

    fn try_from(labels: Vec<Label>) -> Result<Self> {
        LabelSet::new(labels)
    }
}

impl From<LabelSet> for Vec<Label> {
    fn from(set: LabelSet) -> Self {
        set.labels
    }
}

impl std::str::FromStr for LabelSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<Label>()
                    .map_err(|_| Error::invalid(format!("bad label `{}`", v.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        LabelSet::new(labels)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A pixel whose value is not in the mask's label set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub x: usize,
    pub y: usize,
    pub value: Label,
}

/// Raster of discrete class labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMask {
    size: Size,
    labels: Vec<Label>,
    label_set: LabelSet,
}

impl LabelMask {
    /// Builds a mask, rejecting any pixel whose value is not in `label_set`.
    pub fn new(size: Size, labels: Vec<Label>, label_set: LabelSet) -> Result<Self> {
        let mask = LabelMask::new_unchecked(size, labels, label_set)?;
        if let Some(v) = mask.violations().first() {
            return Err(Error::invalid(format!(
                "pixel ({}, {}) has label {} outside label set {{{}}}",
                v.x, v.y, v.value, mask.label_set
            )));
        }
        Ok(mask)
    }

    /// Builds a mask without checking label membership.
    ///
    /// Used for raw data that is about to be inspected with
    /// [`mask_validate`], e.g. the output of a plain bicubic resize.
    pub fn new_unchecked(size: Size, labels: Vec<Label>, label_set: LabelSet) -> Result<Self> {
        if labels.len() != size.len() {
            return Err(Error::invalid(format!(
                "{} labels supplied for a {size} mask",
                labels.len()
            )));
        }
        Ok(LabelMask {
            size,
            labels,
            label_set,
        })
    }

    pub fn filled(size: Size, label: Label, label_set: LabelSet) -> Result<Self> {
        LabelMask::new(size, vec![label; size.len()], label_set)
    }

    pub fn background(size: Size, label_set: LabelSet) -> Self {
        let bg = label_set.background();
        LabelMask {
            size,
            labels: vec![bg; size.len()],
            label_set,
        }
    }

    pub(crate) fn from_parts(size: Size, labels: Vec<Label>, label_set: LabelSet) -> Self {
        debug_assert_eq!(labels.len(), size.len());
        LabelMask {
            size,
            labels,
            label_set,
        }
    }

    pub fn size(&self) -> Size {
        self.size
    }

    pub fn width(&self) -> usize {
        self.size.width
    }

    pub fn height(&self) -> usize {
        self.size.height
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label_set(&self) -> &LabelSet {
        &self.label_set
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Label {
        assert!(
            x < self.size.width && y < self.size.height,
            "pixel ({x}, {y}) outside {} mask",
            self.size
        );
        self.labels[self.size.index(x, y)]
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Every pixel whose value is outside the label set, in scan order.
    pub fn violations(&self) -> Vec<Violation> {
        let table = self.label_set.lookup();
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| table[l as usize].is_none())
            .map(|(i, &value)| Violation {
                x: i % self.size.width,
                y: i / self.size.width,
                value,
            })
            .collect()
    }

    pub fn with_label_set(self, label_set: LabelSet) -> Result<Self> {
        LabelMask::new(self.size, self.labels, label_set)
    }
}

/// Checks that every pixel label belongs to the mask's label set.
///
/// Violations are data, not errors: the `Err` variant lists every offending
/// pixel.
pub fn mask_validate(mask: &LabelMask) -> std::result::Result<(), Vec<Violation>> {
    let violations = mask.violations();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Copies labels into an intensity image, value for value.
pub fn labels_to_image(mask: &LabelMask) -> Image {
    Image::from_parts(
        mask.size,
        mask.labels.iter().map(|&l| l as f64).collect(),
        Image::DEFAULT_RANGE,
    )
}

/// Rounds intensities to the nearest 8-bit value and reinterprets them as
/// labels without any label-set check. This is the naive path that
/// [`crate::maskproc`] exists to replace.
pub fn round_to_labels(img: &Image, label_set: LabelSet) -> LabelMask {
    LabelMask::from_parts(img.size(), img.to_u8(), label_set)
}

/// Common surface for the two raster kinds, used by the geometric transforms.
pub trait Raster: Sized {
    type Pixel: Copy;

    fn size(&self) -> Size;
    fn data(&self) -> &[Self::Pixel];
    /// Same metadata, new pixel buffer of identical size.
    fn rebuild(&self, data: Vec<Self::Pixel>) -> Self;
    /// Whether `value` may be stored in this raster.
    fn admits(&self, value: Self::Pixel) -> bool;
}

impl Raster for Image {
    type Pixel = f64;

    fn size(&self) -> Size {
        self.size
    }

    fn data(&self) -> &[f64] {
        &self.pixels
    }

    fn rebuild(&self, data: Vec<f64>) -> Self {
        Image::from_parts(self.size, data, self.range)
    }

    fn admits(&self, value: f64) -> bool {
        value >= self.range.0 && value <= self.range.1
    }
}

impl Raster for LabelMask {
    type Pixel = Label;

    fn size(&self) -> Size {
        self.size
    }

    fn data(&self) -> &[Label] {
        &self.labels
    }

    fn rebuild(&self, data: Vec<Label>) -> Self {
        LabelMask::from_parts(self.size, data, self.label_set.clone())
    }

    fn admits(&self, value: Label) -> bool {
        self.label_set.contains(value)
    }
}
