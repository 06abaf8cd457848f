//! Label-preserving mask resizing.
//!
//! Extra-pixel resizing of a mask runs per class: each non-background label
//! is split into a binary image, resized with bilinear or bicubic
//! interpolation, thresholded back to binary, median filtered, and finally
//! the binaries are recombined by subtraction in priority order. The output
//! contains exactly the labels of the input's label set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{self, CubicKernel, Interpolation, ResizeSpec};
use crate::raster::{Image, LabelMask, LabelSet, Size};

const ON: f64 = 255.0;
const OFF: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrategyKind {
    /// Plain nearest-neighbour; never creates new labels.
    Nearest,
    /// Per-class bicubic resize followed by mask processing.
    BicubicProcessed,
    /// Per-class bilinear resize followed by mask processing.
    BilinearProcessed,
}

impl StrategyKind {
    /// Short tag used in strategy names: `NN`, `BIC` or `BIL`.
    pub fn tag(&self) -> &'static str {
        match self {
            StrategyKind::Nearest => "NN",
            StrategyKind::BicubicProcessed => "BIC",
            StrategyKind::BilinearProcessed => "BIL",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaskResizeStrategy {
    kind: StrategyKind,
    kernel: CubicKernel,
    median_window: usize,
    threshold_level: f64,
}

impl MaskResizeStrategy {
    pub const DEFAULT_MEDIAN_WINDOW: usize = 3;
    pub const DEFAULT_THRESHOLD: f64 = 0.5;

    pub fn new(kind: StrategyKind) -> Self {
        MaskResizeStrategy {
            kind,
            kernel: CubicKernel::default(),
            median_window: Self::DEFAULT_MEDIAN_WINDOW,
            threshold_level: Self::DEFAULT_THRESHOLD,
        }
    }

    pub fn nearest() -> Self {
        Self::new(StrategyKind::Nearest)
    }

    pub fn bicubic() -> Self {
        Self::new(StrategyKind::BicubicProcessed)
    }

    pub fn bilinear() -> Self {
        Self::new(StrategyKind::BilinearProcessed)
    }

    /// Median window must be odd and at least 3.
    pub fn with_median_window(mut self, window: usize) -> Result<Self> {
        check_window(window)?;
        self.median_window = window;
        Ok(self)
    }

    /// Threshold as a fraction of full scale, strictly between 0 and 1.
    pub fn with_threshold(mut self, level: f64) -> Result<Self> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::invalid(format!(
                "threshold level must lie in (0, 1), got {level}"
            )));
        }
        self.threshold_level = level;
        Ok(self)
    }

    pub fn with_kernel(mut self, kernel: CubicKernel) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn median_window(&self) -> usize {
        self.median_window
    }

    pub fn threshold_level(&self) -> f64 {
        self.threshold_level
    }

    pub fn kernel(&self) -> CubicKernel {
        self.kernel
    }

    fn interpolation(&self) -> Interpolation {
        match self.kind {
            StrategyKind::Nearest => Interpolation::Nearest,
            StrategyKind::BicubicProcessed => Interpolation::Bicubic(self.kernel),
            StrategyKind::BilinearProcessed => Interpolation::Bilinear,
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nn" | "nearest" => Ok(StrategyKind::Nearest),
            "bic" | "bicubic" | "bic-processed" => Ok(StrategyKind::BicubicProcessed),
            "bil" | "bilinear" | "bil-processed" => Ok(StrategyKind::BilinearProcessed),
            other => Err(Error::invalid(format!("unknown mask strategy `{other}`"))),
        }
    }
}

fn check_window(window: usize) -> Result<()> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "median window must be odd and at least 3, got {window}"
        )));
    }
    Ok(())
}

/// One binary image (255 inside, 0 outside) per non-background label, in
/// priority order.
pub fn split_classes(mask: &LabelMask) -> Vec<Image> {
    mask.label_set()
        .foreground()
        .iter()
        .map(|&label| {
            let pixels = mask
                .labels()
                .iter()
                .map(|&l| if l == label { ON } else { OFF })
                .collect();
            Image::from_parts(mask.size(), pixels, Image::DEFAULT_RANGE)
        })
        .collect()
}

/// Binarizes at `level * 255`, inclusive.
pub fn threshold(img: &Image, level: f64) -> Image {
    let cut = level * 255.0;
    let pixels = img
        .pixels()
        .iter()
        .map(|&v| if v >= cut { ON } else { OFF })
        .collect();
    Image::from_parts(img.size(), pixels, Image::DEFAULT_RANGE)
}

/// Median filter for binary `{0, 255}` images with a `window x window`
/// neighbourhood and clamp-to-edge padding.
///
/// The median of an odd number of binary samples is "on" exactly when more
/// than half of them are on, so the filter reduces to a windowed count over
/// a summed-area table of the padded raster.
pub fn median_filter(binary: &Image, window: usize) -> Result<Image> {
    check_window(window)?;
    if let Some(v) = binary.pixels().iter().find(|&&v| v != ON && v != OFF) {
        return Err(Error::invalid(format!(
            "median_filter expects a binary 0/255 image, found {v}"
        )));
    }
    let Size { width, height } = binary.size();
    let r = window / 2;
    let pw = width + 2 * r;
    let ph = height + 2 * r;

    // Summed-area table over the clamp-padded raster, one extra leading row
    // and column of zeros.
    let mut sat = vec![0u32; (pw + 1) * (ph + 1)];
    for py in 0..ph {
        let sy = py.saturating_sub(r).min(height - 1);
        let mut run = 0u32;
        for px in 0..pw {
            let sx = px.saturating_sub(r).min(width - 1);
            run += (binary.pixels()[sy * width + sx] == ON) as u32;
            sat[(py + 1) * (pw + 1) + px + 1] = sat[py * (pw + 1) + px + 1] + run;
        }
    }

    let half = (window * window / 2) as u32;
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            // Window over padded rows y..y+window, columns x..x+window.
            let (x0, y0, x1, y1) = (x, y, x + window, y + window);
            let count = sat[y1 * (pw + 1) + x1] + sat[y0 * (pw + 1) + x0]
                - sat[y0 * (pw + 1) + x1]
                - sat[y1 * (pw + 1) + x0];
            out.push(if count > half { ON } else { OFF });
        }
    }
    Ok(Image::from_parts(binary.size(), out, Image::DEFAULT_RANGE))
}

/// Recombines per-class binaries into a mask.
///
/// Labels are assigned in priority order starting from an all-background
/// raster; pixels claimed by a higher-priority class are removed from every
/// lower-priority binary before it is applied.
pub fn combine_subtract(binaries: &[Image], label_set: &LabelSet) -> Result<LabelMask> {
    let foreground = label_set.foreground();
    if binaries.len() != foreground.len() {
        return Err(Error::invalid(format!(
            "{} binaries supplied for {} foreground labels",
            binaries.len(),
            foreground.len()
        )));
    }
    let Some(first) = binaries.first() else {
        return Err(Error::invalid(
            "combine_subtract needs at least one foreground class to infer the raster size",
        ));
    };
    let size = first.size();
    if let Some(b) = binaries.iter().find(|b| b.size() != size) {
        return Err(Error::invalid(format!(
            "binary images differ in size: {size} vs {}",
            b.size()
        )));
    }

    let mut labels = vec![label_set.background(); size.len()];
    let mut claimed = vec![false; size.len()];
    for (binary, &label) in binaries.iter().zip(foreground) {
        for ((out, taken), &v) in labels
            .iter_mut()
            .zip(claimed.iter_mut())
            .zip(binary.pixels())
        {
            // Subtract the already-claimed set, then assign.
            if v >= ON && !*taken {
                *out = label;
                *taken = true;
            }
        }
    }
    Ok(LabelMask::from_parts(size, labels, label_set.clone()))
}

/// Resizes a mask so that the output carries only labels from its label set.
pub fn mask_resize(
    mask: &LabelMask,
    spec: &ResizeSpec,
    strategy: &MaskResizeStrategy,
) -> Result<LabelMask> {
    if let Some(v) = mask.violations().first() {
        return Err(Error::invalid(format!(
            "input mask has label {} at ({}, {}) outside its label set",
            v.value, v.x, v.y
        )));
    }
    let label_set = mask.label_set();
    // Every resizer is exact at unit scale; skip the processing chain so the
    // median filter cannot alter an unresampled mask.
    if spec.target == mask.size() {
        return Ok(mask.clone());
    }
    if strategy.kind == StrategyKind::Nearest {
        let labels = interp::resample_nearest(mask.labels(), mask.size(), spec.target);
        return Ok(LabelMask::from_parts(
            spec.target,
            labels,
            label_set.clone(),
        ));
    }
    if label_set.foreground().is_empty() {
        return Ok(LabelMask::background(spec.target, label_set.clone()));
    }

    let interpolation = strategy.interpolation();
    let per_class = |binary: &Image| -> Result<Image> {
        let resized = interpolation.resize(binary, spec);
        median_filter(
            &threshold(&resized, strategy.threshold_level),
            strategy.median_window,
        )
    };
    let classes = split_classes(mask);
    let processed = crate::par::map_indexed(classes.len(), |i| per_class(&classes[i]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    combine_subtract(&processed, label_set)
}
