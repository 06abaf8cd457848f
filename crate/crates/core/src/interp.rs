//! Nearest-neighbour, bilinear and bicubic resampling.
//!
//! All three resizers share the half-pixel-centers coordinate mapping and
//! clamp-to-edge boundary handling. Bilinear and bicubic are evaluated
//! separably: each output row is filtered horizontally, then each output
//! column vertically. Per-axis tap tables are computed once per resize.

use serde::{Deserialize, Serialize};

use crate::par;
use crate::raster::{Image, Size};

/// How output pixel indices map to source coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CoordinateMapping {
    /// `src = (dst + 0.5) * src_extent / dst_extent - 0.5`
    #[default]
    HalfPixelCenters,
}

/// How samples outside the raster are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Boundary {
    /// Replicate the nearest border pixel.
    #[default]
    ClampToEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResizeSpec {
    pub target: Size,
    pub mapping: CoordinateMapping,
    pub boundary: Boundary,
    /// Clamp interpolated values into the input's value range. Bicubic
    /// overshoot is otherwise left in place.
    pub clamp_output: bool,
}

impl ResizeSpec {
    pub fn new(target: Size) -> Self {
        ResizeSpec {
            target,
            mapping: CoordinateMapping::HalfPixelCenters,
            boundary: Boundary::ClampToEdge,
            clamp_output: true,
        }
    }

    pub fn unclamped(mut self) -> Self {
        self.clamp_output = false;
        self
    }
}

/// Keys-style cubic convolution kernel with sharpness `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicKernel {
    pub a: f64,
}

impl Default for CubicKernel {
    fn default() -> Self {
        CubicKernel { a: -0.5 }
    }
}

impl CubicKernel {
    pub fn new(a: f64) -> Self {
        CubicKernel { a }
    }

    #[inline]
    pub fn weight(&self, t: f64) -> f64 {
        cubic_weight(t, self.a)
    }
}

/// Cubic convolution weight at offset `t`.
///
/// Support is `[-2, 2]`; the kernel is 1 at the origin and 0 at every other
/// integer.
#[inline]
pub fn cubic_weight(t: f64, a: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0
    } else if t < 2.0 {
        ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a
    } else {
        0.0
    }
}

/// Source coordinate sampled by output index `dst_index`.
#[inline]
pub fn map_coord(dst_index: usize, src_extent: usize, dst_extent: usize) -> f64 {
    (dst_index as f64 + 0.5) * src_extent as f64 / dst_extent as f64 - 0.5
}

/// Source index chosen by nearest-neighbour sampling: `floor(coord + 0.5)`,
/// clamped into the raster. Exact ties round up.
#[inline]
pub fn nearest_index(dst_index: usize, src_extent: usize, dst_extent: usize) -> usize {
    let c = map_coord(dst_index, src_extent, dst_extent);
    clamp_index((c + 0.5).floor() as isize, src_extent)
}

#[inline]
fn clamp_index(i: isize, extent: usize) -> usize {
    i.clamp(0, extent as isize - 1) as usize
}

/// Per-axis table of source indices and weights, `TAPS` per output sample.
struct AxisTaps<const TAPS: usize> {
    index: Vec<[usize; TAPS]>,
    weight: Vec<[f64; TAPS]>,
}

impl<const TAPS: usize> AxisTaps<TAPS> {
    /// Taps at offsets `first..first + TAPS` around `floor(coord)`.
    fn build(src: usize, dst: usize, first: isize, kernel: impl Fn(f64) -> f64) -> Self {
        let mut index = Vec::with_capacity(dst);
        let mut weight = Vec::with_capacity(dst);
        for i in 0..dst {
            let c = map_coord(i, src, dst);
            let base = c.floor();
            let frac = c - base;
            let base = base as isize;
            let mut idx = [0usize; TAPS];
            let mut w = [0.0f64; TAPS];
            for k in 0..TAPS {
                let offset = first + k as isize;
                idx[k] = clamp_index(base + offset, src);
                w[k] = kernel(frac - offset as f64);
            }
            index.push(idx);
            weight.push(w);
        }
        AxisTaps { index, weight }
    }
}

fn linear_taps(src: usize, dst: usize) -> AxisTaps<2> {
    AxisTaps::build(src, dst, 0, |t| 1.0 - t.abs())
}

fn cubic_taps(src: usize, dst: usize, kernel: CubicKernel) -> AxisTaps<4> {
    AxisTaps::build(src, dst, -1, |t| kernel.weight(t))
}

fn separable<const TAPS: usize>(
    img: &Image,
    spec: &ResizeSpec,
    xs: &AxisTaps<TAPS>,
    ys: &AxisTaps<TAPS>,
) -> Image {
    let src = img.size();
    let dst = spec.target;
    let pixels = img.pixels();

    // Horizontal pass: dst.width x src.height.
    let mut rows = vec![0.0; dst.width * src.height];
    par::for_each_row(&mut rows, dst.width, |y, out| {
        let line = &pixels[y * src.width..(y + 1) * src.width];
        for (x, o) in out.iter_mut().enumerate() {
            let (idx, w) = (&xs.index[x], &xs.weight[x]);
            let mut acc = 0.0;
            for k in 0..TAPS {
                acc += w[k] * line[idx[k]];
            }
            *o = acc;
        }
    });

    // Vertical pass.
    let (lo, hi) = output_bounds(img, spec);
    let mut out = vec![0.0; dst.len()];
    par::for_each_row(&mut out, dst.width, |y, out| {
        let (idx, w) = (&ys.index[y], &ys.weight[y]);
        for (x, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..TAPS {
                acc += w[k] * rows[idx[k] * dst.width + x];
            }
            *o = if spec.clamp_output {
                acc.clamp(lo, hi)
            } else {
                acc
            };
        }
    });

    Image::from_parts(dst, out, img.value_range())
}

/// Clamp bounds: the input's observed range, which lies inside its declared
/// value range.
fn output_bounds(img: &Image, spec: &ResizeSpec) -> (f64, f64) {
    if !spec.clamp_output {
        return (f64::NEG_INFINITY, f64::INFINITY);
    }
    let (lo, hi) = img.value_range();
    let (min, max) = img.min_max();
    (min.max(lo), max.min(hi))
}

/// Nearest-neighbour resize. Only copies existing values.
pub fn resize_nn(img: &Image, spec: &ResizeSpec) -> Image {
    let src = img.size();
    let dst = spec.target;
    let xs: Vec<usize> = (0..dst.width)
        .map(|x| nearest_index(x, src.width, dst.width))
        .collect();
    let pixels = img.pixels();
    let mut out = vec![0.0; dst.len()];
    par::for_each_row(&mut out, dst.width, |y, row| {
        let sy = nearest_index(y, src.height, dst.height);
        let line = &pixels[sy * src.width..(sy + 1) * src.width];
        for (o, &sx) in row.iter_mut().zip(&xs) {
            *o = line[sx];
        }
    });
    Image::from_parts(dst, out, img.value_range())
}

/// Nearest-neighbour resize of any row-major buffer. Used for label rasters
/// so that masks never pass through floating point.
pub(crate) fn resample_nearest<T: Copy + Default + Send + Sync>(
    data: &[T],
    src: Size,
    dst: Size,
) -> Vec<T> {
    let xs: Vec<usize> = (0..dst.width)
        .map(|x| nearest_index(x, src.width, dst.width))
        .collect();
    let mut out = vec![T::default(); dst.len()];
    par::for_each_row(&mut out, dst.width, |y, row| {
        let sy = nearest_index(y, src.height, dst.height);
        let line = &data[sy * src.width..(sy + 1) * src.width];
        for (o, &sx) in row.iter_mut().zip(&xs) {
            *o = line[sx];
        }
    });
    out
}

pub fn resize_bilinear(img: &Image, spec: &ResizeSpec) -> Image {
    let src = img.size();
    let xs = linear_taps(src.width, spec.target.width);
    let ys = linear_taps(src.height, spec.target.height);
    separable(img, spec, &xs, &ys)
}

pub fn resize_bicubic(img: &Image, spec: &ResizeSpec, kernel: CubicKernel) -> Image {
    let src = img.size();
    let xs = cubic_taps(src.width, spec.target.width, kernel);
    let ys = cubic_taps(src.height, spec.target.height, kernel);
    separable(img, spec, &xs, &ys)
}

/// Image resampler selector, as used in strategy names such as `BIC-NN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Interpolation {
    Nearest,
    Bilinear,
    Bicubic(CubicKernel),
}

impl Interpolation {
    pub fn resize(&self, img: &Image, spec: &ResizeSpec) -> Image {
        match *self {
            Interpolation::Nearest => resize_nn(img, spec),
            Interpolation::Bilinear => resize_bilinear(img, spec),
            Interpolation::Bicubic(kernel) => resize_bicubic(img, spec, kernel),
        }
    }

    /// Short tag: `NN`, `BIL` or `BIC`.
    pub fn tag(&self) -> &'static str {
        match self {
            Interpolation::Nearest => "NN",
            Interpolation::Bilinear => "BIL",
            Interpolation::Bicubic(_) => "BIC",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(w: usize, h: usize) -> ResizeSpec {
        ResizeSpec::new(Size::new(w, h).unwrap())
    }

    #[test]
    fn map_coord_examples() {
        assert_eq!(map_coord(0, 4, 4), 0.0);
        assert_eq!(map_coord(0, 2, 4), -0.25);
        assert_eq!(map_coord(3, 2, 4), 1.25);
    }

    #[test]
    fn cubic_weight_examples() {
        assert_eq!(cubic_weight(0.0, -0.5), 1.0);
        assert_eq!(cubic_weight(1.0, -0.5), 0.0);
        assert_eq!(cubic_weight(-1.0, -0.5), 0.0);
        assert_eq!(cubic_weight(2.0, -0.5), 0.0);
        assert_eq!(cubic_weight(2.5, -0.5), 0.0);
        assert!((cubic_weight(0.5, -0.5) - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn cubic_weight_is_continuous_at_one() {
        for a in [-1.0, -0.75, -0.5] {
            let below = cubic_weight(1.0 - 1e-9, a);
            let above = cubic_weight(1.0 + 1e-9, a);
            assert!((below - above).abs() < 1e-7);
        }
    }

    #[test]
    fn nn_replicates_blocks() {
        let img = Image::new(Size::square(2), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let out = resize_nn(&img, &spec(4, 4));
        #[rustfmt::skip]
        let expected = [
            1.0, 1.0, 2.0, 2.0,
            1.0, 1.0, 2.0, 2.0,
            3.0, 3.0, 4.0, 4.0,
            3.0, 3.0, 4.0, 4.0,
        ];
        assert_eq!(out.pixels(), &expected);
    }

    #[test]
    fn nn_tie_rounds_up() {
        // 3 -> 2: output 0 samples 0.25, output 1 samples 1.75.
        assert_eq!(nearest_index(0, 3, 2), 0);
        assert_eq!(nearest_index(1, 3, 2), 2);
        // 1 -> 2 upscale keeps both outputs on the only pixel.
        assert_eq!(nearest_index(1, 1, 2), 0);
        // A tie: 4 -> 1 samples 1.5, which rounds up to 2.
        assert_eq!(map_coord(0, 4, 1), 1.5);
        assert_eq!(nearest_index(0, 4, 1), 2);
    }

    #[test]
    fn bilinear_row_example() {
        let img = Image::new(Size::new(2, 1).unwrap(), vec![0.0, 100.0]).unwrap();
        let out = resize_bilinear(&img, &spec(4, 1));
        assert_eq!(out.pixels(), &[0.0, 25.0, 75.0, 100.0]);
    }

    #[test]
    fn constant_images_stay_constant() {
        let img = Image::filled(Size::new(5, 3).unwrap(), 77.0);
        let target = spec(11, 7);
        assert!(resize_nn(&img, &target).pixels().iter().all(|&v| v == 77.0));
        assert!(resize_bilinear(&img, &target)
            .pixels()
            .iter()
            .all(|&v| (v - 77.0).abs() < 1e-12));
        let unclamped = target.unclamped();
        assert!(resize_bicubic(&img, &unclamped, CubicKernel::default())
            .pixels()
            .iter()
            .all(|&v| (v - 77.0).abs() < 1e-9));
    }

    #[test]
    fn identity_resizes() {
        let img = Image::from_fn(Size::new(6, 4).unwrap(), |x, y| {
            ((x * 37 + y * 11) % 256) as f64
        });
        let same = spec(6, 4);
        assert_eq!(resize_nn(&img, &same), img);
        for out in [
            resize_bilinear(&img, &same),
            resize_bicubic(&img, &same, CubicKernel::default()),
        ] {
            for (a, b) in out.pixels().iter().zip(img.pixels()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bicubic_step_edge_creates_intermediate_values() {
        let img = Image::from_fn(Size::square(8), |x, _| if x < 4 { 0.0 } else { 255.0 });
        let out = resize_bicubic(&img, &spec(16, 16), CubicKernel::default());
        assert!(out.pixels().iter().any(|&v| v > 0.0 && v < 255.0));
    }

    #[test]
    fn bicubic_overshoot_is_clamped_only_on_request() {
        let img = Image::from_fn(
            Size::new(8, 1).unwrap(),
            |x, _| if x < 4 { 0.0 } else { 255.0 },
        );
        let target = spec(32, 1);
        let raw = resize_bicubic(&img, &target.unclamped(), CubicKernel::default());
        let (lo, hi) = raw.min_max();
        assert!(lo < 0.0 && hi > 255.0);
        let clamped = resize_bicubic(&img, &target, CubicKernel::default());
        let (lo, hi) = clamped.min_max();
        assert!(lo >= 0.0 && hi <= 255.0);
    }

    #[test]
    fn clamp_uses_observed_range() {
        let img = Image::from_fn(
            Size::new(8, 1).unwrap(),
            |x, _| if x < 4 { 50.0 } else { 200.0 },
        );
        let out = resize_bicubic(&img, &spec(32, 1), CubicKernel::default());
        let (lo, hi) = out.min_max();
        assert!(lo >= 50.0 && hi <= 200.0);
    }

    #[test]
    fn downscale_is_supported() {
        let img = Image::from_fn(Size::square(9), |x, y| (x + y) as f64);
        let out = resize_bilinear(&img, &spec(3, 3));
        // Samples land on source centres 1, 4, 7.
        assert_eq!(out.get(0, 0), 2.0);
        assert_eq!(out.get(2, 2), 14.0);
    }
}
