//! Browser demo bindings: render a synthetic mask, resize it with a chosen
//! strategy, and score a round trip.

use maskresize::harness::{roundtrip, NestedEllipses, ShapeBounds};
use maskresize::interp::{resize_bicubic, resize_bilinear, resize_nn};
use maskresize::maskproc::mask_resize;
use maskresize::metrics::{evaluate, percentage_increase, BfTolerance};
use maskresize::raster::{labels_to_image, round_to_labels};
use maskresize::{CubicKernel, LabelMask, LabelSet, MaskResizeStrategy, ResizeSpec, Size};
use rand_chacha::rand_core::SeedableRng;
use wasm_bindgen::prelude::*;

/// An RGBA frame ready for `ImageData`, plus how many pixels carry a value
/// outside the label set.
#[wasm_bindgen]
pub struct Frame {
    width: usize,
    height: usize,
    rgba: Vec<u8>,
    violations: usize,
}

#[wasm_bindgen]
impl Frame {
    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.width
    }

    #[wasm_bindgen(getter)]
    pub fn height(&self) -> usize {
        self.height
    }

    #[wasm_bindgen(getter)]
    pub fn violations(&self) -> usize {
        self.violations
    }

    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }
}

fn colour(value: u8) -> [u8; 4] {
    match value {
        255 => [230, 80, 60, 255],
        128 => [60, 170, 160, 255],
        0 => [25, 25, 35, 255],
        // Anything else is an extra label: paint it loudly.
        _ => [255, 230, 0, 255],
    }
}

fn frame(size: Size, values: &[u8], set: &LabelSet) -> Frame {
    Frame {
        width: size.width,
        height: size.height,
        rgba: values.iter().flat_map(|&v| colour(v)).collect(),
        violations: values.iter().filter(|&&v| !set.contains(v)).count(),
    }
}

fn shape(seed: u64, side: usize) -> Result<LabelMask, String> {
    let size = Size::new(side, side).map_err(|e| e.to_string())?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    NestedEllipses::random(&ShapeBounds::default(), &mut rng)
        .render(size, &LabelSet::default())
        .map_err(|e| e.to_string())
}

/// Resized label values for `strategy`: `nn`, `bilinear`, `bicubic` (raw,
/// rounded to 8 bits) or `bic-processed` / `bil-processed`.
pub fn resize_values(
    seed: u64,
    src_side: usize,
    dst_side: usize,
    strategy: &str,
    median_window: usize,
    threshold: f64,
) -> Result<(Size, Vec<u8>), String> {
    let mask = shape(seed, src_side)?;
    let dst = Size::new(dst_side, dst_side).map_err(|e| e.to_string())?;
    let spec = ResizeSpec::new(dst);
    let raw = |img| round_to_labels(&img, LabelSet::default()).labels().to_vec();
    let values = match strategy {
        "nn" => raw(resize_nn(&labels_to_image(&mask), &spec)),
        "bilinear" => raw(resize_bilinear(&labels_to_image(&mask), &spec)),
        "bicubic" => raw(resize_bicubic(
            &labels_to_image(&mask),
            &spec,
            CubicKernel::default(),
        )),
        "bic-processed" | "bil-processed" => {
            let base = if strategy == "bic-processed" {
                MaskResizeStrategy::bicubic()
            } else {
                MaskResizeStrategy::bilinear()
            };
            let s = base
                .with_median_window(median_window)
                .and_then(|s| s.with_threshold(threshold))
                .map_err(|e| e.to_string())?;
            mask_resize(&mask, &spec, &s)
                .map_err(|e| e.to_string())?
                .labels()
                .to_vec()
        }
        other => return Err(format!("unknown strategy `{other}`")),
    };
    Ok((dst, values))
}

/// Round-trip scores of NN and processed bicubic for one shape, as JSON.
pub fn roundtrip_json(seed: u64, src_side: usize, gt_side: usize) -> Result<String, String> {
    let gt = shape(seed, gt_side)?;
    let src = Size::new(src_side, src_side).map_err(|e| e.to_string())?;
    let tol = BfTolerance::default();
    let score = |s: &MaskResizeStrategy| {
        roundtrip(&gt, src, s)
            .and_then(|m| evaluate(&m, &gt, tol))
            .map_err(|e| e.to_string())
    };
    let nn = score(&MaskResizeStrategy::nearest())?;
    let bic = score(&MaskResizeStrategy::bicubic())?;
    let increase = match (bic.mean_iou, nn.mean_iou) {
        (Some(a), Some(b)) => percentage_increase(a, b),
        _ => None,
    };
    let out = serde_json::json!({
        "nn": nn,
        "bic_processed": bic,
        "mean_iou_increase_percent": increase,
    });
    Ok(out.to_string())
}

// JS-facing wrappers take 32-bit seeds so callers can pass plain numbers.

/// The source mask.
#[wasm_bindgen]
pub fn synthetic_mask(seed: u32, side: usize) -> Result<Frame, JsError> {
    let mask = shape(seed.into(), side).map_err(|e| JsError::new(&e))?;
    Ok(frame(mask.size(), mask.labels(), mask.label_set()))
}

#[wasm_bindgen]
pub fn resize_mask(
    seed: u32,
    src_side: usize,
    dst_side: usize,
    strategy: &str,
    median_window: usize,
    threshold: f64,
) -> Result<Frame, JsError> {
    let (size, values) = resize_values(
        seed.into(),
        src_side,
        dst_side,
        strategy,
        median_window,
        threshold,
    )
    .map_err(|e| JsError::new(&e))?;
    Ok(frame(size, &values, &LabelSet::default()))
}

#[wasm_bindgen]
pub fn roundtrip_scores(seed: u32, src_side: usize, gt_side: usize) -> Result<String, JsError> {
    roundtrip_json(seed.into(), src_side, gt_side).map_err(|e| JsError::new(&e))
}
