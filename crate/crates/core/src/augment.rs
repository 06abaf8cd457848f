//! Paired image / mask augmentation: random left-right reflection and
//! integer translation.
//!
//! Both members of a pair always receive the same geometry. Translations are
//! whole pixels, so no resampling happens and masks keep their label set.
//!
//! Randomness comes from ChaCha8 streams: the pair at dataset index `i` uses
//! stream `i` of the generator seeded with the run seed (see [`pair_rng`]),
//! which keeps augmented datasets reproducible across platforms and
//! independent of processing order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{Image, LabelMask, Raster};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentSpec {
    pub flip_probability: f64,
    pub translate_probability: f64,
    /// Inclusive range of shifts, applied to both axes.
    pub translation_range: (i32, i32),
    pub seed: u64,
}

impl Default for AugmentSpec {
    fn default() -> Self {
        AugmentSpec {
            flip_probability: 0.5,
            translate_probability: 0.5,
            translation_range: (-10, 10),
            seed: 0,
        }
    }
}

impl AugmentSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("flip_probability", self.flip_probability),
            ("translate_probability", self.translate_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        let (lo, hi) = self.translation_range;
        if lo > hi {
            return Err(Error::invalid(format!(
                "empty translation range [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}

/// Generator for the pair at `index`.
pub fn pair_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Mirrors columns: `x -> width - 1 - x`.
pub fn flip_lr<R: Raster>(raster: &R) -> R {
    let w = raster.size().width;
    let data: Vec<R::Pixel> = raster
        .data()
        .chunks(w)
        .flat_map(|row| row.iter().rev().copied())
        .collect();
    raster.rebuild(data)
}

/// Shifts content by `(dx, dy)` whole pixels; vacated pixels take `fill`.
pub fn translate<R: Raster>(raster: &R, dx: i32, dy: i32, fill: R::Pixel) -> Result<R> {
    if !raster.admits(fill) {
        return Err(Error::invalid(
            "translation fill value is not admissible for this raster",
        ));
    }
    let size = raster.size();
    let (w, h) = (size.width as i64, size.height as i64);
    let src = raster.data();
    let mut out = vec![fill; size.len()];
    for y in 0..h {
        let sy = y - dy as i64;
        if !(0..h).contains(&sy) {
            continue;
        }
        for x in 0..w {
            let sx = x - dx as i64;
            if (0..w).contains(&sx) {
                out[(y * w + x) as usize] = src[(sy * w + sx) as usize];
            }
        }
    }
    Ok(raster.rebuild(out))
}

/// The geometry drawn for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Transform {
    pub flip: bool,
    pub dx: i32,
    pub dy: i32,
}

impl Transform {
    /// Draws flip, translate-or-not, dx, dy in that order. All four values
    /// are always consumed so stream positions do not depend on outcomes.
    pub fn draw(spec: &AugmentSpec, rng: &mut impl Rng) -> Self {
        let flip = rng.random_bool(spec.flip_probability);
        let shift = rng.random_bool(spec.translate_probability);
        let (lo, hi) = spec.translation_range;
        let dx = rng.random_range(lo..=hi);
        let dy = rng.random_range(lo..=hi);
        if shift {
            Transform { flip, dx, dy }
        } else {
            Transform { flip, dx: 0, dy: 0 }
        }
    }

    /// Flip first, then shift.
    pub fn apply<R: Raster>(&self, raster: &R, fill: R::Pixel) -> Result<R> {
        let flipped;
        let base = if self.flip {
            flipped = flip_lr(raster);
            &flipped
        } else {
            raster
        };
        translate(base, self.dx, self.dy, fill)
    }
}

/// Applies one random transform to an image and its mask. Image borders are
/// filled with the lower end of the image's value range, mask borders with
/// background.
pub fn augment_pair(
    img: &Image,
    mask: &LabelMask,
    spec: &AugmentSpec,
    rng: &mut impl Rng,
) -> Result<(Image, LabelMask)> {
    spec.validate()?;
    if img.size() != mask.size() {
        return Err(Error::invalid(format!(
            "image is {} but mask is {}",
            img.size(),
            mask.size()
        )));
    }
    let t = Transform::draw(spec, rng);
    let image = t.apply(img, img.value_range().0)?;
    let mask = t.apply(mask, mask.label_set().background())?;
    Ok((image, mask))
}
