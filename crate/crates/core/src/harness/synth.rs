//! Synthetic three-class masks: an outer ellipse holding a smaller inner
//! ellipse, on background. Shapes are described in normalized coordinates
//! (fractions of width and height) so one shape renders consistently at any
//! raster size.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{LabelMask, LabelSet, Size};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub cx: f64,
    pub cy: f64,
    pub semi_x: f64,
    pub semi_y: f64,
    /// Rotation in radians.
    pub angle: f64,
}

impl Ellipse {
    pub fn circle(cx: f64, cy: f64, r: f64) -> Self {
        Ellipse {
            cx,
            cy,
            semi_x: r,
            semi_y: r,
            angle: 0.0,
        }
    }

    fn is_empty(&self) -> bool {
        self.semi_x == 0.0 || self.semi_y == 0.0
    }

    /// Whether the pixel centre of `(x, y)` lies inside, on a `size` raster.
    pub fn contains(&self, x: usize, y: usize, size: Size) -> bool {
        if self.is_empty() {
            return false;
        }
        let (w, h) = (size.width as f64, size.height as f64);
        let dx = x as f64 + 0.5 - self.cx * w;
        let dy = y as f64 + 0.5 - self.cy * h;
        let (s, c) = self.angle.sin_cos();
        let u = (c * dx + s * dy) / (self.semi_x * w);
        let v = (-s * dx + c * dy) / (self.semi_y * h);
        u * u + v * v <= 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestedEllipses {
    pub outer: Ellipse,
    pub inner: Ellipse,
}

/// Ranges for random shapes, all normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeBounds {
    pub outer_semi: (f64, f64),
    /// Inner semi-axes as a fraction of the outer ones.
    pub inner_fraction: (f64, f64),
    /// Maximum offset of the outer centre from the raster centre.
    pub center_jitter: f64,
    /// Maximum offset of the inner centre, as a fraction of the outer axes.
    pub inner_offset: f64,
}

impl Default for ShapeBounds {
    fn default() -> Self {
        ShapeBounds {
            outer_semi: (0.16, 0.32),
            inner_fraction: (0.35, 0.65),
            center_jitter: 0.12,
            inner_offset: 0.2,
        }
    }
}

impl NestedEllipses {
    pub fn validate(&self) -> Result<()> {
        let finite = |e: &Ellipse| {
            [e.cx, e.cy, e.semi_x, e.semi_y, e.angle]
                .iter()
                .all(|v| v.is_finite())
        };
        if !finite(&self.outer) || !finite(&self.inner) {
            return Err(Error::invalid("ellipse parameters must be finite"));
        }
        if self.outer.semi_x <= 0.0 || self.outer.semi_y <= 0.0 {
            return Err(Error::invalid(format!(
                "outer ellipse axes must be positive, got ({}, {})",
                self.outer.semi_x, self.outer.semi_y
            )));
        }
        if self.inner.semi_x < 0.0 || self.inner.semi_y < 0.0 {
            return Err(Error::invalid("inner ellipse axes must not be negative"));
        }
        Ok(())
    }

    pub fn random(bounds: &ShapeBounds, rng: &mut impl Rng) -> Self {
        let span = |rng: &mut dyn rand::RngCore, (lo, hi): (f64, f64)| {
            lo + (hi - lo) * rng.random::<f64>()
        };
        let j = bounds.center_jitter;
        let cx = 0.5 + span(rng, (-j, j));
        let cy = 0.5 + span(rng, (-j, j));
        let semi_x = span(rng, bounds.outer_semi);
        let semi_y = span(rng, bounds.outer_semi);
        let angle = span(rng, (0.0, std::f64::consts::PI));
        let fx = span(rng, bounds.inner_fraction);
        let fy = span(rng, bounds.inner_fraction);
        let o = bounds.inner_offset;
        let ox = span(rng, (-o, o)) * semi_x;
        let oy = span(rng, (-o, o)) * semi_y;
        let inner_angle = angle + span(rng, (-0.5, 0.5));
        NestedEllipses {
            outer: Ellipse {
                cx,
                cy,
                semi_x,
                semi_y,
                angle,
            },
            inner: Ellipse {
                cx: cx + ox,
                cy: cy + oy,
                semi_x: semi_x * fx,
                semi_y: semi_y * fy,
                angle: inner_angle,
            },
        }
    }

    /// Inner region gets the highest-priority label, the outer ring the
    /// second, everything else background.
    pub fn render(&self, size: Size, label_set: &LabelSet) -> Result<LabelMask> {
        self.validate()?;
        let fg = label_set.foreground();
        if fg.len() < 2 {
            return Err(Error::invalid(format!(
                "nested ellipses need two foreground labels, label set is {{{label_set}}}"
            )));
        }
        let (inner, outer, bg) = (fg[0], fg[1], label_set.background());
        let mut labels = Vec::with_capacity(size.len());
        for y in 0..size.height {
            for x in 0..size.width {
                labels.push(if self.inner.contains(x, y, size) {
                    inner
                } else if self.outer.contains(x, y, size) {
                    outer
                } else {
                    bg
                });
            }
        }
        LabelMask::new(size, labels, label_set.clone())
    }
}

/// Random nested-ellipse mask for `seed`.
pub fn synth_mask(
    bounds: &ShapeBounds,
    size: Size,
    label_set: &LabelSet,
    seed: u64,
) -> Result<LabelMask> {
    NestedEllipses::random(bounds, &mut ChaCha8Rng::seed_from_u64(seed)).render(size, label_set)
}
