//! Round-trip fidelity experiment.
//!
//! A high-resolution ground-truth mask is reduced to the annotation
//! resolution with nearest-neighbour sampling, then brought back to full
//! resolution with the strategy under test and scored against the original.
//! Strategies are named `<image resampler>-<mask strategy>` (e.g. `BIC-BIC`);
//! only the mask half influences these scores.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{DataSource, ExperimentConfig};
use super::dataset::{load_dataset, split_dataset};
use super::report::{ComparisonReport, ResultRow, RunMetadata};
use super::synth::{NestedEllipses, ShapeBounds};
use crate::augment::pair_rng;
use crate::error::{Error, Result};
use crate::interp::{CubicKernel, Interpolation, ResizeSpec};
use crate::maskproc::{mask_resize, MaskResizeStrategy, StrategyKind};
use crate::metrics::{self, BfTolerance, ConfusionMatrix, MetricsReport, Score};
use crate::par;
use crate::raster::{LabelMask, Size};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    pub image: Interpolation,
    pub mask: MaskResizeStrategy,
}

impl Strategy {
    pub const BASELINE: &'static str = "NN-NN";

    pub fn new(image: Interpolation, mask: MaskResizeStrategy) -> Self {
        Strategy { image, mask }
    }

    /// `NN-NN`, `BIC-NN`, `BIC-BIC`.
    pub fn defaults() -> Vec<Strategy> {
        let bic = Interpolation::Bicubic(CubicKernel::default());
        vec![
            Strategy::new(Interpolation::Nearest, MaskResizeStrategy::nearest()),
            Strategy::new(bic, MaskResizeStrategy::nearest()),
            Strategy::new(bic, MaskResizeStrategy::bicubic()),
        ]
    }

    pub fn name(&self) -> String {
        format!("{}-{}", self.image.tag(), self.mask.kind().tag())
    }

    pub fn is_baseline(&self) -> bool {
        self.image == Interpolation::Nearest && self.mask.kind() == StrategyKind::Nearest
    }

    /// Name plus every parameter, for config hashing.
    pub fn describe(&self) -> String {
        let m = &self.mask;
        format!(
            "{}(window={},threshold={},a={})",
            self.name(),
            m.median_window(),
            m.threshold_level(),
            m.kernel().a
        )
    }

    pub(crate) fn with_mask_params(
        mut self,
        window: Option<usize>,
        threshold: Option<f64>,
    ) -> Result<Self> {
        if let Some(w) = window {
            self.mask = self.mask.with_median_window(w)?;
        }
        if let Some(t) = threshold {
            self.mask = self.mask.with_threshold(t)?;
        }
        Ok(self)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (image, mask) = s.trim().split_once('-').ok_or_else(|| {
            Error::invalid(format!("strategy `{s}` is not of the form IMAGE-MASK"))
        })?;
        let image = match image.to_ascii_uppercase().as_str() {
            "NN" => Interpolation::Nearest,
            "BIL" => Interpolation::Bilinear,
            "BIC" => Interpolation::Bicubic(CubicKernel::default()),
            other => return Err(Error::invalid(format!("unknown image resampler `{other}`"))),
        };
        Ok(Strategy::new(image, MaskResizeStrategy::new(mask.parse()?)))
    }
}

/// Nearest-neighbour reduction to `source`, then `strategy` back up to the
/// ground truth's size.
pub fn roundtrip(gt: &LabelMask, source: Size, strategy: &MaskResizeStrategy) -> Result<LabelMask> {
    let low = mask_resize(gt, &ResizeSpec::new(source), &MaskResizeStrategy::nearest())?;
    mask_resize(&low, &ResizeSpec::new(gt.size()), strategy)
}

pub fn roundtrip_experiment(
    gt_highres: &LabelMask,
    source_size: Size,
    target_size: Size,
    strategy: &MaskResizeStrategy,
    tol: BfTolerance,
) -> Result<MetricsReport> {
    if gt_highres.size() != target_size {
        return Err(Error::invalid(format!(
            "ground truth is {} but the target size is {target_size}",
            gt_highres.size()
        )));
    }
    let restored = roundtrip(gt_highres, source_size, strategy)?;
    metrics::evaluate(&restored, gt_highres, tol)
}

/// Scores of one sample, kept separate so they can be merged in index order.
struct SampleScores {
    confusion: ConfusionMatrix,
    bf: Vec<Score>,
    mean_bf: Score,
}

fn score_sample(
    gt: &LabelMask,
    source: Size,
    strategy: &MaskResizeStrategy,
    tol: BfTolerance,
) -> Result<SampleScores> {
    let restored = roundtrip(gt, source, strategy)?;
    let confusion = metrics::confusion(&restored, gt)?;
    let bf = gt
        .label_set()
        .labels()
        .iter()
        .map(|&l| metrics::bf_score(&restored, gt, l, tol))
        .collect::<Result<Vec<_>>>()?;
    let mean_bf = metrics::mean_defined(&bf);
    Ok(SampleScores {
        confusion,
        bf,
        mean_bf,
    })
}

/// Pools per-sample scores: region metrics from the summed confusion
/// matrix, boundary scores as means over samples where they are defined.
fn pool(samples: &[SampleScores], config: &ExperimentConfig) -> Result<MetricsReport> {
    let mut cm = ConfusionMatrix::empty(config.label_set.clone());
    for s in samples {
        cm.merge(&s.confusion)?;
    }
    let k = config.label_set.len();
    let bf: Vec<Score> = (0..k)
        .map(|i| metrics::mean_defined(&samples.iter().map(|s| s.bf[i]).collect::<Vec<_>>()))
        .collect();
    let mean_bf = metrics::mean_defined(&samples.iter().map(|s| s.mean_bf).collect::<Vec<_>>());
    MetricsReport::from_parts(&cm, &bf, mean_bf)
}

/// Ground-truth masks of the test split, grouped by evaluation size.
fn test_masks(config: &ExperimentConfig) -> Result<Vec<(Size, Vec<LabelMask>)>> {
    match &config.data {
        DataSource::Synthetic { shapes } => {
            let bounds = ShapeBounds::default();
            let all: Vec<NestedEllipses> = (0..*shapes as u64)
                .map(|i| NestedEllipses::random(&bounds, &mut pair_rng(config.seed, i)))
                .collect();
            let test = split_dataset(all, config.split, config.seed).test;
            config
                .target_sizes
                .iter()
                .map(|&size| {
                    let masks =
                        par::map_indexed(test.len(), |i| test[i].render(size, &config.label_set))
                            .into_iter()
                            .collect::<Result<Vec<_>>>()?;
                    Ok((size, masks))
                })
                .collect()
        }
        DataSource::Directory(dir) => {
            let entries = load_dataset(dir, &config.label_set)?;
            let test = split_dataset(entries, config.split, config.seed).test;
            let mut groups: Vec<(Size, Vec<LabelMask>)> = Vec::new();
            for entry in test {
                let size = entry.mask.size();
                match groups.iter_mut().find(|(s, _)| *s == size) {
                    Some((_, masks)) => masks.push(entry.mask),
                    None => groups.push((size, vec![entry.mask])),
                }
            }
            groups.sort_by_key(|(s, _)| (s.width, s.height));
            Ok(groups)
        }
    }
}

/// Runs every strategy at every target size over the test split and builds
/// the report, with percentage increases relative to `NN-NN`.
pub fn run_comparison(config: &ExperimentConfig) -> Result<ComparisonReport> {
    config.validate()?;
    let groups = test_masks(config)?;
    if matches!(config.data, DataSource::Directory(_)) {
        log::info!(
            "dataset mode: evaluating at native mask sizes {:?}, configured target sizes ignored",
            groups
                .iter()
                .map(|(s, _)| s.to_string())
                .collect::<Vec<_>>()
        );
    }

    let mut rows = Vec::new();
    for (size, masks) in &groups {
        for strategy in &config.strategies {
            let samples = par::map_indexed(masks.len(), |i| {
                score_sample(
                    &masks[i],
                    config.source_size,
                    &strategy.mask,
                    config.bf_tolerance,
                )
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            if samples.is_empty() {
                continue;
            }
            rows.push(ResultRow {
                target_size: *size,
                strategy: strategy.name(),
                samples: samples.len(),
                metrics: pool(&samples, config)?,
            });
        }
    }

    let metadata = RunMetadata {
        seed: config.seed,
        config_hash: config.hash(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        source_size: config.source_size,
        bf_tolerance: config.bf_tolerance.to_string(),
        note: ComparisonReport::NOTE.to_owned(),
    };
    Ok(ComparisonReport::build(metadata, rows))
}
