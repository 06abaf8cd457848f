//! Experiment configuration and its flat `key = value` file format.
//!
//! ```text
//! # comparison over synthetic shapes
//! synthetic      = true
//! shapes         = 50
//! seed           = 7
//! source_size    = 128x128
//! target_sizes   = 256x256, 384x384
//! strategies     = NN-NN, BIC-NN, BIC-BIC
//! split          = 0.6, 0.2, 0.2
//! bf_tolerance   = 0.0075        # fraction of the diagonal, or e.g. 2px
//! labels         = 255, 128, 0
//! median_window  = 3
//! threshold      = 0.5
//! format         = csv
//! out            = report.csv
//! ```
//!
//! Use `dataset = <dir>` instead of `synthetic = true` to read image / mask
//! pairs from disk. Relative paths resolve against the config file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::dataset::SplitFractions;
use super::experiment::Strategy;
use crate::error::{Error, Result};
use crate::metrics::BfTolerance;
use crate::raster::{LabelSet, Size};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::invalid(format!("unknown output format `{other}`"))),
        }
    }
}

impl OutputFormat {
    /// Format implied by a file extension, if any.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DataSource {
    Synthetic { shapes: usize },
    Directory(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub data: DataSource,
    pub source_size: Size,
    pub target_sizes: Vec<Size>,
    pub strategies: Vec<Strategy>,
    pub split: SplitFractions,
    pub seed: u64,
    pub bf_tolerance: BfTolerance,
    pub label_set: LabelSet,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            data: DataSource::Synthetic { shapes: 50 },
            source_size: Size::square(128),
            target_sizes: vec![Size::square(256), Size::square(384)],
            strategies: Strategy::defaults(),
            split: SplitFractions::default(),
            seed: 0,
            bf_tolerance: BfTolerance::default(),
            label_set: LabelSet::default(),
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

fn list<T: FromStr<Err = Error>>(value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .filter(|v| !v.trim().is_empty())
        .map(|v| v.trim().parse())
        .collect()
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("`{key}`: cannot parse `{value}`")))
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target_sizes.is_empty() {
            return Err(Error::invalid("no target sizes configured"));
        }
        if self.strategies.is_empty() {
            return Err(Error::invalid("no strategies configured"));
        }
        if !self.strategies.iter().any(Strategy::is_baseline) {
            return Err(Error::invalid(format!(
                "strategies must include the {} baseline",
                Strategy::BASELINE
            )));
        }
        if let DataSource::Synthetic { shapes: 0 } = self.data {
            return Err(Error::invalid("synthetic mode needs at least one shape"));
        }
        Ok(())
    }

    /// Parses a config file. Unknown keys are rejected.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut synthetic = None;
        let mut shapes = 50;
        let mut dataset = None;
        let mut median_window = None;
        let mut threshold = None;

        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::invalid(format!(
                    "line {}: expected `key = value`, got `{raw}`",
                    n + 1
                ))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "synthetic" => synthetic = Some(number::<bool>(key, value)?),
                "shapes" => shapes = number(key, value)?,
                "dataset" => dataset = Some(base_dir.join(value)),
                "seed" => cfg.seed = number(key, value)?,
                "source_size" => cfg.source_size = value.parse()?,
                "target_sizes" => cfg.target_sizes = list(value)?,
                "strategies" => cfg.strategies = list(value)?,
                "split" => {
                    let parts: Vec<f64> = value
                        .split(',')
                        .map(|v| number(key, v))
                        .collect::<Result<_>>()?;
                    let [train, val, test] = parts[..] else {
                        return Err(Error::invalid("`split` needs three fractions"));
                    };
                    cfg.split = SplitFractions::new(train, val, test)?;
                }
                "bf_tolerance" => cfg.bf_tolerance = value.parse()?,
                "labels" => cfg.label_set = value.parse()?,
                "median_window" => median_window = Some(number::<usize>(key, value)?),
                "threshold" => threshold = Some(number::<f64>(key, value)?),
                "format" => cfg.format = value.parse()?,
                "out" => cfg.out = Some(base_dir.join(value)),
                other => {
                    return Err(Error::invalid(format!(
                        "line {}: unknown key `{other}`",
                        n + 1
                    )))
                }
            }
        }

        cfg.data = match (synthetic, dataset) {
            (Some(true), Some(_)) => {
                return Err(Error::invalid(
                    "`synthetic = true` and `dataset` are exclusive",
                ))
            }
            (_, Some(dir)) => DataSource::Directory(dir),
            (Some(false), None) => {
                return Err(Error::invalid("`synthetic = false` requires `dataset`"))
            }
            (_, None) => DataSource::Synthetic { shapes },
        };
        cfg.strategies = cfg
            .strategies
            .into_iter()
            .map(|s| s.with_mask_params(median_window, threshold))
            .collect::<Result<_>>()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        ExperimentConfig::parse(&text, base)
    }

    /// Short hash of everything that affects report contents.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_string().as_bytes());
        hex::encode(&digest[..8])
    }
}

impl fmt::Display for ExperimentConfig {
    /// Canonical rendering; excludes the output path and format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |items: Vec<String>| items.join(",");
        match &self.data {
            DataSource::Synthetic { shapes } => writeln!(f, "synthetic=true\nshapes={shapes}")?,
            DataSource::Directory(dir) => writeln!(f, "dataset={}", dir.display())?,
        }
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "source_size={}", self.source_size)?;
        writeln!(
            f,
            "target_sizes={}",
            join(self.target_sizes.iter().map(Size::to_string).collect())
        )?;
        writeln!(
            f,
            "strategies={}",
            join(self.strategies.iter().map(Strategy::describe).collect())
        )?;
        writeln!(
            f,
            "split={},{},{}",
            self.split.train, self.split.val, self.split.test
        )?;
        writeln!(f, "bf_tolerance={}", self.bf_tolerance)?;
        writeln!(f, "labels={}", self.label_set)
    }
}
