//! Loading image / mask pairs and splitting them into train, validation and
//! test sets.
//!
//! A dataset directory holds `images/<stem>.png|pgm` and a mask with the same
//! stem under `masks/`.

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::io;
use crate::error::{Error, Result};
use crate::raster::{Image, LabelMask, LabelSet};

#[derive(Debug, Clone)]
pub struct DatasetEntry {
    pub stem: String,
    pub image_path: PathBuf,
    pub mask_path: PathBuf,
    pub image: Image,
    pub mask: LabelMask,
}

fn list_stems(dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && io::is_supported(&path) {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                out.push((stem.to_owned(), path));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn find_mask(masks: &Path, stem: &str) -> Option<PathBuf> {
    ["png", "pgm"]
        .iter()
        .map(|ext| masks.join(format!("{stem}.{ext}")))
        .find(|p| p.is_file())
}

fn load_entry(
    stem: &str,
    image_path: &Path,
    masks: &Path,
    label_set: &LabelSet,
) -> Result<DatasetEntry> {
    let mask_path = find_mask(masks, stem).ok_or_else(|| {
        Error::io(
            masks.join(format!("{stem}.png")),
            "no mask with this stem (.png or .pgm)",
        )
    })?;
    let image = io::read_image(image_path)?;
    let mask = io::read_mask(&mask_path, label_set)?;
    if image.size() != mask.size() {
        return Err(Error::Format {
            path: mask_path,
            message: format!("mask is {} but image is {}", mask.size(), image.size()),
        });
    }
    Ok(DatasetEntry {
        stem: stem.to_owned(),
        image_path: image_path.to_owned(),
        mask_path,
        image,
        mask,
    })
}

/// Loads every pair under `dir` in lexicographic stem order.
///
/// All entries are attempted; if any fails, the collected errors are
/// returned together and nothing is loaded.
pub fn load_dataset(dir: &Path, label_set: &LabelSet) -> Result<Vec<DatasetEntry>> {
    if !dir.is_dir() {
        return Err(Error::io(dir, "dataset directory not found"));
    }
    let images = dir.join("images");
    let masks = dir.join("masks");
    if !images.is_dir() {
        log::warn!("{}: no images/ directory, dataset is empty", dir.display());
        return Ok(Vec::new());
    }
    let stems = list_stems(&images)?;
    if stems.is_empty() {
        log::warn!("{}: dataset is empty", images.display());
    }

    let mut entries = Vec::with_capacity(stems.len());
    let mut errors = Vec::new();
    for (stem, path) in &stems {
        match load_entry(stem, path, &masks, label_set) {
            Ok(e) => entries.push(e),
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(Error::Dataset(errors));
    }
    log::info!("{}: loaded {} pairs", dir.display(), entries.len());
    Ok(entries)
}

/// Train / validation / test fractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitFractions {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl SplitFractions {
    pub fn new(train: f64, val: f64, test: f64) -> Result<Self> {
        if [train, val, test]
            .iter()
            .any(|f| !(*f > 0.0 && f.is_finite()))
        {
            return Err(Error::invalid(format!(
                "split fractions must be positive, got ({train}, {val}, {test})"
            )));
        }
        if (train + val + test - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "split fractions must sum to 1, got {}",
                train + val + test
            )));
        }
        Ok(SplitFractions { train, val, test })
    }
}

impl Default for SplitFractions {
    fn default() -> Self {
        SplitFractions {
            train: 0.6,
            val: 0.2,
            test: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub val: Vec<T>,
    pub test: Vec<T>,
}

/// Seeded shuffle, then contiguous cuts. Validation and test sizes are
/// floored; the remainder goes to training.
pub fn split_dataset<T>(entries: Vec<T>, fractions: SplitFractions, seed: u64) -> Split<T> {
    let n = entries.len();
    let count = |f: f64| ((n as f64 * f) + 1e-9).floor() as usize;
    let n_val = count(fractions.val);
    let n_test = count(fractions.test);
    let n_train = n - n_val - n_test;

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut slots: Vec<Option<T>> = entries.into_iter().map(Some).collect();
    let mut take = |idx: &[usize]| -> Vec<T> {
        idx.iter()
            .map(|&i| slots[i].take().expect("index used once"))
            .collect()
    };
    let train = take(&order[..n_train]);
    let val = take(&order[n_train..n_train + n_val]);
    let test = take(&order[n_train + n_val..]);
    Split { train, val, test }
}
