//! Segmentation metrics.
//!
//! Region scores (per-class accuracy and IoU, global accuracy and the three
//! class-averaged scores) derive from a [`ConfusionMatrix`] and are computed
//! as exact rationals, with a single rounding at the end. Boundary F1 scores
//! compare class contours under a Euclidean distance tolerance.
//!
//! A score is `None` when it is undefined (a 0/0 ratio, such as the accuracy
//! of a class absent from the ground truth). Undefined scores are left out of
//! every mean.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{Label, LabelMask, LabelSet, Size};

/// `None` marks an undefined score.
pub type Score = Option<f64>;

/// Pixel counts, `counts[i][j]` = ground truth class `i` predicted as `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    label_set: LabelSet,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn empty(label_set: LabelSet) -> Self {
        let k = label_set.len();
        ConfusionMatrix {
            label_set,
            counts: vec![0; k * k],
        }
    }

    pub fn from_masks(pred: &LabelMask, gt: &LabelMask) -> Result<Self> {
        check_pair(pred, gt)?;
        let table = gt.label_set().lookup();
        let k = gt.label_set().len();
        let mut counts = vec![0u64; k * k];
        for (&p, &g) in pred.labels().iter().zip(gt.labels()) {
            let (Some(i), Some(j)) = (table[g as usize], table[p as usize]) else {
                return Err(Error::invalid(format!(
                    "label pair (gt {g}, pred {p}) outside label set"
                )));
            };
            counts[i as usize * k + j as usize] += 1;
        }
        Ok(ConfusionMatrix {
            label_set: gt.label_set().clone(),
            counts,
        })
    }

    pub fn label_set(&self) -> &LabelSet {
        &self.label_set
    }

    pub fn classes(&self) -> usize {
        self.label_set.len()
    }

    pub fn get(&self, gt: usize, pred: usize) -> u64 {
        self.counts[gt * self.classes() + pred]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes()).map(|i| self.get(i, i)).sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        (0..self.classes()).map(|j| self.get(i, j)).sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        (0..self.classes()).map(|i| self.get(i, j)).sum()
    }

    /// Adds another matrix's counts. Associative and commutative.
    pub fn merge(&mut self, other: &ConfusionMatrix) -> Result<()> {
        if self.label_set != other.label_set {
            return Err(Error::invalid(
                "cannot merge confusion matrices over different label sets",
            ));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    fn class_index(&self, label: Label) -> Result<usize> {
        self.label_set
            .index_of(label)
            .ok_or_else(|| Error::invalid(format!("label {label} not in label set")))
    }

    fn accuracy_ratio(&self, i: usize) -> Option<BigRational> {
        ratio(self.get(i, i), self.row_sum(i))
    }

    fn iou_ratio(&self, i: usize) -> Option<BigRational> {
        let tp = self.get(i, i);
        ratio(tp, self.row_sum(i) + self.col_sum(i) - tp)
    }
}

fn ratio(num: u64, den: u64) -> Option<BigRational> {
    (den != 0).then(|| BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("bounded ratio converts to f64")
}

fn mean(values: impl Iterator<Item = BigRational>) -> Option<BigRational> {
    let (sum, n) = values.fold((BigRational::zero(), 0u64), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / BigRational::from_integer(BigInt::from(n)))
}

fn check_pair(pred: &LabelMask, gt: &LabelMask) -> Result<()> {
    if pred.size() != gt.size() {
        return Err(Error::invalid(format!(
            "prediction is {} but ground truth is {}",
            pred.size(),
            gt.size()
        )));
    }
    if pred.label_set() != gt.label_set() {
        return Err(Error::invalid(format!(
            "label sets differ: prediction {{{}}}, ground truth {{{}}}",
            pred.label_set(),
            gt.label_set()
        )));
    }
    Ok(())
}

pub fn confusion(pred: &LabelMask, gt: &LabelMask) -> Result<ConfusionMatrix> {
    ConfusionMatrix::from_masks(pred, gt)
}

/// Recall of `label`: correctly predicted pixels over ground-truth pixels.
pub fn class_accuracy(cm: &ConfusionMatrix, label: Label) -> Result<Score> {
    let i = cm.class_index(label)?;
    Ok(cm.accuracy_ratio(i).as_ref().map(to_f64))
}

/// Intersection over union of `label`.
pub fn class_iou(cm: &ConfusionMatrix, label: Label) -> Result<Score> {
    let i = cm.class_index(label)?;
    Ok(cm.iou_ratio(i).as_ref().map(to_f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub global_accuracy: f64,
    pub mean_accuracy: Score,
    pub mean_iou: Score,
    pub weighted_iou: Score,
}

/// Global accuracy plus the class-averaged region scores.
pub fn aggregate(cm: &ConfusionMatrix) -> Result<Aggregate> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::invalid("confusion matrix is empty"));
    }
    let k = cm.classes();
    let global = ratio(cm.trace(), total).expect("total is non-zero");
    let mean_accuracy = mean((0..k).filter_map(|i| cm.accuracy_ratio(i)));
    let mean_iou = mean((0..k).filter_map(|i| cm.iou_ratio(i)));

    let total_r = BigRational::from_integer(BigInt::from(total));
    let mut weighted: Option<BigRational> = None;
    for i in 0..k {
        if let Some(iou) = cm.iou_ratio(i) {
            let w = BigRational::from_integer(BigInt::from(cm.row_sum(i))) / &total_r;
            *weighted.get_or_insert_with(BigRational::zero) += w * iou;
        }
    }

    Ok(Aggregate {
        global_accuracy: to_f64(&global),
        mean_accuracy: mean_accuracy.as_ref().map(to_f64),
        mean_iou: mean_iou.as_ref().map(to_f64),
        weighted_iou: weighted.as_ref().map(to_f64),
    })
}

/// Distance tolerance for boundary matching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BfTolerance {
    /// Fixed distance in pixels.
    Pixels(f64),
    /// Fraction of the image diagonal, never below one pixel.
    DiagonalFraction(f64),
}

impl Default for BfTolerance {
    fn default() -> Self {
        BfTolerance::DiagonalFraction(0.0075)
    }
}

impl BfTolerance {
    pub fn pixels(px: f64) -> Result<Self> {
        if !(px > 0.0 && px.is_finite()) {
            return Err(Error::invalid(format!(
                "boundary tolerance must be positive, got {px}"
            )));
        }
        Ok(BfTolerance::Pixels(px))
    }

    pub fn diagonal_fraction(f: f64) -> Result<Self> {
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::invalid(format!(
                "boundary tolerance must be positive, got {f}"
            )));
        }
        Ok(BfTolerance::DiagonalFraction(f))
    }

    /// Distance threshold in pixels for a raster of `size`.
    pub fn distance(&self, size: Size) -> f64 {
        match *self {
            BfTolerance::Pixels(px) => px,
            BfTolerance::DiagonalFraction(f) => (f * size.diagonal()).max(1.0),
        }
    }
}

impl std::fmt::Display for BfTolerance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BfTolerance::Pixels(px) => write!(f, "{px}px"),
            BfTolerance::DiagonalFraction(d) => write!(f, "{d}"),
        }
    }
}

impl std::str::FromStr for BfTolerance {
    type Err = Error;

    /// `2px` for pixels, a bare number for a diagonal fraction.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("bad boundary tolerance `{s}`"));
        match s.strip_suffix("px") {
            Some(px) => BfTolerance::pixels(px.trim().parse().map_err(|_| bad())?),
            None => BfTolerance::diagonal_fraction(s.parse().map_err(|_| bad())?),
        }
    }
}

/// Pixels of class `label` with at least one 4-neighbour of another label,
/// or lying on the raster edge.
pub fn boundary(mask: &LabelMask, label: Label) -> Vec<bool> {
    let Size { width, height } = mask.size();
    let data = mask.labels();
    let mut out = vec![false; data.len()];
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            if data[i] != label {
                continue;
            }
            out[i] = x == 0
                || y == 0
                || x + 1 == width
                || y + 1 == height
                || data[i - 1] != label
                || data[i + 1] != label
                || data[i - width] != label
                || data[i + width] != label;
        }
    }
    out
}

/// Exact squared Euclidean distance from every pixel to the nearest set
/// pixel of `seeds`. Separable lower-envelope-of-parabolas transform; all
/// intermediate minima are integers, so the result is exact.
fn squared_distance_transform(seeds: &[bool], size: Size) -> Vec<f64> {
    const FAR: f64 = 1e20;
    let Size { width, height } = size;
    let mut grid: Vec<f64> = seeds.iter().map(|&s| if s { 0.0 } else { FAR }).collect();

    let n = width.max(height);
    let mut f = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];

    // Abscissa where the parabolas rooted at p and q intersect.
    let intersect = |f: &[f64], p: usize, q: usize| {
        ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64)
    };
    let mut pass = |f: &[f64], d: &mut [f64]| {
        let len = f.len();
        let mut k = 0usize;
        v[0] = 0;
        z[0] = f64::NEG_INFINITY;
        z[1] = f64::INFINITY;
        for q in 1..len {
            let mut s = intersect(f, v[k], q);
            while s <= z[k] {
                k -= 1;
                s = intersect(f, v[k], q);
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
        }
        k = 0;
        for (q, out) in d.iter_mut().enumerate().take(len) {
            while z[k + 1] < q as f64 {
                k += 1;
            }
            let p = v[k];
            let dq = q as f64 - p as f64;
            *out = dq * dq + f[p];
        }
    };

    for x in 0..width {
        for y in 0..height {
            f[y] = grid[y * width + x];
        }
        pass(&f[..height], &mut d[..height]);
        for y in 0..height {
            grid[y * width + x] = d[y];
        }
    }
    for y in 0..height {
        f[..width].copy_from_slice(&grid[y * width..(y + 1) * width]);
        pass(&f[..width], &mut d[..width]);
        grid[y * width..(y + 1) * width].copy_from_slice(&d[..width]);
    }
    grid
}

/// Boundary F1 score of one class.
pub fn bf_score(pred: &LabelMask, gt: &LabelMask, label: Label, tol: BfTolerance) -> Result<Score> {
    check_pair(pred, gt)?;
    if !gt.label_set().contains(label) {
        return Err(Error::invalid(format!("label {label} not in label set")));
    }
    let size = gt.size();
    let pb = boundary(pred, label);
    let gb = boundary(gt, label);
    let pred_n = pb.iter().filter(|&&b| b).count();
    let gt_n = gb.iter().filter(|&&b| b).count();
    match (pred_n, gt_n) {
        (0, 0) => return Ok(None),
        (0, _) | (_, 0) => return Ok(Some(0.0)),
        _ => {}
    }

    let threshold = tol.distance(size);
    let limit = threshold * threshold;
    let to_gt = squared_distance_transform(&gb, size);
    let to_pred = squared_distance_transform(&pb, size);
    let matched = |own: &[bool], other: &[f64]| {
        own.iter()
            .zip(other)
            .filter(|(&b, &d)| b && d <= limit)
            .count()
    };
    let precision = matched(&pb, &to_gt) as f64 / pred_n as f64;
    let recall = matched(&gb, &to_pred) as f64 / gt_n as f64;
    if precision + recall == 0.0 {
        return Ok(Some(0.0));
    }
    Ok(Some(2.0 * precision * recall / (precision + recall)))
}

/// Mean of the defined per-class boundary F1 scores.
pub fn mean_bf(pred: &LabelMask, gt: &LabelMask, tol: BfTolerance) -> Result<Score> {
    let scores = gt
        .label_set()
        .labels()
        .iter()
        .map(|&l| bf_score(pred, gt, l, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(mean_defined(&scores))
}

/// Mean of the defined entries; `None` if there are none.
pub fn mean_defined(scores: &[Score]) -> Score {
    let defined: Vec<f64> = scores.iter().flatten().copied().collect();
    (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
}

/// Relative change of `a` over baseline `b`, in percent. Undefined for a
/// zero baseline.
pub fn percentage_increase(a: f64, b: f64) -> Score {
    (b != 0.0).then(|| (a - b) / b * 100.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub label: Label,
    pub accuracy: Score,
    pub iou: Score,
    pub bf: Score,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub classes: Vec<ClassScores>,
    pub global_accuracy: f64,
    pub mean_accuracy: Score,
    pub mean_iou: Score,
    pub weighted_iou: Score,
    pub mean_bf: Score,
}

impl MetricsReport {
    /// Region scores from `cm` combined with already computed per-class
    /// boundary scores (same order as the label set) and their mean.
    pub fn from_parts(cm: &ConfusionMatrix, bf: &[Score], mean_bf: Score) -> Result<Self> {
        let agg = aggregate(cm)?;
        let classes = cm
            .label_set()
            .labels()
            .iter()
            .enumerate()
            .map(|(i, &label)| ClassScores {
                label,
                accuracy: cm.accuracy_ratio(i).as_ref().map(to_f64),
                iou: cm.iou_ratio(i).as_ref().map(to_f64),
                bf: bf.get(i).copied().flatten(),
            })
            .collect();
        Ok(MetricsReport {
            classes,
            global_accuracy: agg.global_accuracy,
            mean_accuracy: agg.mean_accuracy,
            mean_iou: agg.mean_iou,
            weighted_iou: agg.weighted_iou,
            mean_bf,
        })
    }

    pub fn class(&self, label: Label) -> Option<&ClassScores> {
        self.classes.iter().find(|c| c.label == label)
    }
}

/// Every score for a single prediction / ground-truth pair.
pub fn evaluate(pred: &LabelMask, gt: &LabelMask, tol: BfTolerance) -> Result<MetricsReport> {
    let cm = confusion(pred, gt)?;
    let bf = gt
        .label_set()
        .labels()
        .iter()
        .map(|&l| bf_score(pred, gt, l, tol))
        .collect::<Result<Vec<_>>>()?;
    let mean = mean_defined(&bf);
    MetricsReport::from_parts(&cm, &bf, mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(w: usize, h: usize, labels: &[Label]) -> LabelMask {
        LabelMask::new(
            Size::new(w, h).unwrap(),
            labels.to_vec(),
            LabelSet::default(),
        )
        .unwrap()
    }

    fn binary_set() -> LabelSet {
        LabelSet::new(vec![255, 0]).unwrap()
    }

    fn square(size: usize, x0: usize, y0: usize, side: usize) -> LabelMask {
        let labels = (0..size * size)
            .map(|i| {
                let (x, y) = (i % size, i / size);
                if (x0..x0 + side).contains(&x) && (y0..y0 + side).contains(&y) {
                    255
                } else {
                    0
                }
            })
            .collect();
        LabelMask::new(Size::square(size), labels, binary_set()).unwrap()
    }

    #[test]
    fn identical_masks_give_diagonal() {
        let m = mask(
            4,
            4,
            &[
                0, 128, 255, 0, 0, 0, 128, 128, 255, 255, 0, 0, 0, 128, 0, 255,
            ],
        );
        let cm = confusion(&m, &m).unwrap();
        assert_eq!(cm.total(), 16);
        assert_eq!(cm.trace(), 16);
        let agg = aggregate(&cm).unwrap();
        assert_eq!(agg.global_accuracy, 1.0);
        assert_eq!(agg.mean_accuracy, Some(1.0));
        assert_eq!(agg.mean_iou, Some(1.0));
        assert_eq!(agg.weighted_iou, Some(1.0));
        for l in [0, 128, 255] {
            assert_eq!(class_accuracy(&cm, l).unwrap(), Some(1.0));
            assert_eq!(class_iou(&cm, l).unwrap(), Some(1.0));
        }
    }

    #[test]
    fn all_wrong() {
        let pred = mask(2, 2, &[0; 4]);
        let gt = mask(2, 2, &[255; 4]);
        let cm = confusion(&pred, &gt).unwrap();
        assert_eq!(cm.get(0, 2), 4);
        assert_eq!(cm.total(), 4);
        assert_eq!(cm.trace(), 0);
        assert_eq!(aggregate(&cm).unwrap().global_accuracy, 0.0);
    }

    #[test]
    fn accuracy_of_absent_class_is_undefined() {
        let m = mask(2, 1, &[0, 255]);
        let cm = confusion(&m, &m).unwrap();
        assert_eq!(class_accuracy(&cm, 128).unwrap(), None);
        assert_eq!(class_iou(&cm, 128).unwrap(), None);
        assert!(class_accuracy(&cm, 7).is_err());
    }

    #[test]
    fn accuracy_one_third() {
        // 30 ground-truth pixels of class 255, 10 of them predicted correctly.
        let gt = mask(30, 1, &[255; 30]);
        let mut p = vec![0u8; 30];
        p[..10].fill(255);
        let pred = mask(30, 1, &p);
        let cm = confusion(&pred, &gt).unwrap();
        assert_eq!(class_accuracy(&cm, 255).unwrap(), Some(1.0 / 3.0));
    }

    #[test]
    fn iou_shifted_block() {
        // 2x2 block vs the same block shifted one column: overlap 2, union 6.
        let gt = square(6, 1, 1, 2);
        let pred = square(6, 2, 1, 2);
        let cm = confusion(&pred, &gt).unwrap();
        assert_eq!(class_iou(&cm, 255).unwrap(), Some(1.0 / 3.0));
    }

    #[test]
    fn iou_disjoint_is_zero() {
        let gt = square(6, 0, 0, 2);
        let pred = square(6, 3, 3, 2);
        let cm = confusion(&pred, &gt).unwrap();
        assert_eq!(class_iou(&cm, 255).unwrap(), Some(0.0));
    }

    #[test]
    fn confusion_rejects_mismatch() {
        let a = mask(2, 2, &[0; 4]);
        let b = mask(4, 1, &[0; 4]);
        assert!(confusion(&a, &b).is_err());
        let c = LabelMask::new(Size::square(2), vec![0; 4], binary_set()).unwrap();
        assert!(confusion(&a, &c).is_err());
        assert!(aggregate(&ConfusionMatrix::empty(LabelSet::default())).is_err());
    }

    #[test]
    fn merge_adds_counts() {
        let a = mask(2, 1, &[0, 255]);
        let b = mask(2, 1, &[255, 255]);
        let mut m = confusion(&a, &b).unwrap();
        m.merge(&confusion(&b, &a).unwrap()).unwrap();
        assert_eq!(m.total(), 4);
        assert_eq!(m.get(2, 0), 1);
        assert_eq!(m.get(0, 2), 1);
    }

    #[test]
    fn bf_identical_is_one() {
        let m = square(10, 2, 2, 4);
        assert_eq!(
            bf_score(&m, &m, 255, BfTolerance::Pixels(1.0)).unwrap(),
            Some(1.0)
        );
        assert_eq!(mean_bf(&m, &m, BfTolerance::default()).unwrap(), Some(1.0));
    }

    #[test]
    fn bf_missing_class_is_zero() {
        let gt = square(10, 2, 2, 4);
        let pred = LabelMask::background(Size::square(10), binary_set());
        assert_eq!(
            bf_score(&pred, &gt, 255, BfTolerance::Pixels(2.0)).unwrap(),
            Some(0.0)
        );
    }

    #[test]
    fn bf_absent_everywhere_is_undefined() {
        let m = LabelMask::background(Size::square(5), LabelSet::default());
        assert_eq!(
            bf_score(&m, &m, 255, BfTolerance::Pixels(2.0)).unwrap(),
            None
        );
    }

    #[test]
    fn bf_shifted_square() {
        let gt = square(12, 3, 3, 5);
        let pred = square(12, 4, 3, 5);
        assert_eq!(
            bf_score(&pred, &gt, 255, BfTolerance::Pixels(2.0)).unwrap(),
            Some(1.0)
        );
        let tight = bf_score(&pred, &gt, 255, BfTolerance::Pixels(0.5))
            .unwrap()
            .unwrap();
        assert!(tight < 1.0);
    }

    #[test]
    fn mean_bf_of_perfect_and_missing() {
        // Class 255 matches within tolerance, class 128 is missing from the
        // prediction.
        let set = LabelSet::new(vec![255, 128]).unwrap();
        let gt = LabelMask::new(
            Size::new(4, 1).unwrap(),
            vec![255, 255, 128, 128],
            set.clone(),
        )
        .unwrap();
        let pred = LabelMask::new(Size::new(4, 1).unwrap(), vec![255, 255, 255, 255], set).unwrap();
        let tol = BfTolerance::Pixels(2.5);
        assert_eq!(bf_score(&pred, &gt, 255, tol).unwrap(), Some(1.0));
        assert_eq!(bf_score(&pred, &gt, 128, tol).unwrap(), Some(0.0));
        assert_eq!(mean_bf(&pred, &gt, tol).unwrap(), Some(0.5));
    }

    #[test]
    fn distance_transform_matches_brute_force() {
        let size = Size::new(9, 7).unwrap();
        let seeds: Vec<bool> = (0..size.len()).map(|i| i % 11 == 3 || i == 40).collect();
        let dt = squared_distance_transform(&seeds, size);
        for (i, &d) in dt.iter().enumerate() {
            let (x, y) = ((i % 9) as i64, (i / 9) as i64);
            let best = seeds
                .iter()
                .enumerate()
                .filter(|(_, &s)| s)
                .map(|(j, _)| {
                    let (sx, sy) = ((j % 9) as i64, (j / 9) as i64);
                    ((x - sx).pow(2) + (y - sy).pow(2)) as f64
                })
                .fold(f64::INFINITY, f64::min);
            assert_eq!(d, best);
        }
    }

    #[test]
    fn tolerance_resolution() {
        assert_eq!(BfTolerance::Pixels(2.0).distance(Size::square(10)), 2.0);
        // 0.75% of a 10x10 diagonal is below one pixel.
        assert_eq!(BfTolerance::default().distance(Size::square(10)), 1.0);
        let d = BfTolerance::default().distance(Size::square(256));
        assert!((d - 0.0075 * 256.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(
            "2px".parse::<BfTolerance>().unwrap(),
            BfTolerance::Pixels(2.0)
        );
        assert_eq!(
            "0.01".parse::<BfTolerance>().unwrap(),
            BfTolerance::DiagonalFraction(0.01)
        );
        assert!("-1px".parse::<BfTolerance>().is_err());
    }

    #[test]
    fn percentage_increase_examples() {
        assert_eq!(percentage_increase(0.7, 0.7), Some(0.0));
        assert_eq!(percentage_increase(0.5, 1.0), Some(-50.0));
        assert_eq!(percentage_increase(0.5, 0.0), None);
        let b = 0.8;
        let got = percentage_increase(1.083127 * b, b).unwrap();
        assert!((got - 8.3127).abs() < 1e-6);
    }

    #[test]
    fn evaluate_builds_full_report() {
        let gt = mask(3, 2, &[0, 128, 255, 0, 128, 255]);
        let report = evaluate(&gt, &gt, BfTolerance::default()).unwrap();
        assert_eq!(report.classes.len(), 3);
        assert_eq!(report.global_accuracy, 1.0);
        assert_eq!(report.mean_bf, Some(1.0));
        assert_eq!(report.class(128).unwrap().iou, Some(1.0));
    }
}
