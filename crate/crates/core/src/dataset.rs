//! Datasets, splits, class priors, bias augmentation and synthetic
//! imbalanced-data generation.
//!
//! Features are stored column-per-sample (d x n) so that linear models act
//! as `X^T W`; labels are stored row-per-sample (n x m) with entries in
//! {-1, +1}. All types are immutable after construction and safe to share
//! across threads.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Name given to the synthetic all-ones feature row added by [`append_bias`].
pub const BIAS_FEATURE_NAME: &str = "__bias__";

/// Kind of classification task a dataset encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    /// One label column in {-1, +1}.
    Binary,
    /// One-hot rows: exactly one +1 per sample.
    MultiClass,
    /// Any number of +1 entries per sample.
    MultiLabel,
}

/// An immutable classification dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: DMatrix<f64>,
    labels: DMatrix<i8>,
    task: TaskKind,
    feature_names: Vec<String>,
    has_bias_row: bool,
}

impl Dataset {
    /// Build a dataset from a d x n feature matrix and an n x m label
    /// matrix, validating every structural invariant.
    pub fn new(
        features: DMatrix<f64>,
        labels: DMatrix<i8>,
        task: TaskKind,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        let (d, n) = (features.nrows(), features.ncols());
        let m = labels.ncols();
        if d < 1 || n < 2 || m < 1 {
            return Err(Error::InvalidDataset(format!(
                "need d >= 1, n >= 2, m >= 1; got d={d}, n={n}, m={m}"
            )));
        }
        if labels.nrows() != n {
            return Err(Error::ShapeMismatch {
                context: "dataset labels",
                expected_rows: n,
                expected_cols: m,
                rows: labels.nrows(),
                cols: m,
            });
        }
        if feature_names.len() != d {
            return Err(Error::LengthMismatch {
                context: "feature names",
                left: feature_names.len(),
                right: d,
            });
        }
        for i in 0..d {
            for j in 0..n {
                if !features[(i, j)].is_finite() {
                    return Err(Error::NonFiniteFeature { row: i, col: j });
                }
            }
        }
        for s in 0..n {
            for k in 0..m {
                let v = labels[(s, k)];
                if v != 1 && v != -1 {
                    return Err(Error::LabelDomain {
                        sample: s,
                        class: k,
                        value: v as i64,
                    });
                }
            }
        }
        match task {
            TaskKind::Binary if m != 1 => {
                return Err(Error::InvalidDataset(format!(
                    "binary task requires m = 1, got m = {m}"
                )));
            }
            TaskKind::MultiClass => {
                for s in 0..n {
                    let positives = (0..m).filter(|&k| labels[(s, k)] == 1).count();
                    if positives != 1 {
                        return Err(Error::InvalidDataset(format!(
                            "multi-class row {s} has {positives} positive labels, expected exactly 1"
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(Self {
            features,
            labels,
            task,
            feature_names,
            has_bias_row: false,
        })
    }

    /// Number of feature rows (including the bias row when present).
    pub fn dim(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.features.ncols()
    }

    pub fn n_classes(&self) -> usize {
        self.labels.ncols()
    }

    pub fn task(&self) -> TaskKind {
        self.task
    }

    pub fn features(&self) -> &DMatrix<f64> {
        &self.features
    }

    pub fn labels(&self) -> &DMatrix<i8> {
        &self.labels
    }

    /// Labels converted to +-1.0 reals, as consumed by the solver.
    pub fn labels_f64(&self) -> DMatrix<f64> {
        self.labels.map(|v| v as f64)
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn has_bias_row(&self) -> bool {
        self.has_bias_row
    }

    /// Feature columns for the given sample indices (d x |idx|).
    pub fn features_at(&self, idx: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), idx.len(), |i, j| self.features[(i, idx[j])])
    }

    /// Label rows for the given sample indices (|idx| x m).
    pub fn labels_at(&self, idx: &[usize]) -> DMatrix<i8> {
        DMatrix::from_fn(idx.len(), self.n_classes(), |i, k| self.labels[(idx[i], k)])
    }
}

/// Empirical marginal probability of the positive label, per class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPriors {
    values: Vec<f64>,
}

impl ClassPriors {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParam {
                name: "priors",
                reason: "need at least one class".to_string(),
            });
        }
        for (k, &p) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(Error::InvalidParam {
                    name: "priors",
                    reason: format!("prior of class {k} is {p}, expected within [0, 1]"),
                });
            }
        }
        Ok(Self { values })
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_classes(&self) -> usize {
        self.values.len()
    }

    /// Index of the largest prior; ties resolve to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for k in 1..self.values.len() {
            if self.values[k] > self.values[best] {
                best = k;
            }
        }
        best
    }
}

/// Per-class positive frequencies of a dataset.
pub fn class_priors(ds: &Dataset) -> ClassPriors {
    let n = ds.n_samples() as f64;
    let values = (0..ds.n_classes())
        .map(|k| (0..ds.n_samples()).filter(|&s| ds.labels()[(s, k)] == 1).count() as f64 / n)
        .collect();
    ClassPriors { values }
}

/// Append a constant all-ones feature row absorbing the intercept.
///
/// The row is named [`BIAS_FEATURE_NAME`] and flagged so that feature
/// ranking skips it. Applying this twice is an error.
pub fn append_bias(ds: &Dataset) -> Result<Dataset> {
    if ds.has_bias_row {
        return Err(Error::BiasAlreadyPresent);
    }
    let (d, n) = (ds.dim(), ds.n_samples());
    let features = DMatrix::from_fn(d + 1, n, |i, j| if i < d { ds.features[(i, j)] } else { 1.0 });
    let mut feature_names = ds.feature_names.clone();
    feature_names.push(BIAS_FEATURE_NAME.to_string());
    Ok(Dataset {
        features,
        labels: ds.labels.clone(),
        task: ds.task,
        feature_names,
        has_bias_row: true,
    })
}

/// Disjoint train / validation / test sample indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splits {
    train: Vec<usize>,
    validation: Vec<usize>,
    test: Vec<usize>,
    seed: u64,
}

impl Splits {
    /// Assemble splits from explicit index lists, validating disjointness,
    /// range and non-emptiness against a dataset of `n` samples.
    pub fn from_parts(
        train: Vec<usize>,
        validation: Vec<usize>,
        test: Vec<usize>,
        seed: u64,
        n: usize,
    ) -> Result<Self> {
        for (name, part) in [("train", &train), ("validation", &validation), ("test", &test)] {
            if part.is_empty() {
                return Err(Error::EmptySplit { which: name, n });
            }
            if let Some(&bad) = part.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidParam {
                    name: "splits",
                    reason: format!("{name} index {bad} out of range for n = {n}"),
                });
            }
        }
        let mut seen = alloc::vec![false; n];
        for &i in train.iter().chain(&validation).chain(&test) {
            if seen[i] {
                return Err(Error::InvalidParam {
                    name: "splits",
                    reason: format!("sample {i} appears in more than one split"),
                });
            }
            seen[i] = true;
        }
        Ok(Self {
            train,
            validation,
            test,
            seed,
        })
    }

    pub fn train(&self) -> &[usize] {
        &self.train
    }

    pub fn validation(&self) -> &[usize] {
        &self.validation
    }

    pub fn test(&self) -> &[usize] {
        &self.test
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Split a dataset into test, validation and train index sets.
///
/// The test set is carved first as `test_fraction` of all samples; the
/// validation set is `val_fraction` of the remaining pool. With
/// `stratified` set, per-class allocations follow the global counts by
/// largest remainder, which keeps every class proportionally represented.
/// Identical inputs and seed produce identical splits.
pub fn split(
    ds: &Dataset,
    val_fraction: f64,
    test_fraction: f64,
    seed: u64,
    stratified: bool,
) -> Result<Splits> {
    if val_fraction <= 0.0
        || test_fraction <= 0.0
        || val_fraction + test_fraction >= 1.0
        || !val_fraction.is_finite()
        || !test_fraction.is_finite()
    {
        return Err(Error::FractionOutOfRange {
            validation: val_fraction,
            test: test_fraction,
        });
    }
    let n = ds.n_samples();
    let n_test = (n as f64 * test_fraction).round() as usize;
    let n_val = ((n - n_test) as f64 * val_fraction).round() as usize;
    if n_test == 0 {
        return Err(Error::EmptySplit { which: "test", n });
    }
    if n_val == 0 {
        return Err(Error::EmptySplit {
            which: "validation",
            n,
        });
    }
    if n_test + n_val >= n {
        return Err(Error::EmptySplit { which: "train", n });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let (mut test, mut validation, mut train) = if stratified {
        // group shuffled indices by label-row stratum, in first-appearance order
        let mut strata: Vec<(Vec<i8>, Vec<usize>)> = Vec::new();
        for &s in &order {
            let key: Vec<i8> = (0..ds.n_classes()).map(|k| ds.labels()[(s, k)]).collect();
            match strata.iter_mut().find(|(k, _)| *k == key) {
                Some((_, members)) => members.push(s),
                None => strata.push((key, alloc::vec![s])),
            }
        }
        for (c, (_, members)) in strata.iter().enumerate() {
            if members.len() < 3 {
                return Err(Error::StratifyImpossible {
                    class: c,
                    count: members.len(),
                });
            }
        }
        let counts: Vec<usize> = strata.iter().map(|(_, m)| m.len()).collect();
        let take_test = largest_remainder(&counts, n_test, n);
        let remaining: Vec<usize> = counts
            .iter()
            .zip(&take_test)
            .map(|(c, t)| c - t)
            .collect();
        let take_val = largest_remainder(&remaining, n_val, n - n_test);
        let mut test = Vec::with_capacity(n_test);
        let mut validation = Vec::with_capacity(n_val);
        let mut train = Vec::with_capacity(n - n_test - n_val);
        for (c, (_, members)) in strata.iter().enumerate() {
            let t = take_test[c];
            let v = take_val[c];
            test.extend_from_slice(&members[..t]);
            validation.extend_from_slice(&members[t..t + v]);
            train.extend_from_slice(&members[t + v..]);
        }
        (test, validation, train)
    } else {
        (
            order[..n_test].to_vec(),
            order[n_test..n_test + n_val].to_vec(),
            order[n_test + n_val..].to_vec(),
        )
    };
    test.sort_unstable();
    validation.sort_unstable();
    train.sort_unstable();
    Splits::from_parts(train, validation, test, seed, n)
}

/// Allocate `total` draws across strata proportionally to `counts` (which
/// sum to `pool`), flooring quotas and handing leftovers to the largest
/// fractional parts; ties favor earlier strata.
fn largest_remainder(counts: &[usize], total: usize, pool: usize) -> Vec<usize> {
    debug_assert!(counts.iter().sum::<usize>() == pool && total <= pool);
    let mut take: Vec<usize> = counts.iter().map(|&c| c * total / pool).collect();
    let mut fracs: Vec<(usize, usize)> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (i, c * total % pool))
        .collect();
    fracs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut leftover = total - take.iter().sum::<usize>();
    for (i, frac) in fracs {
        if leftover == 0 {
            break;
        }
        if frac > 0 {
            take[i] += 1;
            leftover -= 1;
        }
    }
    take
}

/// Uniform sampling boxes for one synthetic feature, per class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureGen {
    pub minority: (f64, f64),
    pub majority: (f64, f64),
}

impl FeatureGen {
    /// A pure-noise feature: both classes share the same box.
    pub fn noise(lo: f64, hi: f64) -> Self {
        Self {
            minority: (lo, hi),
            majority: (lo, hi),
        }
    }

    /// A class-dependent feature with separate boxes.
    pub fn informative(minority: (f64, f64), majority: (f64, f64)) -> Self {
        Self { minority, majority }
    }

    pub fn is_noise(&self) -> bool {
        self.minority == self.majority
    }

    fn validate(&self, index: usize) -> Result<()> {
        for (lo, hi) in [self.minority, self.majority] {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidParam {
                    name: "features",
                    reason: format!("feature {index} has an invalid box [{lo}, {hi}]"),
                });
            }
        }
        Ok(())
    }
}

/// Configuration of the synthetic imbalanced binary generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_minority: usize,
    /// Majority-to-minority ratio, at least 1.
    pub ratio: f64,
    pub features: Vec<FeatureGen>,
    pub seed: u64,
}

impl SynthConfig {
    pub fn new(n_minority: usize, ratio: f64, features: Vec<FeatureGen>, seed: u64) -> Self {
        Self {
            n_minority,
            ratio,
            features,
            seed,
        }
    }

    /// The stock layout: the first `informative` features separate the
    /// classes (majority box [0, 1], minority box shifted up so that
    /// `overlap` of it still falls inside the majority box), the remaining
    /// features are noise on [0, 1].
    pub fn standard(
        n_minority: usize,
        ratio: f64,
        d: usize,
        informative: usize,
        overlap: f64,
        seed: u64,
    ) -> Self {
        let features = (0..d)
            .map(|i| {
                if i < informative {
                    FeatureGen::informative((1.0 - overlap, 2.0 - overlap), (0.0, 1.0))
                } else {
                    FeatureGen::noise(0.0, 1.0)
                }
            })
            .collect();
        Self::new(n_minority, ratio, features, seed)
    }
}

/// Generate a two-class dataset from per-feature uniform boxes.
///
/// The majority class counts `round(ratio * n_minority)` samples and is
/// labelled +1; the minority class is labelled -1. A configuration where
/// every feature is noise cannot separate the classes and is rejected.
pub fn gen_synthetic_binary(cfg: &SynthConfig) -> Result<Dataset> {
    if cfg.n_minority < 2 {
        return Err(Error::InvalidParam {
            name: "n_minority",
            reason: format!("need at least 2 minority samples, got {}", cfg.n_minority),
        });
    }
    if cfg.ratio < 1.0 || !cfg.ratio.is_finite() {
        return Err(Error::InvalidParam {
            name: "ratio",
            reason: format!("need ratio >= 1, got {}", cfg.ratio),
        });
    }
    let d = cfg.features.len();
    if d < 2 {
        return Err(Error::InvalidParam {
            name: "features",
            reason: format!("need at least 2 features, got {d}"),
        });
    }
    for (i, f) in cfg.features.iter().enumerate() {
        f.validate(i)?;
    }
    if cfg.features.iter().all(FeatureGen::is_noise) {
        return Err(Error::DegenerateSynthesis(
            "every feature is noise; the classes cannot be separated".to_string(),
        ));
    }
    let n_majority = (cfg.ratio * cfg.n_minority as f64).round() as usize;
    let n = n_majority + cfg.n_minority;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut features = DMatrix::zeros(d, n);
    for j in 0..n {
        let majority = j < n_majority;
        for (i, f) in cfg.features.iter().enumerate() {
            let (lo, hi) = if majority { f.majority } else { f.minority };
            features[(i, j)] = if lo == hi { lo } else { rng.random_range(lo..hi) };
        }
    }
    let labels = DMatrix::from_fn(n, 1, |s, _| if s < n_majority { 1i8 } else { -1 });
    let names = default_feature_names(d);
    Dataset::new(features, labels, TaskKind::Binary, names)
}

/// Numbered feature names `x1..xd`.
pub fn default_feature_names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("x{i}")).collect()
}
