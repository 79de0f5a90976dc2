//! Downstream verification of selected feature subsets.
//!
//! A feature selector is only as good as what a classifier squeezes out
//! of its picks, so the evaluation restricts the data to a selected
//! subset, retrains a small ridge-regularized least-squares classifier on
//! train + validation, and reports accuracy and the task-matched
//! F-measure on the held-out test split, repeated over seeded re-splits.
//! The equal-cost baseline runs the identical plumbing with a constant
//! cost matrix, so a comparison isolates the cost mechanism itself.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use nalgebra::{Cholesky, DMatrix};
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::cost::{CostMatrix, FVariant};
use crate::dataset::{class_priors, split, Dataset, Splits, TaskKind};
use crate::error::{Error, Result};
use crate::solver::{fit, SolverConfig};
use crate::sweep::{measure_predictions, predict, rank_features, select_top_k};

/// Ridge constant of the downstream classifier, recorded in every report.
pub const DOWNSTREAM_RIDGE: f64 = 1e-3;

/// Default number of seeded evaluation repeats (seeds `base..base+10`).
pub const DEFAULT_REPEATS: usize = 10;

/// Which selector produced the evaluated subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Csfs,
    EqualCost,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Csfs => "CSFS",
            Method::EqualCost => "EqualCost",
        }
    }
}

/// Mean and standard deviation of both metrics over the repeats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSummary {
    pub f_mean: f64,
    pub f_std: f64,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
}

/// Test-split metrics of one seeded repeat.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepeatMetrics {
    pub seed: u64,
    pub f: f64,
    pub accuracy: f64,
}

/// Evaluation of one selected subset.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub method: Method,
    /// Number of selected features.
    pub k: usize,
    pub repeats: usize,
    pub base_seed: u64,
    /// Ridge constant used by the downstream classifier.
    pub ridge: f64,
    pub train: MetricSummary,
    pub validation: MetricSummary,
    pub test: MetricSummary,
    /// Per-repeat test metrics, in seed order.
    pub per_repeat: Vec<RepeatMetrics>,
}

fn summarize(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// Rows x columns submatrix of a feature matrix.
fn submatrix(features: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| features[(rows[i], cols[j])])
}

/// Metrics of a fixed model on exactly the given sample indices.
///
/// Index discipline lives here: only `indices` enter the computation, so
/// train/validation samples cannot leak into test metrics.
fn metrics_at(
    w: &DMatrix<f64>,
    ds: &Dataset,
    rows: &[usize],
    indices: &[usize],
    variant: FVariant,
    ref_class: usize,
) -> Result<(f64, f64)> {
    let x = submatrix(ds.features(), rows, indices);
    let labels = ds.labels_at(indices);
    let predictions = predict(w, &x, ds.task())?;
    let f = measure_predictions(&predictions, &labels, variant, 1.0, ref_class)?;
    let accuracy = match ds.task() {
        TaskKind::Binary | TaskKind::MultiLabel => {
            // per-entry agreement; plain accuracy when m = 1
            let total = (labels.nrows() * labels.ncols()) as f64;
            let agree = labels
                .iter()
                .zip(predictions.iter())
                .filter(|(a, b)| a == b)
                .count() as f64;
            agree / total
        }
        TaskKind::MultiClass => {
            let n = labels.nrows();
            let correct = (0..n)
                .filter(|&i| (0..labels.ncols()).all(|k| labels[(i, k)] == predictions[(i, k)]))
                .count() as f64;
            correct / n as f64
        }
    };
    Ok((f, accuracy))
}

fn task_variant(task: TaskKind) -> FVariant {
    match task {
        TaskKind::Binary => FVariant::Binary,
        TaskKind::MultiClass => FVariant::MultiClassMicro,
        TaskKind::MultiLabel => FVariant::MultiLabelMicro,
    }
}

/// Evaluate a feature subset with the downstream ridge classifier.
///
/// For each of `repeats` seeds the dataset is re-split with the same
/// fractions as `splits` (stratified), the classifier is trained on
/// train + validation restricted to `selected` plus the bias row, and
/// accuracy and F-measure are computed per split. Test metrics of each
/// repeat are kept for paired comparisons.
pub fn downstream_eval(
    ds: &Dataset,
    splits: &Splits,
    selected: &[usize],
    repeats: usize,
    seed: u64,
    method: Method,
) -> Result<EvalReport> {
    if selected.is_empty() {
        return Err(Error::EmptySelection);
    }
    if repeats == 0 {
        return Err(Error::InvalidParam {
            name: "repeats",
            reason: "need at least one repeat".to_string(),
        });
    }
    let n_features = if ds.has_bias_row() {
        ds.dim() - 1
    } else {
        ds.dim()
    };
    let mut rows = selected.to_vec();
    rows.sort_unstable();
    rows.dedup();
    if rows.len() != selected.len() {
        return Err(Error::InvalidParam {
            name: "selected",
            reason: "duplicate feature indices".to_string(),
        });
    }
    if let Some(&bad) = rows.iter().find(|&&i| i >= n_features) {
        return Err(Error::ClassOutOfRange {
            index: bad,
            classes: n_features,
        });
    }
    if ds.has_bias_row() {
        rows.push(ds.dim() - 1);
    }

    let n = ds.n_samples() as f64;
    let test_fraction = splits.test().len() as f64 / n;
    let val_fraction = splits.validation().len() as f64 / (n - splits.test().len() as f64);
    let variant = task_variant(ds.task());
    let ref_class = class_priors(ds).argmax();

    let mut train_f = Vec::with_capacity(repeats);
    let mut train_acc = Vec::with_capacity(repeats);
    let mut val_f = Vec::with_capacity(repeats);
    let mut val_acc = Vec::with_capacity(repeats);
    let mut test_f = Vec::with_capacity(repeats);
    let mut test_acc = Vec::with_capacity(repeats);
    let mut per_repeat = Vec::with_capacity(repeats);

    for repeat in 0..repeats {
        let repeat_seed = seed + repeat as u64;
        let resplit = split(ds, val_fraction, test_fraction, repeat_seed, true)?;
        let mut pool: Vec<usize> = resplit
            .train()
            .iter()
            .chain(resplit.validation())
            .copied()
            .collect();
        pool.sort_unstable();

        if ds.n_classes() == 1 {
            let first = ds.labels()[(pool[0], 0)];
            if pool.iter().all(|&i| ds.labels()[(i, 0)] == first) {
                return Err(Error::DegenerateSplit(format!(
                    "training pool of repeat {repeat} holds a single class"
                )));
            }
        }

        let x_pool = submatrix(ds.features(), &rows, &pool);
        let y_pool = ds.labels_at(&pool).map(|v| v as f64);
        let mut system = &x_pool * x_pool.transpose();
        for i in 0..rows.len() {
            system[(i, i)] += DOWNSTREAM_RIDGE;
        }
        let rhs = &x_pool * y_pool;
        let w = Cholesky::new(system)
            .ok_or(Error::SingularSystem {
                condition_estimate: f64::INFINITY,
            })?
            .solve(&rhs);

        let (f, acc) = metrics_at(&w, ds, &rows, resplit.train(), variant, ref_class)?;
        train_f.push(f);
        train_acc.push(acc);
        let (f, acc) = metrics_at(&w, ds, &rows, resplit.validation(), variant, ref_class)?;
        val_f.push(f);
        val_acc.push(acc);
        let (f, acc) = metrics_at(&w, ds, &rows, resplit.test(), variant, ref_class)?;
        test_f.push(f);
        test_acc.push(acc);
        per_repeat.push(RepeatMetrics {
            seed: repeat_seed,
            f,
            accuracy: acc,
        });
    }

    let summary = |f: &[f64], acc: &[f64]| {
        let (f_mean, f_std) = summarize(f);
        let (accuracy_mean, accuracy_std) = summarize(acc);
        MetricSummary {
            f_mean,
            f_std,
            accuracy_mean,
            accuracy_std,
        }
    };
    Ok(EvalReport {
        method,
        k: selected.len(),
        repeats,
        base_seed: seed,
        ridge: DOWNSTREAM_RIDGE,
        train: summary(&train_f, &train_acc),
        validation: summary(&val_f, &val_acc),
        test: summary(&test_f, &test_acc),
        per_repeat,
    })
}

/// Rank features with a constant cost matrix, select the top k, and run
/// the identical downstream evaluation (10 repeats, seeds from 0).
pub fn baseline_equal_cost(
    ds: &Dataset,
    splits: &Splits,
    k: usize,
    config: &SolverConfig,
) -> Result<EvalReport> {
    baseline_equal_cost_with(ds, splits, k, config, DEFAULT_REPEATS, 0)
}

/// [`baseline_equal_cost`] with explicit repeats and base seed.
pub fn baseline_equal_cost_with(
    ds: &Dataset,
    splits: &Splits,
    k: usize,
    config: &SolverConfig,
    repeats: usize,
    seed: u64,
) -> Result<EvalReport> {
    let ranking = equal_cost_ranking(ds, splits, config)?;
    let selected = select_top_k(&ranking, k)?;
    downstream_eval(ds, splits, &selected, repeats, seed, Method::EqualCost)
}

/// Feature ranking of the cost-blind fit (constant cost matrix of ones).
pub fn equal_cost_ranking(
    ds: &Dataset,
    splits: &Splits,
    config: &SolverConfig,
) -> Result<Vec<(usize, f64)>> {
    let x_train = ds.features_at(splits.train());
    let y_train = ds.labels_at(splits.train()).map(|v| v as f64);
    let costs = CostMatrix::constant(splits.train().len(), ds.n_classes(), 1.0);
    let fitted = fit(&x_train, &y_train, &costs, config)?;
    Ok(rank_features(&fitted.projection, ds.has_bias_row()))
}

/// One seed's paired metric differences (`a - b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedDiff {
    pub seed: u64,
    pub f_diff: f64,
    pub accuracy_diff: f64,
}

/// Paired per-seed comparison of two evaluation reports.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRecord {
    pub k: usize,
    pub per_seed: Vec<SeedDiff>,
    pub f_gap_mean: f64,
    pub accuracy_gap_mean: f64,
    /// (a wins, ties, b wins) on the F-measure.
    pub f_signs: (usize, usize, usize),
    /// (a wins, ties, b wins) on accuracy.
    pub accuracy_signs: (usize, usize, usize),
}

/// Pair two reports seed by seed; they must share k, repeats, seeds and
/// ridge so the differences isolate the selection method.
pub fn compare_report(a: &EvalReport, b: &EvalReport) -> Result<CompareRecord> {
    if a.k != b.k {
        return Err(Error::ConfigMismatch(format!("k {} vs {}", a.k, b.k)));
    }
    if a.repeats != b.repeats || a.base_seed != b.base_seed {
        return Err(Error::ConfigMismatch(format!(
            "repeats/seed {}x{} vs {}x{}",
            a.repeats, a.base_seed, b.repeats, b.base_seed
        )));
    }
    if a.ridge != b.ridge {
        return Err(Error::ConfigMismatch(format!(
            "ridge {} vs {}",
            a.ridge, b.ridge
        )));
    }
    let mut per_seed = Vec::with_capacity(a.per_repeat.len());
    let mut f_signs = (0, 0, 0);
    let mut accuracy_signs = (0, 0, 0);
    for (ra, rb) in a.per_repeat.iter().zip(&b.per_repeat) {
        debug_assert_eq!(ra.seed, rb.seed);
        let diff = SeedDiff {
            seed: ra.seed,
            f_diff: ra.f - rb.f,
            accuracy_diff: ra.accuracy - rb.accuracy,
        };
        match diff.f_diff.partial_cmp(&0.0).expect("finite metrics") {
            core::cmp::Ordering::Greater => f_signs.0 += 1,
            core::cmp::Ordering::Equal => f_signs.1 += 1,
            core::cmp::Ordering::Less => f_signs.2 += 1,
        }
        match diff.accuracy_diff.partial_cmp(&0.0).expect("finite metrics") {
            core::cmp::Ordering::Greater => accuracy_signs.0 += 1,
            core::cmp::Ordering::Equal => accuracy_signs.1 += 1,
            core::cmp::Ordering::Less => accuracy_signs.2 += 1,
        }
        per_seed.push(diff);
    }
    let (f_gap_mean, _) = summarize(&per_seed.iter().map(|d| d.f_diff).collect::<Vec<_>>());
    let (accuracy_gap_mean, _) =
        summarize(&per_seed.iter().map(|d| d.accuracy_diff).collect::<Vec<_>>());
    Ok(CompareRecord {
        k: a.k,
        per_seed,
        f_gap_mean,
        accuracy_gap_mean,
        f_signs,
        accuracy_signs,
    })
}
