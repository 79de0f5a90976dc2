//! The sweep: one cost-sensitive fit per discretized F-measure value,
//! model selection on the validation split, and feature ranking by
//! projection-row norms.
//!
//! Individual sweep points are independent given the shared inputs, so
//! they may be computed in any order (or in parallel) and reassembled;
//! [`SweepResult::assemble`] sorts records by their r value and selection
//! is deterministic, with ties on the validation measure resolved towards
//! the smallest r.

use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::cost::{discretize, CostMatrix, CostVector, FVariant};
use crate::dataset::{class_priors, Dataset, Splits, TaskKind};
use crate::error::{Error, Result};
use crate::metrics::{confusion, error_profile, f_beta_binary, mc_micro_f, ml_micro_f};
use crate::solver::{fit, fit_from, FitResult, SolverConfig};

/// Optional knobs of [`run_sweep`].
#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Measure variant; defaults to the task's natural one.
    pub variant: Option<FVariant>,
    /// Reference class of the multi-class measure; defaults to the class
    /// with the largest prior (ties to the lowest index).
    pub ref_class: Option<usize>,
    /// Start each fit from the previous r's solution instead of a fresh
    /// seeded initialization.
    pub warm_start: bool,
}

/// One fitted sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub r: f64,
    pub fit: FitResult,
    /// Validation measure; `None` when the measure was undefined at this r.
    pub validation_f: Option<f64>,
}

/// All sweep points plus the selected model and its feature ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Records in increasing r order.
    pub records: Vec<SweepRecord>,
    /// Index of the selected record.
    pub best_index: usize,
    /// Feature indices with their row-norm scores, best first; the bias
    /// row never appears.
    pub ranking: Vec<(usize, f64)>,
}

impl SweepResult {
    /// Select the best record and rank features, independently of the
    /// order in which the records were computed.
    pub fn assemble(mut records: Vec<SweepRecord>, bias_row: bool) -> Result<Self> {
        records.sort_by(|a, b| a.r.total_cmp(&b.r));
        let mut best_index = None;
        let mut best_f = f64::NEG_INFINITY;
        for (i, record) in records.iter().enumerate() {
            if let Some(f) = record.validation_f {
                if f > best_f {
                    best_f = f;
                    best_index = Some(i);
                }
            }
        }
        let best_index = best_index.ok_or(Error::AllSweepPointsFailed)?;
        let ranking = rank_features(&records[best_index].fit.projection, bias_row);
        Ok(Self {
            records,
            best_index,
            ranking,
        })
    }

    pub fn best_r(&self) -> f64 {
        self.records[self.best_index].r
    }

    pub fn best_projection(&self) -> &DMatrix<f64> {
        &self.records[self.best_index].fit.projection
    }

    pub fn best_validation_f(&self) -> f64 {
        self.records[self.best_index]
            .validation_f
            .expect("selected record has a defined measure")
    }
}

/// Label predictions of a linear model.
///
/// Binary and multi-label tasks threshold each score at zero with
/// `sign(0) = +1`; multi-class picks the arg-max score per sample, ties
/// resolving to the lowest class index.
pub fn predict(w: &DMatrix<f64>, x: &DMatrix<f64>, task: TaskKind) -> Result<DMatrix<i8>> {
    if w.nrows() != x.nrows() {
        return Err(Error::ShapeMismatch {
            context: "predict",
            expected_rows: x.nrows(),
            expected_cols: w.ncols(),
            rows: w.nrows(),
            cols: w.ncols(),
        });
    }
    let scores = x.transpose() * w;
    let (n, m) = scores.shape();
    Ok(match task {
        TaskKind::Binary | TaskKind::MultiLabel => {
            DMatrix::from_fn(n, m, |i, k| if scores[(i, k)] >= 0.0 { 1i8 } else { -1 })
        }
        TaskKind::MultiClass => {
            let mut out = DMatrix::from_element(n, m, -1i8);
            for i in 0..n {
                let mut best = 0;
                for k in 1..m {
                    if scores[(i, k)] > scores[(i, best)] {
                        best = k;
                    }
                }
                out[(i, best)] = 1;
            }
            out
        }
    })
}

/// Features ordered by decreasing projection-row norm.
///
/// Ties resolve to the lower index. With `bias_row` set the last row is
/// the absorbed intercept and is excluded.
pub fn rank_features(w: &DMatrix<f64>, bias_row: bool) -> Vec<(usize, f64)> {
    let rows = if bias_row { w.nrows() - 1 } else { w.nrows() };
    let mut ranking: Vec<(usize, f64)> = (0..rows).map(|i| (i, w.row(i).norm())).collect();
    ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranking
}

/// First k feature indices of a ranking.
pub fn select_top_k(ranking: &[(usize, f64)], k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > ranking.len() {
        return Err(Error::InvalidParam {
            name: "k",
            reason: alloc::format!("k = {k} outside 1..={}", ranking.len()),
        });
    }
    Ok(ranking[..k].iter().map(|&(i, _)| i).collect())
}

fn validate_splits(ds: &Dataset, splits: &Splits) -> Result<()> {
    let n = ds.n_samples();
    for part in [splits.train(), splits.validation(), splits.test()] {
        if let Some(&bad) = part.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidParam {
                name: "splits",
                reason: alloc::format!("index {bad} out of range for n = {n}"),
            });
        }
    }
    Ok(())
}

fn default_variant(task: TaskKind) -> FVariant {
    match task {
        TaskKind::Binary => FVariant::Binary,
        TaskKind::MultiClass => FVariant::MultiClassMicro,
        TaskKind::MultiLabel => FVariant::MultiLabelMicro,
    }
}

/// Measure predictions on a split with the variant-matched F-measure.
pub(crate) fn measure_predictions(
    predictions: &DMatrix<i8>,
    labels: &DMatrix<i8>,
    variant: FVariant,
    beta: f64,
    ref_class: usize,
) -> Result<f64> {
    let counts = confusion(predictions, labels)?;
    let profile = error_profile(&counts)?;
    match variant {
        FVariant::Binary => f_beta_binary(&profile, beta),
        FVariant::MultiLabelMicro => ml_micro_f(&profile, beta),
        FVariant::MultiClassMicro => mc_micro_f(&profile, beta, ref_class),
    }
}

struct SweepContext<'a> {
    x_train: DMatrix<f64>,
    y_train: DMatrix<f64>,
    labels_train: DMatrix<i8>,
    x_val: DMatrix<f64>,
    labels_val: DMatrix<i8>,
    task: TaskKind,
    variant: FVariant,
    ref_class: usize,
    beta: f64,
    config: &'a SolverConfig,
}

impl<'a> SweepContext<'a> {
    fn prepare(
        ds: &Dataset,
        splits: &Splits,
        beta: f64,
        config: &'a SolverConfig,
        options: &SweepOptions,
    ) -> Result<Self> {
        validate_splits(ds, splits)?;
        config.validate()?;
        let variant = options.variant.unwrap_or_else(|| default_variant(ds.task()));
        let m = ds.n_classes();
        match variant {
            FVariant::Binary if m != 1 => {
                return Err(Error::LengthMismatch {
                    context: "binary sweep",
                    left: m,
                    right: 1,
                })
            }
            FVariant::MultiClassMicro if m < 2 => {
                return Err(Error::LengthMismatch {
                    context: "multi-class sweep",
                    left: m,
                    right: 2,
                })
            }
            _ => {}
        }
        let ref_class = match options.ref_class {
            Some(c) if c >= m => {
                return Err(Error::ClassOutOfRange {
                    index: c,
                    classes: m,
                })
            }
            Some(c) => c,
            None => class_priors(ds).argmax(),
        };
        Ok(Self {
            x_train: ds.features_at(splits.train()),
            y_train: ds.labels_at(splits.train()).map(|v| v as f64),
            labels_train: ds.labels_at(splits.train()),
            x_val: ds.features_at(splits.validation()),
            labels_val: ds.labels_at(splits.validation()),
            task: ds.task(),
            variant,
            ref_class,
            beta,
            config,
        })
    }

    fn cost_vector(&self, r: f64) -> Result<CostVector> {
        let m = self.labels_train.ncols();
        match self.variant {
            FVariant::Binary => CostVector::binary(r, self.beta),
            FVariant::MultiLabelMicro => CostVector::multi_label(r, self.beta, m),
            FVariant::MultiClassMicro => CostVector::multi_class(r, self.beta, m, self.ref_class),
        }
    }

    fn point(&self, r: f64, start: Option<DMatrix<f64>>) -> Result<SweepRecord> {
        let costs = CostMatrix::build(&self.labels_train, &self.cost_vector(r)?)?;
        let fitted = match start {
            Some(w0) => fit_from(&self.x_train, &self.y_train, &costs, self.config, w0)?,
            None => fit(&self.x_train, &self.y_train, &costs, self.config)?,
        };
        let predictions = predict(&fitted.projection, &self.x_val, self.task)?;
        let validation_f = match measure_predictions(
            &predictions,
            &self.labels_val,
            self.variant,
            self.beta,
            self.ref_class,
        ) {
            Ok(f) => Some(f),
            Err(Error::UndefinedMeasure { .. }) => None,
            Err(other) => return Err(other),
        };
        Ok(SweepRecord {
            r,
            fit: fitted,
            validation_f,
        })
    }
}

/// Compute the sweep point for a single r value.
pub fn sweep_record(
    ds: &Dataset,
    splits: &Splits,
    r: f64,
    beta: f64,
    config: &SolverConfig,
    options: &SweepOptions,
) -> Result<SweepRecord> {
    SweepContext::prepare(ds, splits, beta, config, options)?.point(r, None)
}

/// Run the full pipeline: discretize, fit one cost-sensitive model per r
/// on the training split, score each on the validation split, select the
/// best and rank features by the row norms of its projection.
///
/// Points whose validation measure is undefined are recorded but excluded
/// from selection; if every point fails the sweep errors out.
pub fn run_sweep(
    ds: &Dataset,
    splits: &Splits,
    t: usize,
    beta: f64,
    config: &SolverConfig,
    options: &SweepOptions,
) -> Result<SweepResult> {
    let context = SweepContext::prepare(ds, splits, beta, config, options)?;
    let mut records = Vec::with_capacity(t);
    let mut previous: Option<DMatrix<f64>> = None;
    for r in discretize(t, beta)? {
        let start = if options.warm_start {
            previous.clone()
        } else {
            None
        };
        let record = context.point(r, start)?;
        if options.warm_start {
            previous = Some(record.fit.projection.clone());
        }
        records.push(record);
    }
    SweepResult::assemble(records, ds.has_bias_row())
}
