//! Cost generation: from a discretized F-measure value to per-class and
//! per-sample misclassification costs.
//!
//! For a target value `r` inside `(0, 1+beta^2)`, each F-measure variant
//! induces a cost vector over the interleaved (false negative, false
//! positive) slots of the error profile. The vector is then expanded into
//! an n x m cost matrix that weights every (sample, class) residual, with
//! positive samples carrying the class's false-negative cost and negative
//! samples the false-positive cost.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Which F-measure a cost vector was generated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FVariant {
    /// Binary F_beta over a single +-1 label column.
    Binary,
    /// Multi-label micro-F over pooled per-class error terms.
    MultiLabelMicro,
    /// Multi-class micro-F with a distinguished reference class.
    MultiClassMicro,
}

/// Evenly spaced values strictly inside `(0, 1+beta^2)`.
///
/// Returns `r_i = i * (1+beta^2) / (t+1)` for `i = 1..=t`. Endpoints are
/// excluded: `r = 0` or `r = 1+beta^2` zeroes one of the two costs and
/// degenerates the reweighted column updates.
pub fn discretize(t: usize, beta: f64) -> Result<Vec<f64>> {
    if t == 0 {
        return Err(Error::InvalidParam {
            name: "t",
            reason: "need at least one discretized value".to_string(),
        });
    }
    check_beta(beta)?;
    let span = 1.0 + beta * beta;
    Ok((1..=t).map(|i| i as f64 * span / (t + 1) as f64).collect())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::InvalidParam {
            name: "beta",
            reason: format!("must be finite and positive, got {beta}"),
        });
    }
    Ok(())
}

fn check_r(r: f64, beta: f64) -> Result<()> {
    let max = 1.0 + beta * beta;
    if !r.is_finite() || r < 0.0 || r > max {
        return Err(Error::NegativeCost { r, max });
    }
    Ok(())
}

/// Per-class false-negative / false-positive costs generated from one
/// discretized F-measure value.
///
/// The layout matches the error profile: slot `2k` holds the false-negative
/// cost of class `k`, slot `2k+1` its false-positive cost.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector {
    values: Vec<f64>,
    r: f64,
    beta: f64,
    variant: FVariant,
}

impl CostVector {
    /// Costs for the binary F_beta: false negatives cost `1+beta^2-r`,
    /// false positives cost `r`.
    pub fn binary(r: f64, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        check_r(r, beta)?;
        Ok(Self {
            values: alloc::vec![1.0 + beta * beta - r, r],
            r,
            beta,
            variant: FVariant::Binary,
        })
    }

    /// Costs for the multi-label micro-F: every class's false negatives
    /// cost `1+beta^2-r`, every class's false positives cost `r`.
    pub fn multi_label(r: f64, beta: f64, m: usize) -> Result<Self> {
        check_beta(beta)?;
        check_r(r, beta)?;
        if m == 0 {
            return Err(Error::InvalidParam {
                name: "m",
                reason: "need at least one class".to_string(),
            });
        }
        let mut values = Vec::with_capacity(2 * m);
        for _ in 0..m {
            values.push(1.0 + beta * beta - r);
            values.push(r);
        }
        Ok(Self {
            values,
            r,
            beta,
            variant: FVariant::MultiLabelMicro,
        })
    }

    /// Costs for the multi-class micro-F. The reference class's false
    /// negatives cost `r`, every other class's false negatives cost
    /// `1+beta^2-r`, and all false-positive slots cost zero.
    pub fn multi_class(r: f64, beta: f64, m: usize, ref_class: usize) -> Result<Self> {
        check_beta(beta)?;
        check_r(r, beta)?;
        if m < 2 {
            return Err(Error::InvalidParam {
                name: "m",
                reason: format!("multi-class costs need m >= 2, got {m}"),
            });
        }
        if ref_class >= m {
            return Err(Error::ClassOutOfRange {
                index: ref_class,
                classes: m,
            });
        }
        let mut values = alloc::vec![0.0; 2 * m];
        for k in 0..m {
            values[2 * k] = if k == ref_class {
                r
            } else {
                1.0 + beta * beta - r
            };
        }
        Ok(Self {
            values,
            r,
            beta,
            variant: FVariant::MultiClassMicro,
        })
    }

    /// Interleaved cost slots, length `2m`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// False-negative cost of class `k`.
    pub fn false_negative_cost(&self, k: usize) -> f64 {
        self.values[2 * k]
    }

    /// False-positive cost of class `k`.
    pub fn false_positive_cost(&self, k: usize) -> f64 {
        self.values[2 * k + 1]
    }

    pub fn n_classes(&self) -> usize {
        self.values.len() / 2
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn variant(&self) -> FVariant {
        self.variant
    }
}

/// Per-sample, per-class cost weights expanded from a [`CostVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    weights: DMatrix<f64>,
}

impl CostMatrix {
    /// Expand a cost vector against an n x m matrix of +-1 labels:
    /// positive entries receive the class's false-negative cost, negative
    /// entries the false-positive cost.
    pub fn build(labels: &DMatrix<i8>, costs: &CostVector) -> Result<Self> {
        let m = labels.ncols();
        if costs.n_classes() != m {
            return Err(Error::LengthMismatch {
                context: "cost matrix",
                left: costs.n_classes(),
                right: m,
            });
        }
        let weights = DMatrix::from_fn(labels.nrows(), m, |i, k| {
            if labels[(i, k)] > 0 {
                costs.false_negative_cost(k)
            } else {
                costs.false_positive_cost(k)
            }
        });
        Ok(Self { weights })
    }

    /// A constant cost matrix; `value = 1` is the cost-blind configuration.
    pub fn constant(n: usize, m: usize, value: f64) -> Self {
        Self {
            weights: DMatrix::from_element(n, m, value),
        }
    }

    /// Wrap an explicit weight matrix; entries must be finite and
    /// non-negative.
    pub fn from_matrix(weights: DMatrix<f64>) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidParam {
                name: "costs",
                reason: format!("entries must be finite and non-negative, got {bad}"),
            });
        }
        Ok(Self { weights })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// Column `k` as an owned vector (the per-sample costs of class `k`).
    pub fn column(&self, k: usize) -> DVector<f64> {
        self.weights.column(k).into_owned()
    }

    pub fn n_samples(&self) -> usize {
        self.weights.nrows()
    }

    pub fn n_classes(&self) -> usize {
        self.weights.ncols()
    }
}
