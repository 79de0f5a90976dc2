//! Feature selection for class-imbalanced data by F-measure optimization.
//!
//! Plain regression-based feature selectors score features under equal
//! misclassification costs, which biases the selection towards majority
//! classes. This crate instead sweeps a discretized range of target
//! F-measure values, turns each value into per-class false-negative /
//! false-positive costs, fits one cost-sensitive l2,1-regularized linear
//! model per value, keeps the model with the best validation F-measure,
//! and ranks features by the row norms of its projection matrix.
//!
//! The pieces are usable on their own:
//!
//! - [`dataset`]: dataset container, splits, priors, bias augmentation and
//!   a synthetic imbalanced-data generator.
//! - [`metrics`]: confusion counts, error profiles, binary / micro / macro
//!   F-measures and total misclassification cost.
//! - [`cost`]: cost-vector generation per F-measure variant and expansion
//!   into per-sample cost matrices.
//! - [`solver`]: the iteratively reweighted solver with closed-form column
//!   updates for the cost-sensitive l2,1 objective.
//! - [`sweep`]: the end-to-end sweep, prediction rules and feature ranking.
//! - [`eval`]: downstream verification with a ridge classifier and the
//!   equal-cost baseline for head-to-head comparisons.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature enables the standard library for convenience. File formats and
//! the command-line front end live in the companion `fmsel-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod cost;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod metrics;
pub mod solver;
pub mod sweep;

pub use cost::{discretize, CostMatrix, CostVector, FVariant};
pub use dataset::{
    append_bias, class_priors, gen_synthetic_binary, split, ClassPriors, Dataset, FeatureGen,
    Splits, SynthConfig, TaskKind,
};
pub use error::{Error, Result};
pub use eval::{
    baseline_equal_cost, baseline_equal_cost_with, compare_report, downstream_eval,
    equal_cost_ranking, CompareRecord, EvalReport, Method,
};
pub use metrics::{
    confusion, error_profile, f_beta_binary, macro_f, mc_micro_f, ml_micro_f, total_cost,
    ConfusionCounts, ErrorProfile,
};
pub use solver::{fit, objective, smoothed_objective, FitResult, SolverConfig};
pub use sweep::{predict, rank_features, run_sweep, select_top_k, SweepOptions, SweepResult};
