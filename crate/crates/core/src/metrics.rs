//! Confusion counts, error profiles and F-measure variants.
//!
//! The error profile of a classifier is the 2m-vector interleaving each
//! class's false-negative and false-positive probabilities; in binary
//! classification the false-negative rate of the negative class equals the
//! false-positive rate of the positive class, so a single (FN, FP) pair
//! suffices. Every measure here is a fractional-linear function of the
//! profile, which is what makes the cost-sweep reduction work: fixing a
//! target value turns the level set into a half-space of the profile, and
//! the half-space normal is exactly the generated cost vector.
//!
//! All probabilities are empirical frequencies over the evaluated set.

use alloc::string::ToString;
use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::cost::CostVector;
use crate::dataset::ClassPriors;
use crate::error::{Error, Result};

/// Outcome counts of one one-vs-all binary subproblem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
}

impl ClassCounts {
    fn total(&self) -> usize {
        self.true_positives + self.false_positives + self.false_negatives + self.true_negatives
    }
}

/// Per-class confusion counts over n samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionCounts {
    classes: Vec<ClassCounts>,
    n: usize,
}

impl ConfusionCounts {
    /// Assemble from explicit per-class counts; every class must sum to
    /// the same sample total.
    pub fn from_counts(classes: Vec<ClassCounts>) -> Result<Self> {
        let n = classes
            .first()
            .map(ClassCounts::total)
            .ok_or(Error::InvalidParam {
                name: "classes",
                reason: "need at least one class".to_string(),
            })?;
        if n == 0 {
            return Err(Error::InvalidDataset("confusion over zero samples".to_string()));
        }
        for (k, c) in classes.iter().enumerate() {
            if c.total() != n {
                return Err(Error::LengthMismatch {
                    context: "confusion counts",
                    left: c.total(),
                    right: k,
                });
            }
        }
        Ok(Self { classes, n })
    }

    pub fn per_class(&self) -> &[ClassCounts] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn n_samples(&self) -> usize {
        self.n
    }
}

/// Compare +-1 predictions against +-1 labels, per class.
pub fn confusion(predictions: &DMatrix<i8>, labels: &DMatrix<i8>) -> Result<ConfusionCounts> {
    if predictions.shape() != labels.shape() {
        return Err(Error::ShapeMismatch {
            context: "confusion",
            expected_rows: labels.nrows(),
            expected_cols: labels.ncols(),
            rows: predictions.nrows(),
            cols: predictions.ncols(),
        });
    }
    let (n, m) = labels.shape();
    for matrix in [predictions, labels] {
        for s in 0..n {
            for k in 0..m {
                let v = matrix[(s, k)];
                if v != 1 && v != -1 {
                    return Err(Error::LabelDomain {
                        sample: s,
                        class: k,
                        value: v as i64,
                    });
                }
            }
        }
    }
    let classes = (0..m)
        .map(|k| {
            let mut c = ClassCounts {
                true_positives: 0,
                false_positives: 0,
                false_negatives: 0,
                true_negatives: 0,
            };
            for s in 0..n {
                match (labels[(s, k)] == 1, predictions[(s, k)] == 1) {
                    (true, true) => c.true_positives += 1,
                    (false, true) => c.false_positives += 1,
                    (true, false) => c.false_negatives += 1,
                    (false, false) => c.true_negatives += 1,
                }
            }
            c
        })
        .collect();
    ConfusionCounts::from_counts(classes)
}

/// Interleaved per-class (FN, FP) probabilities together with the class
/// priors they were measured against.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorProfile {
    values: Vec<f64>,
    priors: ClassPriors,
}

impl ErrorProfile {
    /// Build a profile from raw values, checking `0 <= FN_k <= P_k` and
    /// `0 <= FP_k <= 1 - P_k` (up to rounding).
    pub fn new(values: Vec<f64>, priors: ClassPriors) -> Result<Self> {
        if values.len() != 2 * priors.n_classes() {
            return Err(Error::LengthMismatch {
                context: "error profile",
                left: values.len(),
                right: 2 * priors.n_classes(),
            });
        }
        const SLACK: f64 = 1e-12;
        for k in 0..priors.n_classes() {
            let p = priors.get(k);
            let fn_rate = values[2 * k];
            let fp_rate = values[2 * k + 1];
            if fn_rate < -SLACK || fn_rate > p + SLACK || fp_rate < -SLACK || fp_rate > 1.0 - p + SLACK
            {
                return Err(Error::InvalidParam {
                    name: "error_profile",
                    reason: alloc::format!(
                        "class {k}: FN={fn_rate}, FP={fp_rate} incompatible with prior {p}"
                    ),
                });
            }
        }
        Ok(Self { values, priors })
    }

    pub fn false_negative(&self, k: usize) -> f64 {
        self.values[2 * k]
    }

    pub fn false_positive(&self, k: usize) -> f64 {
        self.values[2 * k + 1]
    }

    /// Interleaved values (FN_1, FP_1, ..., FN_m, FP_m).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn priors(&self) -> &ClassPriors {
        &self.priors
    }

    pub fn n_classes(&self) -> usize {
        self.priors.n_classes()
    }
}

/// Empirical error profile of confusion counts.
pub fn error_profile(counts: &ConfusionCounts) -> Result<ErrorProfile> {
    let n = counts.n_samples() as f64;
    let mut values = Vec::with_capacity(2 * counts.n_classes());
    let mut priors = Vec::with_capacity(counts.n_classes());
    for c in counts.per_class() {
        values.push(c.false_negatives as f64 / n);
        values.push(c.false_positives as f64 / n);
        priors.push((c.true_positives + c.false_negatives) as f64 / n);
    }
    ErrorProfile::new(values, ClassPriors::new(priors)?)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::InvalidParam {
            name: "beta",
            reason: alloc::format!("must be finite and positive, got {beta}"),
        });
    }
    Ok(())
}

/// Binary F_beta as a function of the error profile:
/// `(1+b^2)(P1 - FN) / ((1+b^2) P1 - FN + FP)`.
///
/// A non-positive denominator (no positives and none predicted) makes the
/// measure undefined and is reported as an error rather than 0 or NaN.
pub fn f_beta_binary(profile: &ErrorProfile, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if profile.n_classes() != 1 {
        return Err(Error::LengthMismatch {
            context: "binary F-measure",
            left: profile.n_classes(),
            right: 1,
        });
    }
    let b2 = 1.0 + beta * beta;
    let p = profile.priors().get(0);
    let denominator = b2 * p - profile.false_negative(0) + profile.false_positive(0);
    if denominator <= 0.0 {
        return Err(Error::UndefinedMeasure {
            measure: "binary F",
            denominator,
        });
    }
    Ok(b2 * (p - profile.false_negative(0)) / denominator)
}

/// Multi-label micro-F over pooled per-class error terms.
pub fn ml_micro_f(profile: &ErrorProfile, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let b2 = 1.0 + beta * beta;
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for k in 0..profile.n_classes() {
        let p = profile.priors().get(k);
        numerator += p - profile.false_negative(k);
        denominator += b2 * p - profile.false_negative(k) + profile.false_positive(k);
    }
    if denominator <= 0.0 {
        return Err(Error::UndefinedMeasure {
            measure: "multi-label micro-F",
            denominator,
        });
    }
    Ok(b2 * numerator / denominator)
}

/// Multi-class micro-F with `ref_class` in the distinguished role.
///
/// The measure treats the rest-vs-reference errors asymmetrically: only
/// false negatives of the non-reference classes and the reference class's
/// own false-negative mass enter. Which class is distinguished is a
/// caller choice; the class with the largest prior is the usual default.
pub fn mc_micro_f(profile: &ErrorProfile, beta: f64, ref_class: usize) -> Result<f64> {
    check_beta(beta)?;
    let m = profile.n_classes();
    if m < 2 {
        return Err(Error::LengthMismatch {
            context: "multi-class micro-F",
            left: m,
            right: 2,
        });
    }
    if ref_class >= m {
        return Err(Error::ClassOutOfRange {
            index: ref_class,
            classes: m,
        });
    }
    let b2 = 1.0 + beta * beta;
    let p_ref = profile.priors().get(ref_class);
    let fn_rest: f64 = (0..m)
        .filter(|&k| k != ref_class)
        .map(|k| profile.false_negative(k))
        .sum();
    let denominator = b2 * (1.0 - p_ref) - fn_rest + profile.false_negative(ref_class);
    if denominator <= 0.0 {
        return Err(Error::UndefinedMeasure {
            measure: "multi-class micro-F",
            denominator,
        });
    }
    Ok(b2 * (1.0 - p_ref - fn_rest) / denominator)
}

/// Unweighted mean of the per-class binary F_beta values.
pub fn macro_f(counts: &ConfusionCounts, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let n = counts.n_samples() as f64;
    let b2 = 1.0 + beta * beta;
    let mut sum = 0.0;
    for c in counts.per_class() {
        let p = (c.true_positives + c.false_negatives) as f64 / n;
        let fn_rate = c.false_negatives as f64 / n;
        let fp_rate = c.false_positives as f64 / n;
        let denominator = b2 * p - fn_rate + fp_rate;
        if denominator <= 0.0 {
            return Err(Error::UndefinedMeasure {
                measure: "macro-F",
                denominator,
            });
        }
        sum += b2 * (p - fn_rate) / denominator;
    }
    Ok(sum / counts.n_classes() as f64)
}

/// Total misclassification cost `<a, e>` of a profile under a cost vector.
pub fn total_cost(costs: &CostVector, profile: &ErrorProfile) -> Result<f64> {
    if costs.values().len() != profile.values().len() {
        return Err(Error::LengthMismatch {
            context: "total cost",
            left: costs.values().len(),
            right: profile.values().len(),
        });
    }
    Ok(costs
        .values()
        .iter()
        .zip(profile.values())
        .map(|(a, e)| a * e)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn profile(values: Vec<f64>, priors: Vec<f64>) -> ErrorProfile {
        ErrorProfile::new(values, ClassPriors::new(priors).unwrap()).unwrap()
    }

    /// A random profile with valid FN/FP ranges for the given priors.
    fn random_profile(rng: &mut ChaCha8Rng, priors: &[f64]) -> ErrorProfile {
        let values = priors
            .iter()
            .flat_map(|&p| {
                [
                    rng.random_range(0.0..=p.max(f64::MIN_POSITIVE)).min(p),
                    rng.random_range(0.0..=(1.0 - p).max(f64::MIN_POSITIVE))
                        .min(1.0 - p),
                ]
            })
            .collect();
        profile(values, priors.to_vec())
    }

    #[test]
    fn confusion_identity_has_no_errors() {
        let labels = DMatrix::from_column_slice(4, 1, &[1i8, -1, 1, -1]);
        let c = confusion(&labels, &labels).unwrap();
        assert_eq!(c.per_class()[0].false_positives, 0);
        assert_eq!(c.per_class()[0].false_negatives, 0);
        assert_eq!(c.per_class()[0].true_positives, 2);
        assert_eq!(c.per_class()[0].true_negatives, 2);
    }

    #[test]
    fn confusion_total_disagreement() {
        let labels = DMatrix::from_column_slice(4, 1, &[1i8, -1, 1, -1]);
        let flipped = labels.map(|v| -v);
        let c = confusion(&flipped, &labels).unwrap();
        assert_eq!(c.per_class()[0].true_positives, 0);
        assert_eq!(c.per_class()[0].true_negatives, 0);
        assert_eq!(c.per_class()[0].false_positives, 2);
        assert_eq!(c.per_class()[0].false_negatives, 2);
    }

    #[test]
    fn confusion_hand_enumerated_counts() {
        // 10 binary pairs built to give tp=3, fp=1, fn=1, tn=5
        let labels = DMatrix::from_column_slice(10, 1, &[1i8, 1, 1, 1, -1, -1, -1, -1, -1, -1]);
        let predictions =
            DMatrix::from_column_slice(10, 1, &[1i8, 1, 1, -1, 1, -1, -1, -1, -1, -1]);
        let c = confusion(&predictions, &labels).unwrap();
        let cc = c.per_class()[0];
        assert_eq!(
            (
                cc.true_positives,
                cc.false_positives,
                cc.false_negatives,
                cc.true_negatives
            ),
            (3, 1, 1, 5)
        );
        assert_eq!(c.n_samples(), 10);
    }

    #[test]
    fn zero_sample_counts_rejected() {
        let empty = ClassCounts {
            true_positives: 0,
            false_positives: 0,
            false_negatives: 0,
            true_negatives: 0,
        };
        assert!(ConfusionCounts::from_counts(vec![empty]).is_err());
    }

    #[test]
    fn confusion_rejects_shape_mismatch() {
        let labels = DMatrix::from_element(4, 1, 1i8);
        let predictions = DMatrix::from_element(3, 1, 1i8);
        assert!(confusion(&predictions, &labels).is_err());
    }

    #[test]
    fn error_profile_from_hand_counts() {
        let counts = ConfusionCounts::from_counts(vec![ClassCounts {
            true_positives: 3,
            false_positives: 1,
            false_negatives: 1,
            true_negatives: 5,
        }])
        .unwrap();
        let e = error_profile(&counts).unwrap();
        assert_eq!(e.values(), &[0.1, 0.1]);
        assert_eq!(e.priors().values(), &[0.4]);
    }

    #[test]
    fn error_profile_zero_errors() {
        let counts = ConfusionCounts::from_counts(vec![ClassCounts {
            true_positives: 4,
            false_positives: 0,
            false_negatives: 0,
            true_negatives: 6,
        }])
        .unwrap();
        let e = error_profile(&counts).unwrap();
        assert_eq!(e.values(), &[0.0, 0.0]);
    }

    #[test]
    fn error_profile_interleaves_two_classes() {
        let counts = ConfusionCounts::from_counts(vec![
            ClassCounts {
                true_positives: 5,
                false_positives: 2,
                false_negatives: 1,
                true_negatives: 12,
            },
            ClassCounts {
                true_positives: 8,
                false_positives: 3,
                false_negatives: 4,
                true_negatives: 5,
            },
        ])
        .unwrap();
        let e = error_profile(&counts).unwrap();
        // layout (FN1, FP1, FN2, FP2) over n = 20
        assert_eq!(e.values(), &[0.05, 0.1, 0.2, 0.15]);
    }

    #[test]
    fn binary_f_perfect_classifier() {
        let e = profile(vec![0.0, 0.0], vec![0.4]);
        assert_eq!(f_beta_binary(&e, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn binary_f_cross_checks_classical_form() {
        // same counts as the hand-enumerated confusion: tp=3, fp=1, fn=1
        let e = profile(vec![0.1, 0.1], vec![0.4]);
        let f = f_beta_binary(&e, 1.0).unwrap();
        let classical = 2.0 * 3.0 / (2.0 * 3.0 + 1.0 + 1.0);
        assert_abs_diff_eq!(f, classical, epsilon = 1e-15);
        assert_abs_diff_eq!(f, 0.75, epsilon = 1e-15);
    }

    #[test]
    fn binary_f_zero_when_all_positives_missed() {
        let e = profile(vec![0.4, 0.05], vec![0.4]);
        assert_eq!(f_beta_binary(&e, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn binary_f_undefined_is_typed_error() {
        let e = profile(vec![0.0, 0.0], vec![0.0]);
        assert!(matches!(
            f_beta_binary(&e, 1.0),
            Err(Error::UndefinedMeasure { .. })
        ));
    }

    #[test]
    fn ml_micro_reduces_to_binary_for_one_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let p = rng.random_range(0.05..0.95);
            let e = random_profile(&mut rng, &[p]);
            let a = ml_micro_f(&e, 1.0).unwrap();
            let b = f_beta_binary(&e, 1.0).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn ml_micro_perfect_is_one() {
        let e = profile(vec![0.0, 0.0, 0.0, 0.0], vec![0.4, 0.3]);
        assert_eq!(ml_micro_f(&e, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn ml_micro_hand_arithmetic() {
        let e = profile(vec![0.1, 0.1, 0.05, 0.05], vec![0.4, 0.3]);
        // 2*(0.3 + 0.25) / (2*0.7 + 0.15 - 0.15) = 1.1 / 1.4
        assert_abs_diff_eq!(ml_micro_f(&e, 1.0).unwrap(), 1.1 / 1.4, epsilon = 1e-15);
    }

    #[test]
    fn mc_micro_zero_error_is_one() {
        let e = profile(vec![0.0, 0.0, 0.0, 0.0], vec![0.6, 0.4]);
        assert_eq!(mc_micro_f(&e, 1.0, 0).unwrap(), 1.0);
    }

    #[test]
    fn mc_micro_hand_arithmetic() {
        let e = profile(vec![0.1, 0.0, 0.05, 0.0], vec![0.6, 0.4]);
        // 2*(0.4 - 0.05) / (2*0.4 - 0.05 + 0.1) = 0.7 / 0.85
        assert_abs_diff_eq!(mc_micro_f(&e, 1.0, 0).unwrap(), 0.7 / 0.85, epsilon = 1e-15);
    }

    #[test]
    fn mc_micro_matches_binary_on_other_class() {
        // with m = 2, misclassifying class 1 means predicting class 2, so
        // FP of class 2 equals FN of class 1; the measure with class 1 in
        // the reference slot equals binary F treating class 2 as positive
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let p1 = rng.random_range(0.1..0.9);
            let p2 = 1.0 - p1;
            let fn1 = rng.random_range(0.0..p1);
            let fn2 = rng.random_range(0.0..p2);
            let e = profile(vec![fn1, fn2, fn2, fn1], vec![p1, p2]);
            let mc = mc_micro_f(&e, 1.0, 0).unwrap();
            let bin = profile(vec![fn2, fn1], vec![p2]);
            let f = f_beta_binary(&bin, 1.0).unwrap();
            assert_abs_diff_eq!(mc, f, epsilon = 1e-12);
        }
    }

    #[test]
    fn mc_micro_zero_numerator() {
        let p1 = 0.6;
        let e = profile(vec![0.0, 0.0, 1.0 - p1, 0.0], vec![p1, 0.4]);
        assert_eq!(mc_micro_f(&e, 1.0, 0).unwrap(), 0.0);
    }

    #[test]
    fn mc_micro_rejects_bad_reference() {
        let e = profile(vec![0.0, 0.0, 0.0, 0.0], vec![0.6, 0.4]);
        assert!(matches!(
            mc_micro_f(&e, 1.0, 2),
            Err(Error::ClassOutOfRange { .. })
        ));
    }

    #[test]
    fn macro_f_perfect_and_mean() {
        let perfect = ConfusionCounts::from_counts(vec![
            ClassCounts {
                true_positives: 4,
                false_positives: 0,
                false_negatives: 0,
                true_negatives: 6,
            },
            ClassCounts {
                true_positives: 6,
                false_positives: 0,
                false_negatives: 0,
                true_negatives: 4,
            },
        ])
        .unwrap();
        assert_eq!(macro_f(&perfect, 1.0).unwrap(), 1.0);

        // per-class F values 0.75 and 0.25 average to 0.5
        let mixed = ConfusionCounts::from_counts(vec![
            ClassCounts {
                true_positives: 3,
                false_positives: 1,
                false_negatives: 1,
                true_negatives: 5,
            },
            ClassCounts {
                true_positives: 1,
                false_positives: 3,
                false_negatives: 3,
                true_negatives: 3,
            },
        ])
        .unwrap();
        assert_abs_diff_eq!(macro_f(&mixed, 1.0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn macro_f_single_class_equals_binary() {
        let counts = ConfusionCounts::from_counts(vec![ClassCounts {
            true_positives: 3,
            false_positives: 1,
            false_negatives: 1,
            true_negatives: 5,
        }])
        .unwrap();
        let e = error_profile(&counts).unwrap();
        assert_eq!(
            macro_f(&counts, 1.0).unwrap(),
            f_beta_binary(&e, 1.0).unwrap()
        );
    }

    #[test]
    fn total_cost_dot_product() {
        let a = CostVector::binary(0.5, 1.0).unwrap(); // (1.5, 0.5)
        let e = profile(vec![0.1, 0.1], vec![0.4]);
        assert_abs_diff_eq!(total_cost(&a, &e).unwrap(), 0.2, epsilon = 1e-15);

        let zero = profile(vec![0.0, 0.0], vec![0.4]);
        assert_eq!(total_cost(&a, &zero).unwrap(), 0.0);

        // equal costs recover the total error rate
        let equal = CostVector::binary(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(total_cost(&equal, &e).unwrap(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn total_cost_rejects_length_mismatch() {
        let a = CostVector::multi_label(0.5, 1.0, 2).unwrap();
        let e = profile(vec![0.1, 0.1], vec![0.4]);
        assert!(total_cost(&a, &e).is_err());
    }

    #[test]
    fn all_measures_stay_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10_000 {
            let p1 = rng.random_range(0.02..0.98);
            let e = random_profile(&mut rng, &[p1]);
            if let Ok(f) = f_beta_binary(&e, 1.0) {
                assert!((0.0..=1.0).contains(&f), "binary F out of range: {f}");
            }
            let p2 = rng.random_range(0.02..(1.0 - p1).clamp(0.03, 0.98));
            let ml = random_profile(&mut rng, &[p1, p2]);
            if let Ok(f) = ml_micro_f(&ml, 1.0) {
                assert!((0.0..=1.0).contains(&f), "micro F out of range: {f}");
            }
            // multi-class profiles: priors sum to one, FN bounded by priors
            let mc = random_profile(&mut rng, &[p1, 1.0 - p1]);
            if let Ok(f) = mc_micro_f(&mc, 1.0, 0) {
                assert!((0.0..=1.0).contains(&f), "mc F out of range: {f}");
            }
        }
    }

    #[test]
    fn level_set_worked_point() {
        // at e = (0.1, 0.1), P1 = 0.4, beta = 1, r = 0.75 both sides meet at 0.2
        let e = profile(vec![0.1, 0.1], vec![0.4]);
        let r = 0.75;
        let lhs = (2.0 - r) * 0.1 + r * 0.1;
        let rhs = 2.0 * 0.4 * (1.0 - r);
        assert_abs_diff_eq!(lhs, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(rhs, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(f_beta_binary(&e, 1.0).unwrap(), r, epsilon = 1e-15);
    }

    #[test]
    fn level_set_equivalence_random_profiles() {
        // F(e) <= r  iff  (1+b^2-r) FN + r FP >= (1+b^2) P1 (1-r)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5_000 {
            let p = rng.random_range(0.05..0.95);
            let e = random_profile(&mut rng, &[p]);
            let r = rng.random_range(f64::MIN_POSITIVE..2.0);
            let f = f_beta_binary(&e, 1.0).unwrap();
            let lhs = (2.0 - r) * e.false_negative(0) + r * e.false_positive(0);
            let rhs = 2.0 * p * (1.0 - r);
            let margin = lhs - rhs;
            if margin.abs() > 1e-12 {
                assert_eq!(f <= r, margin >= 0.0, "F={f}, r={r}, margin={margin}");
            }
        }
    }

    #[test]
    fn high_f_means_low_total_cost() {
        // {e : F(e) >= r} equals {e : <a(r), e> <= (1+b^2) P1 (1-r)}
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5_000 {
            let p = rng.random_range(0.05..0.95);
            let e = random_profile(&mut rng, &[p]);
            let r = rng.random_range(f64::MIN_POSITIVE..2.0);
            let a = CostVector::binary(r, 1.0).unwrap();
            let f = f_beta_binary(&e, 1.0).unwrap();
            let cost = total_cost(&a, &e).unwrap();
            let budget = 2.0 * p * (1.0 - r);
            if (cost - budget).abs() > 1e-12 {
                assert_eq!(f >= r, cost <= budget, "F={f}, r={r}");
            }
        }
    }
}
