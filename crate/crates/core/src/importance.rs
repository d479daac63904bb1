//! Term effects and importances.
//!
//! The effect of a term is its mean absolute deviation from its own mean over
//! the rows of a dataset, divided by the target's mean absolute deviation.
//! Importances are effects divided by their sum, so a term's importance is its
//! share of the variation the model attributes to all terms combined.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::data::Dataset;
use crate::error::{check_dims, Error, Result};
use crate::model::{Cga2mModel, TermId};
use crate::scalar::{mean, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceReport<T> {
    pub effect_uni: BTreeMap<usize, T>,
    pub effect_pair: BTreeMap<(usize, usize), T>,
    /// Zero when the model has no higher-order term.
    pub effect_high: T,
    pub effect_all: T,
    pub importance_uni: BTreeMap<usize, T>,
    pub importance_pair: BTreeMap<(usize, usize), T>,
    pub importance_high: T,
    /// Mean output of every present term over the dataset.
    pub term_means: BTreeMap<TermId, T>,
    pub target_mean: T,
    /// Set when every effect is zero; importances are then all reported as zero.
    pub all_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermImportance<T> {
    pub term: TermId,
    pub effect: T,
    pub importance: T,
}

impl<T: Scalar> ImportanceReport<T> {
    pub fn effect(&self, term: TermId) -> Option<T> {
        match term {
            TermId::Univariate(i) => self.effect_uni.get(&i).copied(),
            TermId::Pairwise(i, j) => self.effect_pair.get(&(i, j)).copied(),
            TermId::Higher => self
                .term_means
                .contains_key(&TermId::Higher)
                .then_some(self.effect_high),
        }
    }

    pub fn importance(&self, term: TermId) -> Option<T> {
        match term {
            TermId::Univariate(i) => self.importance_uni.get(&i).copied(),
            TermId::Pairwise(i, j) => self.importance_pair.get(&(i, j)).copied(),
            TermId::Higher => self
                .term_means
                .contains_key(&TermId::Higher)
                .then_some(self.importance_high),
        }
    }

    /// Every term of the model, most important first. Ties keep term order.
    pub fn ranked(&self) -> Vec<TermImportance<T>> {
        let mut rows: Vec<TermImportance<T>> = self
            .term_means
            .keys()
            .map(|&term| TermImportance {
                term,
                effect: self.effect(term).unwrap_or_else(T::zero),
                importance: self.importance(term).unwrap_or_else(T::zero),
            })
            .collect();
        rows.sort_by(|a, b| {
            b.importance
                .partial_cmp(&a.importance)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        rows
    }

    pub fn importance_sum(&self) -> T {
        self.importance_uni.values().copied().sum::<T>()
            + self.importance_pair.values().copied().sum::<T>()
            + self.importance_high
    }

    /// `term_id,kind,effect,importance` rows sorted by importance, descending.
    pub fn to_csv(&self, feature_names: &[String]) -> String {
        let mut out = String::from("term_id,kind,effect,importance\n");
        for row in self.ranked() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                row.term.label(feature_names),
                row.term.kind(),
                row.effect,
                row.importance
            );
        }
        out
    }
}

/// Computes every term's effect and importance over `data`.
///
/// Fails with [`Error::DegenerateTarget`] when the target is constant.
pub fn compute_effects<T: Scalar>(
    model: &Cga2mModel<T>,
    data: &Dataset<T>,
) -> Result<ImportanceReport<T>> {
    check_dims(model.n_features(), data.n_features())?;
    let target = data.target();
    let target_mean = mean(target);
    let spread: T = target.iter().map(|&y| (y - target_mean).abs()).sum();
    if spread.is_nan() || spread <= T::zero() {
        return Err(Error::DegenerateTarget);
    }

    let mut report = ImportanceReport {
        effect_uni: BTreeMap::new(),
        effect_pair: BTreeMap::new(),
        effect_high: T::zero(),
        effect_all: T::zero(),
        importance_uni: BTreeMap::new(),
        importance_pair: BTreeMap::new(),
        importance_high: T::zero(),
        term_means: BTreeMap::new(),
        target_mean,
        all_zero: false,
    };
    for (id, shape) in model.terms() {
        let values = shape.eval_dataset(data);
        let term_mean = mean(&values);
        let deviation: T = values.iter().map(|&v| (v - term_mean).abs()).sum();
        let effect = deviation / spread;
        report.term_means.insert(id, term_mean);
        match id {
            TermId::Univariate(i) => {
                report.effect_uni.insert(i, effect);
            }
            TermId::Pairwise(i, j) => {
                report.effect_pair.insert((i, j), effect);
            }
            TermId::Higher => report.effect_high = effect,
        }
    }

    report.effect_all = report.effect_uni.values().copied().sum::<T>()
        + report.effect_pair.values().copied().sum::<T>()
        + report.effect_high;
    report.all_zero = report.effect_all.is_nan() || report.effect_all <= T::zero();
    let share = |effect: T| {
        if report.all_zero {
            T::zero()
        } else {
            effect / report.effect_all
        }
    };
    report.importance_uni = report
        .effect_uni
        .iter()
        .map(|(&k, &e)| (k, share(e)))
        .collect();
    report.importance_pair = report
        .effect_pair
        .iter()
        .map(|(&k, &e)| (k, share(e)))
        .collect();
    report.importance_high = share(report.effect_high);
    Ok(report)
}

/// Importance of the higher-order term, zero when the model has none.
///
/// This is the model's interpretation-validity score: the lower it is, the
/// more of the explained variation is carried by the inspectable univariate
/// and pairwise terms.
pub fn importance_of_higher<T: Scalar>(report: &ImportanceReport<T>) -> T {
    report.importance_high
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boosting::ShapeFunction;
    use crate::model::MonotonicityConfig;
    use crate::tree::{MonotoneDirection::Free, TreeNode};

    /// A univariate term that reproduces `x` at the listed points.
    fn step_term(xs: &[f64], values: &[f64]) -> ShapeFunction<f64> {
        // Left-nested chain: x <= xs[0] -> values[0], x <= xs[1] -> values[1], ...
        let mut node = TreeNode::leaf(*values.last().unwrap());
        for k in (0..xs.len() - 1).rev() {
            node = TreeNode::split(0, xs[k], TreeNode::leaf(values[k]), node);
        }
        ShapeFunction::new(vec![0], vec![node], 1.0, vec![Free]).unwrap()
    }

    #[test]
    fn single_term_effect() {
        let data =
            Dataset::from_rows(&[vec![1.0], vec![2.0], vec![3.0]], vec![1.0, 2.0, 3.0]).unwrap();
        let mut m = Cga2mModel::new(0.0, vec!["x0".into()], MonotonicityConfig::free(1)).unwrap();
        m.insert_term(
            TermId::Univariate(0),
            step_term(&[1.0, 2.0, 3.0], &[0.5, 1.0, 1.5]),
        )
        .unwrap();
        let r = compute_effects(&m, &data).unwrap();
        assert_eq!(r.term_means[&TermId::Univariate(0)], 1.0);
        assert_eq!(r.effect_uni[&0], 0.5);
        assert_eq!(r.importance_uni[&0], 1.0);
        assert_eq!(importance_of_higher(&r), 0.0);
    }

    #[test]
    fn zero_model_warns() {
        let data = Dataset::from_rows(&[vec![1.0], vec![2.0]], vec![1.0, 2.0]).unwrap();
        let mut m = Cga2mModel::new(0.0, vec!["x0".into()], MonotonicityConfig::free(1)).unwrap();
        m.insert_term(TermId::Univariate(0), step_term(&[1.0], &[0.0]))
            .unwrap();
        let r = compute_effects(&m, &data).unwrap();
        assert!(r.all_zero);
        assert_eq!(r.importance_uni[&0], 0.0);
        assert_eq!(r.importance_sum(), 0.0);
    }

    #[test]
    fn constant_target_is_degenerate() {
        let data = Dataset::from_rows(&[vec![1.0], vec![2.0]], vec![4.0, 4.0]).unwrap();
        let m = Cga2mModel::new(4.0, vec!["x0".into()], MonotonicityConfig::free(1)).unwrap();
        assert!(matches!(
            compute_effects(&m, &data),
            Err(Error::DegenerateTarget)
        ));
    }

    #[test]
    fn ratio_of_two_terms() {
        // Term 0 deviates by 0.3 * spread, term 1 by 0.1 * spread.
        let xs = [1.0, 2.0];
        let data = Dataset::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0]], vec![0.0, 1.0]).unwrap();
        let mut m = Cga2mModel::new(
            0.0,
            vec!["a".into(), "b".into()],
            MonotonicityConfig::free(2),
        )
        .unwrap();
        m.insert_term(TermId::Univariate(0), step_term(&xs, &[-0.15, 0.15]))
            .unwrap();
        let t1 = step_term(&xs, &[-0.05, 0.05]);
        let t1 = ShapeFunction::new(vec![1], t1.trees().to_vec(), 1.0, vec![Free]).unwrap();
        m.insert_term(TermId::Univariate(1), t1).unwrap();
        let r = compute_effects(&m, &data).unwrap();
        assert!((r.effect_uni[&0] - 0.3).abs() < 1e-12);
        assert!((r.effect_uni[&1] - 0.1).abs() < 1e-12);
        assert!((r.importance_uni[&0] - 0.75).abs() < 1e-12);
        assert!((r.importance_uni[&1] - 0.25).abs() < 1e-12);
        let csv = r.to_csv(m.feature_names());
        assert!(
            csv.starts_with("term_id,kind,effect,importance\na,uni,"),
            "{csv}"
        );
    }

    #[test]
    fn higher_only_gives_unit_importance() {
        let data = Dataset::from_rows(&[vec![1.0], vec![2.0]], vec![0.0, 1.0]).unwrap();
        let mut m = Cga2mModel::new(0.0, vec!["x0".into()], MonotonicityConfig::free(1)).unwrap();
        m.insert_term(TermId::Higher, step_term(&[1.0, 2.0], &[0.0, 1.0]))
            .unwrap();
        let r = compute_effects(&m, &data).unwrap();
        assert_eq!(r.effect_high, r.effect_all);
        assert_eq!(importance_of_higher(&r), 1.0);
    }
}
