//! Gradient-boosted shape functions over a fixed feature subset.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{check_dims, Error, Result};
use crate::scalar::Scalar;
use crate::tree::{grow_tree, FeatureView, MonotoneDirection, PresortedView, TreeNode, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParams<T> {
    pub rounds: usize,
    pub shrinkage: T,
    pub tree: TreeParams<T>,
    /// Rounds without validation improvement before stopping; `0` disables
    /// early stopping.
    pub early_stop_patience: usize,
}

impl<T: Scalar> BoostParams<T> {
    pub fn with_max_leaves(max_leaves: usize) -> Self {
        Self {
            rounds: 100,
            shrinkage: T::of(0.1),
            tree: TreeParams::new(max_leaves, 20),
            early_stop_patience: 10,
        }
    }

    pub fn univariate() -> Self {
        Self::with_max_leaves(8)
    }

    pub fn pairwise() -> Self {
        Self::with_max_leaves(16)
    }

    pub fn higher_order() -> Self {
        Self::with_max_leaves(31)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidParameter("rounds must be positive".into()));
        }
        if !(self.shrinkage > T::zero() && self.shrinkage <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "shrinkage {} outside (0, 1]",
                self.shrinkage
            )));
        }
        self.tree.validate()
    }
}

impl<T: Scalar> Default for BoostParams<T> {
    fn default() -> Self {
        Self::univariate()
    }
}

/// A boosted ensemble realizing one additive term over `subset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeFunction<T> {
    subset: Vec<usize>,
    trees: Vec<TreeNode<T>>,
    shrinkage: T,
    directions: Vec<MonotoneDirection>,
}

impl<T: Scalar> ShapeFunction<T> {
    pub fn new(
        subset: Vec<usize>,
        trees: Vec<TreeNode<T>>,
        shrinkage: T,
        directions: Vec<MonotoneDirection>,
    ) -> Result<Self> {
        check_subset(&subset, usize::MAX)?;
        check_dims(subset.len(), directions.len())?;
        if !(shrinkage > T::zero() && shrinkage <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "shrinkage {shrinkage} outside (0, 1]"
            )));
        }
        for tree in &trees {
            tree.validate(subset.len())?;
        }
        Ok(Self {
            subset,
            trees,
            shrinkage,
            directions,
        })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn trees(&self) -> &[TreeNode<T>] {
        &self.trees
    }

    pub fn shrinkage(&self) -> T {
        self.shrinkage
    }

    pub fn directions(&self) -> &[MonotoneDirection] {
        &self.directions
    }

    /// Evaluates the ensemble on `row`, given in subset order.
    pub fn eval(&self, row: &[T]) -> Result<T> {
        check_dims(self.subset.len(), row.len())?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(self.eval_with(|f| row[f]))
    }

    /// Evaluates the ensemble on a full-width row, picking out the subset.
    pub(crate) fn eval_full_row(&self, row: &[T]) -> T {
        self.eval_with(|f| row[self.subset[f]])
    }

    fn eval_with(&self, value_of: impl Fn(usize) -> T + Copy) -> T {
        self.trees.iter().fold(T::zero(), |acc, tree| {
            acc + self.shrinkage * tree.route(value_of)
        })
    }

    /// Evaluates every row of `data`. Bit-identical to calling [`Self::eval`]
    /// row by row.
    pub fn eval_dataset(&self, data: &Dataset<T>) -> Vec<T> {
        let columns: Vec<&[T]> = self.subset.iter().map(|&i| data.column(i)).collect();
        let mut out = vec![T::zero(); data.n_samples()];
        for tree in &self.trees {
            for (n, acc) in out.iter_mut().enumerate() {
                *acc = *acc + self.shrinkage * tree.route(|f| columns[f][n]);
            }
        }
        out
    }
}

/// Shorthand for [`ShapeFunction::eval`].
pub fn eval_shape<T: Scalar>(shape: &ShapeFunction<T>, row: &[T]) -> Result<T> {
    shape.eval(row)
}

/// Held-out data and the residual targets early stopping is measured against.
#[derive(Debug, Clone, Copy)]
pub struct Validation<'a, T> {
    pub data: &'a Dataset<T>,
    pub targets: &'a [T],
}

fn check_subset(subset: &[usize], n_features: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= n_features) {
        return Err(Error::BadFeatureIndex(bad));
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "subset must be strictly ascending".into(),
        ));
    }
    Ok(())
}

fn mean_square<T: Scalar>(values: &[T]) -> T {
    values.iter().map(|&v| v * v).sum::<T>() / T::of_usize(values.len())
}

/// Boosts trees on `targets` restricted to the `subset` features.
///
/// Each round fits a tree to the remaining residual and adds it scaled by the
/// shrinkage. With validation data and a nonzero patience, training stops
/// after `early_stop_patience` rounds without validation improvement and the
/// ensemble is cut back to its best round.
pub fn fit_shape<T: Scalar>(
    data: &Dataset<T>,
    targets: &[T],
    subset: &[usize],
    directions: &[MonotoneDirection],
    params: &BoostParams<T>,
    validation: Option<Validation<'_, T>>,
) -> Result<ShapeFunction<T>> {
    check_subset(subset, data.n_features())?;
    check_dims(subset.len(), directions.len())?;
    check_dims(data.n_samples(), targets.len())?;
    params.validate()?;
    if let Some(v) = &validation {
        check_dims(data.n_features(), v.data.n_features())?;
        check_dims(v.data.n_samples(), v.targets.len())?;
        if v.targets.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite);
        }
    }

    let view = FeatureView::new(subset.iter().map(|&i| data.column(i)).collect())?;
    let presorted = PresortedView::new(view);
    let eta = params.shrinkage;
    let valid_columns: Option<Vec<&[T]>> = validation
        .as_ref()
        .map(|v| subset.iter().map(|&i| v.data.column(i)).collect());

    let mut residual = targets.to_vec();
    let mut valid_residual: Vec<T> = validation.map(|v| v.targets.to_vec()).unwrap_or_default();
    let mut best_valid = mean_square(&valid_residual);
    let mut best_len = 0;
    let mut trees = Vec::new();

    for _ in 0..params.rounds {
        let grown = grow_tree(&presorted, &residual, directions, &params.tree)?;
        if grown.tree == TreeNode::leaf(T::zero()) {
            // Zero residual: every later round would add the same zero tree.
            break;
        }
        for (r, &f) in residual.iter_mut().zip(&grown.fitted) {
            *r = *r - eta * f;
        }
        if let Some(columns) = &valid_columns {
            for (n, r) in valid_residual.iter_mut().enumerate() {
                *r = *r - eta * grown.tree.route(|f| columns[f][n]);
            }
        }
        trees.push(grown.tree);

        if valid_columns.is_some() && params.early_stop_patience > 0 {
            let score = mean_square(&valid_residual);
            if score < best_valid {
                best_valid = score;
                best_len = trees.len();
            } else if trees.len() - best_len >= params.early_stop_patience {
                break;
            }
        }
    }
    if valid_columns.is_some() && params.early_stop_patience > 0 {
        trees.truncate(best_len);
    }

    ShapeFunction::new(subset.to_vec(), trees, eta, directions.to_vec())
}
