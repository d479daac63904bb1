//! Single regression trees with monotone split constraints.
//!
//! Trees are grown best-first: the open leaf with the largest squared-error
//! reduction is expanded until `max_leaves` is reached or no leaf has an
//! admissible split. A split on a constrained feature is admissible only when
//! the two child means respect the direction and both lie inside the node's
//! [`ValueBounds`]; the children then receive bounds separated at the midpoint
//! of their values, so every leaf of a left subtree stays below every leaf of
//! the matching right subtree.

use std::cmp::Ordering;
use std::mem;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::scalar::{midpoint, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonotoneDirection {
    Increasing,
    Decreasing,
    #[default]
    Free,
}

impl MonotoneDirection {
    pub fn is_constrained(self) -> bool {
        self != MonotoneDirection::Free
    }

    /// `+1`, `-1` or `0`.
    pub fn sign(self) -> i8 {
        match self {
            MonotoneDirection::Increasing => 1,
            MonotoneDirection::Decreasing => -1,
            MonotoneDirection::Free => 0,
        }
    }

    pub fn from_sign(sign: i8) -> Self {
        match sign.cmp(&0) {
            Ordering::Greater => MonotoneDirection::Increasing,
            Ordering::Less => MonotoneDirection::Decreasing,
            Ordering::Equal => MonotoneDirection::Free,
        }
    }
}

/// Closed interval a subtree's leaf values must stay in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueBounds<T> {
    lower: T,
    upper: T,
}

impl<T: Scalar> ValueBounds<T> {
    pub fn new(lower: T, upper: T) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::InvalidParameter(format!(
                "bounds lower {lower} exceeds upper {upper}"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn unbounded() -> Self {
        Self {
            lower: T::neg_infinity(),
            upper: T::infinity(),
        }
    }

    pub fn lower(&self) -> T {
        self.lower
    }

    pub fn upper(&self) -> T {
        self.upper
    }

    pub fn contains(&self, value: T) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn clamp(&self, value: T) -> T {
        value.max(self.lower).min(self.upper)
    }
}

impl<T: Scalar> Default for ValueBounds<T> {
    fn default() -> Self {
        Self::unbounded()
    }
}

/// Whether a candidate split with child values `left_value`/`right_value` may
/// be taken at a node whose leaves are confined to `bounds`.
pub fn admissible_split<T: Scalar>(
    left_value: T,
    right_value: T,
    direction: MonotoneDirection,
    bounds: &ValueBounds<T>,
) -> bool {
    if !bounds.contains(left_value) || !bounds.contains(right_value) {
        return false;
    }
    match direction {
        MonotoneDirection::Free => true,
        MonotoneDirection::Increasing => left_value <= right_value,
        MonotoneDirection::Decreasing => left_value >= right_value,
    }
}

/// Bounds handed to the left and right children of an admissible split.
pub fn child_bounds<T: Scalar>(
    parent: &ValueBounds<T>,
    left_value: T,
    right_value: T,
    direction: MonotoneDirection,
) -> (ValueBounds<T>, ValueBounds<T>) {
    let mid = parent.clamp((left_value + right_value) / T::of(2.0));
    match direction {
        MonotoneDirection::Free => (*parent, *parent),
        MonotoneDirection::Increasing => (
            ValueBounds {
                lower: parent.lower,
                upper: mid,
            },
            ValueBounds {
                lower: mid,
                upper: parent.upper,
            },
        ),
        MonotoneDirection::Decreasing => (
            ValueBounds {
                lower: mid,
                upper: parent.upper,
            },
            ValueBounds {
                lower: parent.lower,
                upper: mid,
            },
        ),
    }
}

/// A fitted regression tree. `feature` indexes into the feature subset the
/// tree was fitted on, not the full dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeNode<T> {
    Internal {
        feature: usize,
        threshold: T,
        left: Box<TreeNode<T>>,
        right: Box<TreeNode<T>>,
    },
    Leaf {
        #[serde(rename = "leaf")]
        value: T,
    },
}

impl<T: Scalar> TreeNode<T> {
    pub fn leaf(value: T) -> Self {
        TreeNode::Leaf { value }
    }

    pub fn split(feature: usize, threshold: T, left: TreeNode<T>, right: TreeNode<T>) -> Self {
        TreeNode::Internal {
            feature,
            threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Routes `row` to a leaf: values `<= threshold` go left.
    pub fn predict(&self, row: &[T]) -> Result<T> {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(max) = self.max_feature() {
            if max >= row.len() {
                return Err(Error::DimensionMismatch {
                    expected: max + 1,
                    actual: row.len(),
                });
            }
        }
        Ok(self.route(|f| row[f]))
    }

    pub(crate) fn route(&self, value_of: impl Fn(usize) -> T) -> T {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if value_of(*feature) <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.num_leaves() + right.num_leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Largest feature index any split uses, `None` for a leaf.
    pub fn max_feature(&self) -> Option<usize> {
        match self {
            TreeNode::Leaf { .. } => None,
            TreeNode::Internal {
                feature,
                left,
                right,
                ..
            } => Some(
                (*feature)
                    .max(left.max_feature().unwrap_or(0))
                    .max(right.max_feature().unwrap_or(0)),
            ),
        }
    }

    pub fn leaf_values(&self) -> Vec<T> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<T>) {
        match self {
            TreeNode::Leaf { value } => out.push(*value),
            TreeNode::Internal { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    /// Checks that every value is finite and every split feature is `< n_features`.
    pub fn validate(&self, n_features: usize) -> Result<()> {
        match self {
            TreeNode::Leaf { value } if value.is_finite() => Ok(()),
            TreeNode::Leaf { .. } => Err(Error::NonFinite),
            TreeNode::Internal {
                feature,
                threshold,
                left,
                right,
            } => {
                if *feature >= n_features {
                    return Err(Error::BadFeatureIndex(*feature));
                }
                if !threshold.is_finite() {
                    return Err(Error::NonFinite);
                }
                left.validate(n_features)?;
                right.validate(n_features)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams<T> {
    pub max_leaves: usize,
    pub min_samples_leaf: usize,
    pub min_gain: T,
}

impl<T: Scalar> TreeParams<T> {
    pub fn new(max_leaves: usize, min_samples_leaf: usize) -> Self {
        Self {
            max_leaves,
            min_samples_leaf,
            min_gain: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_leaves == 0 {
            return Err(Error::InvalidParameter(
                "max_leaves must be positive".into(),
            ));
        }
        if self.min_samples_leaf == 0 {
            return Err(Error::InvalidParameter(
                "min_samples_leaf must be positive".into(),
            ));
        }
        if !self.min_gain.is_finite() || self.min_gain < T::zero() {
            return Err(Error::InvalidParameter(
                "min_gain must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for TreeParams<T> {
    fn default() -> Self {
        Self::new(8, 20)
    }
}

/// Borrowed feature columns a tree is fitted on.
#[derive(Debug, Clone)]
pub struct FeatureView<'a, T> {
    columns: Vec<&'a [T]>,
    n_samples: usize,
}

impl<'a, T: Scalar> FeatureView<'a, T> {
    pub fn new(columns: Vec<&'a [T]>) -> Result<Self> {
        let n_samples = columns.first().map(|c| c.len()).ok_or(Error::EmptySubset)?;
        for column in &columns {
            check_dims(n_samples, column.len())?;
        }
        if n_samples == 0 {
            return Err(Error::EmptyInput);
        }
        if columns.iter().any(|c| c.iter().any(|v| !v.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(Self { columns, n_samples })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, feature: usize) -> &'a [T] {
        self.columns[feature]
    }
}

/// A view with each column's sample order precomputed, reused across the
/// trees of one boosted ensemble.
pub(crate) struct PresortedView<'a, T> {
    view: FeatureView<'a, T>,
    orders: Vec<Vec<u32>>,
}

impl<'a, T: Scalar> PresortedView<'a, T> {
    pub(crate) fn new(view: FeatureView<'a, T>) -> Self {
        let orders = view
            .columns
            .iter()
            .map(|column| {
                let mut order: Vec<u32> = (0..view.n_samples as u32).collect();
                // Columns are checked finite, so the comparison is total.
                order.sort_by(|&a, &b| {
                    column[a as usize]
                        .partial_cmp(&column[b as usize])
                        .unwrap_or(Ordering::Equal)
                });
                order
            })
            .collect();
        Self { view, orders }
    }
}

pub(crate) struct GrownTree<T> {
    pub(crate) tree: TreeNode<T>,
    /// The tree's output for every training sample.
    pub(crate) fitted: Vec<T>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate<T> {
    feature: usize,
    threshold: T,
    gain: T,
    /// Position, in the split feature's order, of the last left sample.
    split_pos: usize,
    left_sum: T,
    left_value: T,
    right_value: T,
}

struct OpenLeaf<T> {
    orders: Vec<Vec<u32>>,
    sum: T,
    value: T,
    bounds: ValueBounds<T>,
    best: Option<Candidate<T>>,
}

impl<T> OpenLeaf<T> {
    fn count(&self) -> usize {
        self.orders[0].len()
    }
}

enum Slot<T> {
    Open(OpenLeaf<T>),
    Split {
        feature: usize,
        threshold: T,
        left: usize,
        right: usize,
    },
    Taken,
}

struct Grower<'p, 'a, T> {
    data: &'p PresortedView<'a, T>,
    residuals: &'p [T],
    directions: &'p [MonotoneDirection],
    params: &'p TreeParams<T>,
}

impl<T: Scalar> Grower<'_, '_, T> {
    fn open_leaf(
        &self,
        orders: Vec<Vec<u32>>,
        sum: T,
        value: T,
        bounds: ValueBounds<T>,
    ) -> OpenLeaf<T> {
        debug_assert!(bounds.contains(value));
        let mut leaf = OpenLeaf {
            orders,
            sum,
            value,
            bounds,
            best: None,
        };
        leaf.best = self.best_split(&leaf);
        leaf
    }

    fn best_split(&self, leaf: &OpenLeaf<T>) -> Option<Candidate<T>> {
        let count = leaf.count();
        let min_leaf = self.params.min_samples_leaf;
        if count < 2 * min_leaf || count < 2 {
            return None;
        }
        let sum_sq: T = leaf.orders[0]
            .iter()
            .map(|&s| {
                let r = self.residuals[s as usize];
                r * r
            })
            .sum();
        let parent_score = leaf.sum * leaf.sum / T::of_usize(count);
        // Gains below the accumulated rounding error of the score terms are noise.
        let noise = T::of(8.0) * T::epsilon() * sum_sq;
        let mut best_gain = self.params.min_gain.max(noise);
        let mut best = None;

        for (feature, order) in leaf.orders.iter().enumerate() {
            let column = self.data.view.column(feature);
            let direction = self.directions[feature];
            let mut left_sum = T::zero();
            for pos in 0..count - 1 {
                let s = order[pos] as usize;
                left_sum = left_sum + self.residuals[s];
                let left_count = pos + 1;
                let right_count = count - left_count;
                if left_count < min_leaf {
                    continue;
                }
                if right_count < min_leaf {
                    break;
                }
                let here = column[s];
                let next = column[order[pos + 1] as usize];
                if here >= next {
                    continue;
                }
                let right_sum = leaf.sum - left_sum;
                let nl = T::of_usize(left_count);
                let nr = T::of_usize(right_count);
                let gain = left_sum * left_sum / nl + right_sum * right_sum / nr - parent_score;
                if gain <= best_gain {
                    continue;
                }
                let left_value = left_sum / nl;
                let right_value = right_sum / nr;
                if !admissible_split(left_value, right_value, direction, &leaf.bounds) {
                    continue;
                }
                best_gain = gain;
                best = Some(Candidate {
                    feature,
                    threshold: midpoint(here, next),
                    gain,
                    split_pos: pos,
                    left_sum,
                    left_value,
                    right_value,
                });
            }
        }
        best
    }

    fn split(
        &self,
        leaf: OpenLeaf<T>,
        cand: Candidate<T>,
        mask: &mut [bool],
    ) -> (OpenLeaf<T>, OpenLeaf<T>) {
        let split_order = &leaf.orders[cand.feature];
        for &s in &split_order[..=cand.split_pos] {
            mask[s as usize] = true;
        }
        let mut left_orders = Vec::with_capacity(leaf.orders.len());
        let mut right_orders = Vec::with_capacity(leaf.orders.len());
        for order in &leaf.orders {
            let (l, r): (Vec<u32>, Vec<u32>) = order.iter().partition(|&&s| mask[s as usize]);
            left_orders.push(l);
            right_orders.push(r);
        }
        for &s in &left_orders[0] {
            mask[s as usize] = false;
        }

        let direction = self.directions[cand.feature];
        let (left_bounds, right_bounds) =
            child_bounds(&leaf.bounds, cand.left_value, cand.right_value, direction);
        let left = self.open_leaf(
            left_orders,
            cand.left_sum,
            left_bounds.clamp(cand.left_value),
            left_bounds,
        );
        let right = self.open_leaf(
            right_orders,
            leaf.sum - cand.left_sum,
            right_bounds.clamp(cand.right_value),
            right_bounds,
        );
        (left, right)
    }

    fn grow(&self) -> GrownTree<T> {
        let n = self.data.view.n_samples;
        let sum: T = self.residuals.iter().copied().sum();
        let bounds = ValueBounds::unbounded();
        let value = bounds.clamp(sum / T::of_usize(n));
        let root = self.open_leaf(self.data.orders.clone(), sum, value, bounds);

        let mut slots = vec![Slot::Open(root)];
        let mut n_leaves = 1;
        let mut mask = vec![false; n];
        while n_leaves < self.params.max_leaves {
            let mut pick: Option<(usize, T)> = None;
            for (id, slot) in slots.iter().enumerate() {
                if let Slot::Open(OpenLeaf { best: Some(c), .. }) = slot {
                    if pick.is_none_or(|(_, g)| c.gain > g) {
                        pick = Some((id, c.gain));
                    }
                }
            }
            let Some((id, _)) = pick else { break };
            let Slot::Open(leaf) = mem::replace(&mut slots[id], Slot::Taken) else {
                unreachable!("picked slot is open")
            };
            let cand = leaf.best.expect("picked leaf has a candidate");
            let (left, right) = self.split(leaf, cand, &mut mask);
            let left_id = slots.len();
            slots.push(Slot::Open(left));
            slots.push(Slot::Open(right));
            slots[id] = Slot::Split {
                feature: cand.feature,
                threshold: cand.threshold,
                left: left_id,
                right: left_id + 1,
            };
            n_leaves += 1;
        }

        let mut fitted = vec![T::zero(); n];
        let tree = assemble(&slots, 0, &mut fitted);
        GrownTree { tree, fitted }
    }
}

fn assemble<T: Scalar>(slots: &[Slot<T>], id: usize, fitted: &mut [T]) -> TreeNode<T> {
    match &slots[id] {
        Slot::Open(leaf) => {
            for &s in &leaf.orders[0] {
                fitted[s as usize] = leaf.value;
            }
            TreeNode::leaf(leaf.value)
        }
        Slot::Split {
            feature,
            threshold,
            left,
            right,
        } => TreeNode::split(
            *feature,
            *threshold,
            assemble(slots, *left, fitted),
            assemble(slots, *right, fitted),
        ),
        Slot::Taken => unreachable!("taken slots are always replaced by splits"),
    }
}

pub(crate) fn grow_tree<T: Scalar>(
    data: &PresortedView<'_, T>,
    residuals: &[T],
    directions: &[MonotoneDirection],
    params: &TreeParams<T>,
) -> Result<GrownTree<T>> {
    params.validate()?;
    check_dims(data.view.n_samples, residuals.len())?;
    check_dims(data.view.n_features(), directions.len())?;
    if residuals.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonFinite);
    }
    let grower = Grower {
        data,
        residuals,
        directions,
        params,
    };
    Ok(grower.grow())
}

/// Fits one least-squares regression tree to `residuals`.
///
/// Splits are searched exhaustively over midpoints between consecutive
/// distinct values of each feature. Equal gains resolve to the lowest feature
/// index, then the lowest threshold. If no split is admissible the result is a
/// single leaf holding the residual mean.
pub fn fit_tree<T: Scalar>(
    data: &FeatureView<'_, T>,
    residuals: &[T],
    directions: &[MonotoneDirection],
    params: &TreeParams<T>,
) -> Result<TreeNode<T>> {
    let presorted = PresortedView::new(data.clone());
    grow_tree(&presorted, residuals, directions, params).map(|g| g.tree)
}

/// Shorthand for [`TreeNode::predict`].
pub fn predict_tree<T: Scalar>(tree: &TreeNode<T>, row: &[T]) -> Result<T> {
    tree.predict(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use MonotoneDirection::*;

    fn one_feature(
        x: &[f64],
        r: &[f64],
        dir: MonotoneDirection,
        max_leaves: usize,
    ) -> TreeNode<f64> {
        let view = FeatureView::new(vec![x]).unwrap();
        fit_tree(&view, r, &[dir], &TreeParams::new(max_leaves, 1)).unwrap()
    }

    #[test]
    fn monotone_data_splits_under_increasing() {
        let tree = one_feature(&[1.0, 2.0, 3.0, 4.0], &[1.0, 2.0, 3.0, 4.0], Increasing, 2);
        match tree {
            TreeNode::Internal { left, right, .. } => {
                assert!(left.leaf_values()[0] < right.leaf_values()[0]);
            }
            TreeNode::Leaf { .. } => panic!("expected a split"),
        }
    }

    #[test]
    fn anti_monotone_data_collapses_to_mean_leaf() {
        let tree = one_feature(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0], Increasing, 2);
        assert_eq!(tree, TreeNode::leaf(2.5));
    }

    #[test]
    fn free_split_picks_gain_optimal_threshold() {
        let tree = one_feature(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0], Free, 2);
        assert_eq!(
            tree,
            TreeNode::split(0, 2.5, TreeNode::leaf(3.5), TreeNode::leaf(1.5))
        );
        assert_eq!(tree.predict(&[1.0]).unwrap(), 3.5);
    }

    #[test]
    fn predict_routes_boundary_left() {
        assert_eq!(TreeNode::leaf(0.0).predict(&[42.0]).unwrap(), 0.0);
        let tree = TreeNode::split(0, 2.5, TreeNode::leaf(1.0), TreeNode::leaf(5.0));
        assert_eq!(predict_tree(&tree, &[2.5]).unwrap(), 1.0);
        assert_eq!(predict_tree(&tree, &[2.6]).unwrap(), 5.0);
        assert!(matches!(tree.predict(&[f64::NAN]), Err(Error::NonFinite)));
        assert!(matches!(
            tree.predict(&[]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn admissibility() {
        let free = ValueBounds::unbounded();
        assert!(admissible_split(1.0, 2.0, Increasing, &free));
        assert!(!admissible_split(2.0, 1.0, Increasing, &free));
        assert!(admissible_split(2.0, 1.0, Decreasing, &free));
        let b = ValueBounds::new(1.5, f64::INFINITY).unwrap();
        assert!(!admissible_split(1.0, 2.0, Free, &b));
    }

    #[test]
    fn bound_propagation() {
        let free = ValueBounds::<f64>::unbounded();
        let (l, r) = child_bounds(&free, 1.0, 3.0, Increasing);
        assert_eq!((l.lower(), l.upper()), (f64::NEG_INFINITY, 2.0));
        assert_eq!((r.lower(), r.upper()), (2.0, f64::INFINITY));
        let (l, r) = child_bounds(&free, 1.0, 3.0, Free);
        assert_eq!((l, r), (free, free));
        let parent = ValueBounds::new(0.0, 4.0).unwrap();
        let (l, r) = child_bounds(&parent, 3.0, 1.0, Decreasing);
        assert_eq!((l.lower(), l.upper()), (2.0, 4.0));
        assert_eq!((r.lower(), r.upper()), (0.0, 2.0));
        assert!(ValueBounds::new(2.0, 1.0).is_err());
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            FeatureView::<f64>::new(vec![&[]]),
            Err(Error::EmptyInput)
        ));
        let x = [1.0, 2.0];
        let view = FeatureView::new(vec![&x[..]]).unwrap();
        let err = fit_tree(
            &view,
            &[1.0, f64::INFINITY],
            &[Free],
            &TreeParams::new(2, 1),
        );
        assert!(matches!(err, Err(Error::NonFinite)));
        let err = fit_tree(&view, &[1.0], &[Free], &TreeParams::new(2, 1));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        let err = fit_tree(&view, &[1.0, 2.0], &[Free], &TreeParams::new(2, 0));
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn degenerate_feature_is_a_leaf() {
        let tree = one_feature(&[3.0; 5], &[1.0, 5.0, 2.0, 8.0, 4.0], Free, 8);
        assert_eq!(tree, TreeNode::leaf(4.0));
    }

    #[test]
    fn min_samples_leaf_is_respected() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let mut r = vec![0.0; 10];
        r[0] = 100.0;
        let view = FeatureView::new(vec![&x[..]]).unwrap();
        let tree = fit_tree(&view, &r, &[Free], &TreeParams::new(2, 3)).unwrap();
        let TreeNode::Internal { threshold, .. } = tree else {
            panic!("expected split")
        };
        assert_eq!(threshold, 2.5);
    }

    #[test]
    fn best_first_respects_leaf_budget() {
        let x: Vec<f64> = (0..64).map(f64::from).collect();
        let r: Vec<f64> = x.iter().map(|v| (v / 8.0).floor()).collect();
        for budget in 1..=8 {
            let tree = one_feature(&x, &r, Free, budget);
            assert_eq!(tree.num_leaves(), budget);
        }
    }

    #[test]
    fn works_for_f32() {
        let x = [1.0f32, 2.0, 3.0, 4.0];
        let view = FeatureView::new(vec![&x[..]]).unwrap();
        let tree = fit_tree(
            &view,
            &[4.0f32, 3.0, 2.0, 1.0],
            &[Free],
            &TreeParams::new(2, 1),
        )
        .unwrap();
        assert_eq!(tree.predict(&[4.0]).unwrap(), 1.5);
    }
}
