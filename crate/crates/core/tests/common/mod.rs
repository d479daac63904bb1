#![allow(dead_code)]

use cga2m::{
    fit_tree, Dataset64, FeatureView, Model, MonotoneDirection, MonotonicityConfig, Shape, TermId,
    Tree, TreeNode, TreeParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal draw by Box-Muller.
pub fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// `n` rows of `k` features uniform on `[lo, hi)`, target `f(row) + sigma * z`.
pub fn synthetic(
    n: usize,
    k: usize,
    (lo, hi): (f64, f64),
    sigma: f64,
    seed: u64,
    f: impl Fn(&[f64]) -> f64,
) -> Dataset64 {
    let mut rng = rng(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..k).map(|_| rng.gen_range(lo..hi)).collect())
        .collect();
    let target = rows
        .iter()
        .map(|r| f(r) + sigma * normal(&mut rng))
        .collect();
    Dataset64::from_rows(&rows, target).unwrap()
}

/// Deterministic three-way split of a dataset: train, valid, test.
pub fn split3(data: &Dataset64, seed: u64) -> (Dataset64, Dataset64, Dataset64) {
    cga2m::split_dataset(data, cga2m::SplitFractions::default(), seed).unwrap()
}

pub fn sse(pred: &[f64], truth: &[f64]) -> f64 {
    pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum()
}

/// Best single-threshold split of `(x, r)` with at least `min_leaf` samples
/// per side, by enumerating every cut between distinct sorted values.
/// Returns `(sse, left_mean, right_mean)`, or `None` if no cut exists.
pub fn exhaustive_stump(x: &[f64], r: &[f64], min_leaf: usize) -> Option<(f64, f64, f64)> {
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(r.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let n = pairs.len();
    let mut best: Option<(f64, f64, f64)> = None;
    for cut in min_leaf..=n.saturating_sub(min_leaf) {
        if cut == 0 || cut == n || pairs[cut - 1].0 == pairs[cut].0 {
            continue;
        }
        let (left, right) = pairs.split_at(cut);
        let lm = left.iter().map(|p| p.1).sum::<f64>() / left.len() as f64;
        let rm = right.iter().map(|p| p.1).sum::<f64>() / right.len() as f64;
        let cost = left.iter().map(|p| (p.1 - lm).powi(2)).sum::<f64>()
            + right.iter().map(|p| (p.1 - rm).powi(2)).sum::<f64>();
        if best.is_none_or(|b| cost < b.0) {
            best = Some((cost, lm, rm));
        }
    }
    best
}

// Walks a tree without going through the library's routing code.
pub fn walk(tree: &Tree, row: &[f64]) -> f64 {
    match tree {
        TreeNode::Leaf { value } => *value,
        TreeNode::Internal {
            feature,
            threshold,
            left,
            right,
        } => walk(
            if row[*feature] <= *threshold {
                left
            } else {
                right
            },
            row,
        ),
    }
}

/// A model whose terms are trees fitted to random residuals on `data`.
pub fn random_model(data: &Dataset64, seed: u64, with_higher: bool) -> Model {
    let mut rng = rng(seed);
    let k = data.n_features();
    let mut mono = MonotonicityConfig::free(k);
    for i in 0..k {
        mono = mono.with(
            i,
            [
                MonotoneDirection::Free,
                MonotoneDirection::Increasing,
                MonotoneDirection::Decreasing,
            ][rng.gen_range(0..3)],
        );
    }
    let mut model = Model::new(
        rng.gen_range(-5.0..5.0),
        data.feature_names().to_vec(),
        mono,
    )
    .unwrap();
    let mut ids: Vec<TermId> = (0..k).map(TermId::Univariate).collect();
    ids.extend((0..k).flat_map(|i| (i + 1..k).map(move |j| TermId::Pairwise(i, j))));
    if with_higher {
        ids.push(TermId::Higher);
    }
    for id in ids {
        if id != TermId::Higher && rng.gen_bool(0.3) {
            continue;
        }
        let subset: Vec<usize> = match id {
            TermId::Univariate(i) => vec![i],
            TermId::Pairwise(i, j) => vec![i, j],
            TermId::Higher => (0..k).collect(),
        };
        let directions = model.expected_directions(id).unwrap();
        let view = FeatureView::new(subset.iter().map(|&i| data.column(i)).collect()).unwrap();
        let trees = (0..rng.gen_range(0..4))
            .map(|_| {
                let r: Vec<f64> = (0..data.n_samples())
                    .map(|_| rng.gen_range(-3.0..3.0))
                    .collect();
                fit_tree(
                    &view,
                    &r,
                    &directions,
                    &TreeParams::new(rng.gen_range(1..6), 1),
                )
                .unwrap()
            })
            .collect();
        let shrinkage = rng.gen_range(0.05..1.0);
        model
            .insert_term(
                id,
                Shape::new(subset, trees, shrinkage, directions).unwrap(),
            )
            .unwrap();
    }
    model
}

pub fn random_data(n: usize, k: usize, seed: u64) -> Dataset64 {
    synthetic(n, k, (-2.0, 2.0), 1.0, seed, |x| x.iter().sum())
}

/// Per-term effects computed directly from the definitions: mean absolute
/// deviation of each term over mean absolute deviation of the target.
pub fn brute_force_effects(model: &Model, data: &Dataset64) -> Vec<(TermId, f64)> {
    let n = data.n_samples();
    let y = data.target();
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let spread: f64 = y.iter().map(|v| (v - y_mean).abs()).sum();
    let mut effects = Vec::new();
    for (id, shape) in model.terms() {
        let values: Vec<f64> = (0..n)
            .map(|row| {
                let full = data.row(row);
                let sub: Vec<f64> = shape.subset().iter().map(|&i| full[i]).collect();
                shape
                    .trees()
                    .iter()
                    .map(|t| shape.shrinkage() * walk(t, &sub))
                    .sum()
            })
            .collect();
        let m = values.iter().sum::<f64>() / n as f64;
        effects.push((
            id,
            values.iter().map(|v| (v - m).abs()).sum::<f64>() / spread,
        ));
    }
    effects
}
