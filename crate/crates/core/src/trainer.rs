//! Staged training of the constrained additive model.
//!
//! Stages run in a fixed order:
//!
//! 1. the intercept is set to the training target mean;
//! 2. univariate terms are fitted by cyclic backfitting, each with its
//!    feature's monotone direction;
//! 3. pairwise terms are added one at a time, the candidate with the best
//!    probe-tree score first, and kept only when validation RMSE improves;
//!    rejected pairs are never retried;
//! 4. every term whose training-set importance falls below the threshold is
//!    removed;
//! 5. an unconstrained higher-order term over all features is fitted to what
//!    is left.
//!
//! Terms from stages 2 to 4 are never touched once stage 5 starts, so the
//! higher-order term cannot change what the interpretable terms show.

use std::fmt;

use rayon::prelude::*;

use crate::boosting::{fit_shape, BoostParams, ShapeFunction, Validation};
use crate::data::Dataset;
use crate::error::{check_dims, Error, Result};
use crate::importance::{compute_effects, ImportanceReport};
use crate::model::{Cga2mModel, MonotonicityConfig, TermId};
use crate::scalar::{mean, Scalar};
use crate::tree::{grow_tree, FeatureView, MonotoneDirection, PresortedView, TreeParams};

/// Leaf budget of the single tree used to score pair candidates.
pub const PROBE_MAX_LEAVES: usize = 4;

/// Default cap on pairwise selection attempts.
pub const DEFAULT_MAX_PAIRS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig<T> {
    pub monotonicity: MonotonicityConfig,
    pub univariate: BoostParams<T>,
    pub pairwise: BoostParams<T>,
    pub higher: BoostParams<T>,
    /// Number of pair selection attempts; each attempt keeps or deletes one pair.
    pub max_pairs: usize,
    pub importance_threshold: T,
    pub enable_higher: bool,
    pub backfit_passes: usize,
    /// Recorded in the report. Training itself draws no random numbers; the
    /// seed matters to the data split that produced the inputs.
    pub seed: u64,
}

impl<T: Scalar> TrainConfig<T> {
    pub fn new(monotonicity: MonotonicityConfig) -> Self {
        let k = monotonicity.len();
        Self {
            max_pairs: (k * k.saturating_sub(1) / 2).min(DEFAULT_MAX_PAIRS),
            monotonicity,
            univariate: BoostParams::univariate(),
            pairwise: BoostParams::pairwise(),
            higher: BoostParams::higher_order(),
            importance_threshold: T::of(0.01),
            enable_higher: true,
            backfit_passes: 2,
            seed: 0,
        }
    }

    /// Applies the same round count and shrinkage to every stage.
    pub fn with_boosting(mut self, rounds: usize, shrinkage: T) -> Self {
        for p in [&mut self.univariate, &mut self.pairwise, &mut self.higher] {
            p.rounds = rounds;
            p.shrinkage = shrinkage;
        }
        self
    }

    pub fn validate(&self, n_features: usize) -> Result<()> {
        check_dims(n_features, self.monotonicity.len())?;
        for p in [&self.univariate, &self.pairwise, &self.higher] {
            p.validate()?;
        }
        let n_pairs = n_features * n_features.saturating_sub(1) / 2;
        if self.max_pairs > n_pairs {
            return Err(Error::InvalidParameter(format!(
                "max_pairs {} exceeds the {n_pairs} available pairs",
                self.max_pairs
            )));
        }
        if !(self.importance_threshold >= T::zero() && self.importance_threshold < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "importance threshold {} outside [0, 1)",
                self.importance_threshold
            )));
        }
        if self.backfit_passes == 0 {
            return Err(Error::InvalidParameter(
                "backfit_passes must be positive".into(),
            ));
        }
        Ok(())
    }

    fn needs_validation(&self) -> bool {
        self.max_pairs > 0
            || [&self.univariate, &self.pairwise]
                .iter()
                .any(|p| p.early_stop_patience > 0)
            || (self.enable_higher && self.higher.early_stop_patience > 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Intercept,
    Univariate,
    Pairwise,
    Pruning,
    HigherOrder,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Intercept => "intercept",
            Stage::Univariate => "univariate",
            Stage::Pairwise => "pairwise",
            Stage::Pruning => "pruning",
            Stage::HigherOrder => "higher_order",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageScore<T> {
    pub stage: Stage,
    pub rmse_train: T,
    pub rmse_valid: Option<T>,
}

/// A pair that was fitted but did not lower validation RMSE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeletedPair<T> {
    pub pair: (usize, usize),
    pub valid_rmse_before: T,
    pub valid_rmse_after: T,
}

impl<T: Scalar> DeletedPair<T> {
    pub fn reason(&self) -> String {
        format!(
            "validation RMSE did not improve ({} -> {})",
            self.valid_rmse_before, self.valid_rmse_after
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrunedTerm<T> {
    pub term: TermId,
    /// Importance at prune time; zero when the training target is constant.
    pub importance: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport<T> {
    /// Pairs accepted during pair selection, in order. Some may be pruned later.
    pub selected_pairs: Vec<(usize, usize)>,
    pub deleted_pairs: Vec<DeletedPair<T>>,
    pub pruned_terms: Vec<PrunedTerm<T>>,
    pub stages: Vec<StageScore<T>>,
    /// Importances of the surviving terms right after pruning.
    pub post_prune_importance: Option<ImportanceReport<T>>,
    /// Importances of the final model on the training data; `None` for a
    /// constant target.
    pub importance: Option<ImportanceReport<T>>,
    pub seed: u64,
}

impl<T: Scalar> TrainReport<T> {
    pub fn stage(&self, stage: Stage) -> Option<&StageScore<T>> {
        self.stages.iter().find(|s| s.stage == stage)
    }
}

/// Root mean squared error.
pub fn rmse<T: Scalar>(pred: &[T], truth: &[T]) -> Result<T> {
    check_dims(truth.len(), pred.len())?;
    if pred.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sse: T = pred
        .iter()
        .zip(truth)
        .map(|(&p, &t)| (p - t) * (p - t))
        .sum();
    Ok((sse / T::of_usize(pred.len())).sqrt())
}

fn root_mean_square<T: Scalar>(values: &[T]) -> T {
    let ss: T = values.iter().map(|&v| v * v).sum();
    (ss / T::of_usize(values.len())).sqrt()
}

fn subtract<T: Scalar>(residual: &mut [T], values: &[T]) {
    for (r, &v) in residual.iter_mut().zip(values) {
        *r = *r - v;
    }
}

fn add<T: Scalar>(residual: &mut [T], values: &[T]) {
    for (r, &v) in residual.iter_mut().zip(values) {
        *r = *r + v;
    }
}

/// Runs the training stages one at a time. [`train`] drives it end to end;
/// calling the stage methods directly allows inspecting the model between
/// stages.
pub struct Trainer<'a, T> {
    train: &'a Dataset<T>,
    valid: Option<&'a Dataset<T>>,
    config: &'a TrainConfig<T>,
    model: Cga2mModel<T>,
    report: TrainReport<T>,
    residual: Vec<T>,
    valid_residual: Vec<T>,
    done: Stage,
}

impl<'a, T: Scalar> Trainer<'a, T> {
    /// Validates inputs and sets the intercept.
    pub fn new(
        train: &'a Dataset<T>,
        valid: Option<&'a Dataset<T>>,
        config: &'a TrainConfig<T>,
    ) -> Result<Self> {
        config.validate(train.n_features())?;
        match valid {
            Some(v) => {
                check_dims(train.n_features(), v.n_features())?;
                if v.feature_names() != train.feature_names() {
                    return Err(Error::InvalidParameter(
                        "training and validation feature names differ".into(),
                    ));
                }
            }
            None if config.needs_validation() => return Err(Error::ValidationRequired),
            None => {}
        }

        let intercept = mean(train.target());
        let model = Cga2mModel::new(
            intercept,
            train.feature_names().to_vec(),
            config.monotonicity.clone(),
        )?;
        let residual = train.target().iter().map(|&y| y - intercept).collect();
        let valid_residual = valid
            .map(|v| v.target().iter().map(|&y| y - intercept).collect())
            .unwrap_or_default();
        let mut trainer = Self {
            train,
            valid,
            config,
            model,
            report: TrainReport {
                selected_pairs: Vec::new(),
                deleted_pairs: Vec::new(),
                pruned_terms: Vec::new(),
                stages: Vec::new(),
                post_prune_importance: None,
                importance: None,
                seed: config.seed,
            },
            residual,
            valid_residual,
            done: Stage::Intercept,
        };
        trainer.record(Stage::Intercept);
        Ok(trainer)
    }

    pub fn model(&self) -> &Cga2mModel<T> {
        &self.model
    }

    pub fn report(&self) -> &TrainReport<T> {
        &self.report
    }

    /// Current training residual `y - prediction`.
    pub fn residual(&self) -> &[T] {
        &self.residual
    }

    fn advance(&mut self, from: Stage, to: Stage) -> Result<()> {
        if self.done != from {
            return Err(Error::InvalidParameter(format!(
                "stage {to} must follow {from}, last completed stage is {}",
                self.done
            )));
        }
        self.done = to;
        Ok(())
    }

    fn record(&mut self, stage: Stage) {
        let rmse_valid = self.valid.map(|_| root_mean_square(&self.valid_residual));
        self.report.stages.push(StageScore {
            stage,
            rmse_train: root_mean_square(&self.residual),
            rmse_valid,
        });
    }

    fn validation(&self) -> Option<Validation<'_, T>> {
        self.valid.map(|data| Validation {
            data,
            targets: &self.valid_residual,
        })
    }

    fn fit(
        &self,
        subset: &[usize],
        directions: &[MonotoneDirection],
        params: &BoostParams<T>,
    ) -> Result<ShapeFunction<T>> {
        fit_shape(
            self.train,
            &self.residual,
            subset,
            directions,
            params,
            self.validation(),
        )
    }

    /// Adds the term's output back into the residuals.
    fn release(&mut self, shape: &ShapeFunction<T>) {
        add(&mut self.residual, &shape.eval_dataset(self.train));
        if let Some(v) = self.valid {
            add(&mut self.valid_residual, &shape.eval_dataset(v));
        }
    }

    /// Removes the term's output from the residuals.
    fn absorb(&mut self, shape: &ShapeFunction<T>) {
        subtract(&mut self.residual, &shape.eval_dataset(self.train));
        if let Some(v) = self.valid {
            subtract(&mut self.valid_residual, &shape.eval_dataset(v));
        }
    }

    /// Cyclic backfitting of one term per feature.
    pub fn fit_univariate(&mut self) -> Result<()> {
        self.advance(Stage::Intercept, Stage::Univariate)?;
        for _ in 0..self.config.backfit_passes {
            for i in 0..self.train.n_features() {
                let id = TermId::Univariate(i);
                if let Some(old) = self.model.remove_term(id) {
                    self.release(&old);
                }
                let directions = self.model.expected_directions(id)?;
                let shape = self.fit(&[i], &directions, &self.config.univariate)?;
                self.absorb(&shape);
                self.model.insert_term(id, shape)?;
            }
        }
        self.record(Stage::Univariate);
        Ok(())
    }

    /// Squared-error reduction of a small probe tree on the pair.
    fn probe_score(&self, pair: (usize, usize)) -> Result<T> {
        let (i, j) = pair;
        let view = FeatureView::new(vec![self.train.column(i), self.train.column(j)])?;
        let presorted = PresortedView::new(view);
        let directions = self.model.expected_directions(TermId::Pairwise(i, j))?;
        let params = TreeParams {
            max_leaves: PROBE_MAX_LEAVES,
            min_samples_leaf: self.config.pairwise.tree.min_samples_leaf,
            min_gain: T::zero(),
        };
        let grown = grow_tree(&presorted, &self.residual, &directions, &params)?;
        let before: T = self.residual.iter().map(|&r| r * r).sum();
        let after: T = self
            .residual
            .iter()
            .zip(&grown.fitted)
            .map(|(&r, &f)| (r - f) * (r - f))
            .sum();
        Ok(before - after)
    }

    /// Sequential pair selection with deletion of pairs that do not help.
    pub fn select_pairs(&mut self) -> Result<()> {
        self.advance(Stage::Univariate, Stage::Pairwise)?;
        let candidates = self.config.monotonicity.candidate_pairs();
        for _ in 0..self.config.max_pairs {
            let pool: Vec<(usize, usize)> = candidates
                .iter()
                .copied()
                .filter(|p| {
                    !self.report.selected_pairs.contains(p)
                        && !self.report.deleted_pairs.iter().any(|d| d.pair == *p)
                })
                .collect();
            if pool.is_empty() {
                break;
            }
            let scores: Vec<T> = pool
                .par_iter()
                .map(|&p| self.probe_score(p))
                .collect::<Result<_>>()?;
            let mut best = 0;
            for (k, &score) in scores.iter().enumerate() {
                if score > scores[best] {
                    best = k;
                }
            }
            let (i, j) = pool[best];
            let id = TermId::Pairwise(i, j);
            let directions = self.model.expected_directions(id)?;
            let shape = self.fit(&[i, j], &directions, &self.config.pairwise)?;

            let valid = self.valid.ok_or(Error::ValidationRequired)?;
            let before = root_mean_square(&self.valid_residual);
            let mut trial = self.valid_residual.clone();
            subtract(&mut trial, &shape.eval_dataset(valid));
            let after = root_mean_square(&trial);
            if after < before {
                self.absorb(&shape);
                self.model.insert_term(id, shape)?;
                self.report.selected_pairs.push((i, j));
            } else {
                self.report.deleted_pairs.push(DeletedPair {
                    pair: (i, j),
                    valid_rmse_before: before,
                    valid_rmse_after: after,
                });
            }
        }
        self.record(Stage::Pairwise);
        Ok(())
    }

    /// Removes every term whose training importance is below the threshold.
    pub fn prune(&mut self) -> Result<()> {
        self.advance(Stage::Pairwise, Stage::Pruning)?;
        let doomed: Vec<PrunedTerm<T>> = match compute_effects(&self.model, self.train) {
            Ok(report) => report
                .ranked()
                .into_iter()
                .filter(|row| row.importance < self.config.importance_threshold)
                .map(|row| PrunedTerm {
                    term: row.term,
                    importance: row.importance,
                })
                .collect(),
            // A constant target leaves nothing for any term to explain.
            Err(Error::DegenerateTarget) => self
                .model
                .terms()
                .map(|(term, _)| PrunedTerm {
                    term,
                    importance: T::zero(),
                })
                .collect(),
            Err(e) => return Err(e),
        };
        for pruned in doomed {
            if let Some(shape) = self.model.remove_term(pruned.term) {
                self.release(&shape);
            }
            self.report.pruned_terms.push(pruned);
        }
        self.report.pruned_terms.sort_by_key(|p| p.term);
        self.report.post_prune_importance = compute_effects(&self.model, self.train).ok();
        self.record(Stage::Pruning);
        Ok(())
    }

    /// Fits the unconstrained all-feature term on the remaining residual.
    /// Does nothing when the higher-order term is disabled.
    pub fn fit_higher(&mut self) -> Result<()> {
        self.advance(Stage::Pruning, Stage::HigherOrder)?;
        if self.config.enable_higher {
            let subset: Vec<usize> = (0..self.train.n_features()).collect();
            let directions = self.model.expected_directions(TermId::Higher)?;
            let shape = self.fit(&subset, &directions, &self.config.higher)?;
            self.absorb(&shape);
            self.model.insert_term(TermId::Higher, shape)?;
            self.record(Stage::HigherOrder);
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<(Cga2mModel<T>, TrainReport<T>)> {
        if self.done != Stage::HigherOrder {
            return Err(Error::InvalidParameter(format!(
                "training stopped after stage {}",
                self.done
            )));
        }
        self.report.importance = compute_effects(&self.model, self.train).ok();
        Ok((self.model, self.report))
    }
}

/// Trains a model through all stages.
///
/// `valid` is required whenever pairs are selected or early stopping is on.
pub fn train<T: Scalar>(
    train: &Dataset<T>,
    valid: Option<&Dataset<T>>,
    config: &TrainConfig<T>,
) -> Result<(Cga2mModel<T>, TrainReport<T>)> {
    let mut trainer = Trainer::new(train, valid, config)?;
    trainer.fit_univariate()?;
    trainer.select_pairs()?;
    trainer.prune()?;
    trainer.fit_higher()?;
    trainer.finish()
}
