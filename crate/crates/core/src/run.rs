//! Run descriptions shared by the CLI subcommands and the benchmark harness.

use std::path::PathBuf;

use crate::data::Dataset;
use crate::error::Result;
use crate::io::{load_csv, monotonicity_for, split_dataset, SplitFractions};
use crate::scalar::Scalar;
use crate::trainer::TrainConfig;
use crate::tree::MonotoneDirection;

/// Command-line overrides of the default training configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainOverrides {
    pub rounds: Option<usize>,
    pub learning_rate: Option<f64>,
    /// Applied to all three stages.
    pub max_leaves: Option<usize>,
    pub max_pairs: Option<usize>,
    pub threshold: Option<f64>,
    pub no_higher: bool,
}

impl TrainOverrides {
    pub fn apply<T: Scalar>(&self, config: &mut TrainConfig<T>) {
        for p in [
            &mut config.univariate,
            &mut config.pairwise,
            &mut config.higher,
        ] {
            if let Some(rounds) = self.rounds {
                p.rounds = rounds;
            }
            if let Some(lr) = self.learning_rate {
                p.shrinkage = T::of(lr);
            }
            if let Some(leaves) = self.max_leaves {
                p.tree.max_leaves = leaves;
            }
        }
        if let Some(max_pairs) = self.max_pairs {
            config.max_pairs = max_pairs;
        }
        if let Some(threshold) = self.threshold {
            config.importance_threshold = T::of(threshold);
        }
        if self.no_higher {
            config.enable_higher = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub input_path: PathBuf,
    pub target_column: String,
    pub monotone_spec: Vec<(String, MonotoneDirection)>,
    pub split: SplitFractions,
    pub seed: u64,
    pub overrides: TrainOverrides,
}

impl RunSpec {
    pub fn new(input_path: impl Into<PathBuf>, target_column: impl Into<String>) -> Self {
        Self {
            input_path: input_path.into(),
            target_column: target_column.into(),
            monotone_spec: Vec::new(),
            split: SplitFractions::default(),
            seed: 0,
            overrides: TrainOverrides::default(),
        }
    }

    /// Loads the CSV, splits it and builds the training configuration.
    pub fn prepare<T: Scalar>(&self) -> Result<PreparedRun<T>> {
        let load = load_csv::<T>(&self.input_path, &self.target_column)?;
        PreparedRun::from_dataset(self, load.data, load.dropped_rows, load.dropped_columns)
    }
}

/// A loaded and split dataset with the configuration to train on it.
#[derive(Debug, Clone)]
pub struct PreparedRun<T> {
    pub train: Dataset<T>,
    pub valid: Dataset<T>,
    pub test: Dataset<T>,
    pub config: TrainConfig<T>,
    pub dropped_rows: usize,
    pub dropped_columns: Vec<String>,
}

impl<T: Scalar> PreparedRun<T> {
    pub fn from_dataset(
        spec: &RunSpec,
        data: Dataset<T>,
        dropped_rows: usize,
        dropped_columns: Vec<String>,
    ) -> Result<Self> {
        let monotonicity = monotonicity_for(data.feature_names(), &spec.monotone_spec)?;
        let mut config = TrainConfig::new(monotonicity);
        config.seed = spec.seed;
        spec.overrides.apply(&mut config);
        config.validate(data.n_features())?;
        let (train, valid, test) = split_dataset(&data, spec.split, spec.seed)?;
        Ok(Self {
            train,
            valid,
            test,
            config,
            dropped_rows,
            dropped_columns,
        })
    }
}
