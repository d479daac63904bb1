pub mod bench;
pub mod boosting;
pub mod data;
pub mod error;
pub mod importance;
pub mod io;
pub mod linear;
pub mod model;
pub mod plots;
pub mod run;
pub mod scalar;
pub mod trainer;
pub mod tree;

pub use bench::{bench, bench_prepared, median_table, BenchRow, BenchTable, Variant};
pub use boosting::{eval_shape, fit_shape, BoostParams, ShapeFunction, Validation};
pub use data::Dataset;
pub use error::{Error, Result};
pub use importance::{compute_effects, importance_of_higher, ImportanceReport};
pub use io::{
    load_csv, monotonicity_for, parse_monotone_spec, read_csv, read_features, read_monotone_spec,
    split_dataset, split_indices, write_csv, CsvLoad, FeatureLoad, SplitFractions, SplitIndices,
};
pub use linear::{fit_linear, fit_linear_baseline, LinearModel};
pub use model::{deserialize, serialize, Cga2mModel, MonotonicityConfig, TermId, TermKind};
pub use plots::{export_plots, pair_surface, univariate_curve, PairSurface, UnivariateCurve};
pub use run::{PreparedRun, RunSpec, TrainOverrides};
pub use scalar::Scalar;
pub use trainer::{rmse, train, Stage, TrainConfig, TrainReport, Trainer};
pub use tree::{
    admissible_split, child_bounds, fit_tree, predict_tree, FeatureView, MonotoneDirection,
    TreeNode, TreeParams, ValueBounds,
};

pub type Model = Cga2mModel<f64>;
pub type Model32 = Cga2mModel<f32>;
pub type Dataset64 = Dataset<f64>;
pub type Dataset32 = Dataset<f32>;
pub type Config = TrainConfig<f64>;
pub type Config32 = TrainConfig<f32>;
pub type Shape = ShapeFunction<f64>;
pub type Shape32 = ShapeFunction<f32>;
pub type Tree = TreeNode<f64>;
pub type Tree32 = TreeNode<f32>;
pub type Importance = ImportanceReport<f64>;
pub type Importance32 = ImportanceReport<f32>;
