//! Ablation benchmark: the four constrained/higher-order variants plus OLS.

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linear::fit_linear_baseline;
use crate::model::MonotonicityConfig;
use crate::run::{PreparedRun, RunSpec};
use crate::scalar::Scalar;
use crate::trainer::{rmse, train};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Ga2m,
    Ga2mHigher,
    Ga2mMonotone,
    Ga2mMonotoneHigher,
    Linear,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Ga2m,
        Variant::Ga2mHigher,
        Variant::Ga2mMonotone,
        Variant::Ga2mMonotoneHigher,
        Variant::Linear,
    ];

    fn monotone(self) -> bool {
        matches!(self, Variant::Ga2mMonotone | Variant::Ga2mMonotoneHigher)
    }

    fn higher(self) -> bool {
        matches!(self, Variant::Ga2mHigher | Variant::Ga2mMonotoneHigher)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Ga2m => "GA2M",
            Variant::Ga2mHigher => "GA2M+higher",
            Variant::Ga2mMonotone => "GA2M+monotonicity",
            Variant::Ga2mMonotoneHigher => "GA2M+monotonicity+higher",
            Variant::Linear => "Linear regression",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow<T> {
    pub variant: Variant,
    pub rmse_train: T,
    pub rmse_test: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable<T> {
    pub seed: u64,
    pub rows: Vec<BenchRow<T>>,
}

impl<T: Scalar> BenchTable<T> {
    pub fn row(&self, variant: Variant) -> Option<&BenchRow<T>> {
        self.rows.iter().find(|r| r.variant == variant)
    }

    /// `seed,model,train_rmse,test_rmse` at full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed,model,train_rmse,test_rmse\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                self.seed, r.variant, r.rmse_train, r.rmse_test
            );
        }
        out
    }

    /// Aligned text table with RMSE to two decimals.
    pub fn to_text(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.variant.to_string().len())
            .max()
            .unwrap_or(5)
            .max("Model".len());
        let mut out = format!("{:<width$}  {:>12}  {:>12}\n", "Model", "training", "test");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>12.2}  {:>12.2}",
                r.variant.to_string(),
                r.rmse_train.as_f64(),
                r.rmse_test.as_f64()
            );
        }
        out
    }
}

fn run_variant<T: Scalar>(run: &PreparedRun<T>, variant: Variant) -> Result<BenchRow<T>> {
    let (rmse_train, rmse_test) = match variant {
        Variant::Linear => fit_linear_baseline(&run.train, &run.test)?,
        _ => {
            let mut config = run.config.clone();
            if !variant.monotone() {
                config.monotonicity = MonotonicityConfig::free(run.train.n_features());
            }
            config.enable_higher = variant.higher();
            let (model, _) = train(&run.train, Some(&run.valid), &config)?;
            (
                rmse(&model.predict_batch(&run.train)?, run.train.target())?,
                rmse(&model.predict_batch(&run.test)?, run.test.target())?,
            )
        }
    };
    Ok(BenchRow {
        variant,
        rmse_train,
        rmse_test,
    })
}

/// Trains every variant on one prepared split. The monotone variants use the
/// run's monotonicity config, the others treat every feature as free.
pub fn bench_prepared<T: Scalar>(run: &PreparedRun<T>) -> Result<BenchTable<T>> {
    let rows = Variant::ALL
        .par_iter()
        .map(|&v| run_variant(run, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchTable {
        seed: run.config.seed,
        rows,
    })
}

/// One table per run spec.
pub fn bench(specs: &[RunSpec]) -> Result<Vec<BenchTable<f64>>> {
    specs
        .iter()
        .map(|spec| bench_prepared(&spec.prepare::<f64>()?))
        .collect()
}

fn median<T: Scalar>(mut values: Vec<T>) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / T::of(2.0)
    }
}

/// Per-variant median train and test RMSE across tables.
pub fn median_table<T: Scalar>(tables: &[BenchTable<T>]) -> Result<BenchTable<T>> {
    if tables.is_empty() {
        return Err(Error::EmptyInput);
    }
    let rows = Variant::ALL
        .iter()
        .filter_map(|&variant| {
            let rows: Vec<&BenchRow<T>> = tables.iter().filter_map(|t| t.row(variant)).collect();
            (!rows.is_empty()).then(|| BenchRow {
                variant,
                rmse_train: median(rows.iter().map(|r| r.rmse_train).collect()),
                rmse_test: median(rows.iter().map(|r| r.rmse_test).collect()),
            })
        })
        .collect();
    Ok(BenchTable { seed: 0, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn text_layout() {
        let table = BenchTable {
            seed: 3,
            rows: vec![BenchRow {
                variant: Variant::Linear,
                rmse_train: 69706.4812,
                rmse_test: 69037.95,
            }],
        };
        let text = table.to_text();
        assert!(
            text.contains("Linear regression      69706.48      69037.95"),
            "{text}"
        );
        assert!(table
            .to_csv()
            .starts_with("seed,model,train_rmse,test_rmse\n3,Linear regression,"));
    }
}
