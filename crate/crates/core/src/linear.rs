//! Ordinary least squares baseline.

use nalgebra::{DMatrix, DVector};

use crate::data::Dataset;
use crate::error::{check_dims, Result};
use crate::scalar::Scalar;
use crate::trainer::rmse;

/// `y = intercept + coefficients . x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel<T> {
    pub intercept: T,
    pub coefficients: Vec<T>,
}

impl<T: Scalar> LinearModel<T> {
    pub fn predict(&self, row: &[T]) -> Result<T> {
        check_dims(self.coefficients.len(), row.len())?;
        Ok(self
            .coefficients
            .iter()
            .zip(row)
            .fold(self.intercept, |acc, (&c, &x)| acc + c * x))
    }

    pub fn predict_batch(&self, data: &Dataset<T>) -> Result<Vec<T>> {
        check_dims(self.coefficients.len(), data.n_features())?;
        let mut out = vec![self.intercept; data.n_samples()];
        for (&c, column) in self.coefficients.iter().zip(data.columns()) {
            for (acc, &x) in out.iter_mut().zip(column) {
                *acc = *acc + c * x;
            }
        }
        Ok(out)
    }
}

/// Least squares with intercept, solved by SVD on centered and scaled columns.
/// Rank-deficient designs get the minimum-norm solution.
pub fn fit_linear<T: Scalar>(data: &Dataset<T>) -> Result<LinearModel<T>> {
    let n = data.n_samples();
    let k = data.n_features();
    let y: Vec<f64> = data.target().iter().map(|v| v.as_f64()).collect();
    let y_mean = y.iter().sum::<f64>() / n as f64;

    let mut means = Vec::with_capacity(k);
    let mut scales = Vec::with_capacity(k);
    let mut design = DMatrix::<f64>::zeros(n, k);
    for (j, column) in data.columns().iter().enumerate() {
        let mean = column.iter().map(|v| v.as_f64()).sum::<f64>() / n as f64;
        let var = column
            .iter()
            .map(|v| (v.as_f64() - mean).powi(2))
            .sum::<f64>()
            / n as f64;
        let scale = if var > 0.0 { var.sqrt() } else { 1.0 };
        for (i, v) in column.iter().enumerate() {
            design[(i, j)] = (v.as_f64() - mean) / scale;
        }
        means.push(mean);
        scales.push(scale);
    }
    let rhs = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));

    let svd = design.svd(true, true);
    let largest = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = largest * f64::EPSILON * n.max(k) as f64;
    let scaled = svd
        .solve(&rhs, cutoff)
        .expect("U and V were requested from the decomposition");

    let coefficients: Vec<f64> = scaled.iter().zip(&scales).map(|(b, s)| b / s).collect();
    let intercept = y_mean
        - coefficients
            .iter()
            .zip(&means)
            .map(|(b, m)| b * m)
            .sum::<f64>();
    Ok(LinearModel {
        intercept: T::of(intercept),
        coefficients: coefficients.into_iter().map(T::of).collect(),
    })
}

/// Fits on `train` and returns `(train RMSE, test RMSE)`.
pub fn fit_linear_baseline<T: Scalar>(train: &Dataset<T>, test: &Dataset<T>) -> Result<(T, T)> {
    let model = fit_linear(train)?;
    let rmse_train = rmse(&model.predict_batch(train)?, train.target())?;
    let rmse_test = rmse(&model.predict_batch(test)?, test.target())?;
    Ok((rmse_train, rmse_test))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_has_zero_error() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.5 - 3.0).collect();
        let data = Dataset::new(
            vec![xs.clone()],
            xs.iter().map(|x| 2.0 * x + 1.0).collect(),
            vec!["x".into()],
        )
        .unwrap();
        let test = data.select_rows(&[3, 7, 11]).unwrap();
        let (tr, te) = fit_linear_baseline(&data, &test).unwrap();
        assert!(tr < 1e-12 && te < 1e-12, "{tr} {te}");
        let m = fit_linear(&data).unwrap();
        assert!((m.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((m.intercept - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duplicate_columns_get_minimum_norm_split() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = xs.iter().map(|x| 4.0 * x).collect();
        let data = Dataset::new(vec![xs.clone(), xs], y, vec!["a".into(), "b".into()]).unwrap();
        let m = fit_linear(&data).unwrap();
        assert!((m.coefficients[0] - 2.0).abs() < 1e-9);
        assert!((m.coefficients[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn constant_column_gets_zero_weight() {
        let data = Dataset::new(
            vec![vec![1.0, 2.0, 3.0, 4.0], vec![7.0; 4]],
            vec![5.0, 5.0, 5.0, 5.0],
            vec!["a".into(), "c".into()],
        )
        .unwrap();
        let m = fit_linear(&data).unwrap();
        assert_eq!(m.predict(&[10.0, 7.0]).unwrap(), 5.0);
        assert_eq!(m.coefficients, vec![0.0, 0.0]);
    }
}
