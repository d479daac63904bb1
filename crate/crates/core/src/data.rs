//! Column-major numeric datasets.

use std::collections::HashSet;

use crate::error::{check_dims, Error, Result};
use crate::scalar::Scalar;

/// An `N x K` feature matrix stored by column, plus a length-`N` target.
///
/// All values are finite, `N >= 1`, `K >= 1` and feature names are unique.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    columns: Vec<Vec<T>>,
    target: Vec<T>,
    feature_names: Vec<String>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(columns: Vec<Vec<T>>, target: Vec<T>, feature_names: Vec<String>) -> Result<Self> {
        if columns.is_empty() || target.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_dims(columns.len(), feature_names.len())?;
        for column in &columns {
            check_dims(target.len(), column.len())?;
        }
        let all_finite = columns
            .iter()
            .flatten()
            .chain(target.iter())
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::NonFinite);
        }
        let mut seen = HashSet::new();
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate feature name {name:?}"
                )));
            }
        }
        Ok(Self {
            columns,
            target,
            feature_names,
        })
    }

    /// Builds a dataset from row-major features with generated names `x0, x1, ...`.
    pub fn from_rows(rows: &[Vec<T>], target: Vec<T>) -> Result<Self> {
        let k = rows.first().map(Vec::len).ok_or(Error::EmptyInput)?;
        let mut columns = vec![Vec::with_capacity(rows.len()); k];
        for row in rows {
            check_dims(k, row.len())?;
            for (column, &v) in columns.iter_mut().zip(row) {
                column.push(v);
            }
        }
        let names = (0..k).map(|i| format!("x{i}")).collect();
        Self::new(columns, target, names)
    }

    pub fn n_samples(&self) -> usize {
        self.target.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, feature: usize) -> &[T] {
        &self.columns[feature]
    }

    pub fn columns(&self) -> &[Vec<T>] {
        &self.columns
    }

    pub fn target(&self) -> &[T] {
        &self.target
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    pub fn row(&self, n: usize) -> Vec<T> {
        self.columns.iter().map(|c| c[n]).collect()
    }

    /// Copies the rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyInput);
        }
        let columns = self
            .columns
            .iter()
            .map(|c| indices.iter().map(|&i| c[i]).collect())
            .collect();
        let target = indices.iter().map(|&i| self.target[i]).collect();
        Ok(Self {
            columns,
            target,
            feature_names: self.feature_names.clone(),
        })
    }

    /// Replaces the target, keeping the features.
    pub fn with_target(&self, target: Vec<T>) -> Result<Self> {
        Self::new(self.columns.clone(), target, self.feature_names.clone())
    }

    /// Column `feature` minimum and maximum.
    pub fn feature_range(&self, feature: usize) -> (T, T) {
        self.columns[feature]
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_ragged() {
        let err = Dataset::new(vec![vec![1.0, f64::NAN]], vec![0.0, 1.0], vec!["a".into()]);
        assert!(matches!(err, Err(Error::NonFinite)));
        let err = Dataset::new(vec![vec![1.0]], vec![0.0, 1.0], vec!["a".into()]);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        let err = Dataset::<f64>::new(vec![], vec![], vec![]);
        assert!(matches!(err, Err(Error::EmptyInput)));
    }

    #[test]
    fn rejects_duplicate_names() {
        let err = Dataset::new(
            vec![vec![1.0], vec![2.0]],
            vec![0.0],
            vec!["a".into(), "a".into()],
        );
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn rows_and_selection() {
        let d = Dataset::from_rows(
            &[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]],
            vec![0.0, 1.0, 2.0],
        )
        .unwrap();
        assert_eq!(d.n_samples(), 3);
        assert_eq!(d.n_features(), 2);
        assert_eq!(d.row(1), vec![3.0, 4.0]);
        let s = d.select_rows(&[2, 0]).unwrap();
        assert_eq!(s.column(1), &[6.0, 2.0]);
        assert_eq!(s.target(), &[2.0, 0.0]);
        assert_eq!(d.feature_range(0), (1.0, 5.0));
    }
}
