//! Plot data for univariate curves, pairwise surfaces and importance bars.

use std::fs;
use std::path::{Path, PathBuf};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::importance::compute_effects;
use crate::model::{Cga2mModel, TermId};
use crate::scalar::{mean, Scalar};

pub const CURVE_POINTS: usize = 256;
pub const SURFACE_POINTS: usize = 64;

/// `points` evenly spaced values from `lo` to `hi` inclusive, strictly
/// increasing. A degenerate range yields the single value `lo`.
pub fn grid<T: Scalar>(lo: T, hi: T, points: usize) -> Vec<T> {
    if hi.is_nan() || lo.is_nan() || hi <= lo || points < 2 {
        return vec![lo];
    }
    let steps = T::of_usize(points - 1);
    let mut out: Vec<T> = Vec::with_capacity(points);
    for k in 0..points {
        let x = if k + 1 == points {
            hi
        } else {
            lo + (hi - lo) * T::of_usize(k) / steps
        };
        if out.last().is_none_or(|&last| x > last) {
            out.push(x);
        }
    }
    out
}

/// A univariate term sampled over the observed range of its feature and
/// centered by the term's mean over the data.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateCurve<T> {
    pub feature: usize,
    pub xs: Vec<T>,
    pub values: Vec<T>,
}

/// A pairwise term on a grid; `values[a][b]` is at `(xs[a], ys[b])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSurface<T> {
    pub pair: (usize, usize),
    pub xs: Vec<T>,
    pub ys: Vec<T>,
    pub values: Vec<Vec<T>>,
}

fn missing(term: TermId) -> Error {
    Error::InvalidParameter(format!("model has no term {term:?}"))
}

pub fn univariate_curve<T: Scalar>(
    model: &Cga2mModel<T>,
    feature: usize,
    data: &Dataset<T>,
    points: usize,
) -> Result<UnivariateCurve<T>> {
    let id = TermId::Univariate(feature);
    let shape = model.term(id).ok_or_else(|| missing(id))?;
    let center = mean(&shape.eval_dataset(data));
    let (lo, hi) = data.feature_range(feature);
    let xs = grid(lo, hi, points);
    let values = xs
        .iter()
        .map(|&x| shape.eval(&[x]).map(|v| v - center))
        .collect::<Result<_>>()?;
    Ok(UnivariateCurve {
        feature,
        xs,
        values,
    })
}

pub fn pair_surface<T: Scalar>(
    model: &Cga2mModel<T>,
    pair: (usize, usize),
    data: &Dataset<T>,
    points: usize,
) -> Result<PairSurface<T>> {
    let id = TermId::Pairwise(pair.0, pair.1);
    let shape = model.term(id).ok_or_else(|| missing(id))?;
    let center = mean(&shape.eval_dataset(data));
    let (lo_x, hi_x) = data.feature_range(pair.0);
    let (lo_y, hi_y) = data.feature_range(pair.1);
    let xs = grid(lo_x, hi_x, points);
    let ys = grid(lo_y, hi_y, points);
    let values = xs
        .iter()
        .map(|&x| {
            ys.iter()
                .map(|&y| shape.eval(&[x, y]).map(|v| v - center))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    Ok(PairSurface {
        pair,
        xs,
        ys,
        values,
    })
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn csv_field(name: &str) -> String {
    if name.contains([',', '"', '\n']) {
        format!("\"{}\"", name.replace('"', "\"\""))
    } else {
        name.to_string()
    }
}

/// Writes one CSV per univariate term (`uni_<i>_<name>.csv`), one per
/// pairwise term (`pair_<i>_<j>_<a>__<b>.csv`, long format) and
/// `importance.csv`. Term values are centered by their mean over `data`.
///
/// `importance.csv` is skipped when `data` has a constant target, since
/// importances are undefined there. Returns the paths written.
pub fn export_plots<T: Scalar>(
    model: &Cga2mModel<T>,
    data: &Dataset<T>,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir)?;
    let names = model.feature_names();
    let mut written = Vec::new();

    for &i in model.univariate().keys() {
        let curve = univariate_curve(model, i, data, CURVE_POINTS)?;
        let mut text = format!("{},value\n", csv_field(&names[i]));
        for (x, v) in curve.xs.iter().zip(&curve.values) {
            text.push_str(&format!("{x},{v}\n"));
        }
        let path = out_dir.join(format!("uni_{i}_{}.csv", file_stem(&names[i])));
        fs::write(&path, text)?;
        written.push(path);
    }

    for &(i, j) in model.pairwise().keys() {
        let surface = pair_surface(model, (i, j), data, SURFACE_POINTS)?;
        let mut text = format!("{},{},value\n", csv_field(&names[i]), csv_field(&names[j]));
        for (x, row) in surface.xs.iter().zip(&surface.values) {
            for (y, v) in surface.ys.iter().zip(row) {
                text.push_str(&format!("{x},{y},{v}\n"));
            }
        }
        let path = out_dir.join(format!(
            "pair_{i}_{j}_{}__{}.csv",
            file_stem(&names[i]),
            file_stem(&names[j])
        ));
        fs::write(&path, text)?;
        written.push(path);
    }

    match compute_effects(model, data) {
        Ok(report) => {
            let path = out_dir.join("importance.csv");
            fs::write(&path, report.to_csv(names))?;
            written.push(path);
        }
        Err(Error::DegenerateTarget) => {}
        Err(e) => return Err(e),
    }
    Ok(written)
}
