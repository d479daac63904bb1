//! CSV ingestion, dataset splitting and monotone spec files.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::MonotonicityConfig;
use crate::scalar::Scalar;
use crate::tree::MonotoneDirection;

/// A dataset read from CSV, with what had to be dropped to get it.
#[derive(Debug, Clone)]
pub struct CsvLoad<T> {
    pub data: Dataset<T>,
    /// Rows with a missing or non-numeric cell in a numeric column.
    pub dropped_rows: usize,
    /// Columns with no numeric cell at all, such as categorical labels.
    pub dropped_columns: Vec<String>,
}

fn parse_cell(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads a headed CSV file and splits off `target_column`.
pub fn load_csv<T: Scalar>(path: impl AsRef<Path>, target_column: &str) -> Result<CsvLoad<T>> {
    let file = File::open(path.as_ref())?;
    read_csv(file, target_column)
}

/// [`load_csv`] over any reader.
///
/// A non-target column in which no cell parses as a finite number is dropped
/// whole. Any other row with an empty or unparseable cell (including `NaN`)
/// is dropped and counted.
pub fn read_csv<T: Scalar>(reader: impl Read, target_column: &str) -> Result<CsvLoad<T>> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = csv
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let target_index = header
        .iter()
        .position(|h| h == target_column)
        .ok_or_else(|| Error::UnknownColumn(target_column.to_string()))?;

    let mut records = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        records.push(record);
    }

    let numeric: Vec<bool> = (0..header.len())
        .map(|c| {
            c == target_index
                || records
                    .iter()
                    .any(|r| r.get(c).and_then(parse_cell).is_some())
        })
        .collect();
    let feature_indices: Vec<usize> = (0..header.len())
        .filter(|&c| c != target_index && numeric[c])
        .collect();
    let dropped_columns = (0..header.len())
        .filter(|&c| !numeric[c])
        .map(|c| header[c].clone())
        .collect();

    let mut columns: Vec<Vec<T>> = vec![Vec::with_capacity(records.len()); feature_indices.len()];
    let mut target = Vec::with_capacity(records.len());
    let mut dropped_rows = 0;
    'rows: for record in &records {
        if record.len() != header.len() {
            dropped_rows += 1;
            continue;
        }
        let Some(y) = parse_cell(&record[target_index]) else {
            dropped_rows += 1;
            continue;
        };
        let mut row = Vec::with_capacity(feature_indices.len());
        for &c in &feature_indices {
            match parse_cell(&record[c]) {
                Some(v) => row.push(v),
                None => {
                    dropped_rows += 1;
                    continue 'rows;
                }
            }
        }
        for (column, v) in columns.iter_mut().zip(row) {
            column.push(T::of(v));
        }
        target.push(T::of(y));
    }
    if target.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let names = feature_indices.iter().map(|&c| header[c].clone()).collect();
    Ok(CsvLoad {
        data: Dataset::new(columns, target, names)?,
        dropped_rows,
        dropped_columns,
    })
}

/// Rows read for scoring against a fixed feature list.
#[derive(Debug, Clone)]
pub struct FeatureLoad<T> {
    /// Columns in the requested order. The target is all zeros unless
    /// `has_target` is set.
    pub data: Dataset<T>,
    pub has_target: bool,
    /// Zero-based record number of each kept row.
    pub row_numbers: Vec<usize>,
    pub dropped_rows: usize,
}

/// Reads the named feature columns, in the order given, from a headed CSV.
/// Extra columns are ignored. The target column is optional: if named and
/// present it is read, otherwise `has_target` is false. Rows with an
/// unparseable cell in a used column are dropped and counted.
pub fn read_features<T: Scalar>(
    reader: impl Read,
    feature_names: &[String],
    target_column: Option<&str>,
) -> Result<FeatureLoad<T>> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = csv
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let feature_indices = feature_names
        .iter()
        .map(|name| {
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::UnknownColumn(name.clone()))
        })
        .collect::<Result<Vec<usize>>>()?;
    let target_index = target_column.and_then(|t| header.iter().position(|h| h == t));

    let mut columns: Vec<Vec<T>> = vec![Vec::new(); feature_indices.len()];
    let mut target = Vec::new();
    let mut row_numbers = Vec::new();
    let mut dropped_rows = 0;
    for (n, record) in csv.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let cell = |c: usize| record.get(c).and_then(parse_cell);
        let row: Option<Vec<f64>> = feature_indices.iter().map(|&c| cell(c)).collect();
        let y = match target_index {
            Some(c) => cell(c),
            None => Some(0.0),
        };
        let (Some(row), Some(y)) = (row, y) else {
            dropped_rows += 1;
            continue;
        };
        for (column, v) in columns.iter_mut().zip(row) {
            column.push(T::of(v));
        }
        target.push(T::of(y));
        row_numbers.push(n);
    }
    if target.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(FeatureLoad {
        data: Dataset::new(columns, target, feature_names.to_vec())?,
        has_target: target_index.is_some(),
        row_numbers,
        dropped_rows,
    })
}

/// Writes features then the target as a headed CSV.
pub fn write_csv<T: Scalar>(
    data: &Dataset<T>,
    target_name: &str,
    mut writer: impl Write,
) -> Result<()> {
    let header: Vec<&str> = data
        .feature_names()
        .iter()
        .map(String::as_str)
        .chain(std::iter::once(target_name))
        .collect();
    writeln!(writer, "{}", header.join(","))?;
    for n in 0..data.n_samples() {
        let cells: Vec<String> = data
            .row(n)
            .iter()
            .chain(std::iter::once(&data.target()[n]))
            .map(|v| v.to_string())
            .collect();
        writeln!(writer, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Train/validation/test fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitFractions {
    pub train: f64,
    pub valid: f64,
    pub test: f64,
}

impl SplitFractions {
    pub fn new(train: f64, valid: f64, test: f64) -> Result<Self> {
        let fracs = Self { train, valid, test };
        let all_positive = [train, valid, test]
            .iter()
            .all(|f| f.is_finite() && *f > 0.0);
        if !all_positive || ((train + valid + test) - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "split fractions {train}, {valid}, {test} must be positive and sum to 1"
            )));
        }
        Ok(fracs)
    }

    /// Parses `"0.6,0.2,0.2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<f64> = text
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad split fraction {p:?}")))
            })
            .collect::<Result<_>>()?;
        match parts.as_slice() {
            &[a, b, c] => Self::new(a, b, c),
            _ => Err(Error::Parse(format!(
                "expected three split fractions, got {text:?}"
            ))),
        }
    }
}

impl Default for SplitFractions {
    fn default() -> Self {
        Self {
            train: 0.6,
            valid: 0.2,
            test: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub valid: Vec<usize>,
    pub test: Vec<usize>,
}

/// Permutes `0..n` with `seed` and slices it. Validation and test sizes are
/// `floor(n * fraction)`; training takes the remainder.
pub fn split_indices(n: usize, fracs: SplitFractions, seed: u64) -> Result<SplitIndices> {
    let count = |f: f64| (n as f64 * f + 1e-9).floor() as usize;
    let n_valid = count(fracs.valid);
    let n_test = count(fracs.test);
    let n_train = n.saturating_sub(n_valid + n_test);
    if n_train == 0 || n_valid == 0 || n_test == 0 {
        return Err(Error::SplitTooSmall);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test = order.split_off(n_train + n_valid);
    let valid = order.split_off(n_train);
    Ok(SplitIndices {
        train: order,
        valid,
        test,
    })
}

pub fn split_dataset<T: Scalar>(
    data: &Dataset<T>,
    fracs: SplitFractions,
    seed: u64,
) -> Result<(Dataset<T>, Dataset<T>, Dataset<T>)> {
    let idx = split_indices(data.n_samples(), fracs, seed)?;
    Ok((
        data.select_rows(&idx.train)?,
        data.select_rows(&idx.valid)?,
        data.select_rows(&idx.test)?,
    ))
}

/// Parses monotone spec lines of the form `<column_name> <inc|dec>`.
/// Blank lines and `#` comments are skipped.
pub fn parse_monotone_spec(text: &str) -> Result<Vec<(String, MonotoneDirection)>> {
    let mut out: Vec<(String, MonotoneDirection)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let direction = match fields.as_slice() {
            [_, "inc"] => MonotoneDirection::Increasing,
            [_, "dec"] => MonotoneDirection::Decreasing,
            _ => {
                return Err(Error::Parse(format!(
                    "line {}: expected `<column> <inc|dec>`, got {line:?}",
                    lineno + 1
                )))
            }
        };
        let name = fields[0].to_string();
        if out.iter().any(|(n, _)| *n == name) {
            return Err(Error::Parse(format!(
                "line {}: column {name:?} listed twice",
                lineno + 1
            )));
        }
        out.push((name, direction));
    }
    Ok(out)
}

pub fn read_monotone_spec(path: impl AsRef<Path>) -> Result<Vec<(String, MonotoneDirection)>> {
    parse_monotone_spec(&std::fs::read_to_string(path)?)
}

/// Resolves named directions against `feature_names`; unnamed features are free.
pub fn monotonicity_for(
    feature_names: &[String],
    spec: &[(String, MonotoneDirection)],
) -> Result<MonotonicityConfig> {
    let mut config = MonotonicityConfig::free(feature_names.len());
    for (name, direction) in spec {
        let i = feature_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.clone()))?;
        config = config.with(i, *direction);
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_small_file() {
        let text = "a,b,y\n1,2,3\n4,5,6\n7,8,9\n";
        let load: CsvLoad<f64> = read_csv(text.as_bytes(), "y").unwrap();
        assert_eq!(load.data.n_samples(), 3);
        assert_eq!(load.data.n_features(), 2);
        assert_eq!(load.data.feature_names(), &["a", "b"]);
        assert_eq!(load.data.target(), &[3.0, 6.0, 9.0]);
        assert_eq!(load.dropped_rows, 0);
    }

    #[test]
    fn drops_nan_rows_and_text_columns() {
        let text = "a,kind,y\n1,red,3\nNaN,blue,6\n7,red,\n8,green,1\n";
        let load: CsvLoad<f64> = read_csv(text.as_bytes(), "y").unwrap();
        assert_eq!(load.dropped_rows, 2);
        assert_eq!(load.dropped_columns, vec!["kind".to_string()]);
        assert_eq!(load.data.column(0), &[1.0, 8.0]);
    }

    #[test]
    fn reads_features_by_name() {
        let names = vec!["b".to_string(), "a".to_string()];
        let text = "y,a,extra,b\n1,2,x,3\n4,NaN,x,6\n";
        let load: FeatureLoad<f64> = read_features(text.as_bytes(), &names, Some("y")).unwrap();
        assert!(load.has_target);
        assert_eq!(load.data.row(0), vec![3.0, 2.0]);
        assert_eq!((load.row_numbers.clone(), load.dropped_rows), (vec![0], 1));
        let load: FeatureLoad<f64> =
            read_features("a,b\n1,2\n".as_bytes(), &names, Some("y")).unwrap();
        assert!(!load.has_target);
        assert!(matches!(
            read_features::<f64>("a\n1\n".as_bytes(), &names, None),
            Err(Error::UnknownColumn(c)) if c == "b"
        ));
    }

    #[test]
    fn load_errors() {
        assert!(matches!(
            read_csv::<f64>("a,y\n1,2\n".as_bytes(), "z"),
            Err(Error::UnknownColumn(_))
        ));
        assert!(matches!(
            read_csv::<f64>("a,y\nx,NaN\n".as_bytes(), "y"),
            Err(Error::EmptyDataset)
        ));
        assert!(matches!(
            load_csv::<f64>("/nonexistent/file.csv", "y"),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn split_sizes() {
        let fr = SplitFractions::default();
        let s = split_indices(10, fr, 1).unwrap();
        assert_eq!((s.train.len(), s.valid.len(), s.test.len()), (6, 2, 2));
        let s = split_indices(20_640, fr, 1).unwrap();
        assert_eq!(
            (s.train.len(), s.valid.len(), s.test.len()),
            (12_384, 4_128, 4_128)
        );
        assert_eq!(split_indices(20_640, fr, 1).unwrap(), s);
        let mut all: Vec<usize> = s
            .train
            .iter()
            .chain(&s.valid)
            .chain(&s.test)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..20_640).collect::<Vec<_>>());
        assert!(matches!(split_indices(3, fr, 1), Err(Error::SplitTooSmall)));
    }

    #[test]
    fn split_fraction_parsing() {
        assert_eq!(
            SplitFractions::parse("0.6,0.2,0.2").unwrap(),
            SplitFractions::default()
        );
        assert!(SplitFractions::parse("0.5,0.2,0.2").is_err());
        assert!(SplitFractions::parse("0.5,0.5").is_err());
        assert!(SplitFractions::parse("1.2,-0.1,-0.1").is_err());
    }

    #[test]
    fn monotone_spec() {
        let spec = parse_monotone_spec("# constrained\nincome inc\n\nage dec  # old\n").unwrap();
        assert_eq!(
            spec,
            vec![
                ("income".to_string(), MonotoneDirection::Increasing),
                ("age".to_string(), MonotoneDirection::Decreasing),
            ]
        );
        assert!(parse_monotone_spec("income up\n").is_err());
        assert!(parse_monotone_spec("a inc\na dec\n").is_err());
        let names = vec!["age".to_string(), "x".to_string(), "income".to_string()];
        let config = monotonicity_for(&names, &spec).unwrap();
        assert_eq!(config.constrained(), vec![0, 2]);
        assert!(matches!(
            monotonicity_for(&names[1..], &spec),
            Err(Error::UnknownColumn(_))
        ));
    }
}
