//! The composite additive model and its text serialization.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::boosting::ShapeFunction;
use crate::data::Dataset;
use crate::error::{check_dims, Error, Result};
use crate::scalar::Scalar;
use crate::tree::{MonotoneDirection, TreeNode};

pub const FORMAT_VERSION: u64 = 1;

/// Per-feature monotonicity directions. Features with a direction other
/// than `Free` form the constrained set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonotonicityConfig {
    directions: Vec<MonotoneDirection>,
}

impl MonotonicityConfig {
    pub fn new(directions: Vec<MonotoneDirection>) -> Self {
        Self { directions }
    }

    pub fn free(n_features: usize) -> Self {
        Self::new(vec![MonotoneDirection::Free; n_features])
    }

    pub fn with(mut self, feature: usize, direction: MonotoneDirection) -> Self {
        self.directions[feature] = direction;
        self
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn direction(&self, feature: usize) -> MonotoneDirection {
        self.directions[feature]
    }

    pub fn directions(&self) -> &[MonotoneDirection] {
        &self.directions
    }

    pub fn constrained(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.directions[i].is_constrained())
            .collect()
    }

    pub fn unconstrained(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.directions[i].is_constrained())
            .collect()
    }

    /// Every unordered feature pair `(i, j)` with `i < j`.
    pub fn candidate_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect()
    }

    /// Axis directions a term over `subset` inherits.
    pub fn directions_for(&self, subset: &[usize]) -> Vec<MonotoneDirection> {
        subset.iter().map(|&i| self.directions[i]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    Uni,
    Pair,
    High,
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermKind::Uni => "uni",
            TermKind::Pair => "pair",
            TermKind::High => "high",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermId {
    Univariate(usize),
    Pairwise(usize, usize),
    Higher,
}

impl TermId {
    pub fn kind(self) -> TermKind {
        match self {
            TermId::Univariate(_) => TermKind::Uni,
            TermId::Pairwise(..) => TermKind::Pair,
            TermId::Higher => TermKind::High,
        }
    }

    /// Human-readable name built from feature names, e.g. `age` or `age:rooms`.
    pub fn label(self, feature_names: &[String]) -> String {
        match self {
            TermId::Univariate(i) => feature_names[i].clone(),
            TermId::Pairwise(i, j) => format!("{}:{}", feature_names[i], feature_names[j]),
            TermId::Higher => "higher_order".to_string(),
        }
    }
}

/// Intercept plus univariate, pairwise and optional higher-order terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Cga2mModel<T> {
    intercept: T,
    univariate: BTreeMap<usize, ShapeFunction<T>>,
    pairwise: BTreeMap<(usize, usize), ShapeFunction<T>>,
    higher: Option<ShapeFunction<T>>,
    feature_names: Vec<String>,
    monotonicity: MonotonicityConfig,
}

impl<T: Scalar> Cga2mModel<T> {
    /// A model with no terms, predicting `intercept` everywhere.
    pub fn new(
        intercept: T,
        feature_names: Vec<String>,
        monotonicity: MonotonicityConfig,
    ) -> Result<Self> {
        if feature_names.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_dims(feature_names.len(), monotonicity.len())?;
        if !intercept.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            intercept,
            univariate: BTreeMap::new(),
            pairwise: BTreeMap::new(),
            higher: None,
            feature_names,
            monotonicity,
        })
    }

    pub fn intercept(&self) -> T {
        self.intercept
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn monotonicity(&self) -> &MonotonicityConfig {
        &self.monotonicity
    }

    pub fn univariate(&self) -> &BTreeMap<usize, ShapeFunction<T>> {
        &self.univariate
    }

    pub fn pairwise(&self) -> &BTreeMap<(usize, usize), ShapeFunction<T>> {
        &self.pairwise
    }

    pub fn higher(&self) -> Option<&ShapeFunction<T>> {
        self.higher.as_ref()
    }

    fn expected_subset(&self, id: TermId) -> Result<Vec<usize>> {
        let k = self.n_features();
        let subset = match id {
            TermId::Univariate(i) => vec![i],
            TermId::Pairwise(i, j) => {
                if i >= j {
                    return Err(Error::InvalidParameter(format!(
                        "pair ({i}, {j}) must satisfy i < j"
                    )));
                }
                vec![i, j]
            }
            TermId::Higher => (0..k).collect(),
        };
        if let Some(&bad) = subset.iter().find(|&&i| i >= k) {
            return Err(Error::BadFeatureIndex(bad));
        }
        Ok(subset)
    }

    /// Directions a term must carry: inherited per axis for univariate and
    /// pairwise terms, all free for the higher-order term.
    pub fn expected_directions(&self, id: TermId) -> Result<Vec<MonotoneDirection>> {
        let subset = self.expected_subset(id)?;
        Ok(match id {
            TermId::Higher => vec![MonotoneDirection::Free; subset.len()],
            _ => self.monotonicity.directions_for(&subset),
        })
    }

    /// Adds or replaces a term after checking its subset and directions.
    pub fn insert_term(
        &mut self,
        id: TermId,
        shape: ShapeFunction<T>,
    ) -> Result<Option<ShapeFunction<T>>> {
        let subset = self.expected_subset(id)?;
        if shape.subset() != subset.as_slice() {
            return Err(Error::InvalidParameter(format!(
                "term {id:?} has subset {:?}",
                shape.subset()
            )));
        }
        if shape.directions() != self.expected_directions(id)?.as_slice() {
            return Err(Error::InvalidParameter(format!(
                "term {id:?} carries directions {:?} inconsistent with the monotonicity config",
                shape.directions()
            )));
        }
        Ok(match id {
            TermId::Univariate(i) => self.univariate.insert(i, shape),
            TermId::Pairwise(i, j) => self.pairwise.insert((i, j), shape),
            TermId::Higher => self.higher.replace(shape),
        })
    }

    pub fn remove_term(&mut self, id: TermId) -> Option<ShapeFunction<T>> {
        match id {
            TermId::Univariate(i) => self.univariate.remove(&i),
            TermId::Pairwise(i, j) => self.pairwise.remove(&(i, j)),
            TermId::Higher => self.higher.take(),
        }
    }

    pub fn term(&self, id: TermId) -> Option<&ShapeFunction<T>> {
        match id {
            TermId::Univariate(i) => self.univariate.get(&i),
            TermId::Pairwise(i, j) => self.pairwise.get(&(i, j)),
            TermId::Higher => self.higher.as_ref(),
        }
    }

    /// All terms: univariate by feature, pairwise by pair, then higher-order.
    pub fn terms(&self) -> impl Iterator<Item = (TermId, &ShapeFunction<T>)> {
        self.univariate
            .iter()
            .map(|(&i, f)| (TermId::Univariate(i), f))
            .chain(
                self.pairwise
                    .iter()
                    .map(|(&(i, j), f)| (TermId::Pairwise(i, j), f)),
            )
            .chain(self.higher.iter().map(|f| (TermId::Higher, f)))
    }

    pub fn n_terms(&self) -> usize {
        self.terms().count()
    }

    /// `intercept + sum of term outputs`, summed in [`Self::terms`] order.
    pub fn predict(&self, row: &[T]) -> Result<T> {
        check_dims(self.n_features(), row.len())?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(self
            .terms()
            .fold(self.intercept, |acc, (_, f)| acc + f.eval_full_row(row)))
    }

    /// Row-wise [`Self::predict`]; results are bit-identical to it.
    pub fn predict_batch(&self, data: &Dataset<T>) -> Result<Vec<T>> {
        check_dims(self.n_features(), data.n_features())?;
        let mut out = vec![self.intercept; data.n_samples()];
        for (_, f) in self.terms() {
            for (acc, v) in out.iter_mut().zip(f.eval_dataset(data)) {
                *acc = *acc + v;
            }
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        serialize(self)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        deserialize(text)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile<T> {
    format_version: u64,
    intercept: T,
    feature_names: Vec<String>,
    monotonicity: MonotonicityConfig,
    terms: Vec<TermRecord<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord<T> {
    kind: TermKind,
    subset: Vec<usize>,
    shrinkage: T,
    trees: Vec<TreeNode<T>>,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: Option<u64>,
}

/// Writes the model as a single-line JSON document with a trailing newline.
/// Numbers use the shortest representation that parses back to the same bits.
pub fn serialize<T: Scalar>(model: &Cga2mModel<T>) -> String {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        intercept: model.intercept,
        feature_names: model.feature_names.clone(),
        monotonicity: model.monotonicity.clone(),
        terms: model
            .terms()
            .map(|(id, f)| TermRecord {
                kind: id.kind(),
                subset: f.subset().to_vec(),
                shrinkage: f.shrinkage(),
                trees: f.trees().to_vec(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string(&file).expect("model serializes to JSON");
    text.push('\n');
    text
}

pub fn deserialize<T: Scalar>(text: &str) -> Result<Cga2mModel<T>> {
    let probe: VersionProbe =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match probe.format_version {
        None => return Err(Error::Parse("missing field `format_version`".into())),
        Some(FORMAT_VERSION) => {}
        Some(v) => return Err(Error::UnsupportedVersion(v)),
    }
    let file: ModelFile<T> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let field_error = |field: String, e: Error| Error::Parse(format!("{field}: {e}"));

    let mut model = Cga2mModel::new(file.intercept, file.feature_names, file.monotonicity)
        .map_err(|e| field_error("header".into(), e))?;
    for (t, record) in file.terms.into_iter().enumerate() {
        let context = format!("terms[{t}]");
        let id = match (record.kind, record.subset.as_slice()) {
            (TermKind::Uni, &[i]) => TermId::Univariate(i),
            (TermKind::Pair, &[i, j]) => TermId::Pairwise(i, j),
            (TermKind::High, _) => TermId::Higher,
            (kind, subset) => {
                return Err(Error::Parse(format!(
                    "{context}.subset: {} entries for a {kind} term",
                    subset.len()
                )))
            }
        };
        if model.term(id).is_some() {
            return Err(Error::Parse(format!("{context}: duplicate term")));
        }
        let directions = model
            .expected_directions(id)
            .map_err(|e| field_error(format!("{context}.subset"), e))?;
        let shape = ShapeFunction::new(record.subset, record.trees, record.shrinkage, directions)
            .map_err(|e| field_error(context.clone(), e))?;
        model
            .insert_term(id, shape)
            .map_err(|e| field_error(context.clone(), e))?;
    }
    Ok(model)
}
