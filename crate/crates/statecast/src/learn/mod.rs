//! From-scratch supervised models and the evaluation harness.

mod cv;
mod forest;
mod lasso;
mod logistic;
pub mod metrics;

pub use cv::{
    cross_validate, significance_threshold, top_k_frequency, EvalReport, ModelSpec, TOP_K,
};
pub use forest::{gini_importance, train_forest, ForestConfig, ForestMode, ForestModel};
pub use lasso::{train_lasso, LassoModel};
pub use logistic::{train_logistic, LogisticConfig, LogisticModel};
pub use metrics::{accuracy, r_squared};

use rand::Rng;

use crate::corpus::{encode_covariates, feature_names, national_threshold, Corpus};
use crate::error::{Error, Result};

/// A supervised dataset: an n×d binary feature matrix with real targets.
#[derive(Clone, PartialEq, Debug)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    targets: Vec<f64>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        features: Vec<Vec<f64>>,
        targets: Vec<f64>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidArgument("dataset has no rows".into()));
        }
        if features.len() != targets.len() {
            return Err(Error::InvalidArgument(format!(
                "{} feature rows but {} targets",
                features.len(),
                targets.len()
            )));
        }
        let d = feature_names.len();
        for row in &features {
            if row.len() != d {
                return Err(Error::InvalidArgument(format!(
                    "feature row of width {} does not match the {} feature names",
                    row.len(),
                    d
                )));
            }
            for v in row {
                if *v != 0.0 && *v != 1.0 {
                    return Err(Error::InvalidArgument(format!(
                        "feature entries must be binary, got {v}"
                    )));
                }
            }
        }
        if targets.iter().any(|y| !y.is_finite()) {
            return Err(Error::InvalidArgument("targets must be finite".into()));
        }
        Ok(Dataset {
            features,
            targets,
            feature_names,
        })
    }

    pub fn n(&self) -> usize {
        self.features.len()
    }

    pub fn d(&self) -> usize {
        self.feature_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.iter().map(Vec::as_slice)
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Rows `rows` in the given order, as a new dataset.
    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            features: rows.iter().map(|&i| self.features[i].clone()).collect(),
            targets: rows.iter().map(|&i| self.targets[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Keeps only the named feature columns, in the given order.
    pub fn select_features(&self, keep: &[usize]) -> Result<Dataset> {
        for &j in keep {
            if j >= self.d() {
                return Err(Error::InvalidArgument(format!(
                    "feature index {j} out of range, d = {}",
                    self.d()
                )));
            }
        }
        Ok(Dataset {
            features: self
                .features
                .iter()
                .map(|row| keep.iter().map(|&j| row[j]).collect())
                .collect(),
            targets: self.targets.clone(),
            feature_names: keep
                .iter()
                .map(|&j| self.feature_names[j].clone())
                .collect(),
        })
    }

    /// Same features with targets permuted uniformly at random; destroys any
    /// real signal while preserving the label balance.
    pub fn with_shuffled_targets(&self, rng: &mut impl Rng) -> Dataset {
        let mut targets = self.targets.clone();
        for i in (1..targets.len()).rev() {
            let j = rng.random_range(0..=i);
            targets.swap(i, j);
        }
        Dataset {
            features: self.features.clone(),
            targets,
            feature_names: self.feature_names.clone(),
        }
    }
}

/// Classification dataset over the whole corpus: covariates against whether
/// the policy produced a national action.
pub fn classification_dataset(corpus: &Corpus) -> Result<Dataset> {
    let tables = corpus.trait_tables();
    let mut features = Vec::with_capacity(corpus.len());
    let mut targets = Vec::with_capacity(corpus.len());
    for p in corpus.policies() {
        features.push(encode_covariates(p, tables)?.to_f64());
        targets.push(f64::from(p.national_year().is_some()));
    }
    Dataset::new(features, targets, feature_names(tables))
}

/// Regression dataset over national-action policies only: covariates
/// against the adoption threshold.
pub fn threshold_dataset(corpus: &Corpus) -> Result<Dataset> {
    let tables = corpus.trait_tables();
    let mut features = Vec::new();
    let mut targets = Vec::new();
    for p in corpus.policies() {
        if p.national_year().is_some() {
            features.push(encode_covariates(p, tables)?.to_f64());
            targets.push(f64::from(national_threshold(p)?));
        }
    }
    if features.is_empty() {
        return Err(Error::InvalidArgument(
            "no national-action policies: threshold regression needs positives".into(),
        ));
    }
    Dataset::new(features, targets, feature_names(tables))
}
