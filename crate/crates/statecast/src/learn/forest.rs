//! Random forest over binary features, classification and regression.
//!
//! Standard construction: bootstrap row sampling per tree, a random feature
//! subset per node, greedy binary splits (feature value 0 goes left, 1 goes
//! right), split quality by Gini decrease for classification and
//! squared-error decrease for regression. Equal gains break toward the
//! lowest feature index and class ties toward the negative class, so a
//! seeded forest is fully deterministic.

use rand::Rng;

use crate::error::{Error, Result};
use crate::learn::Dataset;
use crate::seeding::stream_rng;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ForestMode {
    Classifier,
    Regressor,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// None = grow until pure or out of useful splits.
    pub max_depth: Option<u32>,
    /// Number of candidate features drawn per node.
    pub features_per_split: usize,
    pub seed: u64,
}

impl Default for ForestConfig {
    /// 100 trees with ⌈√40⌉ = 7 candidate features per split.
    fn default() -> Self {
        ForestConfig {
            n_trees: 100,
            max_depth: None,
            features_per_split: 7,
            seed: 0,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
enum Node {
    Split {
        feature: usize,
        left: Box<Node>,
        right: Box<Node>,
    },
    /// Mean target: the class-1 vote share for classifiers.
    Leaf { value: f64 },
}

impl Node {
    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Node::Leaf { value } => *value,
            Node::Split {
                feature,
                left,
                right,
            } => {
                if x[*feature] > 0.5 {
                    right.eval(x)
                } else {
                    left.eval(x)
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ForestModel {
    trees: Vec<Node>,
    mode: ForestMode,
    config: ForestConfig,
    d: usize,
    /// Raw split-gain totals per feature, accumulated over all trees.
    importance_raw: Vec<f64>,
}

impl ForestModel {
    pub fn mode(&self) -> ForestMode {
        self.mode
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// The configuration the forest was trained with.
    pub fn config(&self) -> &ForestConfig {
        &self.config
    }

    /// Mean of per-tree leaf values: a class-1 probability for classifiers,
    /// a real prediction for regressors.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.d {
            return Err(Error::InvalidArgument(format!(
                "dimension mismatch: model has {} features, input has {}",
                self.d,
                x.len()
            )));
        }
        let sum: f64 = self.trees.iter().map(|t| t.eval(x)).sum();
        Ok(sum / self.trees.len() as f64)
    }

    /// Hard label with ties broken toward the negative class.
    pub fn predict_label(&self, x: &[f64]) -> Result<f64> {
        Ok(if self.predict(x)? > 0.5 { 1.0 } else { 0.0 })
    }
}

/// Normalized per-feature importance: each feature's share of the total
/// split-criterion improvement across the forest. Sums to 1.
pub fn gini_importance(model: &ForestModel) -> Result<Vec<f64>> {
    let total: f64 = model.importance_raw.iter().sum();
    if model.trees.is_empty() || total <= 0.0 {
        return Err(Error::Model(
            "forest has no informative splits: importance undefined".into(),
        ));
    }
    Ok(model.importance_raw.iter().map(|v| v / total).collect())
}

struct TreeBuilder<'a> {
    data: &'a Dataset,
    mode: ForestMode,
    features_per_split: usize,
    max_depth: Option<u32>,
    importance: Vec<f64>,
}

/// Impurity total for a set of targets (count-weighted):
/// `n * gini` for classification, node SSE for regression. Both are
/// additive, so a split's gain is `parent − left − right`.
fn impurity_total(mode: ForestMode, sum: f64, sum_sq: f64, n: f64) -> f64 {
    match mode {
        ForestMode::Classifier => {
            // Binary Gini with p = sum/n: n * (1 − p² − (1−p)²) = 2p(1−p)n
            let p = sum / n;
            2.0 * p * (1.0 - p) * n
        }
        ForestMode::Regressor => sum_sq - sum * sum / n,
    }
}

impl TreeBuilder<'_> {
    fn build(&mut self, rows: &[usize], depth: u32, rng: &mut impl Rng) -> Node {
        let n = rows.len() as f64;
        let sum: f64 = rows.iter().map(|&i| self.data.targets()[i]).sum();
        let sum_sq: f64 = rows
            .iter()
            .map(|&i| {
                let y = self.data.targets()[i];
                y * y
            })
            .sum();
        let value = sum / n;

        let at_depth_limit = self.max_depth.is_some_and(|m| depth >= m);
        let parent_impurity = impurity_total(self.mode, sum, sum_sq, n);
        if rows.len() < 2 || at_depth_limit || parent_impurity <= 1e-12 {
            return Node::Leaf { value };
        }

        let mut candidates = sample_features(self.data.d(), self.features_per_split, rng);
        candidates.sort_unstable();

        let mut best: Option<(f64, usize)> = None;
        for &feature in &candidates {
            let mut right_n = 0.0f64;
            let mut right_sum = 0.0f64;
            let mut right_sq = 0.0f64;
            for &i in rows {
                if self.data.row(i)[feature] > 0.5 {
                    let y = self.data.targets()[i];
                    right_n += 1.0;
                    right_sum += y;
                    right_sq += y * y;
                }
            }
            let left_n = n - right_n;
            if right_n == 0.0 || left_n == 0.0 {
                continue;
            }
            let left_sum = sum - right_sum;
            let left_sq = sum_sq - right_sq;
            let gain = parent_impurity
                - impurity_total(self.mode, left_sum, left_sq, left_n)
                - impurity_total(self.mode, right_sum, right_sq, right_n);
            if gain > 1e-12 && best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, feature));
            }
        }

        let Some((gain, feature)) = best else {
            return Node::Leaf { value };
        };
        self.importance[feature] += gain;

        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&i| self.data.row(i)[feature] <= 0.5);
        let left = self.build(&left_rows, depth + 1, rng);
        let right = self.build(&right_rows, depth + 1, rng);
        Node::Split {
            feature,
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

/// `k` distinct feature indices by partial Fisher–Yates.
fn sample_features(d: usize, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let k = k.min(d);
    let mut pool: Vec<usize> = (0..d).collect();
    for i in 0..k {
        let j = rng.random_range(i..d);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

/// Trains a seeded forest. Tree `t` draws from stream (seed, t), so the
/// result is identical for any worker count or build order.
pub fn train_forest(data: &Dataset, mode: ForestMode, config: &ForestConfig) -> Result<ForestModel> {
    if data.n() < 2 {
        return Err(Error::InvalidArgument(
            "forest training needs at least 2 rows".into(),
        ));
    }
    if config.n_trees == 0 {
        return Err(Error::InvalidArgument("forest needs at least one tree".into()));
    }
    if config.features_per_split == 0 {
        return Err(Error::InvalidArgument(
            "features_per_split must be positive".into(),
        ));
    }
    if mode == ForestMode::Classifier
        && data.targets().iter().any(|&y| y != 0.0 && y != 1.0)
    {
        return Err(Error::InvalidArgument(
            "classification forest needs binary targets".into(),
        ));
    }

    let n = data.n();
    let mut trees = Vec::with_capacity(config.n_trees);
    let mut importance_raw = vec![0.0f64; data.d()];
    for t in 0..config.n_trees {
        let mut rng = stream_rng(config.seed, t as u64);
        let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let mut builder = TreeBuilder {
            data,
            mode,
            features_per_split: config.features_per_split,
            max_depth: config.max_depth,
            importance: vec![0.0; data.d()],
        };
        let root = builder.build(&rows, 0, &mut rng);
        for (acc, v) in importance_raw.iter_mut().zip(&builder.importance) {
            *acc += v;
        }
        trees.push(root);
    }

    Ok(ForestModel {
        trees,
        mode,
        config: *config,
        d: data.d(),
        importance_raw,
    })
}
