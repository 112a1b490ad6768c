//! Seeded k-fold cross-validation over many independent trials.
//!
//! Every trial draws its own random fold partition from stream
//! (seed, trial), scores each fold on held-out data, and reports the mean
//! of the fold scores. Percentiles are taken empirically over trials.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::learn::forest::{gini_importance, train_forest, ForestConfig, ForestMode};
use crate::learn::lasso::train_lasso;
use crate::learn::logistic::{train_logistic, LogisticConfig};
use crate::learn::metrics::{accuracy, r_squared};
use crate::learn::Dataset;
use crate::seeding::stream_rng;
use crate::textfmt::{f9, mean, quantile};

/// Which model a cross-validation run trains per fold.
#[derive(Clone, PartialEq, Debug)]
pub enum ModelSpec {
    Logistic(LogisticConfig),
    ForestClassifier(ForestConfig),
    ForestRegressor(ForestConfig),
    Lasso { lambda: f64 },
}

impl ModelSpec {
    pub fn is_classifier(&self) -> bool {
        matches!(self, ModelSpec::Logistic(_) | ModelSpec::ForestClassifier(_))
    }

    fn tracks_importance(&self) -> bool {
        matches!(
            self,
            ModelSpec::ForestClassifier(_) | ModelSpec::ForestRegressor(_)
        )
    }
}

/// Cross-validation outcome: per-trial scores (accuracy or R²), their mean
/// and 5th/95th percentiles, and for forests the importance statistics.
#[derive(Clone, PartialEq, Debug)]
pub struct EvalReport {
    pub trials: usize,
    pub scores: Vec<f64>,
    pub mean: f64,
    pub p05: f64,
    pub p95: f64,
    /// Mean normalized importance per feature (forest specs only).
    pub per_feature_importance: Option<Vec<f64>>,
    /// Fraction of trials in which each feature ranked in the importance
    /// top 5 (forest specs only).
    pub top5_frequency: Option<Vec<f64>>,
    /// Chance level for top-5 membership: Σ_{i<5} 1/(d−i).
    pub significance_threshold: f64,
    pub feature_names: Vec<String>,
}

pub const TOP_K: usize = 5;

/// Runs `trials` independent k-fold partitions. Trials execute in parallel;
/// results are identical for any worker count.
pub fn cross_validate(
    spec: &ModelSpec,
    data: &Dataset,
    folds: usize,
    trials: usize,
    seed: u64,
) -> Result<EvalReport> {
    if folds < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 folds, got {folds}"
        )));
    }
    if data.n() < folds {
        return Err(Error::InvalidArgument(format!(
            "fold count {folds} exceeds the {} available rows",
            data.n()
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least 1 trial".into()));
    }

    struct TrialOutcome {
        score: f64,
        importance: Option<Vec<f64>>,
    }

    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialOutcome> {
            let mut rng = stream_rng(seed, trial as u64);
            let partition = random_partition(data.n(), folds, &mut rng);
            let mut fold_scores = Vec::with_capacity(folds);
            let mut fold_importance: Option<Vec<f64>> = None;
            for fold in 0..folds {
                let (train_rows, test_rows) = split_rows(&partition, fold);
                let train = data.subset(&train_rows);
                let test = data.subset(&test_rows);
                let (score, importance) = fit_and_score(spec, &train, &test, &mut rng)?;
                fold_scores.push(score);
                if let Some(imp) = importance {
                    match &mut fold_importance {
                        None => fold_importance = Some(imp),
                        Some(acc) => {
                            for (a, v) in acc.iter_mut().zip(&imp) {
                                *a += v;
                            }
                        }
                    }
                }
            }
            if let Some(acc) = &mut fold_importance {
                for v in acc.iter_mut() {
                    *v /= folds as f64;
                }
            }
            Ok(TrialOutcome {
                score: mean(&fold_scores),
                importance: fold_importance,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let scores: Vec<f64> = outcomes.iter().map(|o| o.score).collect();
    let d = data.d();
    let (per_feature_importance, top5_frequency) = if spec.tracks_importance() {
        let mut mean_imp = vec![0.0f64; d];
        let mut rankings: Vec<Vec<usize>> = Vec::with_capacity(trials);
        for o in &outcomes {
            let imp = o.importance.as_ref().expect("forest trials carry importance");
            for (a, v) in mean_imp.iter_mut().zip(imp) {
                *a += v / trials as f64;
            }
            rankings.push(rank_desc(imp));
        }
        let (freq, _) = top_k_frequency(&rankings, d, TOP_K)?;
        (Some(mean_imp), Some(freq))
    } else {
        (None, None)
    };

    Ok(EvalReport {
        trials,
        mean: mean(&scores),
        p05: quantile(&scores, 0.05),
        p95: quantile(&scores, 0.95),
        scores,
        per_feature_importance,
        top5_frequency,
        significance_threshold: significance_threshold(d, TOP_K),
        feature_names: data.feature_names().to_vec(),
    })
}

/// Shuffled row indices chunked into `folds` near-equal parts.
fn random_partition(n: usize, folds: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    (0..folds)
        .map(|f| perm[f * n / folds..(f + 1) * n / folds].to_vec())
        .collect()
}

fn split_rows(partition: &[Vec<usize>], fold: usize) -> (Vec<usize>, Vec<usize>) {
    let mut train = Vec::new();
    for (i, part) in partition.iter().enumerate() {
        if i != fold {
            train.extend_from_slice(part);
        }
    }
    (train, partition[fold].clone())
}

fn fit_and_score(
    spec: &ModelSpec,
    train: &Dataset,
    test: &Dataset,
    rng: &mut impl Rng,
) -> Result<(f64, Option<Vec<f64>>)> {
    match spec {
        ModelSpec::Logistic(config) => {
            let model = train_logistic(train, config)?;
            let preds: Vec<f64> = test
                .rows()
                .map(|x| model.predict_label(x))
                .collect::<Result<_>>()?;
            Ok((accuracy(test.targets(), &preds)?, None))
        }
        ModelSpec::ForestClassifier(config) => {
            let config = ForestConfig {
                seed: rng.random(),
                ..*config
            };
            let model = train_forest(train, ForestMode::Classifier, &config)?;
            let preds: Vec<f64> = test
                .rows()
                .map(|x| model.predict_label(x))
                .collect::<Result<_>>()?;
            Ok((
                accuracy(test.targets(), &preds)?,
                Some(gini_importance(&model)?),
            ))
        }
        ModelSpec::ForestRegressor(config) => {
            let config = ForestConfig {
                seed: rng.random(),
                ..*config
            };
            let model = train_forest(train, ForestMode::Regressor, &config)?;
            let preds: Vec<f64> = test
                .rows()
                .map(|x| model.predict(x))
                .collect::<Result<_>>()?;
            Ok((
                r_squared(test.targets(), &preds)?,
                Some(gini_importance(&model)?),
            ))
        }
        ModelSpec::Lasso { lambda } => {
            let model = train_lasso(train, *lambda)?;
            let preds: Vec<f64> = test
                .rows()
                .map(|x| model.predict(x))
                .collect::<Result<_>>()?;
            Ok((r_squared(test.targets(), &preds)?, None))
        }
    }
}

/// Feature indices sorted by importance, descending; ties go to the lower
/// index.
fn rank_desc(importance: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..importance.len()).collect();
    idx.sort_by(|&a, &b| {
        importance[b]
            .partial_cmp(&importance[a])
            .expect("finite importance")
            .then(a.cmp(&b))
    });
    idx
}

/// Per-feature frequency of ranking in the top k, plus the chance-level
/// significance threshold Σ_{i=0}^{k−1} 1/(d−i).
pub fn top_k_frequency(
    rankings: &[Vec<usize>],
    d: usize,
    k: usize,
) -> Result<(Vec<f64>, f64)> {
    if rankings.is_empty() {
        return Err(Error::InvalidArgument("no rankings supplied".into()));
    }
    if k > d {
        return Err(Error::InvalidArgument(format!(
            "top-{k} undefined with only {d} features"
        )));
    }
    let mut counts = vec![0usize; d];
    for ranking in rankings {
        for &f in ranking.iter().take(k) {
            if f >= d {
                return Err(Error::InvalidArgument(format!(
                    "ranking names feature {f}, but d = {d}"
                )));
            }
            counts[f] += 1;
        }
    }
    let freq = counts
        .iter()
        .map(|&c| c as f64 / rankings.len() as f64)
        .collect();
    Ok((freq, significance_threshold(d, k)))
}

/// Probability that a fixed feature lands in a uniformly random top-k set.
pub fn significance_threshold(d: usize, k: usize) -> f64 {
    (0..k).map(|i| 1.0 / (d - i) as f64).sum()
}

impl EvalReport {
    /// Structured-text document with fixed, alphabetically ordered keys.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("statecast-eval v1\n");
        out.push_str(&format!("mean {}\n", f9(self.mean)));
        out.push_str(&format!("p05 {}\n", f9(self.p05)));
        out.push_str(&format!("p95 {}\n", f9(self.p95)));
        out.push_str(&list_line(
            "per_feature_importance",
            self.per_feature_importance.as_deref(),
            &self.feature_names,
        ));
        out.push_str(&format!(
            "significance_threshold {}\n",
            f9(self.significance_threshold)
        ));
        out.push_str(&list_line(
            "top5_frequency",
            self.top5_frequency.as_deref(),
            &self.feature_names,
        ));
        out.push_str(&format!("trials {}\n", self.trials));
        out
    }

    /// Per-trial scores as delimited text.
    pub fn scores_table(&self, delimiter: char) -> String {
        let mut out = format!("trial{delimiter}score\n");
        for (i, s) in self.scores.iter().enumerate() {
            out.push_str(&format!("{i}{delimiter}{}\n", f9(*s)));
        }
        out
    }
}

fn list_line(key: &str, values: Option<&[f64]>, names: &[String]) -> String {
    match values {
        None => format!("{key} none\n"),
        Some(vs) => {
            let mut line = String::from(key);
            for (name, v) in names.iter().zip(vs) {
                line.push_str(&format!(" {name}:{}", f9(*v)));
            }
            line.push('\n');
            line
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significance_threshold_matches_frozen_value() {
        // 1/40 + 1/39 + 1/38 + 1/37 + 1/36
        let t = significance_threshold(40, 5);
        assert!((t - 0.13176161991951466).abs() < 1e-12);
        assert!((t - 0.132).abs() < 5e-4);
    }

    #[test]
    fn single_trial_frequencies_are_zero_or_one() {
        let rankings = vec![vec![3, 1, 0, 2, 4, 5]];
        let (freq, _) = top_k_frequency(&rankings, 6, 5).unwrap();
        assert!(freq.iter().all(|&f| f == 0.0 || f == 1.0));
        assert_eq!(freq.iter().sum::<f64>(), 5.0);
    }

    #[test]
    fn uniform_random_rankings_match_chance_level() {
        use rand::Rng;
        let d = 40;
        let mut rng = crate::seeding::stream_rng(31, 0);
        let mut rankings = Vec::new();
        for _ in 0..10_000 {
            let mut idx: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                let j = rng.random_range(0..=i);
                idx.swap(i, j);
            }
            rankings.push(idx);
        }
        let (freq, _) = top_k_frequency(&rankings, d, 5).unwrap();
        let expect = 5.0 / 40.0;
        for (f, v) in freq.iter().enumerate() {
            assert!((v - expect).abs() < 0.02, "feature {f}: {v}");
        }
    }

    #[test]
    fn k_larger_than_d_is_rejected() {
        assert!(top_k_frequency(&[vec![0, 1]], 2, 3).is_err());
        assert!(top_k_frequency(&[], 2, 1).is_err());
    }

    #[test]
    fn partition_covers_every_row_once() {
        let mut rng = crate::seeding::stream_rng(32, 0);
        let partition = random_partition(170, 4, &mut rng);
        assert_eq!(partition.len(), 4);
        let mut all: Vec<usize> = partition.concat();
        assert_eq!(all.len(), 170);
        all.sort_unstable();
        assert_eq!(all, (0..170).collect::<Vec<_>>());
        let sizes: Vec<usize> = partition.iter().map(Vec::len).collect();
        assert!(sizes.iter().all(|s| *s == 42 || *s == 43));
    }
}
