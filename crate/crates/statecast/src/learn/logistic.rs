//! Logistic regression trained by batch gradient ascent on the
//! log-likelihood, with a Barzilai–Borwein adaptive step.

use crate::error::{Error, Result};
use crate::learn::Dataset;

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct LogisticConfig {
    /// Stop when the L2 norm of the mean log-likelihood gradient drops below
    /// this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            tolerance: 1e-6,
            max_iterations: 10_000,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct LogisticModel {
    weights: Vec<f64>,
    intercept: f64,
    /// Training settings actually used, plus how the run ended.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub converged: bool,
    pub iterations: usize,
}

impl LogisticModel {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    /// P(label = 1 | x).
    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(Error::InvalidArgument(format!(
                "dimension mismatch: model has {} features, input has {}",
                self.weights.len(),
                x.len()
            )));
        }
        let z = self.intercept
            + self
                .weights
                .iter()
                .zip(x)
                .map(|(w, v)| w * v)
                .sum::<f64>();
        Ok(sigmoid(z))
    }

    /// Hard label with ties broken toward the negative class.
    pub fn predict_label(&self, x: &[f64]) -> Result<f64> {
        Ok(if self.predict_proba(x)? > 0.5 { 1.0 } else { 0.0 })
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Fits the model by gradient ascent. Stops when the mean-gradient norm
/// reaches `config.tolerance` or the iteration cap; the model records which.
pub fn train_logistic(data: &Dataset, config: &LogisticConfig) -> Result<LogisticModel> {
    if data.n() < 2 {
        return Err(Error::InvalidArgument(
            "logistic training needs at least 2 rows".into(),
        ));
    }
    let positives = data.targets().iter().filter(|&&y| y == 1.0).count();
    if data.targets().iter().any(|&y| y != 0.0 && y != 1.0) {
        return Err(Error::InvalidArgument(
            "logistic training needs binary targets".into(),
        ));
    }
    if positives == 0 || positives == data.n() {
        return Err(Error::Model(
            "training set contains a single class: use the majority baseline instead of a \
             fitted model"
                .into(),
        ));
    }

    let n = data.n();
    let d = data.d();
    let scale = 1.0 / n as f64;
    let mut weights = vec![0.0f64; d];
    let mut intercept = 0.0f64;

    // Mean log-likelihood gradient at the current iterate.
    let grad = |w: &[f64], b: f64, gw: &mut [f64], gb: &mut f64| {
        gw.fill(0.0);
        *gb = 0.0;
        for i in 0..n {
            let row = data.row(i);
            let z = b + w.iter().zip(row).map(|(wj, x)| wj * x).sum::<f64>();
            let err = data.targets()[i] - sigmoid(z);
            for (g, x) in gw.iter_mut().zip(row) {
                *g += err * x;
            }
            *gb += err;
        }
        for g in gw.iter_mut() {
            *g *= scale;
        }
        *gb *= scale;
    };

    let mut g = vec![0.0f64; d];
    let mut gb = 0.0f64;
    grad(&weights, intercept, &mut g, &mut gb);
    let mut step = 0.5f64;
    let mut prev_g: Vec<f64> = Vec::new();
    let mut prev_gb = 0.0f64;
    let mut prev_w: Vec<f64> = Vec::new();
    let mut prev_b = 0.0f64;

    let mut converged = false;
    let mut iterations = 0usize;
    for iter in 0..config.max_iterations {
        iterations = iter + 1;
        let norm = (g.iter().map(|v| v * v).sum::<f64>() + gb * gb).sqrt();
        if norm <= config.tolerance {
            converged = true;
            iterations = iter;
            break;
        }

        if iter > 0 {
            // Barzilai–Borwein step: <Δx, Δg> / <Δg, Δg> (ascent form).
            let mut sy = 0.0;
            let mut yy = 0.0;
            for j in 0..d {
                let dw = weights[j] - prev_w[j];
                let dg = g[j] - prev_g[j];
                sy += dw * dg;
                yy += dg * dg;
            }
            let db = intercept - prev_b;
            let dgb = gb - prev_gb;
            sy += db * dgb;
            yy += dgb * dgb;
            if yy > 0.0 && sy.is_finite() {
                let bb = (sy / yy).abs();
                if bb.is_finite() && bb > 0.0 {
                    step = bb.clamp(1e-4, 1e4);
                }
            }
        }

        prev_w = weights.clone();
        prev_b = intercept;
        prev_g = g.clone();
        prev_gb = gb;
        for (w, gj) in weights.iter_mut().zip(&g) {
            *w += step * gj;
        }
        intercept += step * gb;
        grad(&weights, intercept, &mut g, &mut gb);
    }

    if weights.iter().any(|w| !w.is_finite()) || !intercept.is_finite() {
        return Err(Error::Model("logistic training diverged".into()));
    }
    Ok(LogisticModel {
        weights,
        intercept,
        tolerance: config.tolerance,
        max_iterations: config.max_iterations,
        converged,
        iterations,
    })
}
