//! Lasso linear regression solved by cyclic coordinate descent with
//! soft-thresholding.
//!
//! Minimizes `SS_res / (2n) + lambda * Σ|w_j|` with an unpenalized
//! intercept.

use crate::error::{Error, Result};
use crate::learn::Dataset;

const TOLERANCE: f64 = 1e-8;
const MAX_SWEEPS: usize = 100_000;

#[derive(Clone, PartialEq, Debug)]
pub struct LassoModel {
    weights: Vec<f64>,
    intercept: f64,
    pub lambda: f64,
}

impl LassoModel {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(Error::InvalidArgument(format!(
                "dimension mismatch: model has {} features, input has {}",
                self.weights.len(),
                x.len()
            )));
        }
        Ok(self.intercept
            + self
                .weights
                .iter()
                .zip(x)
                .map(|(w, v)| w * v)
                .sum::<f64>())
    }
}

fn soft_threshold(rho: f64, lambda: f64) -> f64 {
    if rho > lambda {
        rho - lambda
    } else if rho < -lambda {
        rho + lambda
    } else {
        0.0
    }
}

/// Cyclic coordinate descent until the largest coordinate change in a sweep
/// falls below 1e-8.
pub fn train_lasso(data: &Dataset, lambda: f64) -> Result<LassoModel> {
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "lasso penalty must be non-negative, got {lambda}"
        )));
    }
    if data.n() < 2 {
        return Err(Error::InvalidArgument(
            "lasso training needs at least 2 rows".into(),
        ));
    }

    let n = data.n();
    let d = data.d();
    let inv_n = 1.0 / n as f64;
    // Column second moments; binary features make these column means.
    let mut z = vec![0.0f64; d];
    for i in 0..n {
        for (zj, x) in z.iter_mut().zip(data.row(i)) {
            *zj += x * x * inv_n;
        }
    }

    let mut weights = vec![0.0f64; d];
    let mut intercept = data.targets().iter().sum::<f64>() * inv_n;
    // residual r_i = y_i − intercept − x_i·w
    let mut residual: Vec<f64> = data
        .targets()
        .iter()
        .map(|y| y - intercept)
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut max_change = 0.0f64;

        for j in 0..d {
            if z[j] == 0.0 {
                continue;
            }
            let old = weights[j];
            let mut rho = 0.0;
            for (i, r) in residual.iter().enumerate() {
                let x = data.row(i)[j];
                if x != 0.0 {
                    rho += x * (r + x * old);
                }
            }
            rho *= inv_n;
            let new = soft_threshold(rho, lambda) / z[j];
            if new != old {
                let delta = new - old;
                for (i, r) in residual.iter_mut().enumerate() {
                    let x = data.row(i)[j];
                    if x != 0.0 {
                        *r -= delta * x;
                    }
                }
                weights[j] = new;
                max_change = max_change.max(delta.abs());
            }
        }

        let shift = residual.iter().sum::<f64>() * inv_n;
        if shift != 0.0 {
            intercept += shift;
            for r in residual.iter_mut() {
                *r -= shift;
            }
            max_change = max_change.max(shift.abs());
        }

        if max_change < TOLERANCE {
            break;
        }
    }

    Ok(LassoModel {
        weights,
        intercept,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::stream_rng;
    use rand::Rng;

    fn dataset(xs: Vec<Vec<f64>>, ys: Vec<f64>) -> Dataset {
        let d = xs[0].len();
        let names = (0..d).map(|i| format!("f{i}")).collect();
        Dataset::new(xs, ys, names).unwrap()
    }

    /// Ordinary least squares via normal equations with Gaussian
    /// elimination; the independent oracle for the lambda = 0 case.
    fn ols(xs: &[Vec<f64>], ys: &[f64]) -> Vec<f64> {
        let d = xs[0].len() + 1; // intercept first
        let mut ata = vec![vec![0.0f64; d]; d];
        let mut atb = vec![0.0f64; d];
        let aug = |row: &[f64]| -> Vec<f64> {
            let mut v = vec![1.0];
            v.extend_from_slice(row);
            v
        };
        for (row, y) in xs.iter().zip(ys) {
            let a = aug(row);
            for p in 0..d {
                for (entry, aq) in ata[p].iter_mut().zip(&a) {
                    *entry += a[p] * aq;
                }
                atb[p] += a[p] * y;
            }
        }
        // solve ata x = atb
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&a, &b| ata[a][col].abs().partial_cmp(&ata[b][col].abs()).unwrap())
                .unwrap();
            ata.swap(col, pivot);
            atb.swap(col, pivot);
            let div = ata[col][col];
            for entry in ata[col].iter_mut() {
                *entry /= div;
            }
            atb[col] /= div;
            for p in 0..d {
                if p != col && ata[p][col] != 0.0 {
                    let f = ata[p][col];
                    let pivot_row = ata[col].clone();
                    for (entry, pv) in ata[p].iter_mut().zip(&pivot_row) {
                        *entry -= f * pv;
                    }
                    atb[p] -= f * atb[col];
                }
            }
        }
        atb
    }

    #[test]
    fn zero_penalty_matches_ordinary_least_squares() {
        let mut rng = stream_rng(11, 0);
        let xs: Vec<Vec<f64>> = (0..40)
            .map(|_| (0..3).map(|_| f64::from(rng.random::<bool>())).collect())
            .collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| 1.5 + 2.0 * x[0] - 1.0 * x[1] + 0.5 * x[2] + rng.random_range(-0.1..0.1))
            .collect();
        let data = dataset(xs.clone(), ys.clone());
        let model = train_lasso(&data, 0.0).unwrap();
        let expected = ols(&xs, &ys);
        assert!((model.intercept() - expected[0]).abs() < 1e-6);
        for j in 0..3 {
            assert!(
                (model.weights()[j] - expected[j + 1]).abs() < 1e-6,
                "w{j}: {} vs {}",
                model.weights()[j],
                expected[j + 1]
            );
        }
    }

    #[test]
    fn large_penalty_shrinks_everything_to_the_mean() {
        let xs = vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![0.0, 0.0],
        ];
        let ys = vec![3.0, 5.0, 9.0, 1.0];
        let data = dataset(xs, ys.clone());
        let model = train_lasso(&data, 100.0).unwrap();
        assert!(model.weights().iter().all(|w| *w == 0.0));
        let mean = ys.iter().sum::<f64>() / 4.0;
        assert!((model.intercept() - mean).abs() < 1e-12);
        assert_eq!(model.predict(&[1.0, 0.0]).unwrap(), model.intercept());
    }

    #[test]
    fn negative_penalty_rejected() {
        let data = dataset(vec![vec![1.0], vec![0.0]], vec![1.0, 0.0]);
        assert!(train_lasso(&data, -0.1).is_err());
    }

    #[test]
    fn shrinkage_is_monotone_on_an_orthogonal_design() {
        // Disjoint indicator columns make the design orthogonal, where the
        // lasso path provably shrinks each coordinate monotonically.
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for block in 0..4usize {
            for _ in 0..5 {
                let mut row = vec![0.0; 4];
                row[block] = 1.0;
                xs.push(row);
                ys.push([4.0, -2.0, 1.0, 0.5][block]);
            }
        }
        let data = dataset(xs, ys);
        let mut last: Option<Vec<f64>> = None;
        for lambda in [0.0, 0.01, 0.05, 0.1, 0.3, 1.0, 3.0] {
            let model = train_lasso(&data, lambda).unwrap();
            if let Some(prev) = &last {
                for (now, before) in model.weights().iter().zip(prev) {
                    assert!(
                        now.abs() <= before.abs() + 1e-9,
                        "lambda {lambda}: |{now}| > |{before}|"
                    );
                }
            }
            last = Some(model.weights().to_vec());
        }
    }
}
