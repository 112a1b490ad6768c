//! Evaluation metrics.

use crate::error::{Error, Result};

/// Fraction of agreeing entries: true positives plus true negatives over the
/// total count. Inputs must be equal-length binary vectors.
pub fn accuracy(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::InvalidArgument(format!(
            "accuracy length mismatch: {} vs {}",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::InvalidArgument("accuracy of empty vectors".into()));
    }
    for v in y_true.iter().chain(y_pred) {
        if *v != 0.0 && *v != 1.0 {
            return Err(Error::InvalidArgument(format!(
                "accuracy expects binary entries, got {v}"
            )));
        }
    }
    let hits = y_true
        .iter()
        .zip(y_pred)
        .filter(|(a, b)| a == b)
        .count();
    Ok(hits as f64 / y_true.len() as f64)
}

/// Coefficient of determination `1 − SS_res/SS_tot`.
///
/// Measures improvement over the constant mean model, so it is unbounded
/// below; constant targets make it undefined (an error, never a silent NaN).
pub fn r_squared(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::InvalidArgument(format!(
            "r_squared length mismatch: {} vs {}",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.len() < 2 {
        return Err(Error::InvalidArgument(
            "r_squared needs at least 2 observations".into(),
        ));
    }
    let mean = y_true.iter().sum::<f64>() / y_true.len() as f64;
    let ss_tot: f64 = y_true.iter().map(|y| (y - mean) * (y - mean)).sum();
    if ss_tot == 0.0 {
        return Err(Error::InvalidArgument(
            "constant y_true: total sum of squares is zero, R² undefined".into(),
        ));
    }
    let ss_res: f64 = y_true
        .iter()
        .zip(y_pred)
        .map(|(t, p)| (t - p) * (t - p))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}
