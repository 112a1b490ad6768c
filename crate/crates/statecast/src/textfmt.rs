//! Deterministic text formatting shared by every serialized artifact.
//!
//! All output files are plain UTF-8 with `\n` line endings, fixed key order,
//! and fixed decimal precision so that identical runs are byte-identical.

/// Fixed 9-decimal rendering used for every fractional value we write.
pub fn f9(x: f64) -> String {
    format!("{x:.9}")
}

/// Render an optional calendar year; `none` marks absent/censored values.
pub fn opt_year(y: Option<i32>) -> String {
    match y {
        Some(y) => y.to_string(),
        None => "none".to_string(),
    }
}

/// Empirical quantile with linear interpolation between closest ranks.
///
/// `q` in [0,1]; input need not be sorted.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of empty slice");
    assert!((0.0..=1.0).contains(&q), "quantile fraction out of range");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite score"));
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

pub fn mean(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "mean of empty slice");
    values.iter().sum::<f64>() / values.len() as f64
}
