//! Logistic growth model of policy diffusion and its grid-search fit.
//!
//! The adopted fraction follows `P(t) = K·P0·e^{rt} / (K + P0(e^{rt} − 1))`
//! with carrying capacity `K = 1` (all 50 states). Fitting minimizes the sum
//! of squared errors between a cumulative adoption series and `P(t)` over a
//! fixed (r, P0) grid.

mod bootstrap;
mod forecast;

pub use bootstrap::{sample_threshold, smooth_bootstrap, ThresholdPool, TrajectorySample};
pub use forecast::{
    crossing_year, forecast, Crossing, ForecastEnsemble, ForecastSummary, ForecastTrial,
};

use crate::corpus::{adoption_trajectory, PolicyRecord};
use crate::error::{Error, Result};

/// Carrying capacity of the diffusion process: the full 50-state fraction.
pub const CARRYING_CAPACITY: f64 = 1.0;

/// Logistic growth curve. `t0` anchors offset 0 to a calendar year (possibly
/// fractional when fit to a bootstrap sample); `P(0) = p0`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct LogisticCurve {
    p0: f64,
    r: f64,
    t0: f64,
}

impl LogisticCurve {
    pub fn new(p0: f64, r: f64, t0: f64) -> Result<Self> {
        if !(p0.is_finite() && r.is_finite() && t0.is_finite()) {
            return Err(Error::InvalidArgument("curve parameters must be finite".into()));
        }
        if !(1e-12..=CARRYING_CAPACITY).contains(&p0) {
            return Err(Error::InvalidArgument(format!(
                "P0 must lie in (0, {CARRYING_CAPACITY}], got {p0}"
            )));
        }
        if r <= 0.0 {
            return Err(Error::InvalidArgument(format!("growth rate must be positive, got {r}")));
        }
        Ok(LogisticCurve { p0, r, t0 })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Adopted fraction `t` years after `t0`.
    ///
    /// Evaluated as `K / (1 + q·e^{−rt})` with `q = (K−P0)/P0`, which never
    /// overflows for large `t`; far before `t0` the value underflows to 0,
    /// the curve's lower asymptote.
    pub fn value_at(&self, t: f64) -> f64 {
        let k = CARRYING_CAPACITY;
        if self.p0 >= k {
            return k;
        }
        let q = (k - self.p0) / self.p0;
        k / (1.0 + q * (-self.r * t).exp())
    }

    /// Adopted fraction at a calendar year.
    pub fn value_at_year(&self, year: f64) -> f64 {
        self.value_at(year - self.t0)
    }

    /// Offset at which the curve reaches fraction `p_th`: the analytic
    /// inversion `t* = (1/r)·ln[ p_th(K−P0) / (P0(K−p_th)) ]`. Negative when
    /// the curve starts above `p_th`. Fails for `p_th ≥ K` (the asymptote is
    /// never attained).
    pub fn crossing_time(&self, p_th: f64) -> Result<f64> {
        let k = CARRYING_CAPACITY;
        if p_th <= 0.0 || p_th >= k {
            return Err(Error::InvalidArgument(format!(
                "threshold fraction {p_th} outside (0, {k}): the carrying capacity is unreachable"
            )));
        }
        Ok((p_th * (k - self.p0) / (self.p0 * (k - p_th))).ln() / self.r)
    }
}

/// A cumulative adoption series anchored to a calendar year: points
/// `(years since t0, adopted fraction)` with offsets and fractions
/// non-decreasing.
#[derive(Clone, PartialEq, Debug)]
pub struct DiffusionSeries {
    t0_year: f64,
    points: Vec<(f64, f64)>,
}

impl DiffusionSeries {
    pub fn new(t0_year: f64, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("empty diffusion series".into()));
        }
        for &(t, y) in &points {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidArgument(format!("bad series offset {t}")));
            }
            if !(y > 0.0 && y <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "series fraction {y} outside (0, 1]"
                )));
            }
        }
        for w in points.windows(2) {
            if w[1].0 < w[0].0 {
                return Err(Error::InvalidArgument("series offsets must be sorted".into()));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidArgument(
                    "cumulative fractions must be non-decreasing".into(),
                ));
            }
        }
        Ok(DiffusionSeries { t0_year, points })
    }

    /// The observed trajectory of a policy, anchored at its first adoption.
    pub fn from_record(record: &PolicyRecord) -> Self {
        let first = record.first_year();
        let points = adoption_trajectory(record)
            .into_iter()
            .map(|(year, frac)| (f64::from(year - first), frac))
            .collect();
        DiffusionSeries {
            t0_year: f64::from(first),
            points,
        }
    }

    pub fn t0_year(&self) -> f64 {
        self.t0_year
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Sum of squared residuals between a series and the curve.
pub fn sse(curve: &LogisticCurve, series: &DiffusionSeries) -> f64 {
    series
        .points()
        .iter()
        .map(|&(t, y)| {
            let d = y - curve.value_at(t);
            d * d
        })
        .sum()
}

/// Grid-search fit configuration plus the bootstrap/forecast knobs.
#[derive(Clone, PartialEq, Debug)]
pub struct FitConfig {
    r_grid: Vec<f64>,
    p0_grid: Vec<f64>,
    /// Number of bootstrap trials in a forecast ensemble.
    pub trials: usize,
    /// Standard deviation (years) of the smooth-bootstrap noise.
    pub noise_sigma: f64,
    /// Master seed; trial `i` draws from stream `i`.
    pub seed: u64,
    /// Crossing years beyond `first event + horizon_years` are censored.
    pub horizon_years: f64,
}

impl FitConfig {
    pub fn new(r_grid: Vec<f64>, p0_grid: Vec<f64>) -> Result<Self> {
        let r_grid = validate_grid(r_grid, "r")?;
        let p0_grid = validate_grid(p0_grid, "P0")?;
        if let Some(&hi) = p0_grid.last() {
            if hi > CARRYING_CAPACITY {
                return Err(Error::InvalidArgument(format!(
                    "P0 grid exceeds the carrying capacity: {hi}"
                )));
            }
        }
        Ok(FitConfig {
            r_grid,
            p0_grid,
            trials: 1000,
            noise_sigma: 1.0,
            seed: 42,
            horizon_years: 200.0,
        })
    }

    pub fn r_grid(&self) -> &[f64] {
        &self.r_grid
    }

    pub fn p0_grid(&self) -> &[f64] {
        &self.p0_grid
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_noise_sigma(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_horizon_years(mut self, horizon: f64) -> Self {
        self.horizon_years = horizon;
        self
    }
}

impl Default for FitConfig {
    /// Default grids span eleven-year to century-scale diffusion:
    /// r log-spaced over [1e-3, 3.0] with 400 points, P0 log-spaced over
    /// [1/500, 0.2] with 100 points.
    fn default() -> Self {
        FitConfig::new(log_grid(1e-3, 3.0, 400), log_grid(1.0 / 500.0, 0.2, 100))
            .expect("default grids are valid")
    }
}

/// `n` log-spaced points over `[lo, hi]`, inclusive of both endpoints.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo, "bad log grid spec");
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn validate_grid(mut grid: Vec<f64>, name: &str) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument(format!("empty {name} grid")));
    }
    if grid.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "{name} grid values must be positive and finite"
        )));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    grid.dedup();
    Ok(grid)
}

/// Returns the grid point minimizing the sum of squared errors against the
/// series. Ties break toward smaller r, then smaller P0.
pub fn fit_curve(series: &DiffusionSeries, config: &FitConfig) -> Result<LogisticCurve> {
    if series.points().len() < 2 {
        return Err(Error::InvalidArgument(
            "fit requires a series with at least 2 points".into(),
        ));
    }
    let points = series.points();
    let k = CARRYING_CAPACITY;
    let mut best = (f64::INFINITY, 0usize, 0usize);
    let mut exps = vec![0.0f64; points.len()];
    for (ri, &r) in config.r_grid().iter().enumerate() {
        for (e, &(t, _)) in exps.iter_mut().zip(points) {
            *e = (-r * t).exp();
        }
        for (pi, &p0) in config.p0_grid().iter().enumerate() {
            let q = (k - p0) / p0;
            let mut acc = 0.0;
            for (&e, &(_, y)) in exps.iter().zip(points) {
                let d = y - k / (1.0 + q * e);
                acc += d * d;
            }
            if acc < best.0 {
                best = (acc, ri, pi);
            }
        }
    }
    LogisticCurve::new(
        config.p0_grid()[best.2],
        config.r_grid()[best.1],
        series.t0_year(),
    )
}
