//! Smooth bootstrap of adoption years and the historical threshold pool.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::DiffusionSeries;
use crate::corpus::{national_threshold, Corpus, STATE_COUNT};
use crate::error::{Error, Result};

/// One bootstrap resample of adoption times, sorted ascending. Values are
/// continuous and may precede the first historical year.
#[derive(Clone, PartialEq, Debug)]
pub struct TrajectorySample {
    years: Vec<f64>,
}

impl TrajectorySample {
    pub fn years(&self) -> &[f64] {
        &self.years
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    /// Cumulative series for fitting: the i-th sorted value `v_i` becomes the
    /// point `(v_i − t0, i/50)` with `t0 = min value`. Repeated values stay
    /// distinct cumulative steps.
    pub fn to_series(&self) -> DiffusionSeries {
        let t0 = self.years[0];
        let points = self
            .years
            .iter()
            .enumerate()
            .map(|(i, &v)| (v - t0, (i + 1) as f64 / STATE_COUNT as f64))
            .collect();
        DiffusionSeries::new(t0, points).expect("sorted sample yields a valid series")
    }
}

/// Resamples `events.len()` adoption years with replacement and perturbs
/// each draw with independent Normal(0, sigma) noise.
pub fn smooth_bootstrap(
    events: &[f64],
    sigma: f64,
    rng: &mut impl Rng,
) -> Result<TrajectorySample> {
    if events.is_empty() {
        return Err(Error::InvalidArgument(
            "smooth bootstrap needs at least one adoption event".into(),
        ));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise standard deviation must be non-negative, got {sigma}"
        )));
    }
    let m = events.len();
    let mut years = Vec::with_capacity(m);
    if sigma == 0.0 {
        for _ in 0..m {
            years.push(events[rng.random_range(0..m)]);
        }
    } else {
        let noise = Normal::new(0.0, sigma).expect("validated sigma");
        for _ in 0..m {
            let v = events[rng.random_range(0..m)];
            years.push(v + noise.sample(rng));
        }
    }
    years.sort_by(|a, b| a.partial_cmp(b).expect("finite sample"));
    Ok(TrajectorySample { years })
}

/// The historical national-action thresholds available for sampling.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThresholdPool {
    thresholds: Vec<u32>,
}

impl ThresholdPool {
    pub fn new(thresholds: Vec<u32>) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::InvalidArgument("empty threshold pool".into()));
        }
        for &t in &thresholds {
            if t == 0 || t >= STATE_COUNT as u32 {
                return Err(Error::InvalidArgument(format!(
                    "threshold {t} outside [1, {STATE_COUNT})"
                )));
            }
        }
        Ok(ThresholdPool { thresholds })
    }

    /// Thresholds of every national-action policy, ordered by policy id so
    /// the pool is identical however the corpus file ordered its rows.
    pub fn from_corpus(corpus: &Corpus) -> Result<Self> {
        let mut with_ids: Vec<(&str, u32)> = Vec::new();
        for p in corpus.policies() {
            if p.national_year().is_some() {
                with_ids.push((p.id(), national_threshold(p)?));
            }
        }
        with_ids.sort_by(|a, b| a.0.cmp(b.0));
        ThresholdPool::new(with_ids.into_iter().map(|(_, t)| t).collect())
    }

    /// Removes one instance of `value`, for leave-one-out forecasts of a
    /// policy whose own threshold is in the pool.
    pub fn without_one(&self, value: u32) -> Result<Self> {
        let mut thresholds = self.thresholds.clone();
        match thresholds.iter().position(|&t| t == value) {
            Some(i) => {
                thresholds.remove(i);
            }
            None => {
                return Err(Error::InvalidArgument(format!(
                    "threshold {value} not present in the pool"
                )))
            }
        }
        ThresholdPool::new(thresholds)
    }

    pub fn thresholds(&self) -> &[u32] {
        &self.thresholds
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.thresholds.iter().map(|&t| f64::from(t)).sum::<f64>() / self.thresholds.len() as f64
    }
}

/// Uniform draw over the pool, with multiplicity.
pub fn sample_threshold(pool: &ThresholdPool, rng: &mut impl Rng) -> u32 {
    pool.thresholds[rng.random_range(0..pool.thresholds.len())]
}
