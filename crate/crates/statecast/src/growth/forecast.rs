//! The bootstrap-ensemble forecaster: posterior distribution over the year a
//! diffusing policy crosses a national-action threshold.

use rayon::prelude::*;

use super::{
    fit_curve, sample_threshold, smooth_bootstrap, FitConfig, LogisticCurve, ThresholdPool,
};
use crate::corpus::{PolicyRecord, STATE_COUNT};
use crate::error::{Error, Result};
use crate::seeding::stream_rng;
use crate::textfmt::{f9, opt_year};

/// Outcome of one bootstrap trial: a calendar year, or censored when the
/// crossing falls beyond the reporting horizon.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Crossing {
    Year(i32),
    Censored,
}

impl Crossing {
    pub fn year(&self) -> Option<i32> {
        match self {
            Crossing::Year(y) => Some(*y),
            Crossing::Censored => None,
        }
    }
}

/// Calendar year at which the curve reaches `threshold`/50, ceiled per the
/// reporting convention; `Censored` when it lands beyond `horizon_year`.
/// A curve already at or above the threshold fraction crosses at its anchor.
pub fn crossing_year(
    curve: &LogisticCurve,
    threshold: u32,
    horizon_year: f64,
) -> Result<Crossing> {
    if threshold == 0 || threshold >= STATE_COUNT as u32 {
        return Err(Error::InvalidArgument(format!(
            "threshold {threshold} outside [1, {STATE_COUNT})"
        )));
    }
    let p_th = f64::from(threshold) / STATE_COUNT as f64;
    let t_star = curve.crossing_time(p_th)?.max(0.0);
    let when = curve.t0() + t_star;
    if when > horizon_year {
        return Ok(Crossing::Censored);
    }
    Ok(Crossing::Year(when.ceil() as i32))
}

/// One fitted bootstrap trial.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ForecastTrial {
    pub curve: LogisticCurve,
    pub threshold: u32,
    pub crossing: Crossing,
}

/// Counting summary over the trial list. All densities are fractions of the
/// full trial count; modal/median statistics ignore censored trials.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ForecastSummary {
    pub trials: usize,
    pub censored_fraction: f64,
    /// Most frequent crossing year (smallest on ties); absent if every trial
    /// was censored.
    pub modal_year: Option<i32>,
    pub modal_density: f64,
    /// Density within modal_year ± 2.
    pub density_within_2y: f64,
    /// First year where the cumulative count reaches half the non-censored
    /// trials.
    pub median_year_from_cdf: Option<i32>,
    /// Density at years ≥ modal_year + 10.
    pub density_10y_or_later: f64,
}

/// The forecast ensemble: every fitted trial plus its summary.
#[derive(Clone, PartialEq, Debug)]
pub struct ForecastEnsemble {
    trials: Vec<ForecastTrial>,
    summary: ForecastSummary,
    horizon_year: f64,
}

impl ForecastEnsemble {
    pub fn trials(&self) -> &[ForecastTrial] {
        &self.trials
    }

    pub fn summary(&self) -> &ForecastSummary {
        &self.summary
    }

    pub fn horizon_year(&self) -> f64 {
        self.horizon_year
    }

    /// Crossing-year counts in ascending year order.
    pub fn year_counts(&self) -> Vec<(i32, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for t in &self.trials {
            if let Crossing::Year(y) = t.crossing {
                *counts.entry(y).or_insert(0usize) += 1;
            }
        }
        counts.into_iter().collect()
    }

    /// Structured-text document: summary block with sorted keys, then one
    /// line per trial.
    pub fn to_text(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        out.push_str("statecast-ensemble v1\n");
        out.push_str("[summary]\n");
        out.push_str(&format!("censored_fraction {}\n", f9(s.censored_fraction)));
        out.push_str(&format!("density_10y_or_later {}\n", f9(s.density_10y_or_later)));
        out.push_str(&format!("density_within_2y {}\n", f9(s.density_within_2y)));
        out.push_str(&format!("horizon_year {}\n", f9(self.horizon_year)));
        out.push_str(&format!("median_year {}\n", opt_year(s.median_year_from_cdf)));
        out.push_str(&format!("modal_density {}\n", f9(s.modal_density)));
        out.push_str(&format!("modal_year {}\n", opt_year(s.modal_year)));
        out.push_str(&format!("trials {}\n", s.trials));
        out.push_str("[trials]\n");
        for (i, t) in self.trials.iter().enumerate() {
            let crossing = match t.crossing {
                Crossing::Year(y) => y.to_string(),
                Crossing::Censored => "censored".to_string(),
            };
            out.push_str(&format!(
                "trial {i} crossing {crossing} p0 {} r {} t0 {} threshold {}\n",
                f9(t.curve.p0()),
                f9(t.curve.r()),
                f9(t.curve.t0()),
                t.threshold
            ));
        }
        out
    }
}

/// Runs the full bootstrap ensemble for one policy.
///
/// Each trial resamples the first `train_n` adoption years with smoothing
/// noise, fits the growth curve on the resample, draws a threshold from the
/// pool, and inverts the curve for the crossing year. A threshold already
/// reached by the resample crosses at the resampled event that reached it,
/// not at a curve extrapolation. Trials are independent and seeded by
/// (config.seed, trial index), so results do not depend on worker count.
pub fn forecast(
    record: &PolicyRecord,
    train_n: usize,
    pool: &ThresholdPool,
    config: &FitConfig,
) -> Result<ForecastEnsemble> {
    if train_n < 2 {
        return Err(Error::InvalidArgument(format!(
            "train_n must be at least 2, got {train_n}"
        )));
    }
    if record.adoptions().len() < train_n {
        return Err(Error::InvalidArgument(format!(
            "policy {} has {} adoptions, fewer than train_n = {train_n}",
            record.id(),
            record.adoptions().len()
        )));
    }
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }

    let events: Vec<f64> = record
        .adoptions()
        .iter()
        .take(train_n)
        .map(|a| f64::from(a.year))
        .collect();
    let horizon_year = events[0] + config.horizon_years;

    let trials: Vec<ForecastTrial> = (0..config.trials)
        .into_par_iter()
        .map(|trial| run_trial(&events, pool, config, horizon_year, trial as u64))
        .collect::<Result<Vec<_>>>()?;

    let summary = summarize(&trials);
    Ok(ForecastEnsemble {
        trials,
        summary,
        horizon_year,
    })
}

fn run_trial(
    events: &[f64],
    pool: &ThresholdPool,
    config: &FitConfig,
    horizon_year: f64,
    trial: u64,
) -> Result<ForecastTrial> {
    let mut rng = stream_rng(config.seed, trial);
    let sample = smooth_bootstrap(events, config.noise_sigma, &mut rng)?;
    let curve = fit_curve(&sample.to_series(), config)?;
    let threshold = sample_threshold(pool, &mut rng);

    let crossing = if threshold as usize <= sample.len() {
        // Threshold fraction already reached within the resample: the
        // crossing is the resampled event that reached it.
        let when = sample.years()[threshold as usize - 1];
        if when > horizon_year {
            Crossing::Censored
        } else {
            Crossing::Year(when.ceil() as i32)
        }
    } else {
        crossing_year(&curve, threshold, horizon_year)?
    };

    Ok(ForecastTrial {
        curve,
        threshold,
        crossing,
    })
}

fn summarize(trials: &[ForecastTrial]) -> ForecastSummary {
    let total = trials.len();
    let mut counts = std::collections::BTreeMap::new();
    let mut censored = 0usize;
    for t in trials {
        match t.crossing {
            Crossing::Year(y) => *counts.entry(y).or_insert(0usize) += 1,
            Crossing::Censored => censored += 1,
        }
    }
    let non_censored = total - censored;
    let density = |n: usize| n as f64 / total as f64;

    let modal_year = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(&y, _)| y);
    let (modal_density, density_within_2y, density_10y_or_later) = match modal_year {
        None => (0.0, 0.0, 0.0),
        Some(m) => {
            let at = counts[&m];
            let near: usize = counts
                .range(m - 2..=m + 2)
                .map(|(_, &n)| n)
                .sum();
            let late: usize = counts.range(m + 10..).map(|(_, &n)| n).sum();
            (density(at), density(near), density(late))
        }
    };

    let median_year_from_cdf = if non_censored == 0 {
        None
    } else {
        let mut cum = 0usize;
        let mut median = None;
        for (&y, &n) in &counts {
            cum += n;
            if 2 * cum >= non_censored {
                median = Some(y);
                break;
            }
        }
        median
    };

    ForecastSummary {
        trials: total,
        censored_fraction: density(censored),
        modal_year,
        modal_density,
        density_within_2y,
        median_year_from_cdf,
        density_10y_or_later,
    }
}
