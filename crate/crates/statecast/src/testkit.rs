//! Synthetic corpora with known ground truth.
//!
//! Policies are generated by inverting the growth curve: state k adopts in
//! the year the curve reaches k/50, so fitted parameters and forecast years
//! can be checked against the generating values. A planted category signal
//! of configurable strength gives classification oracles a known Bayes rate.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{
    AdoptionEvent, Category, Corpus, Era, PolicyRecord, Region, StateCode, StateTraitTables,
    ALL_STATES, CATEGORIES, STATE_COUNT, YEAR_MAX,
};
use crate::error::{Error, Result};
use crate::growth::{DiffusionSeries, LogisticCurve};
use crate::seeding::stream_rng;

/// A burst of simultaneous adoptions injected into one calendar year.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Pulse {
    pub year: i32,
    pub count: usize,
}

/// Generating parameters for one synthetic policy.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SynthSpec {
    pub r_true: f64,
    pub p0_true: f64,
    pub first_year: i32,
    pub threshold_true: u32,
    pub pulse: Option<Pulse>,
    /// Jitter (years) on the continuous adoption times; 0 = deterministic.
    pub noise_sigma: f64,
    /// Probability that the planted category determines the national-action
    /// label in a generated corpus.
    pub signal_strength: f64,
}

impl SynthSpec {
    pub fn new(r_true: f64, p0_true: f64, first_year: i32, threshold_true: u32) -> Self {
        SynthSpec {
            r_true,
            p0_true,
            first_year,
            threshold_true,
            pulse: None,
            noise_sigma: 0.0,
            signal_strength: 0.5,
        }
    }

    pub fn with_pulse(mut self, year: i32, count: usize) -> Self {
        self.pulse = Some(Pulse { year, count });
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.r_true.is_finite() && self.r_true > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "r_true must be positive, got {}",
                self.r_true
            )));
        }
        if !(self.p0_true > 0.0 && self.p0_true <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "P0_true must lie in (0, 1], got {}",
                self.p0_true
            )));
        }
        if self.threshold_true == 0 || self.threshold_true >= STATE_COUNT as u32 {
            return Err(Error::InvalidArgument(format!(
                "threshold_true {} outside [1, {STATE_COUNT})",
                self.threshold_true
            )));
        }
        if !(0.5..=1.0).contains(&self.signal_strength) {
            return Err(Error::InvalidArgument(format!(
                "signal_strength {} outside [0.5, 1]",
                self.signal_strength
            )));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::InvalidArgument("noise_sigma must be non-negative".into()));
        }
        if let Some(p) = self.pulse {
            if p.count == 0 || p.count > STATE_COUNT {
                return Err(Error::InvalidArgument(format!(
                    "pulse count {} outside [1, {STATE_COUNT}]",
                    p.count
                )));
            }
            if p.year < self.first_year {
                return Err(Error::InvalidArgument(
                    "pulse year precedes the first adoption year".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Continuous crossing offsets of the generating curve for states 1..=50.
///
/// State k crosses at fraction k/50; the final state uses the midpoint
/// 99/100, since the carrying capacity itself is never attained.
fn crossing_offsets(spec: &SynthSpec) -> Result<Vec<f64>> {
    let curve = LogisticCurve::new(spec.p0_true, spec.r_true, f64::from(spec.first_year))?;
    (1..=STATE_COUNT)
        .map(|k| {
            let frac = if k < STATE_COUNT {
                k as f64 / STATE_COUNT as f64
            } else {
                0.99
            };
            Ok(curve.crossing_time(frac)?.max(0.0))
        })
        .collect()
}

/// Deterministic synthetic policy (requires `noise_sigma == 0`); states
/// adopt in the fixed `ALL_STATES` order and the category is `other`.
pub fn synth_policy(spec: &SynthSpec, id: &str) -> Result<PolicyRecord> {
    if spec.noise_sigma != 0.0 {
        return Err(Error::InvalidArgument(
            "noisy generation needs synth_policy_seeded".into(),
        ));
    }
    let states: Vec<StateCode> = ALL_STATES
        .iter()
        .map(|s| StateCode::parse(s).expect("state table is valid"))
        .collect();
    let mut rng = stream_rng(0, 0); // unused when sigma == 0
    synth_policy_seeded(
        spec,
        id,
        &format!("Synthetic policy {id}"),
        Category::parse("other").expect("known category"),
        &states,
        &mut rng,
    )
}

/// Calendar adoption years for all 50 states: `first_year + ceil(offset)`
/// with optional jitter and the pulse override applied. Kept in f64 so that
/// glacial curves cannot overflow before the year-cap filter.
fn generate_adoption_years(spec: &SynthSpec, rng: &mut impl Rng) -> Result<Vec<f64>> {
    let mut offsets = crossing_offsets(spec)?;
    if spec.noise_sigma > 0.0 {
        let noise = Normal::new(0.0, spec.noise_sigma).expect("validated sigma");
        for t in offsets.iter_mut() {
            *t = (*t + noise.sample(rng)).max(0.0);
        }
        offsets.sort_by(|a, b| a.partial_cmp(b).expect("finite offsets"));
    }
    let base = f64::from(spec.first_year);
    let mut years: Vec<f64> = offsets.iter().map(|t| base + t.ceil()).collect();

    if let Some(pulse) = spec.pulse {
        let adopted = years.iter().filter(|&&y| y <= f64::from(pulse.year)).count();
        if adopted + pulse.count > STATE_COUNT {
            return Err(Error::InvalidArgument(format!(
                "pulse of {} at {} leaves fewer than {} states unadopted",
                pulse.count, pulse.year, pulse.count
            )));
        }
        for y in years.iter_mut().skip(adopted).take(pulse.count) {
            *y = f64::from(pulse.year);
        }
    }
    Ok(years)
}

fn build_record(
    years: &[f64],
    id: &str,
    name: &str,
    category: Category,
    state_order: &[StateCode],
    national_year: Option<i32>,
) -> Result<PolicyRecord> {
    let adoptions: Vec<AdoptionEvent> = years
        .iter()
        .zip(state_order)
        .filter(|(&y, _)| y <= f64::from(YEAR_MAX))
        .map(|(&y, &s)| AdoptionEvent::new(s, y as i32))
        .collect::<Result<_>>()?;
    PolicyRecord::new(id, name, category, adoptions, national_year)
}

fn check_state_order(state_order: &[StateCode]) -> Result<()> {
    if state_order.len() < STATE_COUNT {
        return Err(Error::InvalidArgument(format!(
            "state order lists {} states, need {STATE_COUNT}",
            state_order.len()
        )));
    }
    Ok(())
}

/// Full-control generator used by corpus synthesis.
///
/// Adoption years are `first_year + ceil(crossing offset)` (plus optional
/// jitter). A pulse moves the next `count` states after those already
/// adopted by the pulse year into that year. The national action happens
/// the year after state `threshold_true` adopts; later states are shifted
/// to not precede it, and events past the corpus year cap are dropped.
pub fn synth_policy_seeded(
    spec: &SynthSpec,
    id: &str,
    name: &str,
    category: Category,
    state_order: &[StateCode],
    rng: &mut impl Rng,
) -> Result<PolicyRecord> {
    spec.validate()?;
    check_state_order(state_order)?;
    let mut years = generate_adoption_years(spec, rng)?;

    let t_idx = spec.threshold_true as usize - 1;
    let national_year = years[t_idx] + 1.0;
    if national_year > f64::from(YEAR_MAX) {
        return Err(Error::InvalidArgument(format!(
            "threshold state adopts in {}, past the corpus year cap",
            years[t_idx]
        )));
    }
    for y in years.iter_mut().skip(t_idx + 1) {
        if *y < national_year {
            *y = national_year;
        }
    }
    build_record(
        &years,
        id,
        name,
        category,
        state_order,
        Some(national_year as i32),
    )
}

/// Non-national variant: same adoption dynamics, no national action.
pub fn synth_policy_without_national(
    spec: &SynthSpec,
    id: &str,
    name: &str,
    category: Category,
    state_order: &[StateCode],
    rng: &mut impl Rng,
) -> Result<PolicyRecord> {
    spec.validate()?;
    check_state_order(state_order)?;
    let years = generate_adoption_years(spec, rng)?;
    build_record(&years, id, name, category, state_order, None)
}

/// Exact on-curve series for fit-recovery oracles: points
/// `(crossing offset, k/50)` for k = 1..=max_states with fraction ≥ P0.
pub fn exact_series(spec: &SynthSpec, max_states: u32) -> Result<DiffusionSeries> {
    spec.validate()?;
    let curve = LogisticCurve::new(spec.p0_true, spec.r_true, f64::from(spec.first_year))?;
    let cap = max_states.min(STATE_COUNT as u32 - 1);
    let mut points = Vec::new();
    for k in 1..=cap {
        let frac = f64::from(k) / STATE_COUNT as f64;
        if frac >= spec.p0_true {
            points.push((curve.crossing_time(frac)?.max(0.0), frac));
        }
    }
    DiffusionSeries::new(f64::from(spec.first_year), points)
}

/// Ground truth attached to each generated policy.
#[derive(Clone, PartialEq, Debug)]
pub struct GroundTruth {
    pub policy_id: String,
    /// Whether the policy was generated with a national action.
    pub label: bool,
    /// Whether the planted category flag is set for this policy.
    pub planted: bool,
    pub r_true: f64,
    pub p0_true: f64,
    pub threshold_true: Option<u32>,
}

/// The planted classification feature: the `health` category flag.
pub const PLANTED_CATEGORY: &str = "health";

/// Generation parameters for a whole corpus.
#[derive(Clone, PartialEq, Debug)]
pub struct SynthCorpusConfig {
    pub n: usize,
    /// Probability the planted category determines the label; 0.5 = no signal.
    pub signal_strength: f64,
    /// Log-uniform growth-rate range.
    pub r_range: (f64, f64),
    pub p0_true: f64,
    pub first_year_range: (i32, i32),
    pub threshold_range: (u32, u32),
    /// Applied to every generated policy when set.
    pub pulse: Option<Pulse>,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SynthCorpusConfig {
    fn default() -> Self {
        SynthCorpusConfig {
            n: 170,
            signal_strength: 0.5,
            r_range: (0.15, 0.6),
            p0_true: 0.02,
            first_year_range: (1900, 2000),
            threshold_range: (5, 45),
            pulse: None,
            noise_sigma: 0.0,
            seed: 42,
        }
    }
}

/// Reproducible corpus with per-policy ground truth.
///
/// Each policy draws its own stream from the master seed: the planted
/// category appears with probability 1/2 and determines the national-action
/// label with probability `signal_strength`, so the best attainable
/// classification accuracy is exactly the signal strength. All other
/// covariates are noise (random first adopter, era, and dynamics).
pub fn synth_corpus(config: &SynthCorpusConfig) -> Result<(Corpus, Vec<GroundTruth>)> {
    if config.n < 2 {
        return Err(Error::InvalidArgument("synthetic corpus needs n >= 2".into()));
    }
    if !(0.5..=1.0).contains(&config.signal_strength) {
        return Err(Error::InvalidArgument(format!(
            "signal_strength {} outside [0.5, 1]",
            config.signal_strength
        )));
    }
    if config.threshold_range.0 == 0
        || config.threshold_range.1 >= STATE_COUNT as u32
        || config.threshold_range.0 > config.threshold_range.1
    {
        return Err(Error::InvalidArgument(
            "threshold_range must lie within [1, 50) and be ordered".into(),
        ));
    }
    if !(config.r_range.0 > 0.0 && config.r_range.1 >= config.r_range.0) {
        return Err(Error::InvalidArgument("r_range must be positive and ordered".into()));
    }
    if config.first_year_range.0 > config.first_year_range.1 {
        return Err(Error::InvalidArgument("first_year_range must be ordered".into()));
    }

    let planted_category = Category::parse(PLANTED_CATEGORY).expect("known category");
    let other_categories: Vec<Category> = CATEGORIES
        .iter()
        .filter(|c| **c != PLANTED_CATEGORY)
        .map(|c| Category::parse(c).expect("known category"))
        .collect();
    let base_states: Vec<StateCode> = ALL_STATES
        .iter()
        .map(|s| StateCode::parse(s).expect("state table is valid"))
        .collect();

    let mut policies = Vec::with_capacity(config.n);
    let mut truths = Vec::with_capacity(config.n);
    for i in 0..config.n {
        let mut rng = stream_rng(config.seed, i as u64);
        let planted = rng.random::<f64>() < 0.5;
        let label = if rng.random::<f64>() < config.signal_strength {
            planted
        } else {
            !planted
        };
        let category = if planted {
            planted_category
        } else {
            other_categories[rng.random_range(0..other_categories.len())]
        };
        let r_true = if config.r_range.0 == config.r_range.1 {
            config.r_range.0
        } else {
            (rng.random_range(config.r_range.0.ln()..config.r_range.1.ln())).exp()
        };
        let first_year = rng.random_range(config.first_year_range.0..=config.first_year_range.1);
        let threshold = rng.random_range(config.threshold_range.0..=config.threshold_range.1);
        let mut state_order = base_states.clone();
        state_order.shuffle(&mut rng);

        let mut spec = SynthSpec::new(r_true, config.p0_true, first_year, threshold);
        spec.pulse = config.pulse;
        spec.noise_sigma = config.noise_sigma;
        spec.signal_strength = config.signal_strength;

        let id = format!("synth_{i:04}");
        let name = format!("Synthetic policy {i}");
        let record = if label {
            synth_policy_seeded(&spec, &id, &name, category, &state_order, &mut rng)?
        } else {
            synth_policy_without_national(&spec, &id, &name, category, &state_order, &mut rng)?
        };
        truths.push(GroundTruth {
            policy_id: id,
            label,
            planted,
            r_true,
            p0_true: config.p0_true,
            threshold_true: label.then_some(threshold),
        });
        policies.push(record);
    }

    let corpus = Corpus::new(policies, reference_traits())?;
    Ok((corpus, truths))
}

/// Reference trait tables: the census region map, the two innovator lists,
/// plausible top-5 trait sets, and eleven named eras. Real analyses supply
/// their own tables; these defaults make synthetic corpora self-contained.
pub fn reference_traits() -> StateTraitTables {
    let st = |code: &str| StateCode::parse(code).expect("state table is valid");
    let five = |codes: [&str; 5]| codes.map(st);

    let mut top5 = BTreeMap::new();
    top5.insert("population_largest".to_string(), five(["CA", "TX", "NY", "FL", "IL"]));
    top5.insert("population_smallest".to_string(), five(["WY", "VT", "AK", "ND", "DE"]));
    top5.insert("per_capita_wealth".to_string(), five(["CT", "NJ", "MA", "MD", "NY"]));
    top5.insert("urbanization".to_string(), five(["CA", "NJ", "RI", "NV", "HI"]));
    top5.insert("most_liberal".to_string(), five(["MA", "NY", "VT", "RI", "CT"]));
    top5.insert("most_conservative".to_string(), five(["UT", "ID", "WY", "OK", "MS"]));
    top5.insert("most_extreme".to_string(), five(["MA", "UT", "NY", "ID", "VT"]));
    top5.insert(
        "professional_legislature".to_string(),
        five(["CA", "NY", "MI", "PA", "WI"]),
    );

    let well_known = five(["CA", "NY", "TX", "MA", "IL"]);
    let quantitative = five(["CA", "NJ", "OR", "NY", "CT"]);

    let mut regions = BTreeMap::new();
    let region = |name: &str| Region::parse(name).expect("known region");
    for code in ["CT", "MA", "ME", "NH", "NJ", "NY", "PA", "RI", "VT"] {
        regions.insert(st(code), region("northeast"));
    }
    for code in ["IA", "IL", "IN", "KS", "MI", "MN", "MO", "ND", "NE", "OH", "SD", "WI"] {
        regions.insert(st(code), region("midwest"));
    }
    for code in [
        "AL", "AR", "DE", "FL", "GA", "KY", "LA", "MD", "MS", "NC", "OK", "SC", "TN", "TX",
        "VA", "WV",
    ] {
        regions.insert(st(code), region("south"));
    }
    for code in [
        "AK", "AZ", "CA", "CO", "HI", "ID", "MT", "NM", "NV", "OR", "UT", "WA", "WY",
    ] {
        regions.insert(st(code), region("west"));
    }

    let eras = vec![
        era("early_republic", 1776),
        era("age_of_reform", 1820),
        era("reconstruction", 1861),
        era("gilded_age", 1877),
        era("progressive_era", 1897),
        era("world_war_era", 1917),
        era("new_deal", 1930),
        era("postwar", 1946),
        era("great_society", 1961),
        era("new_politics", 1971),
        era("new_federalism", 1980),
    ];

    StateTraitTables::new(top5, well_known, quantitative, regions, eras)
        .expect("reference tables are valid")
}

fn era(label: &str, start_year: i32) -> Era {
    Era {
        label: label.to_string(),
        start_year,
    }
}
