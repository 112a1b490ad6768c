//! Policy data model: validated records, trait tables, and the 40-flag
//! covariate encoding.

mod files;
mod states;

pub use files::{
    load_corpus, load_corpus_filtered, parse_traits_file, parse_traits_text, policies_to_csv,
    traits_to_text, Exclusion,
};
pub use states::{StateCode, ALL_STATES, STATE_COUNT};

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Calendar years accepted anywhere in the corpus.
pub const YEAR_MIN: i32 = 1776;
pub const YEAR_MAX: i32 = 2100;

/// Number of binary covariates encoded per policy.
pub const COVARIATE_COUNT: usize = 40;

/// The 13 policy categories, in the alphabetical order used by the
/// covariate encoding. Twelve named topics plus the residual `other`.
pub const CATEGORIES: [&str; 13] = [
    "administration",
    "civil_rights",
    "conservation",
    "corrections",
    "education",
    "elections",
    "health",
    "labor",
    "other",
    "planning",
    "professional",
    "taxes",
    "welfare",
];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Category(usize);

impl Category {
    pub fn parse(label: &str) -> Result<Self> {
        CATEGORIES
            .iter()
            .position(|c| *c == label)
            .map(Category)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown policy category {label:?}: expected one of {}",
                    CATEGORIES.join(", ")
                ))
            })
    }

    pub fn label(&self) -> &'static str {
        CATEGORIES[self.0]
    }

    pub fn index(&self) -> usize {
        self.0
    }
}

/// The four census regions, alphabetical.
pub const REGIONS: [&str; 4] = ["midwest", "northeast", "south", "west"];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Region(usize);

impl Region {
    pub fn parse(label: &str) -> Result<Self> {
        REGIONS
            .iter()
            .position(|r| *r == label)
            .map(Region)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown census region {label:?}: expected one of {}",
                    REGIONS.join(", ")
                ))
            })
    }

    pub fn label(&self) -> &'static str {
        REGIONS[self.0]
    }

    pub fn index(&self) -> usize {
        self.0
    }
}

/// One state's adoption of a policy.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AdoptionEvent {
    pub state: StateCode,
    pub year: i32,
}

impl AdoptionEvent {
    pub fn new(state: StateCode, year: i32) -> Result<Self> {
        if !(YEAR_MIN..=YEAR_MAX).contains(&year) {
            return Err(Error::InvalidArgument(format!(
                "adoption year {year} outside [{YEAR_MIN}, {YEAR_MAX}]"
            )));
        }
        Ok(AdoptionEvent { state, year })
    }
}

/// A historical era with its first calendar year. An era covers
/// `[start_year, next_start)`; the final era extends to the present.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Era {
    pub label: String,
    pub start_year: i32,
}

/// Number of era covariates; the trait tables must define exactly this many.
pub const ERA_COUNT: usize = 11;

/// State traits used by the covariate encoding: eight top-5 membership sets,
/// two top-5 innovator lists, the census-region map, and the era boundaries.
#[derive(Clone, PartialEq, Debug)]
pub struct StateTraitTables {
    pub population_largest: [StateCode; 5],
    pub population_smallest: [StateCode; 5],
    pub per_capita_wealth: [StateCode; 5],
    pub urbanization: [StateCode; 5],
    pub most_liberal: [StateCode; 5],
    pub most_conservative: [StateCode; 5],
    pub most_extreme: [StateCode; 5],
    pub professional_legislature: [StateCode; 5],
    pub well_known_innovators: [StateCode; 5],
    pub quantitative_innovators: [StateCode; 5],
    regions: BTreeMap<StateCode, Region>,
    eras: Vec<Era>,
}

/// Names of the eight top-5 trait sets in canonical (alphabetical) order.
pub const TOP5_TRAITS: [&str; 8] = [
    "most_conservative",
    "most_extreme",
    "most_liberal",
    "per_capita_wealth",
    "population_largest",
    "population_smallest",
    "professional_legislature",
    "urbanization",
];

impl StateTraitTables {
    /// Validates set sizes, full region coverage, and the 11 ascending eras.
    /// Set members are stored sorted; only membership is meaningful.
    pub fn new(
        mut top5: BTreeMap<String, [StateCode; 5]>,
        mut well_known_innovators: [StateCode; 5],
        mut quantitative_innovators: [StateCode; 5],
        regions: BTreeMap<StateCode, Region>,
        mut eras: Vec<Era>,
    ) -> Result<Self> {
        for name in TOP5_TRAITS {
            if !top5.contains_key(name) {
                return Err(Error::InvalidArgument(format!(
                    "trait tables missing top5 set {name:?}"
                )));
            }
        }
        for (name, set) in top5.iter_mut() {
            if !TOP5_TRAITS.contains(&name.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "unknown top5 trait {name:?}"
                )));
            }
            set.sort_unstable();
            check_distinct(set, name)?;
        }
        well_known_innovators.sort_unstable();
        quantitative_innovators.sort_unstable();
        check_distinct(&well_known_innovators, "well_known innovators")?;
        check_distinct(&quantitative_innovators, "quantitative innovators")?;
        if regions.len() != STATE_COUNT {
            return Err(Error::InvalidArgument(format!(
                "region map covers {} states, expected all {STATE_COUNT}",
                regions.len()
            )));
        }
        if eras.len() != ERA_COUNT {
            return Err(Error::InvalidArgument(format!(
                "expected exactly {ERA_COUNT} eras, got {}",
                eras.len()
            )));
        }
        eras.sort_by_key(|e| e.start_year);
        for w in eras.windows(2) {
            if w[0].start_year == w[1].start_year {
                return Err(Error::InvalidArgument(format!(
                    "eras {:?} and {:?} share start year {}",
                    w[0].label, w[1].label, w[0].start_year
                )));
            }
        }
        for i in 0..eras.len() {
            for j in i + 1..eras.len() {
                if eras[i].label == eras[j].label {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate era label {:?}",
                        eras[i].label
                    )));
                }
            }
        }
        let get = |name: &str| top5[name];
        Ok(StateTraitTables {
            population_largest: get("population_largest"),
            population_smallest: get("population_smallest"),
            per_capita_wealth: get("per_capita_wealth"),
            urbanization: get("urbanization"),
            most_liberal: get("most_liberal"),
            most_conservative: get("most_conservative"),
            most_extreme: get("most_extreme"),
            professional_legislature: get("professional_legislature"),
            well_known_innovators,
            quantitative_innovators,
            regions,
            eras,
        })
    }

    pub fn region_of(&self, state: StateCode) -> Region {
        self.regions[&state]
    }

    pub fn regions(&self) -> &BTreeMap<StateCode, Region> {
        &self.regions
    }

    /// Eras in ascending start-year order.
    pub fn eras(&self) -> &[Era] {
        &self.eras
    }

    /// Index of the era containing `year` (the last era whose start is
    /// not after it). Years before the first era are unassignable.
    pub fn era_index(&self, year: i32) -> Result<usize> {
        if year < self.eras[0].start_year {
            return Err(Error::InvalidArgument(format!(
                "year {year} precedes the first era ({} starts {})",
                self.eras[0].label, self.eras[0].start_year
            )));
        }
        Ok(self
            .eras
            .iter()
            .rposition(|e| e.start_year <= year)
            .expect("checked above"))
    }

    pub fn top5_set(&self, name: &str) -> &[StateCode; 5] {
        match name {
            "most_conservative" => &self.most_conservative,
            "most_extreme" => &self.most_extreme,
            "most_liberal" => &self.most_liberal,
            "per_capita_wealth" => &self.per_capita_wealth,
            "population_largest" => &self.population_largest,
            "population_smallest" => &self.population_smallest,
            "professional_legislature" => &self.professional_legislature,
            "urbanization" => &self.urbanization,
            _ => panic!("unknown top5 trait {name:?}"),
        }
    }
}

fn check_distinct(set: &[StateCode; 5], name: &str) -> Result<()> {
    for w in set.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidArgument(format!(
                "top5 set {name} lists {} twice",
                w[0]
            )));
        }
    }
    Ok(())
}

/// One policy: its ordered state adoptions plus the national outcome.
#[derive(Clone, PartialEq, Debug)]
pub struct PolicyRecord {
    id: String,
    name: String,
    category: Category,
    adoptions: Vec<AdoptionEvent>,
    national_year: Option<i32>,
    first_year: i32,
}

impl PolicyRecord {
    /// Builds a validated record. Adoptions are sorted by year; the order of
    /// same-year events is preserved as given (it decides which state counts
    /// as the first adopter on ties).
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        category: Category,
        mut adoptions: Vec<AdoptionEvent>,
        national_year: Option<i32>,
    ) -> Result<Self> {
        let id = id.into();
        let name = name.into();
        validate_id(&id)?;
        if name.chars().any(|c| c.is_control()) {
            return Err(Error::invariant(&id, "policy name contains control characters"));
        }
        if adoptions.is_empty() {
            return Err(Error::invariant(&id, "policy has no adoption events"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for a in &adoptions {
            if !seen.insert(a.state) {
                return Err(Error::invariant(
                    &id,
                    format!("state {} adopts more than once", a.state),
                ));
            }
        }
        adoptions.sort_by_key(|a| a.year);
        let first_year = adoptions[0].year;
        if let Some(ny) = national_year {
            if !(YEAR_MIN..=YEAR_MAX).contains(&ny) {
                return Err(Error::invariant(
                    &id,
                    format!("national year {ny} outside [{YEAR_MIN}, {YEAR_MAX}]"),
                ));
            }
            if ny <= first_year {
                return Err(Error::invariant(
                    &id,
                    format!(
                        "national year {ny} does not follow the first state adoption \
                         ({first_year}): top-down policies are excluded"
                    ),
                ));
            }
        }
        Ok(PolicyRecord {
            id,
            name,
            category,
            adoptions,
            national_year,
            first_year,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn category(&self) -> Category {
        self.category
    }

    /// Adoptions sorted by year (same-year order preserved from input).
    pub fn adoptions(&self) -> &[AdoptionEvent] {
        &self.adoptions
    }

    pub fn national_year(&self) -> Option<i32> {
        self.national_year
    }

    pub fn first_year(&self) -> i32 {
        self.first_year
    }

    pub fn first_adopter(&self) -> StateCode {
        self.adoptions[0].state
    }

    /// Adoption years in order, for the growth model.
    pub fn adoption_years(&self) -> Vec<i32> {
        self.adoptions.iter().map(|a| a.year).collect()
    }
}

fn validate_id(id: &str) -> Result<()> {
    let ok = !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "policy id {id:?} must be non-empty and use only [A-Za-z0-9_.-]"
        )))
    }
}

/// The validated policy collection plus the trait tables it was loaded with.
#[derive(Clone, PartialEq, Debug)]
pub struct Corpus {
    policies: Vec<PolicyRecord>,
    trait_tables: StateTraitTables,
}

impl Corpus {
    pub fn new(policies: Vec<PolicyRecord>, trait_tables: StateTraitTables) -> Result<Self> {
        let mut ids = std::collections::BTreeSet::new();
        for p in &policies {
            if !ids.insert(p.id().to_string()) {
                return Err(Error::invariant(p.id(), "duplicate policy id"));
            }
        }
        Ok(Corpus {
            policies,
            trait_tables,
        })
    }

    pub fn policies(&self) -> &[PolicyRecord] {
        &self.policies
    }

    pub fn trait_tables(&self) -> &StateTraitTables {
        &self.trait_tables
    }

    pub fn policy(&self, id: &str) -> Option<&PolicyRecord> {
        self.policies.iter().find(|p| p.id() == id)
    }

    pub fn len(&self) -> usize {
        self.policies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.policies.is_empty()
    }
}

/// The 40 named binary covariates for one policy.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CovariateVector {
    bits: [u8; COVARIATE_COUNT],
}

impl CovariateVector {
    pub fn bits(&self) -> &[u8; COVARIATE_COUNT] {
        &self.bits
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| f64::from(b)).collect()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }
}

/// Feature names in encoding order; era names come from the trait tables.
pub fn feature_names(tables: &StateTraitTables) -> Vec<String> {
    let mut names = Vec::with_capacity(COVARIATE_COUNT);
    for c in CATEGORIES {
        names.push(format!("category_{c}"));
    }
    for era in tables.eras() {
        names.push(format!("era_{}", era.label));
    }
    for r in REGIONS {
        names.push(format!("region_{r}"));
    }
    for t in [
        "most_liberal",
        "most_conservative",
        "most_extreme",
        "urbanization",
        "per_capita_wealth",
        "population_largest",
        "population_smallest",
        "professional_legislature",
    ] {
        names.push(format!("first_state_top5_{t}"));
    }
    names.push("first_state_well_known_innovator".into());
    names.push("first_state_quantitative_innovator".into());
    names.push("first_five_well_known_innovator".into());
    names.push("first_five_quantitative_innovator".into());
    debug_assert_eq!(names.len(), COVARIATE_COUNT);
    names
}

/// Encodes one policy against the trait tables.
///
/// Deterministic in its inputs: category, era of first adoption, census
/// region of the first adopter, the first adopter's top-5 trait memberships,
/// and the four innovator flags over the first five adopters.
pub fn encode_covariates(
    record: &PolicyRecord,
    tables: &StateTraitTables,
) -> Result<CovariateVector> {
    let mut bits = [0u8; COVARIATE_COUNT];
    let mut at = 0;

    bits[at + record.category().index()] = 1;
    at += CATEGORIES.len();

    let era = tables.era_index(record.first_year()).map_err(|e| {
        Error::invariant(record.id(), format!("cannot assign era: {e}"))
    })?;
    bits[at + era] = 1;
    at += ERA_COUNT;

    let first = record.first_adopter();
    bits[at + tables.region_of(first).index()] = 1;
    at += REGIONS.len();

    let first_traits = [
        &tables.most_liberal,
        &tables.most_conservative,
        &tables.most_extreme,
        &tables.urbanization,
        &tables.per_capita_wealth,
        &tables.population_largest,
        &tables.population_smallest,
        &tables.professional_legislature,
    ];
    for set in first_traits {
        bits[at] = u8::from(set.contains(&first));
        at += 1;
    }

    let first_five: Vec<StateCode> = record
        .adoptions()
        .iter()
        .take(5)
        .map(|a| a.state)
        .collect();
    bits[at] = u8::from(tables.well_known_innovators.contains(&first));
    bits[at + 1] = u8::from(tables.quantitative_innovators.contains(&first));
    bits[at + 2] = u8::from(
        first_five
            .iter()
            .any(|s| tables.well_known_innovators.contains(s)),
    );
    bits[at + 3] = u8::from(
        first_five
            .iter()
            .any(|s| tables.quantitative_innovators.contains(s)),
    );
    debug_assert_eq!(at + 4, COVARIATE_COUNT);

    Ok(CovariateVector { bits })
}

/// Cumulative adoption series: one point per distinct year, with the
/// fraction of the 50 states that have adopted by then. All 50 states are
/// treated as existing for the whole period.
pub fn adoption_trajectory(record: &PolicyRecord) -> Vec<(i32, f64)> {
    let mut out: Vec<(i32, f64)> = Vec::new();
    let mut count = 0usize;
    for a in record.adoptions() {
        count += 1;
        let frac = count as f64 / STATE_COUNT as f64;
        match out.last_mut() {
            Some(last) if last.0 == a.year => last.1 = frac,
            _ => out.push((a.year, frac)),
        }
    }
    out
}

/// Number of states that adopted strictly before the national action year.
///
/// Same-calendar-year adoptions are not counted: the data is year-grained,
/// so only a strictly earlier year is unambiguously before the action.
pub fn national_threshold(record: &PolicyRecord) -> Result<u32> {
    let national = record.national_year().ok_or_else(|| {
        Error::InvalidArgument(format!(
            "policy {} has no national action year",
            record.id()
        ))
    })?;
    let count = record
        .adoptions()
        .iter()
        .filter(|a| a.year < national)
        .count() as u32;
    if count == 0 || count >= STATE_COUNT as u32 {
        return Err(Error::invariant(
            record.id(),
            format!("national threshold {count} outside [1, {STATE_COUNT})"),
        ));
    }
    Ok(count)
}
