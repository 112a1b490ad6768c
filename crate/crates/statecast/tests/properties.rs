//! Property tests over the public API.

use proptest::prelude::*;

use statecast::corpus::{
    adoption_trajectory, encode_covariates, national_threshold, AdoptionEvent, Category, Corpus,
    PolicyRecord, StateCode, ALL_STATES,
};
use statecast::growth::LogisticCurve;
use statecast::learn::metrics::{accuracy, r_squared};
use statecast::testkit::reference_traits;

fn arb_curve() -> impl Strategy<Value = LogisticCurve> {
    (0.002f64..0.8, 0.01f64..3.0).prop_map(|(p0, r)| LogisticCurve::new(p0, r, 0.0).unwrap())
}

proptest! {
    #[test]
    fn curve_starts_at_p0_and_increases(curve in arb_curve(), t in 0.0f64..20.0, dt in 0.05f64..5.0) {
        prop_assert!((curve.value_at(0.0) - curve.p0()).abs() < 1e-12);
        let cap = 25.0 / curve.r();
        let t = t.min(cap - 6.0).max(0.0);
        prop_assert!(curve.value_at(t + dt) > curve.value_at(t));
    }

    #[test]
    fn inversion_round_trips(curve in arb_curve(), threshold in 1u32..50) {
        let p_th = f64::from(threshold) / 50.0;
        if p_th > curve.p0() {
            let t = curve.crossing_time(p_th).unwrap();
            prop_assert!((curve.value_at(t) - p_th).abs() <= 1e-9);
        }
    }

    #[test]
    fn accuracy_is_permutation_invariant(pairs in proptest::collection::vec((any::<bool>(), any::<bool>()), 2..60), seed in any::<u64>()) {
        let y_true: Vec<f64> = pairs.iter().map(|(a, _)| f64::from(*a)).collect();
        let y_pred: Vec<f64> = pairs.iter().map(|(_, b)| f64::from(*b)).collect();
        let base = accuracy(&y_true, &y_pred).unwrap();

        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        order.shuffle(&mut statecast::seeding::stream_rng(seed, 0));
        let pt: Vec<f64> = order.iter().map(|&i| y_true[i]).collect();
        let pp: Vec<f64> = order.iter().map(|&i| y_pred[i]).collect();
        prop_assert_eq!(accuracy(&pt, &pp).unwrap(), base);
    }

    #[test]
    fn r_squared_never_exceeds_one(ys in proptest::collection::vec(-50.0f64..50.0, 3..40), preds in proptest::collection::vec(-50.0f64..50.0, 3..40)) {
        let n = ys.len().min(preds.len());
        let y = &ys[..n];
        let p = &preds[..n];
        if let Ok(r2) = r_squared(y, p) {
            prop_assert!(r2 <= 1.0 + 1e-12);
        }
    }
}

/// A valid policy record: 1–50 distinct states adopting over sorted years,
/// optionally a national action strictly after the first adoption.
fn arb_record() -> impl Strategy<Value = PolicyRecord> {
    (
        proptest::collection::vec(0usize..50, 1..25),
        proptest::collection::vec(1900i32..2050, 25),
        proptest::bool::ANY,
        0usize..13,
    )
        .prop_map(|(state_picks, years, national, category)| {
            let mut seen = std::collections::BTreeSet::new();
            let states: Vec<StateCode> = state_picks
                .iter()
                .filter(|&&i| seen.insert(i))
                .map(|&i| StateCode::parse(ALL_STATES[i]).unwrap())
                .collect();
            let adoptions: Vec<AdoptionEvent> = states
                .iter()
                .zip(&years)
                .map(|(s, y)| AdoptionEvent::new(*s, *y).unwrap())
                .collect();
            let first = adoptions.iter().map(|a| a.year).min().unwrap();
            let last = adoptions.iter().map(|a| a.year).max().unwrap();
            let national_year = national.then_some(last.max(first + 1) + 1);
            let category = Category::parse(statecast::corpus::CATEGORIES[category]).unwrap();
            PolicyRecord::new("prop_policy", "Property policy", category, adoptions, national_year)
                .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoded_records_are_one_hot(record in arb_record()) {
        let tables = reference_traits();
        let v = encode_covariates(&record, &tables).unwrap();
        let bits = v.bits();
        let ones = |lo: usize, hi: usize| -> u32 { (lo..hi).map(|i| u32::from(bits[i])).sum() };
        prop_assert_eq!(ones(0, 13), 1);
        prop_assert_eq!(ones(13, 24), 1);
        prop_assert_eq!(ones(24, 28), 1);
        // identical inputs encode identically
        prop_assert_eq!(encode_covariates(&record, &tables).unwrap(), v);
    }

    #[test]
    fn threshold_equals_trajectory_prefix(record in arb_record()) {
        if let Some(national) = record.national_year() {
            let threshold = national_threshold(&record).unwrap();
            let prefix = adoption_trajectory(&record)
                .iter()
                .filter(|(y, _)| *y < national)
                .map(|(_, f)| (f * 50.0).round() as u32)
                .max()
                .unwrap_or(0);
            prop_assert_eq!(threshold, prefix);
        }
    }

    #[test]
    fn corpus_round_trips_canonically(record in arb_record()) {
        let corpus = Corpus::new(vec![record], reference_traits()).unwrap();
        let text = corpus.to_canonical_text();
        let reloaded = Corpus::from_canonical_text(&text).unwrap();
        prop_assert_eq!(&reloaded, &corpus);
        prop_assert_eq!(reloaded.to_canonical_text(), text);
    }
}
