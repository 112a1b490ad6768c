//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values (run with `--nocapture` to see them).
//!
//! Criterion 9 checks the headline numbers against the original 170-policy
//! corpus, which is not bundled. Point STATECAST_REFERENCE_DATA at a
//! directory containing `policies.csv` and `traits.txt` to enable it;
//! otherwise it reports SKIP.

use std::path::PathBuf;
use std::process::Command;

use rand::Rng;
use statecast::corpus::load_corpus;
use statecast::growth::{forecast, FitConfig, LogisticCurve, ThresholdPool};
use statecast::learn::{
    accuracy, classification_dataset, cross_validate, r_squared, significance_threshold,
    threshold_dataset, ForestConfig, LogisticConfig, ModelSpec,
};
use statecast::report::year_histogram;
use statecast::seeding::stream_rng;
use statecast::testkit::{exact_series, synth_corpus, synth_policy, SynthCorpusConfig, SynthSpec};

fn pass(criterion: u32, name: &str, detail: &str) {
    println!("ACCEPTANCE {criterion} {name}: PASS ({detail})");
}

/// 1. Formula exactness of the determination coefficient and accuracy.
#[test]
fn criterion_1_formula_exactness() {
    let y = [1.0, 2.0, 3.0];
    assert!((r_squared(&y, &y).unwrap() - 1.0).abs() <= 1e-12);
    let mean = [2.0, 2.0, 2.0];
    assert!(r_squared(&y, &mean).unwrap().abs() <= 1e-12);
    let r2 = r_squared(&y, &[3.0, 2.0, 1.0]).unwrap();
    assert!((r2 - (-3.0)).abs() <= 1e-12, "reversed R² = {r2}");

    let mut y_true = vec![0.0; 89];
    y_true.extend(vec![1.0; 81]);
    let acc = accuracy(&y_true, &vec![0.0; 170]).unwrap();
    assert!((acc - 89.0 / 170.0).abs() <= 1e-12, "baseline accuracy {acc}");

    pass(1, "formula exactness", &format!("R² ∈ {{1, 0, -3}}, accuracy {acc:.10}"));
}

/// 2. Growth-law evaluation: fixed points, monotonicity, frozen value.
#[test]
fn criterion_2_growth_law_evaluation() {
    let mut rng = stream_rng(4001, 0);
    for _ in 0..1000 {
        let p0 = rng.random_range(0.002..0.9);
        let r = rng.random_range(0.01..3.0);
        let curve = LogisticCurve::new(p0, r, 0.0).unwrap();
        assert!((curve.value_at(0.0) - p0).abs() <= 1e-9, "P(0) = P0 at p0={p0} r={r}");
        let t_hi = (20.0 / r).min(50.0);
        let t = rng.random_range(0.0..t_hi);
        let dt = rng.random_range(0.05..3.0);
        assert!(
            curve.value_at(t + dt) > curve.value_at(t),
            "monotone at p0={p0} r={r} t={t}"
        );
    }
    let saturated = LogisticCurve::new(1.0, 0.4, 0.0).unwrap();
    for t in [-5.0, 0.0, 12.0] {
        assert!((saturated.value_at(t) - 1.0).abs() <= 1e-9);
    }

    // Frozen from direct high-precision evaluation of the growth law.
    let expected = 0.7517895958772464;
    let got = LogisticCurve::new(0.02, 0.5, 0.0).unwrap().value_at(10.0);
    assert!((got - expected).abs() <= 1e-9, "P(10) = {got}");
    pass(2, "growth-law evaluation", &format!("P(10) = {got:.12}"));
}

/// 3. Analytic inversion against evaluation and bisection.
#[test]
fn criterion_3_inversion_round_trip() {
    let bisect = |curve: &LogisticCurve, p_th: f64| -> f64 {
        let (mut lo, mut hi) = (-5000.0, 50000.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if curve.value_at(mid) < p_th {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let mut rng = stream_rng(4002, 0);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p0 = rng.random_range(0.002..0.3);
        let r = rng.random_range(0.02..3.0);
        let threshold = rng.random_range(1u32..50);
        let p_th = f64::from(threshold) / 50.0;
        let curve = LogisticCurve::new(p0, r, 0.0).unwrap();
        let t_star = curve.crossing_time(p_th).unwrap();
        let err = (curve.value_at(t_star) - p_th).abs();
        worst = worst.max(err);
        assert!(err <= 1e-9, "inversion error {err} at p0={p0} r={r} th={threshold}");
        let t_bisect = bisect(&curve, p_th);
        assert!(
            (t_star - t_bisect).abs() <= 1e-6,
            "bisection disagrees: {t_star} vs {t_bisect}"
        );
    }
    pass(3, "inversion round trip", &format!("worst |P(t*) − P_th| = {worst:.2e}"));
}

/// 4. Grid fit recovers generating rates from exact series, with the argmin
///    verified by independent exhaustive evaluation.
#[test]
fn criterion_4_fit_recovery() {
    use statecast::growth::{fit_curve, sse};
    let config = FitConfig::default();
    let mut rng = stream_rng(4003, 0);
    let mut worst_rel = 0.0f64;
    for i in 0..50 {
        let r_star = (rng.random_range(0.05f64.ln()..2.0f64.ln())).exp();
        let p0_star = (rng.random_range(0.005f64.ln()..0.15f64.ln())).exp();
        let spec = SynthSpec::new(r_star, p0_star, 2000, 25);
        let series = exact_series(&spec, 20).unwrap();
        let fit = fit_curve(&series, &config).unwrap();
        let rel = (fit.r() - r_star).abs() / r_star;
        worst_rel = worst_rel.max(rel);
        assert!(
            rel < 0.05,
            "config {i}: fitted r {} vs true {r_star} ({rel:.3})",
            fit.r()
        );

        // Independent exhaustive argmin over the same grid.
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for &r in config.r_grid() {
            for &p0 in config.p0_grid() {
                let s = sse(&LogisticCurve::new(p0, r, series.t0_year()).unwrap(), &series);
                if s < best.0 {
                    best = (s, r, p0);
                }
            }
        }
        assert_eq!(fit.r(), best.1, "config {i}: argmin r mismatch");
        assert_eq!(fit.p0(), best.2, "config {i}: argmin p0 mismatch");
    }
    pass(4, "fit recovery", &format!("worst relative r error {worst_rel:.4}"));
}

/// 5. Forecast oracle: modal year within ±1 of the known crossing year in at
///    least 60% of 20 random configurations, ≥95% of trials non-censored.
#[test]
fn criterion_5_forecast_oracle() {
    let mut rng = stream_rng(4004, 0);
    let mut hits = 0usize;
    let mut censored_total = 0usize;
    let mut trials_total = 0usize;
    let configs = 20;
    for i in 0..configs {
        let r_true = (rng.random_range(0.15f64.ln()..0.5f64.ln())).exp();
        let threshold = rng.random_range(12u32..=30);
        let spec = SynthSpec::new(r_true, 0.02, 2000, threshold);
        let record = synth_policy(&spec, "oracle").unwrap();
        let y_star = record.adoptions()[threshold as usize - 1].year;
        let pool = ThresholdPool::new(vec![threshold]).unwrap();
        let config = FitConfig::default()
            .with_trials(1000)
            .with_seed(7000 + i as u64);
        let ensemble = forecast(&record, 15, &pool, &config).unwrap();
        let summary = ensemble.summary();
        let modal = summary.modal_year.expect("non-censored trials exist");
        if (modal - y_star).abs() <= 1 {
            hits += 1;
        }
        censored_total += (summary.censored_fraction * 1000.0).round() as usize;
        trials_total += 1000;
        println!(
            "  config {i}: r={r_true:.3} T={threshold} Y*={y_star} modal={modal} censored={:.3}",
            summary.censored_fraction
        );
    }
    let non_censored = 1.0 - censored_total as f64 / trials_total as f64;
    assert!(
        hits * 100 >= configs * 60,
        "modal within ±1 in only {hits}/{configs} configurations"
    );
    assert!(
        non_censored >= 0.95,
        "only {non_censored:.3} of trials non-censored"
    );
    pass(
        5,
        "forecast oracle",
        &format!("{hits}/{configs} configs within ±1, {non_censored:.3} non-censored"),
    );
}

/// 6. No-signal bound and planted-signal recovery for both classifiers.
#[test]
fn criterion_6_no_signal_and_planted_signal() {
    // Label-shuffled corpus at the reference scale, with a class balance
    // like the reference study's 89/81 split (first qualifying seed in a
    // fixed probe range, so the fixture is deterministic).
    let corpus = (4005u64..4030)
        .find_map(|seed| {
            let (c, _) = synth_corpus(&SynthCorpusConfig {
                n: 170,
                signal_strength: 0.9,
                seed,
                ..SynthCorpusConfig::default()
            })
            .unwrap();
            let positives = c
                .policies()
                .iter()
                .filter(|p| p.national_year().is_some())
                .count();
            (80..=90).contains(&positives).then_some(c)
        })
        .expect("a near-balanced corpus exists in the probe range");
    let data = classification_dataset(&corpus).unwrap();
    let shuffled = data.with_shuffled_targets(&mut stream_rng(4006, 0));
    let ones = shuffled.targets().iter().filter(|&&y| y == 1.0).count();
    let baseline = ones.max(shuffled.n() - ones) as f64 / shuffled.n() as f64;

    let mut details = String::new();
    for (name, spec) in [
        ("logistic", ModelSpec::Logistic(LogisticConfig::default())),
        ("forest", ModelSpec::ForestClassifier(ForestConfig::default())),
    ] {
        let report = cross_validate(&spec, &shuffled, 4, 100, 4007).unwrap();
        assert!(
            (report.mean - baseline).abs() <= 0.05,
            "{name} on shuffled labels: mean {} vs baseline {baseline}",
            report.mean
        );
        // sanity bound: even the 95th percentile stays near chance
        assert!(
            report.p95 <= baseline + 0.08,
            "{name} on shuffled labels: p95 {} vs baseline {baseline}",
            report.p95
        );
        details.push_str(&format!("{name} shuffled {:.3} ", report.mean));
    }

    // Planted signal at strength 0.9: Bayes accuracy 0.9.
    let (planted, _) = synth_corpus(&SynthCorpusConfig {
        n: 500,
        signal_strength: 0.9,
        seed: 4008,
        ..SynthCorpusConfig::default()
    })
    .unwrap();
    let planted_data = classification_dataset(&planted).unwrap();
    for (name, spec) in [
        ("logistic", ModelSpec::Logistic(LogisticConfig::default())),
        ("forest", ModelSpec::ForestClassifier(ForestConfig::default())),
    ] {
        let report = cross_validate(&spec, &planted_data, 4, 100, 4009).unwrap();
        assert!(
            (report.mean - 0.9).abs() <= 0.05,
            "{name} on planted signal: mean {} vs Bayes 0.9",
            report.mean
        );
        details.push_str(&format!("{name} planted {:.3} ", report.mean));
    }
    pass(6, "no-signal bound / Bayes recovery", details.trim());
}

/// 7. The top-5 significance constant.
#[test]
fn criterion_7_significance_constant() {
    let t = significance_threshold(40, 5);
    assert!((t - (1.0 / 40.0 + 1.0 / 39.0 + 1.0 / 38.0 + 1.0 / 37.0 + 1.0 / 36.0)).abs() < 1e-15);
    assert_eq!(format!("{t:.3}"), "0.132");
    pass(7, "significance constant", &format!("threshold {t:.9}"));
}

/// 8. Byte-identical CLI outputs across reruns and worker counts.
#[test]
fn criterion_8_cli_determinism() {
    let base = std::env::temp_dir().join(format!("statecast_acc8_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&base);
    std::fs::create_dir_all(&base).unwrap();
    let bin = env!("CARGO_BIN_EXE_statecast");

    let synth_dir = base.join("synth");
    let status = Command::new(bin)
        .args([
            "synth", "--n", "60", "--signal", "0.8", "--r", "0.3", "--seed", "21",
            "--out", synth_dir.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let policies = synth_dir.join("policies.csv");
    let traits = synth_dir.join("traits.txt");
    let gt = std::fs::read_to_string(synth_dir.join("ground_truth.csv")).unwrap();
    let policy = gt
        .lines()
        .skip(1)
        .find(|l| l.split(',').nth(1) == Some("1"))
        .map(|l| l.split(',').next().unwrap().to_string())
        .expect("a national-action policy exists");

    let read_dir = |dir: &PathBuf| -> Vec<(String, Vec<u8>)> {
        let mut entries: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().to_string_lossy().into_owned(),
                    std::fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        entries.sort();
        entries
    };

    for (cmd, extra) in [
        ("classify", vec!["--trials", "40"]),
        (
            "forecast",
            vec!["--trials", "300", "--policy", policy.as_str(), "--train-n", "8"],
        ),
    ] {
        let mut dirs = Vec::new();
        for (tag, workers) in [("a_w1", "1"), ("b_w1", "1"), ("c_w4", "4")] {
            let out = base.join(format!("{cmd}_{tag}"));
            let mut args = vec![
                cmd,
                policies.to_str().unwrap(),
                traits.to_str().unwrap(),
                "--seed",
                "33",
                "--workers",
                workers,
                "--out",
                out.to_str().unwrap(),
            ];
            args.extend_from_slice(&extra);
            let output = Command::new(bin).args(&args).output().unwrap();
            assert!(
                output.status.success(),
                "{cmd} failed: {}",
                String::from_utf8_lossy(&output.stderr)
            );
            dirs.push(out);
        }
        let reference = read_dir(&dirs[0]);
        assert!(!reference.is_empty());
        for other in &dirs[1..] {
            assert_eq!(reference, read_dir(other), "{cmd} outputs differ");
        }
    }
    pass(8, "CLI determinism", "classify and forecast byte-identical across reruns and workers 1/4");
}

/// 9. Conditional reproduction of the reference results; requires the
///    original corpus via STATECAST_REFERENCE_DATA.
#[test]
fn criterion_9_reference_corpus_reproduction() {
    let Some(dir) = std::env::var_os("STATECAST_REFERENCE_DATA") else {
        println!(
            "ACCEPTANCE 9 reference-corpus reproduction: SKIP \
             (set STATECAST_REFERENCE_DATA to a directory with policies.csv and traits.txt)"
        );
        return;
    };
    let dir = PathBuf::from(dir);
    let corpus = load_corpus(&dir.join("policies.csv"), &dir.join("traits.txt")).unwrap();
    assert_eq!(corpus.len(), 170, "expected the 170-policy corpus");

    // Part 1: classification accuracy means.
    let data = classification_dataset(&corpus).unwrap();
    let logistic = cross_validate(
        &ModelSpec::Logistic(LogisticConfig::default()),
        &data,
        4,
        1000,
        42,
    )
    .unwrap();
    assert!(
        (logistic.mean - 0.573).abs() <= 0.02,
        "logistic mean {}",
        logistic.mean
    );
    let forest = cross_validate(
        &ModelSpec::ForestClassifier(ForestConfig::default()),
        &data,
        4,
        1000,
        42,
    )
    .unwrap();
    assert!(
        (forest.mean - 0.569).abs() <= 0.02,
        "forest mean {}",
        forest.mean
    );

    // Part 2: held-out R² bounded above by the null model.
    let thresholds = threshold_dataset(&corpus).unwrap();
    let lasso = cross_validate(
        &ModelSpec::Lasso { lambda: 0.056 },
        &thresholds,
        4,
        1000,
        42,
    )
    .unwrap();
    let nonpositive = lasso.scores.iter().filter(|&&s| s <= 0.0).count();
    assert!(
        nonpositive * 100 >= lasso.scores.len() * 95,
        "only {nonpositive}/1000 trials at or below the null model"
    );

    // Part 3: retrospective forecasts.
    let pool = ThresholdPool::from_corpus(&corpus).unwrap();
    let ssm = corpus
        .policy("same_sex_marriage")
        .expect("policy id same_sex_marriage");
    let config = FitConfig::default().with_trials(1000).with_seed(42);
    let ensemble = forecast(ssm, 10, &pool, &config).unwrap();
    let hist = year_histogram(&ensemble).unwrap();
    assert_eq!(ensemble.summary().modal_year, Some(2015));
    let ssm_density = hist.mass_within(2015, 2);
    assert!(
        (0.35..=0.52).contains(&ssm_density),
        "same-sex marriage density {ssm_density}"
    );

    let meth = corpus
        .policy("meth_precursor")
        .expect("policy id meth_precursor");
    let ensemble = forecast(meth, 5, &pool, &config).unwrap();
    let hist = year_histogram(&ensemble).unwrap();
    let meth_density = hist.mass_within(2006, 2);
    assert!(
        (0.30..=0.48).contains(&meth_density),
        "meth density {meth_density}"
    );

    pass(
        9,
        "reference-corpus reproduction",
        &format!(
            "logistic {:.3}, forest {:.3}, R²≤0 {}‰, ssm {:.3}, meth {:.3}",
            logistic.mean,
            forest.mean,
            nonpositive,
            ssm_density,
            meth_density
        ),
    );
}
