//! Command-line frontend: validate, classify, threshold, forecast, synth.
//!
//! Every run writes a `run_meta.txt` with the seed, the resolved
//! configuration, and input digests; re-running with the recorded flags
//! reproduces every output byte for byte. The worker count is deliberately
//! absent from the metadata because results never depend on it.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::corpus::{
    load_corpus, load_corpus_filtered, national_threshold, policies_to_csv, traits_to_text,
    Corpus, Exclusion,
};
use crate::error::{Error, Result};
use crate::growth::{forecast, log_grid, FitConfig, ThresholdPool};
use crate::learn::{
    classification_dataset, cross_validate, threshold_dataset, train_forest, train_lasso,
    Dataset, EvalReport, ForestConfig, ForestMode, LogisticConfig, ModelSpec,
};
use crate::report::{cdf_table, trajectory_grid, year_histogram, DEFAULT_FRACTION_BINS};
use crate::seeding::stream_rng;
use crate::testkit::{synth_corpus, Pulse, SynthCorpusConfig};
use crate::textfmt::f9;

#[derive(Parser, Debug)]
#[command(
    name = "statecast",
    version,
    about = "Forecast when state-level policies become national law"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed for every randomized procedure.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Number of randomized trials (cross-validation or bootstrap).
    #[arg(long, global = true, default_value_t = 1000)]
    trials: usize,

    /// Worker threads (0 = one per core). Never changes results.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Output directory.
    #[arg(long, global = true, default_value = "statecast_out")]
    out: PathBuf,

    /// Delimiter for tabular outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Exclude top-down policies at load instead of failing.
    #[arg(long, global = true)]
    filter: bool,

    /// Drop the forecast policy's own threshold from the sampling pool.
    #[arg(long, global = true)]
    leave_one_out: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn delimiter(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }

    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Tsv => "tsv",
        }
    }

    fn label(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Tsv => "tsv",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum FeatureSet {
    /// All 40 covariates.
    All,
    /// The five features with the highest mean importance in a full
    /// forest run.
    Top5,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load and validate input files, reporting per-policy status.
    Validate {
        policies: PathBuf,
        traits: PathBuf,
    },
    /// Cross-validated classification of national-action outcomes
    /// (logistic regression and random forest).
    Classify {
        policies: PathBuf,
        traits: PathBuf,
        #[arg(long, default_value_t = 4)]
        folds: usize,
        #[arg(long, value_enum, default_value_t = FeatureSet::All)]
        features: FeatureSet,
        /// Forest depth limit (unlimited when omitted).
        #[arg(long)]
        max_depth: Option<u32>,
    },
    /// Cross-validated regression of the national-action threshold
    /// (lasso and depth-limited forest).
    Threshold {
        policies: PathBuf,
        traits: PathBuf,
        #[arg(long, default_value_t = 4)]
        folds: usize,
        /// Fixed lasso penalty; omitted = select on a log grid by mean CV R².
        #[arg(long)]
        lambda: Option<f64>,
        /// Forest depth limit for the regressor.
        #[arg(long, default_value_t = 1)]
        max_depth: u32,
    },
    /// Bootstrap-ensemble forecast of the year of national action for one
    /// policy.
    Forecast {
        policies: PathBuf,
        traits: PathBuf,
        /// Policy id to forecast.
        #[arg(long)]
        policy: String,
        /// Number of earliest adoptions to train on.
        #[arg(long, default_value_t = 10)]
        train_n: usize,
        /// Smooth-bootstrap noise standard deviation in years.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Censoring horizon in years after the first adoption.
        #[arg(long, default_value_t = 200.0)]
        horizon: f64,
    },
    /// Emit a synthetic corpus (policies, traits, ground truth) in the
    /// standard input format.
    Synth {
        #[arg(long, default_value_t = 170)]
        n: usize,
        /// Probability the planted category determines the label.
        #[arg(long, default_value_t = 0.5)]
        signal: f64,
        /// Fix the growth rate for every policy.
        #[arg(long)]
        r: Option<f64>,
        /// Fix the initial adopted fraction.
        #[arg(long)]
        p0: Option<f64>,
        /// Fix the national-action threshold.
        #[arg(long)]
        threshold: Option<u32>,
        /// Fix the first adoption year.
        #[arg(long)]
        first_year: Option<i32>,
        /// Inject simultaneous adoptions, formatted YEAR:COUNT.
        #[arg(long)]
        pulse: Option<String>,
        /// Jitter (years) on synthetic adoption times.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    if cli.trials == 0 {
        return Err(Error::InvalidArgument("--trials must be at least 1".into()));
    }
    if cli.workers > 0 {
        // Ignore the error when a pool already exists (repeated in-process
        // runs from tests); results do not depend on the pool size.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    match &cli.command {
        Command::Validate { policies, traits } => cmd_validate(&cli, policies, traits),
        Command::Classify {
            policies,
            traits,
            folds,
            features,
            max_depth,
        } => cmd_classify(&cli, policies, traits, *folds, *features, *max_depth),
        Command::Threshold {
            policies,
            traits,
            folds,
            lambda,
            max_depth,
        } => cmd_threshold(&cli, policies, traits, *folds, *lambda, *max_depth),
        Command::Forecast {
            policies,
            traits,
            policy,
            train_n,
            sigma,
            horizon,
        } => cmd_forecast(&cli, policies, traits, policy, *train_n, *sigma, *horizon),
        Command::Synth {
            n,
            signal,
            r,
            p0,
            threshold,
            first_year,
            pulse,
            noise,
        } => cmd_synth(
            &cli, *n, *signal, *r, *p0, *threshold, *first_year, pulse.as_deref(), *noise,
        ),
    }
}

fn load(cli: &Cli, policies: &Path, traits: &Path) -> Result<(Corpus, Vec<Exclusion>)> {
    if cli.filter {
        load_corpus_filtered(policies, traits)
    } else {
        Ok((load_corpus(policies, traits)?, Vec::new()))
    }
}

fn cmd_validate(cli: &Cli, policies: &Path, traits: &Path) -> Result<i32> {
    let (corpus, excluded) = load(cli, policies, traits)?;
    for p in corpus.policies() {
        let national = match p.national_year() {
            Some(y) => format!("national {y}, threshold {}", national_threshold(p)?),
            None => "no national action".to_string(),
        };
        println!(
            "ok {} ({} adoptions from {}, {national})",
            p.id(),
            p.adoptions().len(),
            p.first_year()
        );
    }
    for e in &excluded {
        println!("excluded {} ({})", e.policy_id, e.reason);
    }
    println!("{} policies loaded, {} excluded", corpus.len(), excluded.len());

    let meta = meta_base(cli, "validate", &[(policies, "policies"), (traits, "traits")])?;
    write_meta(cli, meta)?;
    Ok(if excluded.is_empty() { 0 } else { 2 })
}

fn cmd_classify(
    cli: &Cli,
    policies: &Path,
    traits: &Path,
    folds: usize,
    features: FeatureSet,
    max_depth: Option<u32>,
) -> Result<i32> {
    let (corpus, _) = load(cli, policies, traits)?;
    let full = classification_dataset(&corpus)?;
    let forest_config = ForestConfig {
        max_depth,
        ..ForestConfig::default()
    };

    let (data, selected) = match features {
        FeatureSet::All => (full, None),
        FeatureSet::Top5 => {
            let probe = cross_validate(
                &ModelSpec::ForestClassifier(forest_config),
                &full,
                folds,
                cli.trials,
                cli.seed,
            )?;
            let importance = probe
                .per_feature_importance
                .expect("forest report carries importance");
            let mut idx: Vec<usize> = (0..importance.len()).collect();
            idx.sort_by(|&a, &b| {
                importance[b]
                    .partial_cmp(&importance[a])
                    .expect("finite importance")
                    .then(a.cmp(&b))
            });
            idx.truncate(5);
            let names: Vec<String> = idx
                .iter()
                .map(|&j| full.feature_names()[j].clone())
                .collect();
            (full.select_features(&idx)?, Some(names))
        }
    };

    let logistic = cross_validate(
        &ModelSpec::Logistic(LogisticConfig::default()),
        &data,
        folds,
        cli.trials,
        cli.seed,
    )?;
    let forest = cross_validate(
        &ModelSpec::ForestClassifier(forest_config),
        &data,
        folds,
        cli.trials,
        cli.seed,
    )?;

    write_eval(cli, "logistic", &logistic)?;
    write_eval(cli, "forest", &forest)?;
    if let Some(names) = &selected {
        let mut text = String::new();
        for n in names {
            text.push_str(n);
            text.push('\n');
        }
        write_out(cli, "selected_features.txt", &text)?;
    }
    println!(
        "classify: logistic mean {} [{}, {}], forest mean {} [{}, {}]",
        f9(logistic.mean),
        f9(logistic.p05),
        f9(logistic.p95),
        f9(forest.mean),
        f9(forest.p05),
        f9(forest.p95),
    );

    let mut meta = meta_base(cli, "classify", &[(policies, "policies"), (traits, "traits")])?;
    meta.push(("folds".into(), folds.to_string()));
    meta.push((
        "features".into(),
        match features {
            FeatureSet::All => "all".to_string(),
            FeatureSet::Top5 => "top5".to_string(),
        },
    ));
    meta.push((
        "max_depth".into(),
        max_depth.map_or("none".to_string(), |d| d.to_string()),
    ));
    write_meta(cli, meta)?;
    Ok(0)
}

fn cmd_threshold(
    cli: &Cli,
    policies: &Path,
    traits: &Path,
    folds: usize,
    lambda: Option<f64>,
    max_depth: u32,
) -> Result<i32> {
    let (corpus, _) = load(cli, policies, traits)?;
    let data = threshold_dataset(&corpus)?;
    let first = data.targets()[0];
    if data.targets().iter().all(|&t| t == first) {
        return Err(Error::InvalidArgument(
            "all thresholds are identical: R² is undefined for constant targets".into(),
        ));
    }

    let (chosen_lambda, selection) = match lambda {
        Some(l) => (l, None),
        None => {
            let grid = log_grid(1e-4, 1.0, 25);
            let select_trials = cli.trials.min(100);
            let mut best: Option<(f64, f64)> = None; // (mean R², lambda)
            let mut rows = Vec::new();
            for &l in &grid {
                let report = cross_validate(
                    &ModelSpec::Lasso { lambda: l },
                    &data,
                    folds,
                    select_trials,
                    cli.seed,
                )?;
                rows.push((l, report.mean));
                if best.is_none_or(|(m, _)| report.mean > m) {
                    best = Some((report.mean, l));
                }
            }
            (best.expect("non-empty grid").1, Some(rows))
        }
    };

    let lasso = cross_validate(
        &ModelSpec::Lasso {
            lambda: chosen_lambda,
        },
        &data,
        folds,
        cli.trials,
        cli.seed,
    )?;
    let forest_config = ForestConfig {
        max_depth: Some(max_depth),
        ..ForestConfig::default()
    };
    let forest = cross_validate(
        &ModelSpec::ForestRegressor(forest_config),
        &data,
        folds,
        cli.trials,
        cli.seed,
    )?;

    write_eval(cli, "lasso", &lasso)?;
    write_eval(cli, "forest", &forest)?;
    if let Some(rows) = selection {
        let d = cli.format.delimiter();
        let mut text = format!("lambda{d}mean_r2\n");
        for (l, m) in rows {
            text.push_str(&format!("{}{d}{}\n", f9(l), f9(m)));
        }
        write_out(cli, &format!("lambda_selection.{}", cli.format.extension()), &text)?;
    }

    let ids: Vec<&str> = corpus
        .policies()
        .iter()
        .filter(|p| p.national_year().is_some())
        .map(|p| p.id())
        .collect();
    write_pairs(cli, "lasso", &data, &ids, |train, test_rows| {
        let model = train_lasso(train, chosen_lambda)?;
        test_rows.iter().map(|x| model.predict(x)).collect()
    })?;
    write_pairs(cli, "forest", &data, &ids, |train, test_rows| {
        let model = train_forest(train, ForestMode::Regressor, &forest_config)?;
        test_rows.iter().map(|x| model.predict(x)).collect()
    })?;

    println!(
        "threshold: lasso (lambda {}) mean R² {} [{}, {}], forest mean R² {} [{}, {}]",
        f9(chosen_lambda),
        f9(lasso.mean),
        f9(lasso.p05),
        f9(lasso.p95),
        f9(forest.mean),
        f9(forest.p05),
        f9(forest.p95),
    );

    let mut meta = meta_base(cli, "threshold", &[(policies, "policies"), (traits, "traits")])?;
    meta.push(("folds".into(), folds.to_string()));
    meta.push(("lambda".into(), f9(chosen_lambda)));
    meta.push((
        "lambda_mode".into(),
        if lambda.is_some() { "fixed" } else { "grid" }.to_string(),
    ));
    meta.push(("max_depth".into(), max_depth.to_string()));
    write_meta(cli, meta)?;
    Ok(0)
}

/// Held-out predictions from one fixed 4-fold partition (stream 0), written
/// as (policy, actual, predicted) rows in corpus order.
fn write_pairs(
    cli: &Cli,
    model: &str,
    data: &Dataset,
    ids: &[&str],
    fit_predict: impl Fn(&Dataset, &[&[f64]]) -> Result<Vec<f64>>,
) -> Result<()> {
    let folds = 4.min(data.n());
    let mut rng = stream_rng(cli.seed, 0);
    let mut perm: Vec<usize> = (0..data.n()).collect();
    use rand::Rng;
    for i in (1..perm.len()).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let mut predicted: Vec<Option<f64>> = vec![None; data.n()];
    for fold in 0..folds {
        let test_rows: Vec<usize> =
            perm[fold * data.n() / folds..(fold + 1) * data.n() / folds].to_vec();
        let train_rows: Vec<usize> = perm
            .iter()
            .copied()
            .filter(|i| !test_rows.contains(i))
            .collect();
        let train = data.subset(&train_rows);
        let rows: Vec<&[f64]> = test_rows.iter().map(|&i| data.row(i)).collect();
        let preds = fit_predict(&train, &rows)?;
        for (i, p) in test_rows.iter().zip(preds) {
            predicted[*i] = Some(p);
        }
    }
    let d = cli.format.delimiter();
    let mut text = format!("policy{d}actual{d}predicted\n");
    for (i, id) in ids.iter().enumerate() {
        let p = predicted[i].expect("every row predicted once");
        text.push_str(&format!("{id}{d}{}{d}{}\n", data.targets()[i], f9(p)));
    }
    write_out(
        cli,
        &format!("pairs_{model}.{}", cli.format.extension()),
        &text,
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_forecast(
    cli: &Cli,
    policies: &Path,
    traits: &Path,
    policy_id: &str,
    train_n: usize,
    sigma: f64,
    horizon: f64,
) -> Result<i32> {
    let (corpus, _) = load(cli, policies, traits)?;
    let record = corpus.policy(policy_id).ok_or_else(|| {
        Error::InvalidArgument(format!("unknown policy id {policy_id:?}"))
    })?;
    let mut pool = ThresholdPool::from_corpus(&corpus)?;
    if cli.leave_one_out {
        if let Some(own) = record
            .national_year()
            .map(|_| national_threshold(record))
            .transpose()?
        {
            pool = pool.without_one(own)?;
        }
    }

    let config = FitConfig::default()
        .with_trials(cli.trials)
        .with_seed(cli.seed)
        .with_noise_sigma(sigma)
        .with_horizon_years(horizon);
    let ensemble = forecast(record, train_n, &pool, &config)?;
    write_out(cli, "ensemble.txt", &ensemble.to_text())?;

    let summary = ensemble.summary();
    if summary.censored_fraction >= 1.0 {
        return Err(Error::Model(
            "every bootstrap trial censored beyond the horizon: nothing to report".into(),
        ));
    }
    let hist = year_histogram(&ensemble)?;
    let cdf = cdf_table(&hist)?;
    let last_year = ensemble
        .year_counts()
        .last()
        .map(|(y, _)| *y)
        .expect("non-censored trials exist");
    let grid = trajectory_grid(
        &ensemble,
        record.first_year(),
        last_year + 5,
        DEFAULT_FRACTION_BINS,
    )?;
    let ext = cli.format.extension();
    let d = cli.format.delimiter();
    write_out(cli, &format!("histogram.{ext}"), &hist.to_table(d))?;
    write_out(cli, &format!("cdf.{ext}"), &cdf.to_table(d))?;
    write_out(cli, &format!("grid.{ext}"), &grid.to_table(d))?;

    println!(
        "forecast {policy_id} (train_n {train_n}): modal {} (density {}), median {}, within ±2y {}, censored {}",
        opt(summary.modal_year),
        f9(summary.modal_density),
        opt(summary.median_year_from_cdf),
        f9(summary.density_within_2y),
        f9(summary.censored_fraction),
    );

    let mut meta = meta_base(cli, "forecast", &[(policies, "policies"), (traits, "traits")])?;
    meta.push(("horizon".into(), f9(horizon)));
    meta.push(("leave_one_out".into(), cli.leave_one_out.to_string()));
    meta.push(("policy".into(), policy_id.to_string()));
    meta.push(("sigma".into(), f9(sigma)));
    meta.push(("train_n".into(), train_n.to_string()));
    write_meta(cli, meta)?;
    Ok(0)
}

fn opt(y: Option<i32>) -> String {
    crate::textfmt::opt_year(y)
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    cli: &Cli,
    n: usize,
    signal: f64,
    r: Option<f64>,
    p0: Option<f64>,
    threshold: Option<u32>,
    first_year: Option<i32>,
    pulse: Option<&str>,
    noise: f64,
) -> Result<i32> {
    let defaults = SynthCorpusConfig::default();
    let config = SynthCorpusConfig {
        n,
        signal_strength: signal,
        r_range: r.map_or(defaults.r_range, |v| (v, v)),
        p0_true: p0.unwrap_or(defaults.p0_true),
        first_year_range: first_year.map_or(defaults.first_year_range, |y| (y, y)),
        threshold_range: threshold.map_or(defaults.threshold_range, |t| (t, t)),
        pulse: pulse.map(parse_pulse).transpose()?,
        noise_sigma: noise,
        seed: cli.seed,
    };
    let (corpus, truths) = synth_corpus(&config)?;

    write_out(cli, "policies.csv", &policies_to_csv(corpus.policies()))?;
    write_out(cli, "traits.txt", &traits_to_text(corpus.trait_tables()))?;
    let d = cli.format.delimiter();
    let mut gt = format!("policy{d}label{d}planted{d}r_true{d}p0_true{d}threshold\n");
    for t in &truths {
        gt.push_str(&format!(
            "{}{d}{}{d}{}{d}{}{d}{}{d}{}\n",
            t.policy_id,
            u8::from(t.label),
            u8::from(t.planted),
            f9(t.r_true),
            f9(t.p0_true),
            t.threshold_true
                .map_or("none".to_string(), |v| v.to_string()),
        ));
    }
    write_out(cli, &format!("ground_truth.{}", cli.format.extension()), &gt)?;
    println!(
        "synth: wrote {} policies to {}",
        corpus.len(),
        cli.out.display()
    );

    let mut meta = meta_base(cli, "synth", &[])?;
    meta.push(("first_year".into(), opt(first_year)));
    meta.push(("n".into(), n.to_string()));
    meta.push(("noise".into(), f9(noise)));
    meta.push(("p0".into(), f9(config.p0_true)));
    meta.push(("pulse".into(), pulse.unwrap_or("none").to_string()));
    meta.push((
        "r".into(),
        r.map_or("random".to_string(), f9),
    ));
    meta.push(("signal".into(), f9(signal)));
    meta.push((
        "threshold".into(),
        threshold.map_or("random".to_string(), |t| t.to_string()),
    ));
    write_meta(cli, meta)?;
    Ok(0)
}

fn parse_pulse(text: &str) -> Result<Pulse> {
    let (year, count) = text.split_once(':').ok_or_else(|| {
        Error::InvalidArgument(format!("pulse {text:?} must look like YEAR:COUNT"))
    })?;
    Ok(Pulse {
        year: year.parse().map_err(|_| {
            Error::InvalidArgument(format!("bad pulse year in {text:?}"))
        })?,
        count: count.parse().map_err(|_| {
            Error::InvalidArgument(format!("bad pulse count in {text:?}"))
        })?,
    })
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

fn write_out(cli: &Cli, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(&cli.out).map_err(|e| Error::io(&cli.out, e))?;
    let path = cli.out.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(path, e))
}

fn write_eval(cli: &Cli, model: &str, report: &EvalReport) -> Result<()> {
    write_out(cli, &format!("eval_{model}.txt"), &report.to_text())?;
    write_out(
        cli,
        &format!("scores_{model}.{}", cli.format.extension()),
        &report.scores_table(cli.format.delimiter()),
    )
}

/// Common metadata keys: command, format, seed, trials, and an FNV-1a
/// digest per input file. Deliberately excludes the worker count.
fn meta_base(
    cli: &Cli,
    command: &str,
    inputs: &[(&Path, &str)],
) -> Result<Vec<(String, String)>> {
    let mut meta = vec![
        ("command".to_string(), command.to_string()),
        ("filter".to_string(), cli.filter.to_string()),
        ("format".to_string(), cli.format.label().to_string()),
        ("seed".to_string(), cli.seed.to_string()),
        ("trials".to_string(), cli.trials.to_string()),
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ];
    for (path, label) in inputs {
        let bytes = std::fs::read(path).map_err(|e| Error::io(*path, e))?;
        meta.push((
            format!("input_digest_{label}"),
            format!("fnv1a:{:016x}", fnv1a64(&bytes)),
        ));
        meta.push((format!("input_path_{label}"), path.display().to_string()));
    }
    Ok(meta)
}

fn write_meta(cli: &Cli, mut meta: Vec<(String, String)>) -> Result<()> {
    meta.sort();
    let mut text = String::from("statecast-run v1\n");
    for (k, v) in meta {
        text.push_str(&format!("{k} {v}\n"));
    }
    write_out(cli, "run_meta.txt", &text)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pulse_parsing() {
        let p = parse_pulse("2005:15").unwrap();
        assert_eq!(p, Pulse { year: 2005, count: 15 });
        assert!(parse_pulse("2005").is_err());
        assert!(parse_pulse("x:y").is_err());
    }

    #[test]
    fn fnv_digest_is_stable() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"statecast"), fnv1a64(b"statecast"));
        assert_ne!(fnv1a64(b"a"), fnv1a64(b"b"));
    }

    #[test]
    fn cli_parses_subcommands() {
        use clap::Parser;
        let cli = Cli::try_parse_from([
            "statecast", "synth", "--n", "12", "--signal", "0.9", "--seed", "7",
        ])
        .unwrap();
        assert_eq!(cli.seed, 7);
        match cli.command {
            Command::Synth { n, signal, .. } => {
                assert_eq!(n, 12);
                assert!((signal - 0.9).abs() < 1e-12);
            }
            _ => panic!("wrong subcommand"),
        }
    }
}
