//! Forecasting when state-level policies become national law.
//!
//! Three-part pipeline over a corpus of policy diffusion histories:
//!
//! 1. [`learn`]: from-scratch logistic regression and random forests that
//!    classify whether a spreading policy triggers a national action, plus
//!    lasso and forest regressors for the adoption threshold, evaluated with
//!    a seeded 4-fold cross-validation harness.
//! 2. [`growth`]: a logistic growth model fit by grid search over smooth
//!    bootstrap resamples of the adoption years, combined with thresholds
//!    drawn from the historical pool to produce a posterior distribution
//!    over the year of national action.
//! 3. [`report`]: plot-ready histograms, trajectory density grids, and
//!    cumulative distribution tables derived from a forecast ensemble.
//!
//! [`corpus`] defines the validated data model and file formats, and
//! [`testkit`] generates synthetic corpora with known ground truth for
//! oracle testing. The `statecast` binary wires everything into
//! reproducible end-to-end runs.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod growth;
pub mod learn;
pub mod report;
pub mod seeding;
pub mod testkit;
pub mod textfmt;

pub use error::{Error, Result};
