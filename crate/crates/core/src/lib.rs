//! Dissimilarity measures and bootstrap hypothesis tests for categorical
//! time series.
//!
//! The crate is organised around a small pipeline:
//!
//! * [`series`] — finite-alphabet series and their validation,
//! * [`features`] — marginal/lagged-joint estimators and the serial
//!   dependence features built from them,
//! * [`models`] — Markov chain, hidden Markov, and discrete ARMA
//!   generators together with their fitting routines,
//! * [`distances`] — the three dissimilarity measures between two series
//!   (feature based `cc` and `b`, parameter based `mle`),
//! * [`bootstrap`] — resampling schemes and the two-sample equality test,
//! * [`experiments`] — Monte Carlo rejection-rate studies over the
//!   built-in scenarios,
//! * [`cluster`] — pairwise p-value matrices, threshold clustering, and
//!   classical multidimensional scaling,
//! * [`io`] — sequence files, FASTA encoding, run configuration, and
//!   result tables.
//!
//! All randomness flows through [`rng::RandomStream`], so every public
//! operation is reproducible from a single `u64` seed.

pub mod bootstrap;
pub mod cluster;
pub mod distances;
pub mod error;
pub mod experiments;
pub mod features;
pub mod io;
pub mod models;
pub mod rng;
pub mod series;

pub use error::{Error, Result};
pub use series::{Alphabet, CategoricalSeries};
