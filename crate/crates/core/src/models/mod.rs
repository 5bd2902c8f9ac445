//! Generating models for categorical series: first-order Markov chains,
//! hidden Markov models, and discrete ARMA mixtures.
//!
//! Every model can be simulated from a [`RandomStream`] and fitted to an
//! observed series; fitted parameters travel as flat [`ThetaVector`]s so
//! they can be averaged (for the parametric bootstrap) and compared (for
//! the parameter-based distance).

mod hidden_markov;
mod markov;
mod ndarma;

pub use hidden_markov::{fit_hidden_markov, fit_hidden_markov_from, HiddenMarkov, HmmFit};
pub use markov::{fit_markov, MarkovChain};
pub use ndarma::{fit_ndarma, project_to_simplex, NdarmaFit, NdarmaModel};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::series::CategoricalSeries;

/// A fully specified generating model.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    MarkovChain(MarkovChain),
    HiddenMarkov(HiddenMarkov),
    Ndarma(NdarmaModel),
}

impl ModelSpec {
    /// Number of observable categories the model emits.
    pub fn num_categories(&self) -> usize {
        match self {
            ModelSpec::MarkovChain(m) => m.num_categories(),
            ModelSpec::HiddenMarkov(m) => m.num_categories(),
            ModelSpec::Ndarma(m) => m.num_categories(),
        }
    }

    /// The family/shape tag of this model's parameter vector.
    pub fn shape(&self) -> ModelShape {
        match self {
            ModelSpec::MarkovChain(m) => ModelShape::MarkovChain { r: m.num_categories() },
            ModelSpec::HiddenMarkov(m) => {
                ModelShape::HiddenMarkov { states: m.num_states(), r: m.num_categories() }
            }
            ModelSpec::Ndarma(m) => {
                ModelShape::Ndarma { r: m.num_categories(), ar: m.ar_order(), ma: m.ma_order() }
            }
        }
    }

    /// Flatten the model into its parameter vector.
    pub fn theta(&self) -> ThetaVector {
        match self {
            ModelSpec::MarkovChain(m) => m.theta(),
            ModelSpec::HiddenMarkov(m) => m.theta(),
            ModelSpec::Ndarma(m) => m.theta(),
        }
    }
}

/// Which family to fit to a series, with the structural hyperparameters
/// that are not estimated from data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFamily {
    /// First-order Markov chain on the observed categories.
    MarkovChain,
    /// Hidden Markov model with the given number of hidden states.
    HiddenMarkov { states: usize },
    /// Discrete AR mixture of the given autoregressive order (no moving-
    /// average part; its mixture weights are not identifiable from the
    /// moment equations used here).
    Ndarma { ar: usize },
}

/// Shape metadata for a flat parameter vector; two vectors are comparable
/// or averageable only when their shapes agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelShape {
    MarkovChain { r: usize },
    HiddenMarkov { states: usize, r: usize },
    Ndarma { r: usize, ar: usize, ma: usize },
}

impl ModelShape {
    /// Expected number of parameters.
    pub fn len(&self) -> usize {
        match *self {
            ModelShape::MarkovChain { r } => r * r,
            ModelShape::HiddenMarkov { states, r } => states * states + states * r,
            ModelShape::Ndarma { r, ar, ma } => r + ar + ma + 1,
        }
    }

    /// True only for impossible shapes; present for idiom.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A fitted (or averaged) parameter vector with its shape tag.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector {
    shape: ModelShape,
    values: Vec<f64>,
}

impl ThetaVector {
    /// Wrap a flat vector, checking its length against the shape.
    pub fn new(shape: ModelShape, values: Vec<f64>) -> Result<Self> {
        if values.len() != shape.len() {
            return Err(Error::Mismatch(format!(
                "shape {shape:?} expects {} parameters, got {}",
                shape.len(),
                values.len()
            )));
        }
        Ok(ThetaVector { shape, values })
    }

    pub fn shape(&self) -> ModelShape {
        self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Entrywise mean of two parameter vectors of identical shape. The result
/// stays valid because every parameter block lives in a convex set.
pub fn average_theta(a: &ThetaVector, b: &ThetaVector) -> Result<ThetaVector> {
    if a.shape != b.shape {
        return Err(Error::Mismatch(format!(
            "cannot average parameter vectors of shapes {:?} and {:?}",
            a.shape, b.shape
        )));
    }
    let values = a.values.iter().zip(&b.values).map(|(x, y)| 0.5 * (x + y)).collect();
    Ok(ThetaVector { shape: a.shape, values })
}

/// Rebuild a simulatable model from a flat parameter vector, validating
/// stochasticity of every block.
pub fn spec_from_theta(theta: &ThetaVector) -> Result<ModelSpec> {
    match theta.shape {
        ModelShape::MarkovChain { r } => {
            Ok(ModelSpec::MarkovChain(MarkovChain::from_theta(r, theta.values())?))
        }
        ModelShape::HiddenMarkov { states, r } => {
            Ok(ModelSpec::HiddenMarkov(HiddenMarkov::from_theta(states, r, theta.values())?))
        }
        ModelShape::Ndarma { r, ar, ma } => {
            Ok(ModelSpec::Ndarma(NdarmaModel::from_theta(r, ar, ma, theta.values())?))
        }
    }
}

/// Simulate a series of the given length from a model.
pub fn simulate(spec: &ModelSpec, len: usize, stream: &RandomStream) -> Result<CategoricalSeries> {
    match spec {
        ModelSpec::MarkovChain(m) => m.simulate(len, stream),
        ModelSpec::HiddenMarkov(m) => m.simulate(len, stream),
        ModelSpec::Ndarma(m) => m.simulate(len, stream),
    }
}

/// Fit the requested family to a series and return the flat parameter
/// vector. Only the hidden Markov fit consumes randomness (for its EM
/// initialisation); the stream is ignored by the other families.
pub fn fit(
    series: &CategoricalSeries,
    family: &ModelFamily,
    stream: &RandomStream,
) -> Result<ThetaVector> {
    match *family {
        ModelFamily::MarkovChain => Ok(fit_markov(series).theta()),
        ModelFamily::HiddenMarkov { states } => {
            Ok(fit_hidden_markov(series, states, stream)?.model.theta())
        }
        ModelFamily::Ndarma { ar } => Ok(fit_ndarma(series, ar)?.model.theta()),
    }
}

/// Draw an index from a probability vector. Zero-probability categories
/// are never returned; tiny floating-point shortfall in the total mass is
/// absorbed by the last positive category.
pub(crate) fn sample_categorical<R: Rng + ?Sized>(rng: &mut R, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = i;
            if u < acc {
                return i;
            }
        }
    }
    last_positive
}

/// Validate that a slice is a probability vector (within tolerance).
pub(crate) fn check_prob_vector(v: &[f64], what: &str) -> Result<()> {
    let mut sum = 0.0;
    for &p in v {
        if !(0.0..=1.0 + 1e-9).contains(&p) {
            return Err(Error::InvalidModel(format!("{what}: probability {p} out of [0, 1]")));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidModel(format!("{what}: sums to {sum}, expected 1")));
    }
    Ok(())
}
