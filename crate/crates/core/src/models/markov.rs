//! First-order Markov chains on the observed categories.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::models::{sample_categorical, ModelShape, ThetaVector};
use crate::rng::RandomStream;
use crate::series::{Alphabet, CategoricalSeries};

/// A first-order chain; `transition[(i, j)]` is the probability of moving
/// from category `i` to category `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    transition: DMatrix<f64>,
}

impl MarkovChain {
    /// Validate a row-stochastic square matrix with at least two states.
    pub fn new(transition: DMatrix<f64>) -> Result<Self> {
        let r = transition.nrows();
        if transition.ncols() != r || r < 2 {
            return Err(Error::InvalidModel(format!(
                "transition matrix must be square with r >= 2, got {}x{}",
                r,
                transition.ncols()
            )));
        }
        for i in 0..r {
            let row: Vec<f64> = (0..r).map(|j| transition[(i, j)]).collect();
            super::check_prob_vector(&row, &format!("transition row {i}"))?;
        }
        Ok(MarkovChain { transition })
    }

    pub fn num_categories(&self) -> usize {
        self.transition.nrows()
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    /// Stationary distribution via power iteration (tolerance 1e-12, at
    /// most 10_000 sweeps). `None` when the iteration does not settle,
    /// e.g. for periodic chains.
    pub fn stationary(&self) -> Option<Vec<f64>> {
        let r = self.num_categories();
        let mut pi = vec![1.0 / r as f64; r];
        for _ in 0..10_000 {
            let mut next = vec![0.0; r];
            for (i, &p) in pi.iter().enumerate() {
                if p > 0.0 {
                    for j in 0..r {
                        next[j] += p * self.transition[(i, j)];
                    }
                }
            }
            let total: f64 = next.iter().sum();
            for x in &mut next {
                *x /= total;
            }
            let delta = pi
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            pi = next;
            if delta < 1e-12 {
                return Some(pi);
            }
        }
        None
    }

    /// Simulate a series: the first value is drawn from the stationary
    /// distribution (uniform when the chain has none), later values follow
    /// the transition rows.
    pub fn simulate(&self, len: usize, stream: &RandomStream) -> Result<CategoricalSeries> {
        if len == 0 {
            return Err(Error::InvalidInput("cannot simulate an empty series".into()));
        }
        let r = self.num_categories();
        let start = self.stationary().unwrap_or_else(|| vec![1.0 / r as f64; r]);
        let mut rng = stream.rng();
        let mut values = Vec::with_capacity(len);
        let mut current = sample_categorical(&mut rng, &start);
        values.push(current);
        let rows: Vec<Vec<f64>> =
            (0..r).map(|i| (0..r).map(|j| self.transition[(i, j)]).collect()).collect();
        for _ in 1..len {
            current = sample_categorical(&mut rng, &rows[current]);
            values.push(current);
        }
        CategoricalSeries::from_indices(values, Alphabet::indexed(r)?)
    }

    /// Flatten to a parameter vector: transition rows in row-major order.
    pub fn theta(&self) -> ThetaVector {
        let r = self.num_categories();
        let mut values = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                values.push(self.transition[(i, j)]);
            }
        }
        ThetaVector::new(ModelShape::MarkovChain { r }, values)
            .expect("length matches shape by construction")
    }

    /// Rebuild from a row-major parameter vector.
    pub fn from_theta(r: usize, values: &[f64]) -> Result<Self> {
        if values.len() != r * r {
            return Err(Error::Mismatch(format!(
                "expected {} parameters for a {r}-state chain, got {}",
                r * r,
                values.len()
            )));
        }
        MarkovChain::new(DMatrix::from_row_slice(r, r, values))
    }
}

/// Fit a chain by empirical transition frequencies. Rows for categories
/// that never occur as a predecessor fall back to the uniform row.
pub fn fit_markov(series: &CategoricalSeries) -> MarkovChain {
    let r = series.num_categories();
    let x = series.indices();
    let mut counts = vec![0usize; r * r];
    let mut outgoing = vec![0usize; r];
    for t in 1..x.len() {
        counts[x[t - 1] * r + x[t]] += 1;
        outgoing[x[t - 1]] += 1;
    }
    let transition = DMatrix::from_fn(r, r, |i, j| {
        if outgoing[i] == 0 {
            1.0 / r as f64
        } else {
            counts[i * r + j] as f64 / outgoing[i] as f64
        }
    });
    MarkovChain { transition }
}
