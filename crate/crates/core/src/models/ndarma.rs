//! Discrete ARMA mixtures: each value either copies a lagged value of the
//! series or a (possibly lagged) fresh draw from the marginal, with the
//! choice made by a categorical selector.
//!
//! The process with AR order `p`, MA order `q`, marginal `pi`, and mixing
//! weights `(phi_1..phi_p, psi_0..psi_q)` sets
//! `X_t = X_{t-i}` with probability `phi_i` and `X_t = e_{t-j}` with
//! probability `psi_j`, where `e_t` are iid draws from `pi`. Its marginal
//! is `pi` at every step and its serial agreement obeys the Yule-Walker
//! style recursion `kappa(l) = sum_i phi_i * kappa(l - i)`, which is what
//! the moment fit inverts.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::features::{cohens_kappa, lagged_joint, marginal_distribution};
use crate::models::{sample_categorical, ModelShape, ThetaVector};
use crate::rng::RandomStream;
use crate::series::{Alphabet, CategoricalSeries};

/// A discrete ARMA mixture model.
#[derive(Debug, Clone, PartialEq)]
pub struct NdarmaModel {
    pi: Vec<f64>,
    mixing: Vec<f64>,
    ar: usize,
    ma: usize,
}

/// Result of the moment fit: the model plus a flag marking that the
/// moment system was unusable (singular, non-finite, or a degenerate
/// marginal) and the independence fallback `(phi = 0, psi_0 = 1)` was
/// returned instead.
#[derive(Debug, Clone)]
pub struct NdarmaFit {
    pub model: NdarmaModel,
    pub fallback: bool,
}

impl NdarmaModel {
    /// Validate marginal (`r >= 2` probabilities) and mixing weights
    /// (`ar + ma + 1` probabilities: AR weights, then MA weights).
    pub fn new(pi: Vec<f64>, mixing: Vec<f64>, ar: usize, ma: usize) -> Result<Self> {
        if pi.len() < 2 {
            return Err(Error::InvalidModel(format!(
                "marginal needs at least 2 categories, got {}",
                pi.len()
            )));
        }
        super::check_prob_vector(&pi, "marginal")?;
        if mixing.len() != ar + ma + 1 {
            return Err(Error::InvalidModel(format!(
                "mixing needs ar + ma + 1 = {} weights, got {}",
                ar + ma + 1,
                mixing.len()
            )));
        }
        super::check_prob_vector(&mixing, "mixing weights")?;
        Ok(NdarmaModel { pi, mixing, ar, ma })
    }

    pub fn num_categories(&self) -> usize {
        self.pi.len()
    }

    pub fn ar_order(&self) -> usize {
        self.ar
    }

    pub fn ma_order(&self) -> usize {
        self.ma
    }

    /// The stationary marginal.
    pub fn marginal(&self) -> &[f64] {
        &self.pi
    }

    /// Mixing weights `(phi_1..phi_ar, psi_0..psi_ma)`.
    pub fn mixing(&self) -> &[f64] {
        &self.mixing
    }

    /// Simulate a series. Start-up uses iid draws from the marginal for
    /// the `ar` pre-sample values and `ma` pre-sample innovations; then,
    /// per step, one innovation and one selector are drawn (in that
    /// order), so paths are reproducible from the stream alone.
    pub fn simulate(&self, len: usize, stream: &RandomStream) -> Result<CategoricalSeries> {
        if len == 0 {
            return Err(Error::InvalidInput("cannot simulate an empty series".into()));
        }
        let mut rng = stream.rng();
        let mut x = Vec::with_capacity(self.ar + len);
        for _ in 0..self.ar {
            x.push(sample_categorical(&mut rng, &self.pi));
        }
        let mut eps = Vec::with_capacity(self.ma + len);
        for _ in 0..self.ma {
            eps.push(sample_categorical(&mut rng, &self.pi));
        }
        for t in 0..len {
            eps.push(sample_categorical(&mut rng, &self.pi));
            let k = sample_categorical(&mut rng, &self.mixing);
            let value = if k < self.ar {
                x[self.ar + t - (k + 1)]
            } else {
                eps[self.ma + t - (k - self.ar)]
            };
            x.push(value);
        }
        CategoricalSeries::from_indices(
            x.split_off(self.ar),
            Alphabet::indexed(self.num_categories())?,
        )
    }

    /// Flatten to a parameter vector: marginal, then mixing weights.
    pub fn theta(&self) -> ThetaVector {
        let mut values = self.pi.clone();
        values.extend_from_slice(&self.mixing);
        ThetaVector::new(
            ModelShape::Ndarma { r: self.pi.len(), ar: self.ar, ma: self.ma },
            values,
        )
        .expect("length matches shape by construction")
    }

    /// Rebuild from a flat parameter vector (marginal then mixing).
    pub fn from_theta(r: usize, ar: usize, ma: usize, values: &[f64]) -> Result<Self> {
        if values.len() != r + ar + ma + 1 {
            return Err(Error::Mismatch(format!(
                "expected {} parameters, got {}",
                r + ar + ma + 1,
                values.len()
            )));
        }
        NdarmaModel::new(values[..r].to_vec(), values[r..].to_vec(), ar, ma)
    }
}

/// Euclidean projection of a vector onto the probability simplex
/// (sort-and-threshold).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut prefix = 0.0;
    let mut shift = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        prefix += u;
        let candidate = (1.0 - prefix) / (j + 1) as f64;
        if u + candidate > 0.0 {
            shift = candidate;
        }
    }
    v.iter().map(|&x| (x + shift).max(0.0)).collect::<Vec<_>>()
}

/// Moment fit of an AR-only mixture (`ma = 0`): the marginal is the
/// observed one; the AR weights solve the agreement recursion
/// `kappa(l) = sum_i phi_i kappa(l - i)` at lags `1..=ar`, and the full
/// weight vector `(phi, 1 - sum phi)` is projected onto the simplex.
///
/// When the moment system is singular or the series is too degenerate to
/// carry agreement information, the independence fallback
/// `(phi = 0, psi_0 = 1)` is returned with `fallback = true`.
pub fn fit_ndarma(series: &CategoricalSeries, ar: usize) -> Result<NdarmaFit> {
    let marginal = marginal_distribution(series);
    let pi = marginal.probs().to_vec();
    let independence = |pi: Vec<f64>| -> Result<NdarmaFit> {
        let mut mixing = vec![0.0; ar];
        mixing.push(1.0);
        Ok(NdarmaFit { model: NdarmaModel::new(pi, mixing, ar, 0)?, fallback: true })
    };

    if ar == 0 {
        return Ok(NdarmaFit { model: NdarmaModel::new(pi, vec![1.0], 0, 0)?, fallback: false });
    }
    if 1.0 - marginal.sum_squares() <= 0.0 {
        return independence(pi);
    }

    let mut kappa = vec![1.0; ar + 1];
    for lag in 1..=ar {
        let joint = lagged_joint(series, lag)?;
        kappa[lag] = cohens_kappa(&marginal, &joint)?;
    }

    let system = DMatrix::from_fn(ar, ar, |row, col| {
        let l = row + 1;
        let i = col + 1;
        kappa[l.abs_diff(i)]
    });
    let rhs = DVector::from_fn(ar, |row, _| kappa[row + 1]);
    let phi = match system.lu().solve(&rhs) {
        Some(phi) if phi.iter().all(|x| x.is_finite()) => phi,
        _ => return independence(pi),
    };

    let mut raw: Vec<f64> = phi.iter().copied().collect();
    raw.push(1.0 - phi.iter().sum::<f64>());
    let mixing = project_to_simplex(&raw);
    Ok(NdarmaFit { model: NdarmaModel::new(pi, mixing, ar, 0)?, fallback: false })
}
