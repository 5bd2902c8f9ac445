//! Hidden Markov models with categorical emissions, fitted by
//! expectation-maximisation (scaled forward-backward recursions).

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::models::{sample_categorical, ModelShape, ThetaVector};
use crate::rng::RandomStream;
use crate::series::{Alphabet, CategoricalSeries};

const MAX_EM_ITERATIONS: usize = 200;
const LOGLIK_TOLERANCE: f64 = 1e-8;

/// Hidden chain on `m` states emitting one of `r` categories per step.
/// `transition` is `m x m` row-stochastic, `emission` is `m x r`
/// row-stochastic.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenMarkov {
    transition: DMatrix<f64>,
    emission: DMatrix<f64>,
}

/// Result of an EM fit: the model, whether the log-likelihood improvement
/// fell below tolerance within the iteration cap, and the log-likelihood
/// trace (one entry per iteration, non-decreasing).
#[derive(Debug, Clone)]
pub struct HmmFit {
    pub model: HiddenMarkov,
    pub converged: bool,
    pub loglik: Vec<f64>,
}

impl HiddenMarkov {
    /// Validate transition (`m x m`) and emission (`m x r`) matrices.
    pub fn new(transition: DMatrix<f64>, emission: DMatrix<f64>) -> Result<Self> {
        let m = transition.nrows();
        if transition.ncols() != m || m < 1 {
            return Err(Error::InvalidModel(format!(
                "hidden transition must be square, got {}x{}",
                m,
                transition.ncols()
            )));
        }
        if emission.nrows() != m || emission.ncols() < 2 {
            return Err(Error::InvalidModel(format!(
                "emission must be {m}x r with r >= 2, got {}x{}",
                emission.nrows(),
                emission.ncols()
            )));
        }
        for i in 0..m {
            let row: Vec<f64> = (0..m).map(|j| transition[(i, j)]).collect();
            super::check_prob_vector(&row, &format!("hidden transition row {i}"))?;
            let row: Vec<f64> = (0..emission.ncols()).map(|j| emission[(i, j)]).collect();
            super::check_prob_vector(&row, &format!("emission row {i}"))?;
        }
        Ok(HiddenMarkov { transition, emission })
    }

    pub fn num_states(&self) -> usize {
        self.transition.nrows()
    }

    pub fn num_categories(&self) -> usize {
        self.emission.ncols()
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn emission(&self) -> &DMatrix<f64> {
        &self.emission
    }

    /// Stationary distribution of the hidden chain (power iteration), or
    /// `None` when it does not settle.
    pub fn hidden_stationary(&self) -> Option<Vec<f64>> {
        let m = self.num_states();
        let mut pi = vec![1.0 / m as f64; m];
        for _ in 0..10_000 {
            let mut next = vec![0.0; m];
            for (i, &p) in pi.iter().enumerate() {
                if p > 0.0 {
                    for j in 0..m {
                        next[j] += p * self.transition[(i, j)];
                    }
                }
            }
            let total: f64 = next.iter().sum();
            for x in &mut next {
                *x /= total;
            }
            let delta =
                pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
            pi = next;
            if delta < 1e-12 {
                return Some(pi);
            }
        }
        None
    }

    /// Simulate observations: the hidden chain starts from its stationary
    /// distribution (uniform fallback), each step advances the hidden
    /// state and then draws an emission.
    pub fn simulate(&self, len: usize, stream: &RandomStream) -> Result<CategoricalSeries> {
        if len == 0 {
            return Err(Error::InvalidInput("cannot simulate an empty series".into()));
        }
        let m = self.num_states();
        let r = self.num_categories();
        let start = self.hidden_stationary().unwrap_or_else(|| vec![1.0 / m as f64; m]);
        let trans_rows: Vec<Vec<f64>> =
            (0..m).map(|i| (0..m).map(|j| self.transition[(i, j)]).collect()).collect();
        let emit_rows: Vec<Vec<f64>> =
            (0..m).map(|i| (0..r).map(|j| self.emission[(i, j)]).collect()).collect();
        let mut rng = stream.rng();
        let mut state = sample_categorical(&mut rng, &start);
        let mut values = Vec::with_capacity(len);
        values.push(sample_categorical(&mut rng, &emit_rows[state]));
        for _ in 1..len {
            state = sample_categorical(&mut rng, &trans_rows[state]);
            values.push(sample_categorical(&mut rng, &emit_rows[state]));
        }
        CategoricalSeries::from_indices(values, Alphabet::indexed(r)?)
    }

    /// Flatten to a parameter vector: transition rows, then emission rows.
    pub fn theta(&self) -> ThetaVector {
        let m = self.num_states();
        let r = self.num_categories();
        let mut values = Vec::with_capacity(m * m + m * r);
        for i in 0..m {
            for j in 0..m {
                values.push(self.transition[(i, j)]);
            }
        }
        for i in 0..m {
            for j in 0..r {
                values.push(self.emission[(i, j)]);
            }
        }
        ThetaVector::new(ModelShape::HiddenMarkov { states: m, r }, values)
            .expect("length matches shape by construction")
    }

    /// Rebuild from a flat parameter vector (transition rows then emission
    /// rows).
    pub fn from_theta(states: usize, r: usize, values: &[f64]) -> Result<Self> {
        if values.len() != states * states + states * r {
            return Err(Error::Mismatch(format!(
                "expected {} parameters for {states} states over {r} categories, got {}",
                states * states + states * r,
                values.len()
            )));
        }
        let transition = DMatrix::from_row_slice(states, states, &values[..states * states]);
        let emission = DMatrix::from_row_slice(states, r, &values[states * states..]);
        HiddenMarkov::new(transition, emission)
    }

    /// Reorder hidden states by descending probability of emitting the
    /// first category (stable on ties), permuting transition rows/columns
    /// and emission rows alike. Fitted models are put in this canonical
    /// order so that independently fitted parameter vectors are
    /// comparable.
    fn canonicalise(&mut self) {
        let m = self.num_states();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| self.emission[(b, 0)].total_cmp(&self.emission[(a, 0)]));
        if order.iter().enumerate().all(|(k, &s)| k == s) {
            return;
        }
        let transition =
            DMatrix::from_fn(m, m, |i, j| self.transition[(order[i], order[j])]);
        let emission = DMatrix::from_fn(m, self.num_categories(), |i, j| {
            self.emission[(order[i], j)]
        });
        self.transition = transition;
        self.emission = emission;
    }
}

/// Fit by EM from the default initialisation: row-stochastic matrices
/// close to uniform, nudged toward the identity (to break symmetry
/// consistently) and jittered from the stream (so restarts differ).
pub fn fit_hidden_markov(
    series: &CategoricalSeries,
    states: usize,
    stream: &RandomStream,
) -> Result<HmmFit> {
    if states < 1 {
        return Err(Error::InvalidModel("need at least one hidden state".into()));
    }
    let r = series.num_categories();
    let mut rng = stream.rng();
    let mut draw = |bump: f64| -> f64 {
        use rand::Rng;
        1.0 + bump + 0.1 * rng.random::<f64>()
    };
    let mut transition = DMatrix::zeros(states, states);
    for i in 0..states {
        for j in 0..states {
            transition[(i, j)] = draw(if i == j { 0.5 } else { 0.0 });
        }
    }
    let mut emission = DMatrix::zeros(states, r);
    for i in 0..states {
        for j in 0..r {
            emission[(i, j)] = draw(if i == j { 0.5 } else { 0.0 });
        }
    }
    normalise_rows(&mut transition);
    normalise_rows(&mut emission);
    let init = HiddenMarkov { transition, emission };
    fit_hidden_markov_from(series, &init)
}

/// Fit by EM from an explicit starting model (e.g. an identity emission
/// when the states are believed to be observed directly).
pub fn fit_hidden_markov_from(series: &CategoricalSeries, init: &HiddenMarkov) -> Result<HmmFit> {
    if init.num_categories() != series.num_categories() {
        return Err(Error::Mismatch(format!(
            "initial model emits {} categories but series has {}",
            init.num_categories(),
            series.num_categories()
        )));
    }
    let x = series.indices();
    let t_len = x.len();
    let m = init.num_states();
    let r = init.num_categories();

    let mut a = init.transition.clone();
    let mut b = init.emission.clone();
    let mut pi0 = vec![1.0 / m as f64; m];

    let mut alpha = vec![vec![0.0; m]; t_len];
    let mut beta = vec![vec![0.0; m]; t_len];
    let mut scale = vec![0.0; t_len];

    let mut loglik_trace = Vec::new();
    let mut converged = false;

    for _iter in 0..MAX_EM_ITERATIONS {
        // Forward pass with per-step normalisation.
        for i in 0..m {
            alpha[0][i] = pi0[i] * b[(i, x[0])];
        }
        scale[0] = normalise(&mut alpha[0])?;
        for t in 1..t_len {
            for i in 0..m {
                let mut s = 0.0;
                for j in 0..m {
                    s += alpha[t - 1][j] * a[(j, i)];
                }
                alpha[t][i] = s * b[(i, x[t])];
            }
            scale[t] = normalise(&mut alpha[t])?;
        }
        let loglik: f64 = scale.iter().map(|c| c.ln()).sum();

        // Backward pass under the same scaling.
        for i in 0..m {
            beta[t_len - 1][i] = 1.0;
        }
        for t in (0..t_len - 1).rev() {
            for i in 0..m {
                let mut s = 0.0;
                for j in 0..m {
                    s += a[(i, j)] * b[(j, x[t + 1])] * beta[t + 1][j];
                }
                beta[t][i] = s / scale[t + 1];
            }
        }

        // Accumulate expected counts.
        let mut trans_num: DMatrix<f64> = DMatrix::zeros(m, m);
        let mut trans_den = vec![0.0; m];
        let mut emit_num: DMatrix<f64> = DMatrix::zeros(m, r);
        let mut emit_den = vec![0.0; m];
        let mut gamma0 = vec![0.0; m];
        for t in 0..t_len {
            let mut gamma: Vec<f64> = (0..m).map(|i| alpha[t][i] * beta[t][i]).collect();
            normalise(&mut gamma)?;
            if t == 0 {
                gamma0.copy_from_slice(&gamma);
            }
            for i in 0..m {
                emit_num[(i, x[t])] += gamma[i];
                emit_den[i] += gamma[i];
                if t + 1 < t_len {
                    trans_den[i] += gamma[i];
                }
            }
            if t + 1 < t_len {
                for i in 0..m {
                    let base = alpha[t][i] / scale[t + 1];
                    for j in 0..m {
                        trans_num[(i, j)] += base * a[(i, j)] * b[(j, x[t + 1])] * beta[t + 1][j];
                    }
                }
            }
        }

        // M-step; rows with no expected occupancy fall back to uniform.
        for i in 0..m {
            for j in 0..m {
                a[(i, j)] =
                    if trans_den[i] > 0.0 { trans_num[(i, j)] / trans_den[i] } else { 1.0 / m as f64 };
            }
            for j in 0..r {
                b[(i, j)] =
                    if emit_den[i] > 0.0 { emit_num[(i, j)] / emit_den[i] } else { 1.0 / r as f64 };
            }
        }
        pi0 = gamma0;

        let improved = loglik_trace.last().map_or(f64::INFINITY, |prev| loglik - prev);
        loglik_trace.push(loglik);
        if improved.abs() < LOGLIK_TOLERANCE {
            converged = true;
            break;
        }
    }

    let mut model = HiddenMarkov { transition: a, emission: b };
    model.canonicalise();
    Ok(HmmFit { model, converged, loglik: loglik_trace })
}

/// Normalise a weight vector in place, returning its former sum.
fn normalise(w: &mut [f64]) -> Result<f64> {
    let total: f64 = w.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Numerical("probability mass vanished in forward-backward".into()));
    }
    for x in w.iter_mut() {
        *x /= total;
    }
    Ok(total)
}

fn normalise_rows(m: &mut DMatrix<f64>) {
    for i in 0..m.nrows() {
        let total: f64 = (0..m.ncols()).map(|j| m[(i, j)]).sum();
        for j in 0..m.ncols() {
            m[(i, j)] /= total;
        }
    }
}
