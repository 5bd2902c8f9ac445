//! Marginal and lagged-joint estimators for categorical series, and the
//! serial dependence features built from them.
//!
//! For a series of length `T` over `r` categories, the estimators are the
//! plug-in relative frequencies: `pi[i] = N_i / T` for the marginal and
//! `p[i][j] = N_ij(l) / (T - l)` for the lag-`l` joint, where `N_ij(l)`
//! counts time points `t` with `(x_t, x_{t-l}) = (i, j)`.
//!
//! From a `(marginal, joint)` pair three families of features are
//! derived, all bounded and all zero for independent processes:
//!
//! * Cramér-style contributions `V[i][j] = (p[i][j] - pi[i]*pi[j])^2 /
//!   (pi[i]*pi[j])` and their scalar summary `v = sqrt(sum(V)/(r-1))`,
//! * Cohen-style agreement `kappa = sum_j (p[j][j] - pi[j]^2) /
//!   (1 - sum_j pi[j]^2)` with its per-category decomposition,
//! * correlations of the category indicator variables,
//!   `phi[i][j] = (p[i][j] - pi[i]*pi[j]) /
//!   sqrt(pi[i](1-pi[i]) pi[j](1-pi[j]))` (the indicator processes are
//!   never materialised).
//!
//! Entries whose population denominator vanishes (categories never
//! observed, or marginals concentrated on one category) are defined as
//! zero so that features stay computable on resampled series; the
//! standalone kappa functions instead report the degeneracy as an error.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::series::CategoricalSeries;

/// Estimated marginal distribution over `r >= 2` categories.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalDistribution {
    pi: Vec<f64>,
}

impl MarginalDistribution {
    /// Validate and wrap a probability vector.
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        if pi.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "marginal needs at least 2 categories, got {}",
                pi.len()
            )));
        }
        let mut sum = 0.0;
        for &p in &pi {
            if !(0.0..=1.0 + 1e-12).contains(&p) {
                return Err(Error::InvalidInput(format!("probability {p} out of [0, 1]")));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("marginal sums to {sum}, expected 1")));
        }
        Ok(MarginalDistribution { pi })
    }

    /// Category probabilities in index order.
    pub fn probs(&self) -> &[f64] {
        &self.pi
    }

    /// Number of categories.
    pub fn num_categories(&self) -> usize {
        self.pi.len()
    }

    /// `sum_j pi[j]^2`; equals 1 exactly when the mass sits on a single
    /// category.
    pub fn sum_squares(&self) -> f64 {
        let mut s = 0.0;
        for &p in &self.pi {
            s += p * p;
        }
        s
    }
}

/// Estimated joint distribution of `(x_t, x_{t-lag})`: `p[(i, j)]` is the
/// probability of value `i` now and value `j` a lag ago.
#[derive(Debug, Clone, PartialEq)]
pub struct LaggedJointMatrix {
    lag: usize,
    p: DMatrix<f64>,
}

impl LaggedJointMatrix {
    /// Validate and wrap a joint probability matrix for a given lag.
    pub fn new(lag: usize, p: DMatrix<f64>) -> Result<Self> {
        if lag == 0 {
            return Err(Error::InvalidInput("lag must be positive".into()));
        }
        if p.nrows() != p.ncols() || p.nrows() < 2 {
            return Err(Error::InvalidInput(format!(
                "joint matrix must be square with r >= 2, got {}x{}",
                p.nrows(),
                p.ncols()
            )));
        }
        let mut sum = 0.0;
        for i in 0..p.nrows() {
            for j in 0..p.ncols() {
                let q = p[(i, j)];
                if !(0.0..=1.0 + 1e-12).contains(&q) {
                    return Err(Error::InvalidInput(format!(
                        "joint probability {q} out of [0, 1]"
                    )));
                }
                sum += q;
            }
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("joint sums to {sum}, expected 1")));
        }
        Ok(LaggedJointMatrix { lag, p })
    }

    /// The lag this joint was estimated at.
    pub fn lag(&self) -> usize {
        self.lag
    }

    /// Number of categories.
    pub fn num_categories(&self) -> usize {
        self.p.nrows()
    }

    /// `P(x_t = i, x_{t-lag} = j)`.
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    /// The full matrix, row index = current value, column = lagged value.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }
}

/// Everything the feature-based distances need from one series: the
/// marginal plus, per requested lag, the Cramér contribution matrix, its
/// scalar summary, the Cohen agreement vector and scalar, and the
/// indicator correlation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceFeatures {
    /// Estimated marginal probabilities.
    pub marginal: Vec<f64>,
    /// Lags the remaining fields are indexed by.
    pub lags: Vec<usize>,
    /// Cramér contribution matrix `V(l)` per lag.
    pub cramer_matrices: Vec<DMatrix<f64>>,
    /// Scalar Cramér `v(l)` per lag, clamped to `[0, 1]`.
    pub cramer_v: Vec<f64>,
    /// Per-category Cohen agreement vector per lag (zeros when the
    /// marginal is concentrated on one category).
    pub kappa_vectors: Vec<Vec<f64>>,
    /// Scalar Cohen agreement per lag (zero in the same degenerate case).
    pub cohen_kappa: Vec<f64>,
    /// Indicator correlation matrix `phi(l)` per lag, entries in `[-1, 1]`.
    pub indicator_corr: Vec<DMatrix<f64>>,
}

/// Relative category frequencies of a series.
pub fn marginal_distribution(series: &CategoricalSeries) -> MarginalDistribution {
    let r = series.num_categories();
    let t = series.len() as f64;
    let mut counts = vec![0usize; r];
    for &v in series.indices() {
        counts[v] += 1;
    }
    let pi = counts.iter().map(|&c| c as f64 / t).collect();
    MarginalDistribution { pi }
}

/// Check that lags are positive, strictly increasing, and all usable for
/// a series of length `len`.
pub fn validate_lags(lags: &[usize], len: usize) -> Result<()> {
    if lags.is_empty() {
        return Err(Error::InvalidInput("at least one lag is required".into()));
    }
    for (k, &lag) in lags.iter().enumerate() {
        if lag == 0 || lag >= len {
            return Err(Error::InvalidLag { lag, len });
        }
        if k > 0 && lags[k - 1] >= lag {
            return Err(Error::InvalidInput(format!(
                "lags must be strictly increasing, got {lags:?}"
            )));
        }
    }
    Ok(())
}

/// Relative frequencies of the pairs `(x_t, x_{t-lag})` over the `T - lag`
/// available time points.
pub fn lagged_joint(series: &CategoricalSeries, lag: usize) -> Result<LaggedJointMatrix> {
    let t = series.len();
    if lag == 0 || lag >= t {
        return Err(Error::InvalidLag { lag, len: t });
    }
    let r = series.num_categories();
    let x = series.indices();
    let mut counts = vec![0usize; r * r];
    for s in lag..t {
        counts[x[s] * r + x[s - lag]] += 1;
    }
    let pairs = (t - lag) as f64;
    let p = DMatrix::from_fn(r, r, |i, j| counts[i * r + j] as f64 / pairs);
    Ok(LaggedJointMatrix { lag, p })
}

fn check_shapes(marginal: &MarginalDistribution, joint: &LaggedJointMatrix) -> Result<usize> {
    let r = marginal.num_categories();
    if joint.num_categories() != r {
        return Err(Error::Mismatch(format!(
            "marginal has {r} categories but joint has {}",
            joint.num_categories()
        )));
    }
    Ok(r)
}

/// Squared, normalised deviations from independence:
/// `(p[i][j] - pi[i]*pi[j])^2 / (pi[i]*pi[j])`, with entries defined as 0
/// where `pi[i]*pi[j] = 0`.
pub fn cramers_v_matrix(
    marginal: &MarginalDistribution,
    joint: &LaggedJointMatrix,
) -> Result<DMatrix<f64>> {
    let r = check_shapes(marginal, joint)?;
    let pi = marginal.probs();
    let mut v = DMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let expected = pi[i] * pi[j];
            if expected > 0.0 {
                let d = joint.prob(i, j) - expected;
                v[(i, j)] = d * d / expected;
            }
        }
    }
    Ok(v)
}

/// Scalar Cramér dependence `sqrt(sum(V) / (r - 1))`, clamped to `[0, 1]`.
pub fn cramers_v(marginal: &MarginalDistribution, joint: &LaggedJointMatrix) -> Result<f64> {
    let v = cramers_v_matrix(marginal, joint)?;
    let r = v.nrows();
    let mut sum = 0.0;
    for i in 0..r {
        for j in 0..r {
            sum += v[(i, j)];
        }
    }
    Ok((sum / (r as f64 - 1.0)).sqrt().clamp(0.0, 1.0))
}

/// Per-category Cohen agreement `(p[i][i] - pi[i]^2) / (1 - sum_j pi[j]^2)`.
/// Errors when the marginal puts all mass on one category.
pub fn cohens_kappa_vector(
    marginal: &MarginalDistribution,
    joint: &LaggedJointMatrix,
) -> Result<Vec<f64>> {
    let r = check_shapes(marginal, joint)?;
    let pi = marginal.probs();
    let denom = 1.0 - marginal.sum_squares();
    if denom <= 0.0 {
        return Err(Error::DegenerateMarginal(
            "all mass on one category, agreement is undefined".into(),
        ));
    }
    Ok((0..r).map(|i| (joint.prob(i, i) - pi[i] * pi[i]) / denom).collect())
}

/// Scalar Cohen agreement `sum_j (p[j][j] - pi[j]^2) / (1 - sum_j pi[j]^2)`.
/// Errors when the marginal puts all mass on one category.
pub fn cohens_kappa(marginal: &MarginalDistribution, joint: &LaggedJointMatrix) -> Result<f64> {
    let r = check_shapes(marginal, joint)?;
    let pi = marginal.probs();
    let denom = 1.0 - marginal.sum_squares();
    if denom <= 0.0 {
        return Err(Error::DegenerateMarginal(
            "all mass on one category, agreement is undefined".into(),
        ));
    }
    let mut num = 0.0;
    for j in 0..r {
        num += joint.prob(j, j) - pi[j] * pi[j];
    }
    Ok(num / denom)
}

/// Correlations of the category indicator variables,
/// `(p[i][j] - pi[i]*pi[j]) / sqrt(pi[i](1-pi[i]) pi[j](1-pi[j]))`,
/// clamped to `[-1, 1]`, with entries defined as 0 whenever `pi[i]` or
/// `pi[j]` is 0 or 1 (a constant indicator has no correlation).
pub fn indicator_correlations(
    marginal: &MarginalDistribution,
    joint: &LaggedJointMatrix,
) -> Result<DMatrix<f64>> {
    let r = check_shapes(marginal, joint)?;
    let pi = marginal.probs();
    let mut phi = DMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let vi = pi[i] * (1.0 - pi[i]);
            let vj = pi[j] * (1.0 - pi[j]);
            if vi > 0.0 && vj > 0.0 {
                let d = joint.prob(i, j) - pi[i] * pi[j];
                phi[(i, j)] = (d / (vi * vj).sqrt()).clamp(-1.0, 1.0);
            }
        }
    }
    Ok(phi)
}

/// Compute every dependence feature of one series at the given lags.
///
/// Lags must be strictly increasing and below the series length. When the
/// observed marginal is concentrated on a single category the Cohen
/// features are set to zero (instead of erroring like the standalone
/// functions) so that bootstrap statistics remain defined on degenerate
/// resamples.
pub fn extract_features(series: &CategoricalSeries, lags: &[usize]) -> Result<DependenceFeatures> {
    validate_lags(lags, series.len())?;
    let marginal = marginal_distribution(series);
    let r = marginal.num_categories();
    let degenerate = 1.0 - marginal.sum_squares() <= 0.0;

    let mut cramer_matrices = Vec::with_capacity(lags.len());
    let mut cramer_v = Vec::with_capacity(lags.len());
    let mut kappa_vectors = Vec::with_capacity(lags.len());
    let mut cohen_kappa = Vec::with_capacity(lags.len());
    let mut indicator_corr = Vec::with_capacity(lags.len());

    for &lag in lags {
        let joint = lagged_joint(series, lag)?;
        cramer_matrices.push(cramers_v_matrix(&marginal, &joint)?);
        cramer_v.push(cramers_v(&marginal, &joint)?);
        if degenerate {
            kappa_vectors.push(vec![0.0; r]);
            cohen_kappa.push(0.0);
        } else {
            kappa_vectors.push(cohens_kappa_vector(&marginal, &joint)?);
            cohen_kappa.push(cohens_kappa(&marginal, &joint)?);
        }
        indicator_corr.push(indicator_correlations(&marginal, &joint)?);
    }

    Ok(DependenceFeatures {
        marginal: marginal.probs().to_vec(),
        lags: lags.to_vec(),
        cramer_matrices,
        cramer_v,
        kappa_vectors,
        cohen_kappa,
        indicator_corr,
    })
}
