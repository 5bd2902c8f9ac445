//! Dissimilarity measures between two categorical series.
//!
//! Two are feature based — they compare the extracted dependence features
//! lag by lag and add the squared distance between the marginals — and one
//! is parameter based, comparing fitted parameter vectors directly. None
//! of them is normalised: each is a plain sum of squared differences, zero
//! exactly when the compared summaries coincide.

use crate::error::{Error, Result};
use crate::features::DependenceFeatures;
use crate::models::ThetaVector;

/// Which dissimilarity a test or experiment uses. The tokens `cc`, `b`,
/// and `mle` are the public names used by the command line and output
/// tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    /// Cramér + Cohen features: contribution matrices, agreement vectors,
    /// and marginals.
    Cc,
    /// Indicator-correlation features and marginals.
    B,
    /// Squared Euclidean distance between fitted parameter vectors.
    Mle,
}

impl DistanceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DistanceKind::Cc => "cc",
            DistanceKind::B => "b",
            DistanceKind::Mle => "mle",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cc" => Ok(DistanceKind::Cc),
            "b" => Ok(DistanceKind::B),
            "mle" => Ok(DistanceKind::Mle),
            other => Err(Error::InvalidConfig(format!(
                "unknown distance {other:?}; expected cc, b, or mle"
            ))),
        }
    }

    /// Stable numeric tag used when deriving per-cell random streams.
    pub fn id(&self) -> u64 {
        match self {
            DistanceKind::Cc => 0,
            DistanceKind::B => 1,
            DistanceKind::Mle => 2,
        }
    }

    /// All distances, in tag order.
    pub fn all() -> [DistanceKind; 3] {
        [DistanceKind::Cc, DistanceKind::B, DistanceKind::Mle]
    }
}

impl std::fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_comparable(f1: &DependenceFeatures, f2: &DependenceFeatures) -> Result<()> {
    if f1.lags != f2.lags {
        return Err(Error::Mismatch(format!(
            "features use different lags: {:?} vs {:?}",
            f1.lags, f2.lags
        )));
    }
    if f1.marginal.len() != f2.marginal.len() {
        return Err(Error::Mismatch(format!(
            "features cover different alphabets: {} vs {} categories",
            f1.marginal.len(),
            f2.marginal.len()
        )));
    }
    Ok(())
}

fn sq_diff_slice(a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        sum += d * d;
    }
    sum
}

/// Distance built from the Cramér contribution matrices and the Cohen
/// agreement vectors: per lag, the squared Frobenius distance between the
/// contribution matrices plus the squared distance between the agreement
/// vectors; plus the squared distance between the marginals.
pub fn dist_cc(f1: &DependenceFeatures, f2: &DependenceFeatures) -> Result<f64> {
    check_comparable(f1, f2)?;
    let r = f1.marginal.len();
    let mut total = 0.0;
    for k in 0..f1.lags.len() {
        let (m1, m2) = (&f1.cramer_matrices[k], &f2.cramer_matrices[k]);
        for i in 0..r {
            for j in 0..r {
                let d = m1[(i, j)] - m2[(i, j)];
                total += d * d;
            }
        }
        total += sq_diff_slice(&f1.kappa_vectors[k], &f2.kappa_vectors[k]);
    }
    total += sq_diff_slice(&f1.marginal, &f2.marginal);
    Ok(total)
}

/// Distance built from the indicator correlations: per lag, the squared
/// Frobenius distance between the correlation matrices; plus the squared
/// distance between the marginals.
pub fn dist_b(f1: &DependenceFeatures, f2: &DependenceFeatures) -> Result<f64> {
    check_comparable(f1, f2)?;
    let r = f1.marginal.len();
    let mut total = 0.0;
    for k in 0..f1.lags.len() {
        let (m1, m2) = (&f1.indicator_corr[k], &f2.indicator_corr[k]);
        for i in 0..r {
            for j in 0..r {
                let d = m1[(i, j)] - m2[(i, j)];
                total += d * d;
            }
        }
    }
    total += sq_diff_slice(&f1.marginal, &f2.marginal);
    Ok(total)
}

/// Squared Euclidean distance between two fitted parameter vectors of the
/// same family and shape.
pub fn dist_mle(t1: &ThetaVector, t2: &ThetaVector) -> Result<f64> {
    if t1.shape() != t2.shape() {
        return Err(Error::Mismatch(format!(
            "parameter vectors have different shapes: {:?} vs {:?}",
            t1.shape(),
            t2.shape()
        )));
    }
    Ok(sq_diff_slice(t1.values(), t2.values()))
}
