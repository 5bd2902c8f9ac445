//! Clustering a corpus of series by pairwise test results.
//!
//! The pipeline computes a symmetric matrix of pairwise bootstrap
//! p-values, then merges groups agglomeratively as long as *every* pair
//! across two groups has p-value above the chosen level (complete linkage
//! on the minimum p-value). The result is a partition in which no
//! within-cluster pair is individually rejected at that level, and any
//! two distinct clusters contain at least one rejected pair.
//!
//! For visualisation, classical multidimensional scaling embeds a
//! dissimilarity matrix into few Euclidean dimensions via the
//! double-centred Gram matrix and its leading eigenpairs.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::bootstrap::{run_test, TestConfig};
use crate::distances::{dist_b, dist_cc, dist_mle, DistanceKind};
use crate::error::{Error, Result};
use crate::features::extract_features;
use crate::models::{self, ModelFamily};
use crate::rng::RandomStream;
use crate::series::CategoricalSeries;

/// Symmetric matrix of pairwise p-values with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueMatrix {
    values: DMatrix<f64>,
}

impl PValueMatrix {
    /// Validate symmetry, the unit diagonal, and the `(0, 1]` range.
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        let n = values.nrows();
        if values.ncols() != n || n == 0 {
            return Err(Error::InvalidInput(format!(
                "p-value matrix must be square and nonempty, got {}x{}",
                n,
                values.ncols()
            )));
        }
        for i in 0..n {
            if (values[(i, i)] - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "diagonal entry ({i},{i}) = {} is not 1",
                    values[(i, i)]
                )));
            }
            for j in 0..n {
                let p = values[(i, j)];
                if !(p > 0.0 && p <= 1.0) {
                    return Err(Error::InvalidInput(format!(
                        "p-value ({i},{j}) = {p} out of (0, 1]"
                    )));
                }
                if (p - values[(j, i)]).abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "matrix is asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(PValueMatrix { values })
    }

    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.values
    }
}

fn check_corpus(corpus: &[CategoricalSeries]) -> Result<()> {
    if corpus.is_empty() {
        return Err(Error::InvalidInput("corpus is empty".into()));
    }
    for (i, s) in corpus.iter().enumerate().skip(1) {
        if s.alphabet() != corpus[0].alphabet() {
            return Err(Error::Mismatch(format!(
                "series {i} uses a different alphabet than series 0"
            )));
        }
    }
    Ok(())
}

/// Test every pair of series and collect the p-values. The pair `(i, j)`
/// (with `i < j`) uses the stream `master / i / j`, so single pairs can be
/// reproduced in isolation and the computation order is irrelevant.
pub fn pvalue_matrix(
    corpus: &[CategoricalSeries],
    cfg: &TestConfig,
    master: &RandomStream,
) -> Result<PValueMatrix> {
    check_corpus(corpus)?;
    let n = corpus.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let pvalues: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let stream = master.child(i as u64).child(j as u64);
            Ok(run_test(&corpus[i], &corpus[j], cfg, &stream)?.pvalue)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut values = DMatrix::from_element(n, n, 1.0);
    for (&(i, j), &p) in pairs.iter().zip(&pvalues) {
        values[(i, j)] = p;
        values[(j, i)] = p;
    }
    PValueMatrix::new(values)
}

/// Pairwise dissimilarities of a corpus under one metric. Feature metrics
/// extract each series' features once; the parameter metric fits each
/// series once (series `i` using stream `master / i`) and compares the
/// fitted vectors.
pub fn distance_matrix(
    corpus: &[CategoricalSeries],
    metric: DistanceKind,
    lags: &[usize],
    family: &ModelFamily,
    master: &RandomStream,
) -> Result<DMatrix<f64>> {
    check_corpus(corpus)?;
    let n = corpus.len();
    let mut d = DMatrix::zeros(n, n);
    match metric {
        DistanceKind::Cc | DistanceKind::B => {
            let feats = corpus
                .iter()
                .map(|s| extract_features(s, lags))
                .collect::<Result<Vec<_>>>()?;
            for i in 0..n {
                for j in i + 1..n {
                    let v = match metric {
                        DistanceKind::Cc => dist_cc(&feats[i], &feats[j])?,
                        _ => dist_b(&feats[i], &feats[j])?,
                    };
                    d[(i, j)] = v;
                    d[(j, i)] = v;
                }
            }
        }
        DistanceKind::Mle => {
            let thetas = corpus
                .iter()
                .enumerate()
                .map(|(i, s)| models::fit(s, family, &master.child(i as u64)))
                .collect::<Result<Vec<_>>>()?;
            for i in 0..n {
                for j in i + 1..n {
                    let v = dist_mle(&thetas[i], &thetas[j])?;
                    d[(i, j)] = v;
                    d[(j, i)] = v;
                }
            }
        }
    }
    Ok(d)
}

/// A flat cluster assignment: `assignments[i]` is the cluster index of
/// series `i`; indices are dense, `0..num_clusters`, numbered by each
/// cluster's smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub assignments: Vec<usize>,
    pub num_clusters: usize,
}

/// Merge clusters while some pair of clusters has *all* cross p-values
/// above `alpha` (equivalently: while the minimum cross p-value exceeds
/// `alpha`), most similar pair first. Every within-cluster pair of the
/// result has p-value above `alpha`, and any two distinct clusters have
/// at least one cross pair at or below `alpha`.
pub fn pvalue_clustering(pvalues: &PValueMatrix, alpha: f64) -> Result<Partition> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let n = pvalues.len();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();

    let linkage = |a: &[usize], b: &[usize]| -> f64 {
        let mut min = f64::INFINITY;
        for &i in a {
            for &j in b {
                min = min.min(pvalues.get(i, j));
            }
        }
        min
    };

    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let sim = linkage(&clusters[a], &clusters[b]);
                if sim > alpha && best.map_or(true, |(_, _, s)| sim > s) {
                    best = Some((a, b, sim));
                }
            }
        }
        match best {
            Some((a, b, _)) => {
                let merged = clusters.remove(b);
                clusters[a].extend(merged);
            }
            None => break,
        }
    }

    for c in &mut clusters {
        c.sort_unstable();
    }
    clusters.sort_by_key(|c| c[0]);
    let mut assignments = vec![0usize; n];
    for (label, members) in clusters.iter().enumerate() {
        for &i in members {
            assignments[i] = label;
        }
    }
    Ok(Partition { assignments, num_clusters: clusters.len() })
}

/// Classical multidimensional scaling of a dissimilarity matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MdsResult {
    /// One row of coordinates per object, `dim` columns.
    pub coords: DMatrix<f64>,
    /// True when fewer than `dim` positive eigenvalues were available and
    /// the remaining axes were padded with zeros.
    pub padded: bool,
}

/// Embed `n` objects into `dim` Euclidean dimensions from their pairwise
/// dissimilarities: double-centre the squared dissimilarities and scale
/// the leading eigenvectors by the square roots of their (positive)
/// eigenvalues. Axes are ordered by decreasing eigenvalue; each
/// eigenvector's sign is fixed by making its largest-magnitude component
/// positive.
pub fn classical_mds(d: &DMatrix<f64>, dim: usize) -> Result<MdsResult> {
    let n = d.nrows();
    if d.ncols() != n || n == 0 {
        return Err(Error::InvalidInput(format!(
            "dissimilarity matrix must be square and nonempty, got {}x{}",
            n,
            d.ncols()
        )));
    }
    if dim == 0 || dim > n {
        return Err(Error::InvalidConfig(format!("dimension {dim} must lie in 1..={n}")));
    }
    for i in 0..n {
        if d[(i, i)].abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("diagonal entry ({i},{i}) is not 0")));
        }
        for j in 0..n {
            if d[(i, j)] < 0.0 {
                return Err(Error::InvalidInput(format!("negative dissimilarity at ({i},{j})")));
            }
            if (d[(i, j)] - d[(j, i)]).abs() > 1e-9 {
                return Err(Error::InvalidInput(format!("matrix is asymmetric at ({i},{j})")));
            }
        }
    }

    // Double-centred Gram matrix: b = -1/2 * J d.^2 J with J = I - 1/n.
    let sq = DMatrix::from_fn(n, n, |i, j| d[(i, j)] * d[(i, j)]);
    let row_mean: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let grand = row_mean.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| {
        -0.5 * (sq[(i, j)] - row_mean[i] - row_mean[j] + grand)
    });
    // Enforce exact symmetry before the eigendecomposition.
    let b = DMatrix::from_fn(n, n, |i, j| 0.5 * (b[(i, j)] + b[(j, i)]));

    let eigen = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| eigen.eigenvalues[c].total_cmp(&eigen.eigenvalues[a]));

    let scale = eigen.eigenvalues[order[0]].abs().max(1.0);
    let tol = 1e-12 * scale;
    let mut coords = DMatrix::zeros(n, dim);
    let mut padded = false;
    for k in 0..dim {
        let lambda = eigen.eigenvalues[order[k]];
        if lambda > tol {
            let col = eigen.eigenvectors.column(order[k]);
            // Deterministic sign: largest-magnitude component positive.
            let mut pivot = 0;
            for i in 1..n {
                if col[i].abs() > col[pivot].abs() {
                    pivot = i;
                }
            }
            let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
            let factor = lambda.sqrt() * sign;
            for i in 0..n {
                coords[(i, k)] = factor * col[i];
            }
        } else {
            padded = true;
        }
    }
    Ok(MdsResult { coords, padded })
}
