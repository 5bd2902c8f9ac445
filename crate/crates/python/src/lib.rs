//! Python bindings for the categorical-time-series toolkit.
//!
//! Exposes the core pipeline: building series, simulating the benchmark
//! scenarios, pairwise dissimilarities, bootstrap two-sample tests, and
//! the p-value clustering / scaling helpers.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use ctsboot::bootstrap::{self, Method, TestConfig};
use ctsboot::cluster;
use ctsboot::distances::{dist_b, dist_cc, dist_mle, DistanceKind};
use ctsboot::experiments::scenario_model;
use ctsboot::features::extract_features;
use ctsboot::io;
use ctsboot::models::{self, ModelFamily};
use ctsboot::rng::RandomStream;
use ctsboot::{Alphabet, CategoricalSeries, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn family_from(model: &str, states: usize, order: usize) -> PyResult<ModelFamily> {
    match model {
        "mc" | "markov" => Ok(ModelFamily::MarkovChain),
        "hmm" | "hidden-markov" => Ok(ModelFamily::HiddenMarkov { states }),
        "ndarma" => Ok(ModelFamily::Ndarma { ar: order }),
        other => Err(PyValueError::new_err(format!(
            "unknown model family {other:?} (expected mc, hmm, or ndarma)"
        ))),
    }
}

/// A categorical time series over a fixed alphabet.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Series {
    inner: CategoricalSeries,
}

#[pymethods]
impl Series {
    /// Build a series from category labels. Without an explicit alphabet
    /// one is inferred: integer labels span `1..=max`, other labels are
    /// taken in sorted order.
    #[new]
    #[pyo3(signature = (tokens, alphabet=None))]
    fn new(tokens: Vec<String>, alphabet: Option<Vec<String>>) -> PyResult<Self> {
        let inner = match alphabet {
            Some(labels) => {
                let alphabet = Alphabet::new(labels).map_err(to_py)?;
                let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
                CategoricalSeries::from_labels(&refs, alphabet).map_err(to_py)?
            }
            None => {
                let mut parsed =
                    io::parse_sequences(&tokens.join(",")).map_err(to_py)?;
                parsed.pop().ok_or_else(|| PyValueError::new_err("empty series"))?
            }
        };
        Ok(Series { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// The series as its labels.
    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().into_iter().map(str::to_string).collect()
    }

    /// The series as 0-based category indices.
    #[getter]
    fn indices(&self) -> Vec<usize> {
        self.inner.indices().to_vec()
    }

    /// The alphabet's labels.
    #[getter]
    fn alphabet(&self) -> Vec<String> {
        self.inner.alphabet().labels().to_vec()
    }

    fn __repr__(&self) -> String {
        format!(
            "Series(len={}, alphabet={:?})",
            self.inner.len(),
            self.inner.alphabet().labels()
        )
    }
}

/// The outcome of one bootstrap two-sample test.
#[pyclass(frozen, get_all)]
pub struct TestOutcome {
    observed: f64,
    critical: f64,
    pvalue: f64,
    reject: bool,
    replicates: usize,
    alpha: f64,
    block_size: Option<usize>,
    cont_prob: Option<f64>,
}

#[pymethods]
impl TestOutcome {
    fn __repr__(&self) -> String {
        format!(
            "TestOutcome(observed={}, critical={}, pvalue={}, reject={})",
            self.observed, self.critical, self.pvalue, self.reject
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn build_config(
    metric: &str,
    method: &str,
    replicates: usize,
    alpha: f64,
    lags: Vec<usize>,
    block_size: Option<usize>,
    cont_prob: Option<f64>,
    model: &str,
    states: usize,
    order: usize,
) -> PyResult<TestConfig> {
    Ok(TestConfig {
        metric: DistanceKind::parse(metric).map_err(to_py)?,
        method: Method::parse(method).map_err(to_py)?,
        replicates,
        alpha,
        lags,
        block_size,
        cont_prob,
        family: family_from(model, states, order)?,
    })
}

/// Simulate one series from a benchmark scenario.
#[pyfunction]
#[pyo3(signature = (scenario, length, delta=0.0, seed=0))]
fn simulate_scenario(scenario: u8, length: usize, delta: f64, seed: u64) -> PyResult<Series> {
    let stream = RandomStream::new(seed);
    let model = scenario_model(scenario, delta, &stream.child(0)).map_err(to_py)?;
    let inner = models::simulate(&model, length, &stream.child(1)).map_err(to_py)?;
    Ok(Series { inner })
}

/// Dissimilarity between two series under one metric.
#[pyfunction]
#[pyo3(signature = (x, y, metric="cc", lags=vec![1], model="mc", states=2, order=1, seed=0))]
#[allow(clippy::too_many_arguments)]
fn distance(
    x: PyRef<'_, Series>,
    y: PyRef<'_, Series>,
    metric: &str,
    lags: Vec<usize>,
    model: &str,
    states: usize,
    order: usize,
    seed: u64,
) -> PyResult<f64> {
    let kind = DistanceKind::parse(metric).map_err(to_py)?;
    match kind {
        DistanceKind::Cc | DistanceKind::B => {
            let fx = extract_features(&x.inner, &lags).map_err(to_py)?;
            let fy = extract_features(&y.inner, &lags).map_err(to_py)?;
            match kind {
                DistanceKind::Cc => dist_cc(&fx, &fy).map_err(to_py),
                _ => dist_b(&fx, &fy).map_err(to_py),
            }
        }
        DistanceKind::Mle => {
            let family = family_from(model, states, order)?;
            let stream = RandomStream::new(seed);
            let tx = models::fit(&x.inner, &family, &stream.child(0)).map_err(to_py)?;
            let ty = models::fit(&y.inner, &family, &stream.child(1)).map_err(to_py)?;
            dist_mle(&tx, &ty).map_err(to_py)
        }
    }
}

/// Bootstrap test of equal generating processes.
#[pyfunction]
#[pyo3(signature = (x, y, metric="cc", method="mbb", replicates=250, alpha=0.05,
                    lags=vec![1], block_size=None, cont_prob=None, model="mc",
                    states=2, order=1, seed=0))]
#[allow(clippy::too_many_arguments)]
fn run_test(
    x: PyRef<'_, Series>,
    y: PyRef<'_, Series>,
    metric: &str,
    method: &str,
    replicates: usize,
    alpha: f64,
    lags: Vec<usize>,
    block_size: Option<usize>,
    cont_prob: Option<f64>,
    model: &str,
    states: usize,
    order: usize,
    seed: u64,
) -> PyResult<TestOutcome> {
    let cfg = build_config(
        metric, method, replicates, alpha, lags, block_size, cont_prob, model, states, order,
    )?;
    let result =
        bootstrap::run_test(&x.inner, &y.inner, &cfg, &RandomStream::new(seed)).map_err(to_py)?;
    Ok(TestOutcome {
        observed: result.observed,
        critical: result.critical,
        pvalue: result.pvalue,
        reject: result.reject,
        replicates: result.replicates.len(),
        alpha: result.alpha,
        block_size: result.block_size,
        cont_prob: result.cont_prob,
    })
}

/// Pairwise bootstrap p-values of a corpus.
#[pyfunction]
#[pyo3(signature = (corpus, metric="cc", method="mbb", replicates=250, alpha=0.05,
                    lags=vec![1], block_size=None, cont_prob=None, model="mc",
                    states=2, order=1, seed=0))]
#[allow(clippy::too_many_arguments)]
fn pvalue_matrix(
    corpus: Vec<PyRef<'_, Series>>,
    metric: &str,
    method: &str,
    replicates: usize,
    alpha: f64,
    lags: Vec<usize>,
    block_size: Option<usize>,
    cont_prob: Option<f64>,
    model: &str,
    states: usize,
    order: usize,
    seed: u64,
) -> PyResult<Vec<Vec<f64>>> {
    let cfg = build_config(
        metric, method, replicates, alpha, lags, block_size, cont_prob, model, states, order,
    )?;
    let series: Vec<CategoricalSeries> = corpus.iter().map(|s| s.inner.clone()).collect();
    let m = cluster::pvalue_matrix(&series, &cfg, &RandomStream::new(seed)).map_err(to_py)?;
    let n = m.len();
    Ok((0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect())
}

/// Threshold clustering of a p-value matrix; returns the cluster index of
/// each series.
#[pyfunction]
#[pyo3(signature = (pvalues, alpha=0.05))]
fn pvalue_clustering(pvalues: Vec<Vec<f64>>, alpha: f64) -> PyResult<Vec<usize>> {
    let m = rows_to_matrix(&pvalues)?;
    let matrix = cluster::PValueMatrix::new(m).map_err(to_py)?;
    let partition = cluster::pvalue_clustering(&matrix, alpha).map_err(to_py)?;
    Ok(partition.assignments)
}

/// Classical multidimensional scaling; returns (coordinates, padded).
#[pyfunction]
#[pyo3(signature = (distances, dim=2))]
fn classical_mds(distances: Vec<Vec<f64>>, dim: usize) -> PyResult<(Vec<Vec<f64>>, bool)> {
    let d = rows_to_matrix(&distances)?;
    let out = cluster::classical_mds(&d, dim).map_err(to_py)?;
    let coords = (0..out.coords.nrows())
        .map(|i| (0..out.coords.ncols()).map(|k| out.coords[(i, k)]).collect())
        .collect();
    Ok((coords, out.padded))
}

/// Encode FASTA text with a residue-class mapping (default: 3-class
/// hydrophobicity); returns (name, series) pairs.
#[pyfunction]
#[pyo3(signature = (text, mapping=None))]
fn encode_fasta(text: &str, mapping: Option<&str>) -> PyResult<Vec<(String, Series)>> {
    let classes = match mapping {
        Some(table) => io::ResidueClasses::parse(table).map_err(to_py)?,
        None => io::ResidueClasses::default(),
    };
    let encoded = io::encode_fasta(text, &classes).map_err(to_py)?;
    Ok(encoded.into_iter().map(|(name, inner)| (name, Series { inner })).collect())
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> PyResult<nalgebra::DMatrix<f64>> {
    if rows.is_empty() {
        return Err(PyValueError::new_err("matrix has no rows"));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("matrix rows differ in length"));
    }
    Ok(nalgebra::DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

#[pymodule]
fn _ctsboot(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Series>()?;
    m.add_class::<TestOutcome>()?;
    m.add_function(wrap_pyfunction!(simulate_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(run_test, m)?)?;
    m.add_function(wrap_pyfunction!(pvalue_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(pvalue_clustering, m)?)?;
    m.add_function(wrap_pyfunction!(classical_mds, m)?)?;
    m.add_function(wrap_pyfunction!(encode_fasta, m)?)?;
    Ok(())
}
