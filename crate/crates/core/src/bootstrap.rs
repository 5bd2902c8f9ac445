//! Bootstrap two-sample tests for equality of the generating processes of
//! two categorical series.
//!
//! Three resampling schemes approximate the null distribution of a chosen
//! dissimilarity:
//!
//! * `ba` — parametric: fit the chosen model family to each series once,
//!   average the two parameter vectors, and simulate fresh pairs from the
//!   averaged model;
//! * `mbb` — moving blocks: overlapping blocks from *both* series are
//!   pooled, and each pseudo-series is a concatenation of uniformly drawn
//!   blocks, truncated to the original length;
//! * `sb` — stationary: pseudo-series walk through the concatenation of
//!   both series, restarting at a uniform position with a fixed
//!   probability per step and otherwise advancing; the walk wraps from the
//!   end of one series to the start of the other.
//!
//! Pseudo-series glued from independent blocks understate the long-run
//! variance of serial-dependence features by a factor of roughly
//! `1 - c/b` (the classical small-block bias), which makes the raw
//! replicate quantile anticonservative whenever the data are serially
//! dependent. Both block schemes therefore calibrate their replicates: a
//! second replicate set is drawn at twice the block length (half the
//! restart probability), the deficit is removed by Richardson
//! extrapolation of the replicate mean, and the primary replicates are
//! rescaled by `(2*m2 - m1)/m1` before any quantile is taken. For
//! serially independent data the two means agree and the factor is ~1.
//!
//! The test rejects when the observed dissimilarity exceeds the
//! `ceil((1-alpha)*B)`-th order statistic of the `B` (calibrated)
//! bootstrap replicates (ties therefore count against rejection), and
//! reports the companion p-value `(1 + #{d* >= observed}) / (B + 1)`.

use rayon::prelude::*;

use crate::distances::{dist_b, dist_cc, dist_mle, DistanceKind};
use crate::error::{Error, Result};
use crate::features::{extract_features, validate_lags};
use crate::models::{
    self, average_theta, spec_from_theta, ModelFamily, ModelSpec,
};
use crate::rng::RandomStream;
use crate::series::{Alphabet, CategoricalSeries};

/// Resampling scheme. The tokens `ba`, `mbb`, and `sb` are the public
/// names used by the command line and output tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ba,
    Mbb,
    Sb,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Ba => "ba",
            Method::Mbb => "mbb",
            Method::Sb => "sb",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ba" => Ok(Method::Ba),
            "mbb" => Ok(Method::Mbb),
            "sb" => Ok(Method::Sb),
            other => Err(Error::InvalidConfig(format!(
                "unknown method {other:?}; expected ba, mbb, or sb"
            ))),
        }
    }

    /// Stable numeric tag used when deriving per-cell random streams.
    pub fn id(&self) -> u64 {
        match self {
            Method::Ba => 0,
            Method::Mbb => 1,
            Method::Sb => 2,
        }
    }

    /// All methods, in tag order.
    pub fn all() -> [Method; 3] {
        [Method::Ba, Method::Mbb, Method::Sb]
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Default moving-block length `ceil(T^(1/3))`.
pub fn default_block_size(t: usize) -> usize {
    (((t as f64).powf(1.0 / 3.0) - 1e-9).ceil() as usize).max(1)
}

/// Default restart probability `T^(-1/3)` of the stationary scheme.
pub fn default_cont_prob(t: usize) -> f64 {
    (t as f64).powf(-1.0 / 3.0)
}

/// Configuration of one two-sample test.
#[derive(Debug, Clone)]
pub struct TestConfig {
    /// Dissimilarity to compare.
    pub metric: DistanceKind,
    /// Resampling scheme.
    pub method: Method,
    /// Number of bootstrap replicates `B`.
    pub replicates: usize,
    /// Nominal level of the test.
    pub alpha: f64,
    /// Lags at which dependence features are extracted.
    pub lags: Vec<usize>,
    /// Moving-block length; `None` picks the default from the shorter
    /// series length. Ignored unless the method is `mbb`.
    pub block_size: Option<usize>,
    /// Restart probability; `None` picks the default from the shorter
    /// series length. Ignored unless the method is `sb`.
    pub cont_prob: Option<f64>,
    /// Model family used for parameter fitting (the `mle` metric and the
    /// `ba` scheme). Ignored by feature metrics under `mbb`/`sb`.
    pub family: ModelFamily,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig {
            metric: DistanceKind::Cc,
            method: Method::Mbb,
            replicates: 250,
            alpha: 0.05,
            lags: vec![1],
            block_size: None,
            cont_prob: None,
            family: ModelFamily::MarkovChain,
        }
    }
}

impl TestConfig {
    /// Check the configuration against a pair of series lengths and
    /// resolve the tuning constants actually used.
    pub fn validate(&self, len1: usize, len2: usize) -> Result<(usize, f64)> {
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("need at least one bootstrap replicate".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        let t_min = len1.min(len2);
        validate_lags(&self.lags, t_min)?;
        let block = self.block_size.unwrap_or_else(|| default_block_size(t_min));
        if block == 0 || block > t_min {
            return Err(Error::InvalidConfig(format!(
                "block size {block} must lie in 1..={t_min}"
            )));
        }
        let cont = self.cont_prob.unwrap_or_else(|| default_cont_prob(t_min));
        if !(0.0..=1.0).contains(&cont) {
            return Err(Error::InvalidConfig(format!(
                "restart probability {cont} must lie in [0, 1]"
            )));
        }
        match self.family {
            ModelFamily::HiddenMarkov { states } if states == 0 => {
                return Err(Error::InvalidConfig("hidden Markov family needs >= 1 state".into()));
            }
            _ => {}
        }
        Ok((block, cont))
    }
}

/// Outcome of one bootstrap test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    /// Dissimilarity of the observed pair.
    pub observed: f64,
    /// Bootstrap critical value (order statistic of the replicates).
    pub critical: f64,
    /// `(1 + #{d* >= observed}) / (B + 1)`.
    pub pvalue: f64,
    /// `observed > critical`.
    pub reject: bool,
    /// All bootstrap dissimilarities, in replicate order. For the block
    /// schemes these carry the long-run variance calibration factor.
    pub replicates: Vec<f64>,
    /// Level the decision was taken at.
    pub alpha: f64,
    /// Block length used (moving-block scheme only).
    pub block_size: Option<usize>,
    /// Restart probability used (stationary scheme only).
    pub cont_prob: Option<f64>,
}

// Child indices that partition one test's stream.
const TAG_REPLICATES: u64 = 0;
const TAG_BA_FIT: u64 = 1;
const TAG_OBSERVED_FIT: u64 = 2;
const TAG_CALIBRATION: u64 = 3;

/// Moving-block resample: pool all overlapping blocks of the given length
/// from both series, then build each pseudo-series from
/// `ceil(T_s / block)` uniformly drawn blocks, truncated to `T_s`.
pub fn mbb_resample_pair(
    x1: &CategoricalSeries,
    x2: &CategoricalSeries,
    block: usize,
    stream: &RandomStream,
) -> Result<(CategoricalSeries, CategoricalSeries)> {
    let (t1, t2) = (x1.len(), x2.len());
    if block == 0 || block > t1.min(t2) {
        return Err(Error::InvalidConfig(format!(
            "block size {block} must lie in 1..={}",
            t1.min(t2)
        )));
    }
    let q1 = t1 - block + 1;
    let q2 = t2 - block + 1;
    let mut rng = stream.rng();
    let mut draw_series = |target: usize| -> Vec<usize> {
        use rand::Rng;
        let k = target.div_ceil(block);
        let mut out = Vec::with_capacity(k * block);
        for _ in 0..k {
            let pick = rng.random_range(0..q1 + q2);
            let (source, start) =
                if pick < q1 { (x1.indices(), pick) } else { (x2.indices(), pick - q1) };
            out.extend_from_slice(&source[start..start + block]);
        }
        out.truncate(target);
        out
    };
    let v1 = draw_series(t1);
    let v2 = draw_series(t2);
    let alphabet = x1.alphabet().clone();
    Ok((
        CategoricalSeries::from_indices(v1, alphabet.clone())?,
        CategoricalSeries::from_indices(v2, alphabet)?,
    ))
}

/// Stationary resample: walk the concatenation `x1 || x2` circularly
/// (the step after the last value of either series is the first value of
/// the other), restarting at a uniform position with probability
/// `restart` per step. Pseudo-series keep the original lengths.
pub fn sb_resample_pair(
    x1: &CategoricalSeries,
    x2: &CategoricalSeries,
    restart: f64,
    stream: &RandomStream,
) -> Result<(CategoricalSeries, CategoricalSeries)> {
    if !(0.0..=1.0).contains(&restart) {
        return Err(Error::InvalidConfig(format!(
            "restart probability {restart} must lie in [0, 1]"
        )));
    }
    let mut pooled = Vec::with_capacity(x1.len() + x2.len());
    pooled.extend_from_slice(x1.indices());
    pooled.extend_from_slice(x2.indices());
    let n = pooled.len();
    let mut rng = stream.rng();
    let mut draw_series = |target: usize| -> Vec<usize> {
        use rand::Rng;
        let mut out = Vec::with_capacity(target);
        let mut pos = rng.random_range(0..n);
        out.push(pooled[pos]);
        for _ in 1..target {
            if rng.random::<f64>() < restart {
                pos = rng.random_range(0..n);
            } else {
                pos = (pos + 1) % n;
            }
            out.push(pooled[pos]);
        }
        out
    };
    let v1 = draw_series(x1.len());
    let v2 = draw_series(x2.len());
    let alphabet = x1.alphabet().clone();
    Ok((
        CategoricalSeries::from_indices(v1, alphabet.clone())?,
        CategoricalSeries::from_indices(v2, alphabet)?,
    ))
}

/// Parametric resample: simulate a fresh pair of the given lengths from
/// one (averaged) model, relabelled with the observed alphabet.
pub fn ba_resample_pair(
    spec: &ModelSpec,
    len1: usize,
    len2: usize,
    alphabet: &Alphabet,
    stream: &RandomStream,
) -> Result<(CategoricalSeries, CategoricalSeries)> {
    let s1 = models::simulate(spec, len1, &stream.child(0))?.with_alphabet(alphabet.clone())?;
    let s2 = models::simulate(spec, len2, &stream.child(1))?.with_alphabet(alphabet.clone())?;
    Ok((s1, s2))
}

/// One dissimilarity evaluation, fitting models when the metric needs
/// them.
fn statistic(
    x1: &CategoricalSeries,
    x2: &CategoricalSeries,
    cfg: &TestConfig,
    fit_stream1: &RandomStream,
    fit_stream2: &RandomStream,
) -> Result<f64> {
    match cfg.metric {
        DistanceKind::Cc => {
            dist_cc(&extract_features(x1, &cfg.lags)?, &extract_features(x2, &cfg.lags)?)
        }
        DistanceKind::B => {
            dist_b(&extract_features(x1, &cfg.lags)?, &extract_features(x2, &cfg.lags)?)
        }
        DistanceKind::Mle => {
            let th1 = models::fit(x1, &cfg.family, fit_stream1)?;
            let th2 = models::fit(x2, &cfg.family, fit_stream2)?;
            dist_mle(&th1, &th2)
        }
    }
}

/// Decision rule shared by the test: critical value, p-value, and the
/// reject flag derived from a replicate vector.
pub(crate) fn bootstrap_decision(replicates: &[f64], observed: f64, alpha: f64) -> (f64, f64, bool) {
    let b = replicates.len();
    let mut sorted = replicates.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (((1.0 - alpha) * b as f64 - 1e-9).ceil() as usize).clamp(1, b);
    let critical = sorted[rank - 1];
    let count_ge = replicates.iter().filter(|&&d| d >= observed).count();
    let pvalue = (1 + count_ge) as f64 / (b + 1) as f64;
    (critical, pvalue, observed > critical)
}

/// Run one bootstrap two-sample test.
///
/// The two series must share an alphabet; lengths may differ (blocks and
/// walks then respect each series' own length, and the parametric scheme
/// simulates matching lengths). All randomness comes from `stream`;
/// replicate `i` uses the child stream `stream.child(0).child(i)` and the
/// block schemes' calibration replicates use `stream.child(3).child(i)`,
/// so results do not depend on thread scheduling.
pub fn run_test(
    x1: &CategoricalSeries,
    x2: &CategoricalSeries,
    cfg: &TestConfig,
    stream: &RandomStream,
) -> Result<TestResult> {
    if x1.alphabet() != x2.alphabet() {
        return Err(Error::Mismatch(
            "series use different alphabets and cannot be compared".into(),
        ));
    }
    let (block, cont) = cfg.validate(x1.len(), x2.len())?;

    let obs_root = stream.child(TAG_OBSERVED_FIT);
    let observed = statistic(x1, x2, cfg, &obs_root.child(0), &obs_root.child(1))?;

    let averaged_spec = if cfg.method == Method::Ba {
        let fit_root = stream.child(TAG_BA_FIT);
        let th1 = models::fit(x1, &cfg.family, &fit_root.child(0))?;
        let th2 = models::fit(x2, &cfg.family, &fit_root.child(1))?;
        Some(spec_from_theta(&average_theta(&th1, &th2)?)?)
    } else {
        None
    };

    let alphabet = x1.alphabet().clone();
    let draw = |root: &RandomStream, block: usize, cont: f64| -> Result<Vec<f64>> {
        (0..cfg.replicates)
            .into_par_iter()
            .map(|i| {
                let rs = root.child(i as u64);
                let (p1, p2) = match cfg.method {
                    Method::Ba => ba_resample_pair(
                        averaged_spec.as_ref().expect("prepared above"),
                        x1.len(),
                        x2.len(),
                        &alphabet,
                        &rs.child(0),
                    )?,
                    Method::Mbb => mbb_resample_pair(x1, x2, block, &rs.child(0))?,
                    Method::Sb => sb_resample_pair(x1, x2, cont, &rs.child(0))?,
                };
                statistic(&p1, &p2, cfg, &rs.child(1), &rs.child(2))
            })
            .collect::<Result<Vec<_>>>()
    };

    let mut replicates = draw(&stream.child(TAG_REPLICATES), block, cont)?;
    if cfg.method != Method::Ba {
        // Long-run variance calibration: replicate means at block lengths
        // b and 2b sit at roughly mu*(1 - c/b) and mu*(1 - c/(2b)), so
        // 2*m2 - m1 recovers mu and (2*m2 - m1)/m1 is the deficit factor.
        let coarse_block = (2 * block).min(x1.len().min(x2.len()));
        let coarse = draw(&stream.child(TAG_CALIBRATION), coarse_block, cont / 2.0)?;
        let m1 = replicates.iter().sum::<f64>() / replicates.len() as f64;
        let m2 = coarse.iter().sum::<f64>() / coarse.len() as f64;
        if m1 > 0.0 && m2.is_finite() {
            let scale = ((2.0 * m2 - m1) / m1).clamp(0.1, 10.0);
            for d in &mut replicates {
                *d *= scale;
            }
        }
    }

    let (critical, pvalue, reject) = bootstrap_decision(&replicates, observed, cfg.alpha);
    Ok(TestResult {
        observed,
        critical,
        pvalue,
        reject,
        replicates,
        alpha: cfg.alpha,
        block_size: (cfg.method == Method::Mbb).then_some(block),
        cont_prob: (cfg.method == Method::Sb).then_some(cont),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::MarkovChain;
    use nalgebra::DMatrix;

    fn chain(row: [f64; 3]) -> MarkovChain {
        MarkovChain::new(DMatrix::from_fn(3, 3, |_i, j| row[j])).unwrap()
    }

    fn sim_pair(seed: u64, t: usize) -> (CategoricalSeries, CategoricalSeries) {
        let c = chain([0.2, 0.3, 0.5]);
        let root = RandomStream::new(seed);
        (c.simulate(t, &root.child(0)).unwrap(), c.simulate(t, &root.child(1)).unwrap())
    }

    #[test]
    fn default_tuning_matches_cube_root_rule() {
        assert_eq!(default_block_size(100), 5);
        assert_eq!(default_block_size(200), 6);
        assert_eq!(default_block_size(500), 8);
        assert_eq!(default_block_size(8), 2);
        assert!((default_cont_prob(8) - 0.5).abs() < 1e-12);
        assert!((default_cont_prob(200) - 200f64.powf(-1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn mbb_blocks_are_contiguous_windows_of_the_inputs() {
        let (x1, x2) = sim_pair(1, 40);
        let stream = RandomStream::new(2);
        let block = 5;
        let (p1, p2) = mbb_resample_pair(&x1, &x2, block, &stream).unwrap();
        assert_eq!(p1.len(), 40);
        assert_eq!(p2.len(), 40);
        let window_exists = |w: &[usize]| {
            [x1.indices(), x2.indices()].iter().any(|src| src.windows(w.len()).any(|c| c == w))
        };
        for pseudo in [&p1, &p2] {
            assert_eq!(pseudo.alphabet(), x1.alphabet());
            for chunk in pseudo.indices().chunks(block) {
                assert!(window_exists(chunk), "chunk {chunk:?} is not a window of either input");
            }
        }
    }

    #[test]
    fn mbb_truncates_to_the_target_length() {
        let (x1, x2) = sim_pair(3, 10);
        // block 3 -> 8 blocks per series pooled, 4 blocks drawn, 12 values
        // truncated to 10.
        let (p1, _) = mbb_resample_pair(&x1, &x2, 3, &RandomStream::new(4)).unwrap();
        assert_eq!(p1.len(), 10);
    }

    #[test]
    fn mbb_rejects_oversized_blocks() {
        let (x1, x2) = sim_pair(5, 10);
        assert!(mbb_resample_pair(&x1, &x2, 11, &RandomStream::new(1)).is_err());
        assert!(mbb_resample_pair(&x1, &x2, 0, &RandomStream::new(1)).is_err());
    }

    #[test]
    fn sb_with_no_restarts_is_a_circular_slice() {
        let (x1, x2) = sim_pair(7, 25);
        let (p1, p2) = sb_resample_pair(&x1, &x2, 0.0, &RandomStream::new(8)).unwrap();
        let mut circ: Vec<usize> = Vec::new();
        circ.extend_from_slice(x1.indices());
        circ.extend_from_slice(x2.indices());
        let doubled: Vec<usize> = circ.iter().chain(circ.iter()).copied().collect();
        for pseudo in [&p1, &p2] {
            assert_eq!(pseudo.len(), 25);
            assert!(
                doubled.windows(pseudo.len()).any(|w| w == pseudo.indices()),
                "pseudo-series is not a contiguous circular run"
            );
        }
    }

    #[test]
    fn sb_with_certain_restart_draws_from_the_pool() {
        let (x1, x2) = sim_pair(9, 30);
        let (p1, p2) = sb_resample_pair(&x1, &x2, 1.0, &RandomStream::new(10)).unwrap();
        assert_eq!(p1.len(), 30);
        assert_eq!(p2.len(), 30);
        // All values must come from the pooled support.
        let support: Vec<usize> =
            x1.indices().iter().chain(x2.indices()).copied().collect();
        for &v in p1.indices().iter().chain(p2.indices()) {
            assert!(support.contains(&v));
        }
    }

    #[test]
    fn resamplers_are_deterministic_per_stream() {
        let (x1, x2) = sim_pair(11, 50);
        let s = RandomStream::new(12);
        assert_eq!(
            mbb_resample_pair(&x1, &x2, 4, &s).unwrap(),
            mbb_resample_pair(&x1, &x2, 4, &s).unwrap()
        );
        assert_eq!(
            sb_resample_pair(&x1, &x2, 0.3, &s).unwrap(),
            sb_resample_pair(&x1, &x2, 0.3, &s).unwrap()
        );
        let spec = ModelSpec::MarkovChain(chain([0.2, 0.3, 0.5]));
        assert_eq!(
            ba_resample_pair(&spec, 20, 30, x1.alphabet(), &s).unwrap(),
            ba_resample_pair(&spec, 20, 30, x1.alphabet(), &s).unwrap()
        );
    }

    #[test]
    fn ba_resample_produces_requested_lengths_and_alphabet() {
        let labels = Alphabet::new(vec!["x", "y", "z"]).unwrap();
        let spec = ModelSpec::MarkovChain(chain([0.2, 0.3, 0.5]));
        let (p1, p2) = ba_resample_pair(&spec, 14, 9, &labels, &RandomStream::new(13)).unwrap();
        assert_eq!(p1.len(), 14);
        assert_eq!(p2.len(), 9);
        assert_eq!(p1.alphabet(), &labels);
        assert_eq!(p2.alphabet(), &labels);
    }

    #[test]
    fn decision_rule_known_values() {
        // Four replicates, observed between the 2nd and 3rd order
        // statistic: p = (1 + 2) / 5.
        let (critical, pvalue, reject) = bootstrap_decision(&[1.0, 2.0, 3.0, 4.0], 2.5, 0.05);
        assert_eq!(critical, 4.0); // ceil(0.95 * 4) = 4th order statistic
        assert!((pvalue - 0.6).abs() < 1e-15);
        assert!(!reject);

        // 250 replicates 1..=250, alpha = 0.05 -> 238th order statistic.
        let reps: Vec<f64> = (1..=250).map(|i| i as f64).collect();
        let (critical, _, reject) = bootstrap_decision(&reps, 238.0, 0.05);
        assert_eq!(critical, 238.0);
        assert!(!reject, "ties must not reject");
        let (_, _, reject) = bootstrap_decision(&reps, 238.5, 0.05);
        assert!(reject);
    }

    #[test]
    fn run_test_fields_are_consistent() {
        let (x1, x2) = sim_pair(21, 120);
        let cfg = TestConfig { replicates: 99, ..TestConfig::default() };
        let result = run_test(&x1, &x2, &cfg, &RandomStream::new(22)).unwrap();
        assert_eq!(result.replicates.len(), 99);
        assert!(result.replicates.contains(&result.critical));
        assert!(result.pvalue > 0.0 && result.pvalue <= 1.0);
        assert_eq!(result.reject, result.observed > result.critical);
        let count = result.replicates.iter().filter(|&&d| d >= result.observed).count();
        assert_eq!(result.pvalue, (1 + count) as f64 / 100.0);
        assert_eq!(result.block_size, Some(default_block_size(120)));
        assert_eq!(result.cont_prob, None);
    }

    #[test]
    fn run_test_is_reproducible_and_thread_invariant() {
        let (x1, x2) = sim_pair(23, 100);
        let cfg = TestConfig { replicates: 60, method: Method::Sb, ..TestConfig::default() };
        let stream = RandomStream::new(24);
        let base = run_test(&x1, &x2, &cfg, &stream).unwrap();
        for threads in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let other = pool.install(|| run_test(&x1, &x2, &cfg, &stream)).unwrap();
            assert_eq!(base, other, "result differs with {threads} threads");
        }
    }

    #[test]
    fn run_test_supports_unequal_lengths() {
        let c = chain([0.2, 0.3, 0.5]);
        let root = RandomStream::new(25);
        let x1 = c.simulate(50, &root.child(0)).unwrap();
        let x2 = c.simulate(80, &root.child(1)).unwrap();
        for method in Method::all() {
            let cfg = TestConfig { replicates: 20, method, ..TestConfig::default() };
            let result = run_test(&x1, &x2, &cfg, &root.child(2)).unwrap();
            assert_eq!(result.replicates.len(), 20);
        }
    }

    #[test]
    fn run_test_with_all_metrics() {
        let (x1, x2) = sim_pair(27, 100);
        for metric in DistanceKind::all() {
            let cfg = TestConfig { replicates: 20, metric, ..TestConfig::default() };
            let result = run_test(&x1, &x2, &cfg, &RandomStream::new(28)).unwrap();
            assert!(result.observed >= 0.0);
            assert!(result.replicates.iter().all(|&d| d >= 0.0));
        }
    }

    #[test]
    fn run_test_rejects_bad_inputs() {
        let (x1, x2) = sim_pair(29, 50);
        let other = CategoricalSeries::from_indices(
            vec![0, 1, 0, 1],
            Alphabet::new(vec!["u", "v"]).unwrap(),
        )
        .unwrap();
        let stream = RandomStream::new(30);
        let cfg = TestConfig::default();
        assert!(run_test(&x1, &other, &cfg, &stream).is_err());

        let bad = TestConfig { replicates: 0, ..TestConfig::default() };
        assert!(run_test(&x1, &x2, &bad, &stream).is_err());
        let bad = TestConfig { alpha: 1.0, ..TestConfig::default() };
        assert!(run_test(&x1, &x2, &bad, &stream).is_err());
        let bad = TestConfig { lags: vec![50], ..TestConfig::default() };
        assert!(run_test(&x1, &x2, &bad, &stream).is_err());
        let bad = TestConfig { block_size: Some(51), ..TestConfig::default() };
        assert!(run_test(&x1, &x2, &bad, &stream).is_err());
        let bad = TestConfig { cont_prob: Some(1.5), method: Method::Sb, ..TestConfig::default() };
        assert!(run_test(&x1, &x2, &bad, &stream).is_err());
    }
}
