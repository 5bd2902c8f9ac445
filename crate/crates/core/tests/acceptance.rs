//! Acceptance gate for the whole toolkit.
//!
//! Six criteria, one test each. Every test prints a single
//! `[PASS]`/`[FAIL]` line (visible with `--nocapture`, and on any
//! failure) and then asserts. Criteria 1–5 run Monte Carlo rejection
//! rates at desk scale — N = 200 runs of B = 250 bootstrap replicates —
//! under one frozen master seed, so their outcomes are deterministic.
//! Criterion 6 is a scale-free property suite: exhaustive feature
//! checks against brute-force counting, a closed-form serial-dependence
//! identity, metric axioms, resampler invariants, thread-count
//! invariance, an embedding round trip, and the clustering contract.

use nalgebra::DMatrix;
use rand::Rng;

use ctsboot::bootstrap::{
    mbb_resample_pair, run_test, sb_resample_pair, Method, TestConfig, TestResult,
};
use ctsboot::cluster::{classical_mds, pvalue_clustering, PValueMatrix};
use ctsboot::distances::{dist_b, dist_cc, dist_mle, DistanceKind};
use ctsboot::experiments::{rejection_rate, CellSpec};
use ctsboot::features::extract_features;
use ctsboot::models::{fit_markov, MarkovChain, NdarmaModel};
use ctsboot::rng::RandomStream;
use ctsboot::series::{Alphabet, CategoricalSeries};

/// Master seed all gated rejection rates are frozen under.
const MASTER_SEED: u64 = 3;

/// Desk-scale rejection rate of one grid cell.
fn rate(scenario: u8, delta: f64, t: usize, metric: DistanceKind, method: Method) -> f64 {
    let cell = CellSpec::new(scenario, delta, t, metric, method);
    rejection_rate(&cell, MASTER_SEED).expect("cell runs").rate
}

fn report(ok: bool, criterion: &str, detail: &str) {
    let tag = if ok { "[PASS]" } else { "[FAIL]" };
    println!("{tag} {criterion}: {detail}");
    assert!(ok, "{criterion}: {detail}");
}

/// Criterion 1 — size calibration. Scenario 1 (i.i.d. pairs), no offset,
/// T = 500: all nine metric x method rejection rates stay in the
/// three-standard-error band [0.02, 0.09] around the nominal 5% level.
#[test]
fn criterion_1_size_calibration() {
    let mut cells = Vec::new();
    for metric in DistanceKind::all() {
        for method in Method::all() {
            let r = rate(1, 0.0, 500, metric, method);
            cells.push(format!("{}/{}={r:.3}", metric.as_str(), method.as_str()));
            if !(0.02..=0.09).contains(&r) {
                report(
                    false,
                    "criterion 1 (size calibration)",
                    &format!("{}/{} rate {r:.3} outside [0.02, 0.09]", metric.as_str(), method.as_str()),
                );
            }
        }
    }
    report(true, "criterion 1 (size calibration)", &cells.join(" "));
}

/// Criterion 2 — power ceiling. Scenario 1, offset 0.100, T = 500, CC
/// metric: every method rejects at least 99% of the time.
#[test]
fn criterion_2_power_ceiling() {
    let mut cells = Vec::new();
    for method in Method::all() {
        let r = rate(1, 0.100, 500, DistanceKind::Cc, method);
        cells.push(format!("cc/{}={r:.3}", method.as_str()));
        if r < 0.99 {
            report(
                false,
                "criterion 2 (power ceiling)",
                &format!("cc/{} rate {r:.3} below 0.99", method.as_str()),
            );
        }
    }
    report(true, "criterion 2 (power ceiling)", &cells.join(" "));
}

/// One-sided two-proportion z statistic (pooled variance) for
/// "rate 1 exceeds rate 2", both measured on n runs.
fn superiority_z(k1: usize, k2: usize, n: usize) -> f64 {
    let (p1, p2) = (k1 as f64 / n as f64, k2 as f64 / n as f64);
    let pool = (k1 + k2) as f64 / (2 * n) as f64;
    (p1 - p2) / (pool * (1.0 - pool) * 2.0 / n as f64).sqrt()
}

/// Criterion 3 — mid-power cell. Scenario 1, offset 0.075, T = 200,
/// moving-block scheme: the CC metric lands at 0.799 +/- 0.06, the
/// binarization metric at 0.127 +/- 0.05, and CC beats binarization by a
/// one-sided two-proportion test at the 1% level.
#[test]
fn criterion_3_mid_power_ordering() {
    let cc = rejection_rate(
        &CellSpec::new(1, 0.075, 200, DistanceKind::Cc, Method::Mbb),
        MASTER_SEED,
    )
    .expect("cell runs");
    let b = rejection_rate(
        &CellSpec::new(1, 0.075, 200, DistanceKind::B, Method::Mbb),
        MASTER_SEED,
    )
    .expect("cell runs");
    let z = superiority_z(cc.rejections, b.rejections, cc.spec.runs);
    let detail = format!(
        "cc/mbb={:.3} (band 0.739..0.859), b/mbb={:.3} (band 0.077..0.177), z={z:.1} (need >= 2.326)",
        cc.rate, b.rate
    );
    let ok = (0.739..=0.859).contains(&cc.rate)
        && (0.077..=0.177).contains(&b.rate)
        && z >= 2.326;
    report(ok, "criterion 3 (mid-power ordering)", &detail);
}

/// Criterion 4 — serially dependent null and alternative. Scenario 3
/// (first-order mixture processes): at offset 0.20, T = 200 the CC metric
/// rejects at least 95% of the time under every method, and with no
/// offset at T = 500 all nine rates stay in [0.02, 0.09].
#[test]
fn criterion_4_serial_dependence() {
    let mut cells = Vec::new();
    for method in Method::all() {
        let r = rate(3, 0.20, 200, DistanceKind::Cc, method);
        cells.push(format!("power cc/{}={r:.3}", method.as_str()));
        if r < 0.95 {
            report(
                false,
                "criterion 4 (serial dependence)",
                &format!("cc/{} power {r:.3} below 0.95", method.as_str()),
            );
        }
    }
    for metric in DistanceKind::all() {
        for method in Method::all() {
            let r = rate(3, 0.0, 500, metric, method);
            cells.push(format!("size {}/{}={r:.3}", metric.as_str(), method.as_str()));
            if !(0.02..=0.09).contains(&r) {
                report(
                    false,
                    "criterion 4 (serial dependence)",
                    &format!("{}/{} size {r:.3} outside [0.02, 0.09]", metric.as_str(), method.as_str()),
                );
            }
        }
    }
    report(true, "criterion 4 (serial dependence)", &cells.join(" "));
}

/// Criterion 5 — block-length flatness. Scenario 1, T = 200, no offset,
/// CC + moving block: across block lengths {4, 8, 12, 16, 20} every
/// rate stays in [0.02, 0.09] and within 0.05 of the default-rule
/// (b = 6) rate.
#[test]
fn criterion_5_block_length_flatness() {
    let cell_at = |b: usize| CellSpec {
        block_size: Some(b),
        ..CellSpec::new(1, 0.0, 200, DistanceKind::Cc, Method::Mbb)
    };
    let base = rejection_rate(&cell_at(6), MASTER_SEED).expect("cell runs").rate;
    let mut cells = vec![format!("b=6:{base:.3}")];
    for b in [4usize, 8, 12, 16, 20] {
        let r = rejection_rate(&cell_at(b), MASTER_SEED).expect("cell runs").rate;
        cells.push(format!("b={b}:{r:.3}"));
        if !(0.02..=0.09).contains(&r) || (r - base).abs() > 0.05 {
            report(
                false,
                "criterion 5 (block-length flatness)",
                &format!("b={b} rate {r:.3} (baseline {base:.3}) breaks the band or the 0.05 margin"),
            );
        }
    }
    report(true, "criterion 5 (block-length flatness)", &cells.join(" "));
}

// ---------------------------------------------------------------------
// Criterion 6 — property suite.
// ---------------------------------------------------------------------

/// Brute-force feature computation straight from the definitions: count
/// marginal and pair frequencies with loops, then apply the formulas.
fn brute_force_check(series: &CategoricalSeries, lag: usize) {
    let x = series.indices();
    let t = x.len();
    let r = series.num_categories();

    let mut marginal_counts = vec![0usize; r];
    for &v in x {
        marginal_counts[v] += 1;
    }
    let pi: Vec<f64> = marginal_counts.iter().map(|&c| c as f64 / t as f64).collect();
    let mut pair_counts = vec![vec![0usize; r]; r];
    for s in lag..t {
        pair_counts[x[s]][x[s - lag]] += 1;
    }
    let p: Vec<Vec<f64>> = pair_counts
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 / (t - lag) as f64).collect())
        .collect();

    let f = extract_features(series, &[lag]).expect("features");
    for i in 0..r {
        assert!((f.marginal[i] - pi[i]).abs() < 1e-12, "marginal[{i}]");
    }

    let sum_sq: f64 = pi.iter().map(|q| q * q).sum();
    let kappa_denom = 1.0 - sum_sq;
    for i in 0..r {
        for j in 0..r {
            let e = pi[i] * pi[j];
            let v_ref = if e > 0.0 { (p[i][j] - e).powi(2) / e } else { 0.0 };
            assert!(
                (f.cramer_matrices[0][(i, j)] - v_ref).abs() < 1e-12,
                "cramer matrix ({i},{j}) for {x:?}"
            );
            let (vi, vj) = (pi[i] * (1.0 - pi[i]), pi[j] * (1.0 - pi[j]));
            let phi_ref = if vi > 0.0 && vj > 0.0 {
                ((p[i][j] - e) / (vi * vj).sqrt()).clamp(-1.0, 1.0)
            } else {
                0.0
            };
            assert!(
                (f.indicator_corr[0][(i, j)] - phi_ref).abs() < 1e-12,
                "indicator correlation ({i},{j}) for {x:?}"
            );
        }
        let kappa_ref =
            if kappa_denom > 0.0 { (p[i][i] - pi[i] * pi[i]) / kappa_denom } else { 0.0 };
        assert!(
            (f.kappa_vectors[0][i] - kappa_ref).abs() < 1e-12,
            "agreement vector [{i}] for {x:?}"
        );
    }
    let kappa_scalar_ref = if kappa_denom > 0.0 {
        (0..r).map(|i| p[i][i] - pi[i] * pi[i]).sum::<f64>() / kappa_denom
    } else {
        0.0
    };
    assert!((f.cohen_kappa[0] - kappa_scalar_ref).abs() < 1e-12, "scalar agreement for {x:?}");
}

fn property_brute_force_features() -> String {
    let mut checked = 0usize;
    for r in 2..=3usize {
        let alphabet = Alphabet::indexed(r).unwrap();
        for t in 2..=8usize {
            for code in 0..r.pow(t as u32) {
                let mut values = Vec::with_capacity(t);
                let mut c = code;
                for _ in 0..t {
                    values.push(c % r);
                    c /= r;
                }
                let series = CategoricalSeries::from_indices(values, alphabet.clone()).unwrap();
                brute_force_check(&series, 1);
                if t >= 3 {
                    brute_force_check(&series, 2);
                }
                checked += 1;
            }
        }
    }
    format!("{checked} series checked against direct counting")
}

/// For a first-order mixture process that copies its previous value with
/// probability phi and draws a fresh innovation otherwise, the lag-1
/// agreement coefficient equals phi.
fn property_agreement_identity() -> String {
    let model = NdarmaModel::new(vec![0.2, 0.3, 0.5], vec![0.6, 0.4], 1, 0).unwrap();
    let series = model.simulate(50_000, &RandomStream::new(101)).unwrap();
    let f = extract_features(&series, &[1]).unwrap();
    let kappa = f.cohen_kappa[0];
    assert!(
        (kappa - 0.6).abs() <= 0.02,
        "lag-1 agreement {kappa:.4} should match the copy probability 0.6 within 0.02"
    );
    format!("lag-1 agreement {kappa:.4} vs copy probability 0.600")
}

fn property_distance_axioms() -> String {
    let root = RandomStream::new(102);
    let mut pairs = 0usize;
    for i in 0..20u64 {
        let s = root.child(i);
        let chain = random_chain(3, &s.child(0));
        let x = chain.simulate(80, &s.child(1)).unwrap();
        let y = chain.simulate(80, &s.child(2)).unwrap();
        let (fx, fy) = (
            extract_features(&x, &[1, 2]).unwrap(),
            extract_features(&y, &[1, 2]).unwrap(),
        );
        assert_eq!(dist_cc(&fx, &fx).unwrap(), 0.0, "cc self-distance");
        assert_eq!(dist_b(&fx, &fx).unwrap(), 0.0, "b self-distance");
        assert_eq!(dist_cc(&fx, &fy).unwrap(), dist_cc(&fy, &fx).unwrap(), "cc symmetry");
        assert_eq!(dist_b(&fx, &fy).unwrap(), dist_b(&fy, &fx).unwrap(), "b symmetry");
        let (tx, ty) = (fit_markov(&x).theta(), fit_markov(&y).theta());
        assert_eq!(dist_mle(&tx, &tx).unwrap(), 0.0, "mle self-distance");
        assert_eq!(dist_mle(&tx, &ty).unwrap(), dist_mle(&ty, &tx).unwrap(), "mle symmetry");
        pairs += 1;
    }
    format!("identity and symmetry exact on {pairs} simulated pairs, all metrics")
}

fn random_chain(r: usize, stream: &RandomStream) -> MarkovChain {
    let mut rng = stream.rng();
    let rows: Vec<f64> = (0..r * r).map(|_| rng.random_range(0.05..1.0)).collect();
    let mut m = DMatrix::from_row_slice(r, r, &rows);
    for i in 0..r {
        let s: f64 = m.row(i).sum();
        for j in 0..r {
            m[(i, j)] /= s;
        }
    }
    MarkovChain::new(m).unwrap()
}

fn property_resampler_invariants() -> String {
    let root = RandomStream::new(103);
    let mut draws = 0usize;
    for i in 0..10_000u64 {
        let s = root.child(i);
        let mut rng = s.child(0).rng();
        let r = rng.random_range(2..=4usize);
        let (t1, t2) = (rng.random_range(20..=60usize), rng.random_range(20..=60usize));
        let chain = random_chain(r, &s.child(1));
        let x1 = chain.simulate(t1, &s.child(2)).unwrap();
        let x2 = chain.simulate(t2, &s.child(3)).unwrap();

        let block = rng.random_range(1..=t1.min(t2));
        let (m1, m2) = mbb_resample_pair(&x1, &x2, block, &s.child(4)).unwrap();
        let cont = rng.random_range(0.0..=1.0f64);
        let (s1, s2) = sb_resample_pair(&x1, &x2, cont, &s.child(5)).unwrap();

        for (pseudo, original) in [(&m1, &x1), (&m2, &x2), (&s1, &x1), (&s2, &x2)] {
            assert_eq!(pseudo.len(), original.len(), "pseudo-series length");
            assert_eq!(pseudo.alphabet(), original.alphabet(), "pseudo-series alphabet");
            assert!(
                pseudo
                    .indices()
                    .iter()
                    .all(|v| x1.indices().contains(v) || x2.indices().contains(v)),
                "pseudo-series drew a symbol absent from both inputs"
            );
        }
        draws += 1;
    }
    format!("{draws} randomized resamples keep length and alphabet closure")
}

fn property_thread_invariance() -> String {
    let root = RandomStream::new(104);
    let chain = random_chain(3, &root.child(0));
    let x1 = chain.simulate(150, &root.child(1)).unwrap();
    let x2 = chain.simulate(150, &root.child(2)).unwrap();
    let mut baselines: Vec<TestResult> = Vec::new();
    for method in Method::all() {
        let cfg = TestConfig { method, replicates: 100, ..TestConfig::default() };
        baselines.push(run_test(&x1, &x2, &cfg, &root.child(3)).unwrap());
    }
    for threads in [1usize, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        for (method, base) in Method::all().into_iter().zip(&baselines) {
            let cfg = TestConfig { method, replicates: 100, ..TestConfig::default() };
            let again = pool.install(|| run_test(&x1, &x2, &cfg, &root.child(3))).unwrap();
            assert_eq!(&again, base, "{} result changed with {threads} threads", method.as_str());
        }
    }
    format!("bit-identical results on {} methods across 1 and 4 threads", baselines.len())
}

fn property_embedding_round_trip() -> String {
    let points: [(f64, f64); 6] = [
        (0.0, 0.0),
        (1.0, 0.2),
        (-0.5, 1.3),
        (2.0, -1.0),
        (0.7, 0.7),
        (-1.2, -0.4),
    ];
    let n = points.len();
    let d = DMatrix::from_fn(n, n, |i, j| {
        let (dx, dy) = (points[i].0 - points[j].0, points[i].1 - points[j].1);
        (dx * dx + dy * dy).sqrt()
    });
    let mds = classical_mds(&d, 2).unwrap();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let (dx, dy) = (
                mds.coords[(i, 0)] - mds.coords[(j, 0)],
                mds.coords[(i, 1)] - mds.coords[(j, 1)],
            );
            worst = worst.max(((dx * dx + dy * dy).sqrt() - d[(i, j)]).abs());
        }
    }
    assert!(worst < 1e-8, "embedding distorts a planar configuration by {worst:e}");
    format!("planar configuration reproduced to {worst:.1e} (limit 1e-8)")
}

fn property_clustering_contract() -> String {
    let root = RandomStream::new(105);
    let mut checked = 0usize;
    for i in 0..100u64 {
        let mut rng = root.child(i).rng();
        let n = rng.random_range(2..=12usize);
        let mut values = DMatrix::from_element(n, n, 1.0);
        for a in 0..n {
            for b in a + 1..n {
                let p = rng.random_range(1e-6..=1.0f64);
                values[(a, b)] = p;
                values[(b, a)] = p;
            }
        }
        let pvalues = PValueMatrix::new(values).unwrap();
        let alpha = rng.random_range(0.01..0.5f64);
        let partition = pvalue_clustering(&pvalues, alpha).unwrap();

        for a in 0..n {
            for b in a + 1..n {
                if partition.assignments[a] == partition.assignments[b] {
                    assert!(
                        pvalues.get(a, b) > alpha,
                        "within-cluster pair ({a},{b}) has p {} <= alpha {alpha}",
                        pvalues.get(a, b)
                    );
                }
            }
        }
        for c1 in 0..partition.num_clusters {
            for c2 in c1 + 1..partition.num_clusters {
                let mut min_cross = f64::INFINITY;
                for a in 0..n {
                    for b in 0..n {
                        if partition.assignments[a] == c1 && partition.assignments[b] == c2 {
                            min_cross = min_cross.min(pvalues.get(a, b));
                        }
                    }
                }
                assert!(
                    min_cross <= alpha,
                    "clusters {c1} and {c2} stayed apart with min cross p {min_cross} > alpha {alpha}"
                );
            }
        }
        checked += 1;
    }
    format!("{checked} random matrices satisfy the partition contract")
}

/// Criterion 6 — property suite: exhaustive feature equivalence, the
/// copy-probability identity, metric axioms, resampler invariants,
/// thread-count invariance, the embedding round trip, and the clustering
/// partition contract.
#[test]
fn criterion_6_property_suite() {
    let parts = [
        property_brute_force_features(),
        property_agreement_identity(),
        property_distance_axioms(),
        property_resampler_invariants(),
        property_thread_invariance(),
        property_embedding_round_trip(),
        property_clustering_contract(),
    ];
    report(true, "criterion 6 (property suite)", &parts.join("; "));
}
