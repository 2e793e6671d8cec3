use ftr_core::ftr::{ftr_cdf, ftr_moment, CdfPath};
use ftr_core::mc::{empirical_cdf, mc_mean, mc_outage_a, mc_outage_b, sample_snr};
use ftr_core::outage::{outage_a, outage_b};
use ftr_core::quad::{integrate_adaptive, QuadSpec};
use ftr_core::{FtrParams, McConfig, ScenarioA, ScenarioB};

fn ftr(g: f64, m: f64, k: f64, d: f64) -> FtrParams {
    FtrParams::new(g, m, k, d).unwrap()
}

fn spec() -> QuadSpec {
    QuadSpec::default()
}

fn sup_cdf_gap(p: &FtrParams, n: u64, seed: u64, cdf: impl Fn(f64) -> f64) -> f64 {
    let samples = sample_snr(p, &McConfig::new(n, seed)).unwrap();
    let grid: Vec<f64> = (1..=60).map(|i| p.gamma_bar * i as f64 * 0.06).collect();
    let emp = empirical_cdf(&samples, &grid).unwrap();
    grid.iter()
        .zip(&emp)
        .map(|(&x, e)| (e - cdf(x)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn samples_follow_analytic_cdf() {
    let n = 1_000_000;
    let band = 2.0 * 1.36 / (n as f64).sqrt();
    for p in [ftr(1.0, 1.5, 10.0, 0.5), ftr(1.0, 3.0, 10.0, 0.5), ftr(2.0, 0.7, 4.0, 1.0)] {
        let gap = sup_cdf_gap(&p, n, 5, |x| ftr_cdf(x, &p, &spec(), CdfPath::Quadrature).unwrap());
        assert!(gap < band, "{p:?}: {gap}");
    }
}

#[test]
fn no_specular_power_gives_exponential() {
    let p = ftr(1.5, 2.0, 0.0, 0.3);
    let gap = sup_cdf_gap(&p, 1_000_000, 9, |x| 1.0 - (-x / 1.5f64).exp());
    assert!(gap < 0.002, "{gap}");
}

/// Rician CDF with `K` by integrating the density `(1+K)/γ̄ e^{−K−(1+K)x/γ̄} I₀(2√(K(1+K)x/γ̄))`.
fn rician_cdf(x: f64, g: f64, k: f64) -> f64 {
    let i0 = |z: f64| {
        let q = 0.25 * z * z;
        let (mut term, mut sum, mut j) = (1.0f64, 1.0f64, 0.0f64);
        while term > 1e-17 * sum {
            j += 1.0;
            term *= q / (j * j);
            sum += term;
        }
        sum
    };
    let spec = QuadSpec::adaptive().with_rel_tol(1e-10);
    integrate_adaptive(
        |t| {
            let a = (1.0 + k) / g;
            let arg = 2.0 * (k * a * t).sqrt();
            a * (-k - a * t).exp() * i0(arg)
        },
        0.0,
        x,
        &spec,
    )
    .unwrap()
}

#[test]
fn mild_fluctuation_approaches_rician() {
    let p = ftr(1.0, 500.0, 5.0, 0.0);
    let gap = sup_cdf_gap(&p, 1_000_000, 13, |x| rician_cdf(x, 1.0, 5.0));
    assert!(gap < 0.005, "{gap}");
}

#[test]
fn sample_mean_matches_first_moment() {
    let p = ftr(2.0, 1.5, 10.0, 0.8);
    let e = mc_mean(&p, &McConfig::new(2_000_000, 21), |x| x).unwrap();
    let m1 = ftr_moment(1, &p).unwrap();
    assert!((m1 - 2.0).abs() < 1e-12);
    assert!((e.mean - m1).abs() < 4.0 * e.stderr, "{e:?}");
}

#[test]
fn scenario_a_matches_simulation() {
    let cfg = McConfig::new(400_000, 3);
    for (m, r, snr_db) in [(1.0, 1.0, 5.0), (2.0, 6.0, 12.0), (3.0, 10.0, 15.0)] {
        let w = 10f64.powf(snr_db / 10.0) * (2.0 * 0.01 + 1.0);
        let sc = ScenarioA::new(ftr(w, m, 10.0, 0.6), 2, 0.01, 1.0, r).unwrap();
        let a = outage_a(&sc, &spec()).unwrap();
        let e = mc_outage_a(&sc, &cfg).unwrap();
        let sigma = (a * (1.0 - a) / cfg.samples as f64).sqrt();
        assert!((a - e.mean).abs() < 3.0 * sigma, "m={m} r={r}: {a} vs {e:?}");
    }
}

#[test]
fn noise_dominated_scenario_a_tracks_cdf() {
    let ch = ftr(1.0, 2.0, 5.0, 0.4);
    let sc = ScenarioA::new(ch, 1, 1e-9, 1.0, 0.7).unwrap();
    let e = mc_outage_a(&sc, &McConfig::new(400_000, 8)).unwrap();
    let f = ftr_cdf(0.7, &ch, &spec(), CdfPath::Quadrature).unwrap();
    let sigma = (f * (1.0 - f) / 400_000.0f64).sqrt();
    assert!((e.mean - f).abs() < 3.0 * sigma);
}

#[test]
fn scenario_b_matches_simulation() {
    let cfg = McConfig::new(400_000, 4);
    for (m, n, l, r) in [(1.0, 1, 1, 0.5), (0.5, 2, 1, 0.2), (2.5, 2, 2, 0.3), (1.5, 4, 2, 0.8)] {
        let sc = ScenarioB::new(ftr(1.0, m, 10.0, 0.6), n, l, 1.0, r).unwrap();
        let a = outage_b(&sc).unwrap();
        let e = mc_outage_b(&sc, &cfg).unwrap();
        let sigma = (a * (1.0 - a) / cfg.samples as f64).sqrt();
        assert!((a - e.mean).abs() < 3.0 * sigma, "m={m} N={n} L={l}: {a} vs {e:?}");
    }
}

#[test]
fn more_antennas_lower_simulated_outage() {
    let cfg = McConfig::new(1_000_000, 6);
    let one = ScenarioB::new(ftr(1.0, 1.0, 10.0, 0.6), 1, 2, 1.0, 0.5).unwrap();
    let two = ScenarioB { n_antennas: 2, ..one };
    let a = mc_outage_b(&one, &cfg).unwrap();
    let b = mc_outage_b(&two, &cfg).unwrap();
    assert!(b.mean < a.mean);
}
