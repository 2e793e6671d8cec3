use ftr_core::ftr::{ftr_gmgf, ftr_igmgf, ftr_imgf_lower, ftr_mgf, ftr_pdf, ftr_pdf_integer, CdfPath};
use ftr_core::quad::{integrate_semi_infinite, QuadSpec};
use ftr_core::FtrParams;

fn ftr(g: f64, m: f64, k: f64, d: f64) -> FtrParams {
    FtrParams::new(g, m, k, d).unwrap()
}

fn spec() -> QuadSpec {
    QuadSpec::default()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn rician_shadowed_and_nakagami_mixtures_agree() {
    for m in [1.0, 2.0, 3.0, 5.0] {
        for (k, d) in [(1.0, 0.2), (15.0, 1.0)] {
            let p = ftr(1.0, m, k, d);
            for i in 0..40 {
                let x = 0.01 + i as f64 * 0.15;
                let a = ftr_pdf(x, &p, &spec()).unwrap();
                let b = ftr_pdf_integer(x, &p, &spec()).unwrap();
                assert!(rel(a, b) < 1e-9, "m={m} K={k} x={x}");
            }
        }
    }
}

fn definition_gmgf(n: u32, s: f64, p: &FtrParams) -> f64 {
    let rate = 0.5 * (p.m * (1.0 + p.k) / (p.gamma_bar * (p.m + p.k * (1.0 + p.delta))) - s);
    integrate_semi_infinite(
        |x| x.powi(n as i32) * (s * x).exp() * ftr_pdf(x, p, &spec()).unwrap(),
        0.0,
        rate,
        &QuadSpec::adaptive().with_rel_tol(1e-10),
    )
    .unwrap()
}

#[test]
fn gmgf_closed_form_matches_definition() {
    for (m, k, d) in [(0.7, 3.0, 1.0), (2.5, 15.0, 0.5), (1.0, 0.0, 0.0)] {
        let p = ftr(1.0, m, k, d);
        for n in 0..4 {
            for s in [-0.1, -1.0] {
                let closed = ftr_gmgf(n, s, &p).unwrap();
                let oracle = definition_gmgf(n, s, &p);
                assert!(rel(closed, oracle) < 1e-6, "n={n} s={s} {p:?}");
            }
        }
    }
}

#[test]
fn incomplete_transforms_partition_the_mgf() {
    let p = ftr(1.0, 3.0, 8.0, 0.7);
    for s in [-0.05, -0.5, -3.0] {
        for z in [0.2, 1.0, 4.0] {
            let lower = ftr_imgf_lower(s, z, &p, &spec(), CdfPath::Quadrature).unwrap();
            let upper = ftr_igmgf(0, s, z, &p, &spec()).unwrap();
            assert!((lower + upper - ftr_mgf(s, &p).unwrap()).abs() < 1e-10, "s={s} z={z}");
        }
    }
}
