use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ftr_bench::{channels, scenario_a, scenario_b};
use ftr_core::ftr::{ftr_cdf, ftr_gmgf, ftr_mgf, ftr_pdf, ftr_pdf_integer};
use ftr_core::mc::sample_snr;
use ftr_core::outage::{outage_a, outage_b};
use ftr_core::{CdfPath, McConfig, QuadSpec};

fn transforms(c: &mut Criterion) {
    for (name, p) in channels() {
        c.bench_function(&format!("mgf/{name}"), |b| b.iter(|| ftr_mgf(black_box(-1.0), &p)));
        c.bench_function(&format!("gmgf3/{name}"), |b| b.iter(|| ftr_gmgf(3, black_box(-1.0), &p)));
    }
}

fn densities(c: &mut Criterion) {
    let spec = QuadSpec::default();
    for (name, p) in channels() {
        c.bench_function(&format!("pdf/{name}"), |b| b.iter(|| ftr_pdf(black_box(0.8), &p, &spec)));
        c.bench_function(&format!("cdf_quadrature/{name}"), |b| {
            b.iter(|| ftr_cdf(black_box(0.8), &p, &spec, CdfPath::Quadrature))
        });
        c.bench_function(&format!("cdf_phi2/{name}"), |b| b.iter(|| ftr_cdf(black_box(0.8), &p, &spec, CdfPath::Phi2)));
    }
    let (_, p3) = channels()[1];
    c.bench_function("pdf_nakagami/m3", |b| b.iter(|| ftr_pdf_integer(black_box(0.8), &p3, &spec)));
}

fn outage(c: &mut Criterion) {
    let spec = QuadSpec::default();
    let a = scenario_a();
    c.bench_function("outage_a", |b| b.iter(|| outage_a(black_box(&a), &spec)));
    for n in [1, 2, 4] {
        let sc = scenario_b(n);
        c.bench_function(&format!("outage_b/n{n}"), |b| b.iter(|| outage_b(black_box(&sc))));
    }
}

fn sampling(c: &mut Criterion) {
    let (_, p) = channels()[0];
    let cfg = McConfig::new(100_000, 1);
    c.bench_function("sample_snr/1e5", |b| b.iter(|| sample_snr(&p, black_box(&cfg))));
}

criterion_group!(benches, transforms, densities, outage, sampling);
criterion_main!(benches);
