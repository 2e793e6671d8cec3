//! Monte Carlo simulation of the physical two-ray channel.
//!
//! Each sample draws the received phasor
//! `V = √ζ V₁ e^{jφ₁} + √ζ V₂ e^{jφ₂} + X + jY` with `ζ ~ Gamma(m, 1/m)`,
//! independent uniform phases and Gaussian diffuse components, and returns
//! `|V|²`. Samples are generated in fixed-size blocks, each with its own
//! ChaCha stream selected by block index, so results depend only on
//! `(seed, samples)` and never on batching or thread count.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Normal};
use rayon::prelude::*;

use crate::error::{domain, invalid, Result};
use crate::models::FtrParams;
use crate::outage::{ScenarioA, ScenarioB};
use crate::specfun::KahanSum;

/// Samples per RNG stream. Fixed so that results are independent of `batch`.
const BLOCK: u64 = 4096;

/// Simulation size, seed and work split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// Samples per worker task (rounded up to whole RNG blocks).
    pub batch: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            batch: 1 << 16,
        }
    }

    pub fn with_batch(self, batch: u64) -> Self {
        McConfig { batch, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(invalid("Monte Carlo needs at least one sample"));
        }
        if self.batch == 0 {
            return Err(invalid("batch size must be positive"));
        }
        Ok(())
    }
}

/// Specular amplitudes and diffuse variance realizing a parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecularAmplitudes {
    pub v1: f64,
    pub v2: f64,
    /// Per-dimension diffuse variance.
    pub sigma2: f64,
}

impl SpecularAmplitudes {
    /// `K = (V₁² + V₂²) / (2σ²)`.
    pub fn k(&self) -> f64 {
        (self.v1 * self.v1 + self.v2 * self.v2) / (2.0 * self.sigma2)
    }

    /// `Δ = 2V₁V₂ / (V₁² + V₂²)`, zero when both amplitudes vanish.
    pub fn delta(&self) -> f64 {
        let power = self.v1 * self.v1 + self.v2 * self.v2;
        if power == 0.0 {
            0.0
        } else {
            2.0 * self.v1 * self.v2 / power
        }
    }
}

/// Amplitudes `V₁ ≥ V₂` and `σ²` matching `(γ̄, K, Δ)`.
pub fn derive_amplitudes(p: &FtrParams) -> SpecularAmplitudes {
    let sigma2 = p.sigma2();
    let s = 2.0 * sigma2 * p.k;
    let plus = (s * (1.0 + p.delta)).sqrt();
    let minus = (s * (1.0 - p.delta)).sqrt();
    SpecularAmplitudes {
        v1: 0.5 * (plus + minus),
        v2: 0.5 * (plus - minus),
        sigma2,
    }
}

/// Draws `|V|²` for one parameter set.
#[derive(Debug, Clone)]
pub struct SnrSampler {
    amps: SpecularAmplitudes,
    zeta: Gamma<f64>,
    diffuse: Normal<f64>,
}

impl SnrSampler {
    pub fn new(p: &FtrParams) -> Result<Self> {
        p.validate()?;
        let amps = derive_amplitudes(p);
        let zeta = Gamma::new(p.m, 1.0 / p.m).map_err(|e| invalid(e.to_string()))?;
        let diffuse = Normal::new(0.0, amps.sigma2.sqrt()).map_err(|e| invalid(e.to_string()))?;
        Ok(SnrSampler {
            amps,
            zeta,
            diffuse,
        })
    }

    pub fn amplitudes(&self) -> SpecularAmplitudes {
        self.amps
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let root = self.zeta.sample(rng).sqrt();
        let phi1 = rng.random::<f64>() * TAU;
        let phi2 = rng.random::<f64>() * TAU;
        let x = self.diffuse.sample(rng);
        let y = self.diffuse.sample(rng);
        let (s1, c1) = phi1.sin_cos();
        let (s2, c2) = phi2.sin_cos();
        let re = root * (self.amps.v1 * c1 + self.amps.v2 * c2) + x;
        let im = root * (self.amps.v1 * s1 + self.amps.v2 * s2) + y;
        re * re + im * im
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Runs `work(rng, count)` on every RNG block and returns the results in
/// block order.
fn map_blocks<T, F>(cfg: &McConfig, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    cfg.validate()?;
    let blocks = cfg.samples.div_ceil(BLOCK);
    let per_task = cfg.batch.div_ceil(BLOCK).max(1);
    let tasks = blocks.div_ceil(per_task);
    let nested: Vec<Vec<T>> = (0..tasks)
        .into_par_iter()
        .map(|t| {
            let first = t * per_task;
            let last = (first + per_task).min(blocks);
            (first..last)
                .map(|b| {
                    let count = BLOCK.min(cfg.samples - b * BLOCK);
                    work(&mut block_rng(cfg.seed, b), count)
                })
                .collect()
        })
        .collect();
    Ok(nested.into_iter().flatten().collect())
}

/// `cfg.samples` SNR draws, in deterministic order.
pub fn sample_snr(p: &FtrParams, cfg: &McConfig) -> Result<Vec<f64>> {
    let sampler = SnrSampler::new(p)?;
    let blocks = map_blocks(cfg, |rng, n| (0..n).map(|_| sampler.draw(rng)).collect::<Vec<_>>())?;
    Ok(blocks.concat())
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

fn reduce(parts: Vec<(f64, f64)>, n: u64) -> Estimate {
    let mut sum = KahanSum::default();
    let mut sq = KahanSum::default();
    for (a, b) in parts {
        sum.add(a);
        sq.add(b);
    }
    let nf = n as f64;
    let mean = sum.value() / nf;
    let var = if n > 1 {
        ((sq.value() - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    Estimate {
        mean,
        stderr: (var / nf).sqrt(),
    }
}

/// Monte Carlo estimate of `E[f(γ)]`.
pub fn mc_mean<F>(p: &FtrParams, cfg: &McConfig, f: F) -> Result<Estimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    let sampler = SnrSampler::new(p)?;
    let parts = map_blocks(cfg, |rng, n| {
        let mut s = KahanSum::default();
        let mut q = KahanSum::default();
        for _ in 0..n {
            let v = f(sampler.draw(rng));
            s.add(v);
            q.add(v * v);
        }
        (s.value(), q.value())
    })?;
    Ok(reduce(parts, cfg.samples))
}

/// Fraction of successes with binomial standard error `√(p̂(1−p̂)/n)`.
fn binomial_estimate(hits: u64, n: u64) -> Estimate {
    let p = hits as f64 / n as f64;
    Estimate {
        mean: p,
        stderr: (p * (1.0 - p) / n as f64).sqrt(),
    }
}

fn interference<R: Rng + ?Sized>(rng: &mut R, exp: &Exp<f64>, l: u32, p_i: f64) -> f64 {
    (0..l).map(|_| exp.sample(rng)).sum::<f64>() * p_i
}

/// Simulated scenario A outage: `W/(Y+N₀) < R_th`.
pub fn mc_outage_a(sc: &ScenarioA, cfg: &McConfig) -> Result<Estimate> {
    sc.validate()?;
    let sampler = SnrSampler::new(&sc.channel)?;
    let exp = Exp::new(1.0).expect("unit rate");
    let hits = map_blocks(cfg, |rng, n| {
        (0..n)
            .filter(|_| {
                let w = sampler.draw(rng);
                let y = interference(rng, &exp, sc.l_interferers, sc.p_i);
                w < sc.r_th * (y + sc.n0)
            })
            .count() as u64
    })?;
    Ok(binomial_estimate(hits.iter().sum(), cfg.samples))
}

/// Simulated scenario B outage: `Σ_N W_i / Y < R̂_th`.
pub fn mc_outage_b(sc: &ScenarioB, cfg: &McConfig) -> Result<Estimate> {
    sc.validate()?;
    let sampler = SnrSampler::new(&sc.channel)?;
    let exp = Exp::new(1.0).expect("unit rate");
    let hits = map_blocks(cfg, |rng, n| {
        (0..n)
            .filter(|_| {
                let w: f64 = (0..sc.n_antennas).map(|_| sampler.draw(rng)).sum();
                let y = interference(rng, &exp, sc.l_interferers, sc.p_i);
                w < sc.r_th_hat * y
            })
            .count() as u64
    })?;
    Ok(binomial_estimate(hits.iter().sum(), cfg.samples))
}

/// Fraction of samples `≤ g` for every grid point `g`.
pub fn empirical_cdf(samples: &[f64], grid: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(domain("empirical CDF of an empty sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(grid
        .iter()
        .map(|&g| sorted.partition_point(|&v| v <= g) as f64 / n)
        .collect())
}

/// Fraction of samples in each bin `[edges[i], edges[i+1])`, divided by
/// the bin width.
pub fn histogram_density(samples: &[f64], edges: &[f64]) -> Result<Vec<f64>> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("histogram edges must be strictly increasing"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let below: Vec<usize> = edges.iter().map(|&e| sorted.partition_point(|&v| v < e)).collect();
    let n = samples.len().max(1) as f64;
    Ok(below
        .windows(2)
        .zip(edges.windows(2))
        .map(|(c, e)| (c[1] - c[0]) as f64 / n / (e[1] - e[0]))
        .collect())
}
