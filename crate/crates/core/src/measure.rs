//! Seeded sampling of the Mittag-Leffler measure by stable subordination, and
//! Monte Carlo estimators.
//!
//! A draw is `ω = √τ g` with `g` standard normal in `R^d` and `τ = S^{-β}`,
//! where `S` is one-sided β-stable with `E e^{-sS} = e^{-s^β}` (Kanter's
//! construction). Then `E e^{-sτ} = E_β(-s)` and `E e^{i⟨ω,φ⟩} = E_β(-½⟨φ,φ⟩)`.
//!
//! Samples are generated in fixed blocks of [`BLOCK`] indices, each from its own
//! ChaCha8 stream, and all sums are pairwise over a fixed split, so results do
//! not depend on the number of worker threads.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::appell::{AppellSystem, ChaosVector};
use crate::error::{Error, Result};
use crate::special::{gamma_real, kanter, m_wright, mittag_leffler_real, MLParams};

/// Samples per RNG stream.
pub const BLOCK: usize = 4096;

const PAIRWISE_LEAF: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub beta: f64,
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    /// Row-major `count × dim`.
    pub omegas: Vec<f64>,
    pub taus: Vec<f64>,
}

impl SampleBatch {
    pub fn omega(&self, i: usize) -> &[f64] {
        &self.omegas[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl IndexedParallelIterator<Item = &[f64]> {
        self.omegas.par_chunks(self.dim.max(1))
    }

    /// CSV with columns `tau,omega_1,...,omega_d`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header: Vec<String> =
            std::iter::once("tau".to_string()).chain((1..=self.dim).map(|k| format!("omega_{k}"))).collect();
        writeln!(w, "{}", header.join(","))?;
        for (i, tau) in self.taus.iter().enumerate() {
            write!(w, "{tau:e}")?;
            for x in self.omega(i) {
                write!(w, ",{x:e}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    #[serde(with = "crate::cjson::one")]
    pub value: Complex64,
    /// Sample standard deviation over `√count`; for complex samples the
    /// deviations of both parts are combined.
    pub std_error: f64,
    pub count: usize,
}

impl MCEstimate {
    /// `|value - analytic| / std_error`; infinite when the error is zero but the values differ.
    pub fn sigmas(&self, analytic: Complex64) -> f64 {
        let d = (self.value - analytic).norm();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }

    pub fn within(&self, analytic: Complex64, k: f64, slack: f64) -> bool {
        (self.value - analytic).norm() <= k * self.std_error + slack
    }

    pub fn report(&self, analytic: Complex64) -> EstimateReport {
        EstimateReport {
            value: self.value,
            std_error: self.std_error,
            count: self.count,
            analytic,
            sigmas: self.sigmas(analytic),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    #[serde(with = "crate::cjson::one")]
    pub value: Complex64,
    pub std_error: f64,
    pub count: usize,
    #[serde(with = "crate::cjson::one")]
    pub analytic: Complex64,
    pub sigmas: f64,
}

fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::BetaOutOfRange(beta));
    }
    Ok(())
}

/// One-sided β-stable draw `S = (A(U)/W)^{(1-β)/β}`.
fn stable(beta: f64, rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.sample::<f64, _>(Open01) * PI;
        let w: f64 = rng.sample(Exp1);
        let s = (kanter(beta, u) / w).powf((1.0 - beta) / beta);
        if s.is_finite() && s > 0.0 {
            return s;
        }
    }
}

fn subordinator(beta: f64, rng: &mut ChaCha8Rng) -> f64 {
    if beta == 1.0 {
        1.0
    } else {
        stable(beta, rng).powf(-beta)
    }
}

/// `n` draws from the M-Wright density. For `β = 1` the law is the point
/// mass at 1 and the stream is constant.
pub fn sample_subordinator(beta: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    check_beta(beta)?;
    let blocks = n.div_ceil(BLOCK);
    let out: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let len = BLOCK.min(n - b * BLOCK);
            (0..len).map(|_| subordinator(beta, &mut rng)).collect()
        })
        .collect();
    Ok(out.concat())
}

/// `n` draws from `μ_β` on `R^d`.
pub fn sample_measure(params: &MLParams, dim: usize, n: usize, seed: u64) -> Result<SampleBatch> {
    params.validate()?;
    check_beta(params.beta)?;
    if dim == 0 {
        return Err(Error::InvalidParams("dimension must be positive".into()));
    }
    let beta = params.beta;
    let blocks = n.div_ceil(BLOCK);
    let parts: Vec<(Vec<f64>, Vec<f64>)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let len = BLOCK.min(n - b * BLOCK);
            let mut taus = Vec::with_capacity(len);
            let mut omegas = Vec::with_capacity(len * dim);
            for _ in 0..len {
                let tau = subordinator(beta, &mut rng);
                let r = tau.sqrt();
                taus.push(tau);
                omegas.extend((0..dim).map(|_| r * rng.sample::<f64, _>(StandardNormal)));
            }
            (omegas, taus)
        })
        .collect();
    let (mut omegas, mut taus) = (Vec::with_capacity(n * dim), Vec::with_capacity(n));
    for (o, t) in parts {
        omegas.extend(o);
        taus.extend(t);
    }
    Ok(SampleBatch { beta, dim, count: n, seed, omegas, taus })
}

/// Pairwise sum over a fixed recursive split.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_LEAF {
        let mut acc = [0.0f64; 4];
        let chunks = xs.chunks_exact(4);
        let rest: f64 = chunks.remainder().iter().sum();
        for c in chunks {
            for (a, x) in acc.iter_mut().zip(c) {
                *a += x;
            }
        }
        return (acc[0] + acc[1]) + (acc[2] + acc[3]) + rest;
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    let (x, y) = rayon::join(|| pairwise_sum(a), || pairwise_sum(b));
    x + y
}

fn mean_and_se(re: &[f64], im: &[f64]) -> MCEstimate {
    let n = re.len();
    if n == 0 {
        return MCEstimate { value: Complex64::default(), std_error: f64::INFINITY, count: 0 };
    }
    let nf = n as f64;
    let (mr, mi) = (pairwise_sum(re) / nf, pairwise_sum(im) / nf);
    let dev: Vec<f64> = re.par_iter().zip(im).map(|(a, b)| (a - mr).powi(2) + (b - mi).powi(2)).collect();
    let var = if n > 1 { pairwise_sum(&dev) / (nf - 1.0) } else { f64::INFINITY };
    MCEstimate { value: Complex64::new(mr, mi), std_error: (var / nf).sqrt(), count: n }
}

/// Mean of `f(ω_i)` over the batch.
pub fn estimate<F>(batch: &SampleBatch, f: F) -> MCEstimate
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let (re, im): (Vec<f64>, Vec<f64>) = batch.rows().map(|w| {
        let v = f(w);
        (v.re, v.im)
    }).unzip();
    mean_and_se(&re, &im)
}

/// Mean of `f(τ_i)` over a subordinator stream.
pub fn estimate_scalar<F>(xs: &[f64], f: F) -> MCEstimate
where
    F: Fn(f64) -> f64 + Sync,
{
    let re: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect();
    mean_and_se(&re, &vec![0.0; re.len()])
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_dim(batch: &SampleBatch, len: usize) -> Result<()> {
    if batch.dim != len {
        return Err(Error::DimMismatch(batch.dim, len));
    }
    Ok(())
}

/// `∫ f conj(g) dμ_β` for test functions in either basis.
pub fn mc_pair(batch: &SampleBatch, f: &ChaosVector, g: &ChaosVector) -> Result<MCEstimate> {
    check_dim(batch, f.dim)?;
    check_dim(batch, g.dim)?;
    let sys = AppellSystem::for_vectors(&[f, g])?;
    let (a, b) = (sys.to_monomial(f)?, sys.to_monomial(g)?);
    Ok(estimate(batch, |w| {
        let w: Vec<Complex64> = w.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        // dimensions and bases were checked above
        a.eval_monomial(&w).unwrap_or_default() * b.eval_monomial(&w).unwrap_or_default().conj()
    }))
}

/// `∫ ⟨ω,φ⟩⟨ω,ψ⟩ dμ_β`; the exact value is `⟨φ,ψ⟩ / Γ(β+1)`.
pub fn mc_covariance_pair(batch: &SampleBatch, phi: &[f64], psi: &[f64]) -> Result<MCEstimate> {
    check_dim(batch, phi.len())?;
    check_dim(batch, psi.len())?;
    Ok(estimate(batch, |w| Complex64::new(dot(w, phi) * dot(w, psi), 0.0)))
}

pub fn covariance_exact(params: &MLParams, phi: &[f64], psi: &[f64]) -> Result<f64> {
    Ok(dot(phi, psi) / gamma_real(params.beta + 1.0))
}

/// `∫ ⟨ω,φ⟩^k dμ_β`.
pub fn mc_moment(batch: &SampleBatch, phi: &[f64], k: u32) -> Result<MCEstimate> {
    check_dim(batch, phi.len())?;
    Ok(estimate(batch, |w| Complex64::new(dot(w, phi).powi(k as i32), 0.0)))
}

/// `(2n)! / (2^n Γ(βn+1)) |φ|^{2n}` for `k = 2n`, zero for odd `k`.
pub fn moment_exact(params: &MLParams, phi: &[f64], k: u32) -> Result<f64> {
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let n = (k / 2) as i32;
    let fact: f64 = (1..=k).map(f64::from).product();
    Ok(fact / (2f64.powi(n) * gamma_real(params.beta * n as f64 + 1.0)) * dot(phi, phi).powi(n))
}

/// Empirical characteristic function `E e^{i⟨ω,φ⟩}`; the exact value is `E_β(-½⟨φ,φ⟩)`.
pub fn mc_characteristic(batch: &SampleBatch, phi: &[f64]) -> Result<MCEstimate> {
    check_dim(batch, phi.len())?;
    Ok(estimate(batch, |w| Complex64::new(0.0, dot(w, phi)).exp()))
}

/// `E e^{-sτ}`; the exact value is `E_β(-s)`.
pub fn mc_laplace(taus: &[f64], s: f64) -> MCEstimate {
    estimate_scalar(taus, |t| (-s * t).exp())
}

/// `P_t F(y) = ∫ F(e^{-t}y + √(1-e^{-2t}) ω) dμ_β(ω)` for `F = e^{i⟨·,ξ⟩}`.
pub fn mc_mehler(batch: &SampleBatch, t: f64, y: &[f64], xi: &[f64]) -> Result<MCEstimate> {
    check_dim(batch, y.len())?;
    check_dim(batch, xi.len())?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParams(format!("time must be non-negative, got {t}")));
    }
    let (a, b) = ((-t).exp(), (-(-2.0 * t).exp_m1()).sqrt());
    Ok(estimate(batch, |w| {
        let x: f64 = y.iter().zip(w).zip(xi).map(|((yk, wk), xk)| (a * yk + b * wk) * xk).sum();
        Complex64::new(0.0, x).exp()
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub centers: Vec<f64>,
    pub empirical: Vec<f64>,
    /// Bin averages of `M_β`.
    pub reference: Vec<f64>,
    pub sup_error: f64,
}

/// Histogram of the subordinator draws on `[0, upper)` against bin averages
/// of the M-Wright density.
pub fn density_check(params: &MLParams, taus: &[f64], upper: f64, bins: usize) -> Result<DensityCheck> {
    if params.beta >= 1.0 {
        return Err(Error::BetaOutOfRange(params.beta));
    }
    if bins == 0 || upper.is_nan() || upper <= 0.0 || taus.is_empty() {
        return Err(Error::InvalidParams("density check needs bins, a positive range and samples".into()));
    }
    let h = upper / bins as f64;
    let mut counts = vec![0usize; bins];
    for &t in taus {
        if t < upper {
            counts[((t / h) as usize).min(bins - 1)] += 1;
        }
    }
    let n = taus.len() as f64;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / (n * h)).collect();
    // 5-point Gauss-Legendre per bin
    const X: [f64; 5] = [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
    const W: [f64; 5] = [0.236_926_885_056_189, 0.478_628_670_499_366, 0.568_888_888_888_889, 0.478_628_670_499_366, 0.236_926_885_056_189];
    let mut reference = Vec::with_capacity(bins);
    for b in 0..bins {
        let c = (b as f64 + 0.5) * h;
        let mut s = 0.0;
        for (x, w) in X.iter().zip(W) {
            s += w * m_wright(params, c + 0.5 * h * x)?;
        }
        reference.push(0.5 * s);
    }
    let sup_error = empirical.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let centers = (0..bins).map(|b| (b as f64 + 0.5) * h).collect();
    Ok(DensityCheck { centers, empirical, reference, sup_error })
}

/// `E_β(-s)`, the Laplace transform of the subordinator.
pub fn laplace_exact(params: &MLParams, s: f64) -> Result<f64> {
    mittag_leffler_real(params, -s)
}
