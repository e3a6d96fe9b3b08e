//! Empirical ratio tables for the operator norm bounds.
//!
//! Norms: `‖φ‖_{p,q}` is [`ChaosVector::test_norm`], `‖Φ‖_{-p,-q}` is
//! [`ChaosVector::dist_norm`] and `|·|_{±p}` the weighted tensor norms.
//! Constants use `2^{-2q}` where the stated form has `2^{2q}` and
//! `|−2qe log 2|` for the logarithmic factors, which keeps every right-hand
//! side positive for `p, q > 0`. Bounds are reported, never asserted.
//!
//! - translation: `‖τ_y φ‖_{p,q} ≤ ‖φ‖_{p+q,q} (1-2^{-2q})^{-1/2} exp(|y|²_{-(p+q)} / (2(1-2^{-2q})))`
//! - Gâteaux: `‖D_y φ‖_{p,q} ≤ (2^{-2q} / (2qe log 2))^{1/2} |y|_{-(p+q)} ‖φ‖_{p+q,q}`
//! - integral kernel: `‖Ξ_{l,m}(κ) φ‖_{-p,-q} ≤ 2^{-p} (l^l m^m)^{1/2} (2^{-p} / (2pe log 2))^{(l+m)/2} |κ|_{-p} ‖φ‖_{p,q}`

use std::f64::consts::{E, LN_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{gateaux, integral_kernel_op, translate};
use crate::appell::{ChaosVector, Role};
use crate::error::{Error, Result};
use crate::special::MLParams;
use crate::tensor::multiindex::factorial;
use crate::tensor::{weighted_norm, SplitTensor, SymTensor, WeightProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Translation,
    Gateaux,
    IntegralKernel,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::Translation => "translation",
            BoundKind::Gateaux => "gateaux",
            BoundKind::IntegralKernel => "integral_kernel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCase {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, or 0 when both sides vanish.
    pub ratio: f64,
}

impl BoundCase {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
        BoundCase { lhs, rhs, ratio }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub p: i32,
    pub q: i32,
    pub cases: Vec<BoundCase>,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// Cases with `lhs > rhs`.
    pub exceedances: usize,
}

const DIM: usize = 3;
const MAX_DEGREE: usize = 4;

fn normal_c(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_test(params: MLParams, rng: &mut ChaCha8Rng) -> ChaosVector {
    let n = rng.random_range(0..=MAX_DEGREE);
    let kernels =
        (0..=n).map(|k| SymTensor::from_fn(DIM, k, |_| normal_c(rng) / factorial(k))).collect::<Vec<_>>();
    ChaosVector::new(params, DIM, Role::Test, kernels).expect("consistent random kernels")
}

fn random_vector(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..DIM).map(|_| normal_c(rng) * 0.5).collect()
}

/// Left and right sides of one bound for the given inputs.
pub fn bound_case(
    kind: BoundKind,
    p: i32,
    q: i32,
    phi: &ChaosVector,
    y: &[Complex64],
    kappa: Option<&SplitTensor>,
) -> Result<BoundCase> {
    let (pf, qf) = (p as f64, q as f64);
    let shrink = (-2.0 * qf).exp2();
    match kind {
        BoundKind::Translation => {
            let lhs = translate(y, phi)?.test_norm(p, qf);
            let y_norm = weighted_norm(&SymTensor::from_vector(y), WeightProfile::new(-(p + q)));
            let rhs = phi.test_norm(p + q, qf) / (1.0 - shrink).sqrt() * (y_norm.powi(2) / (2.0 * (1.0 - shrink))).exp();
            Ok(BoundCase::new(lhs, rhs))
        }
        BoundKind::Gateaux => {
            let lhs = gateaux(y, phi)?.test_norm(p, qf);
            let y_norm = weighted_norm(&SymTensor::from_vector(y), WeightProfile::new(-(p + q)));
            let c = (shrink / (2.0 * qf * E * LN_2)).sqrt();
            Ok(BoundCase::new(lhs, c * y_norm * phi.test_norm(p + q, qf)))
        }
        BoundKind::IntegralKernel => {
            let kappa = kappa.ok_or_else(|| Error::InvalidParams("integral-kernel bound needs a kernel".into()))?;
            let (l, m) = (kappa.left() as f64, kappa.right() as f64);
            let lhs = integral_kernel_op(kappa, phi)?.dist_norm(p, qf);
            let pw = |x: f64| if x == 0.0 { 1.0 } else { x.powf(x) };
            let c = (-pf).exp2() * (pw(l) * pw(m)).sqrt() * ((-pf).exp2() / (2.0 * pf * E * LN_2)).powf((l + m) / 2.0);
            Ok(BoundCase::new(lhs, c * kappa.weighted_norm(WeightProfile::new(-p)) * phi.test_norm(p, qf)))
        }
    }
}

/// Ratio table over `cases` random inputs in dimension 3 with degrees ≤ 4.
pub fn norm_bound_report(kind: BoundKind, params: &MLParams, p: i32, q: i32, cases: usize, seed: u64) -> Result<BoundReport> {
    params.validate()?;
    if p < 1 || q < 1 {
        return Err(Error::InvalidParams(format!("bound reports need p, q ≥ 1, got p={p}, q={q}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(cases);
    for _ in 0..cases {
        let phi = random_test(*params, &mut rng);
        let y = random_vector(&mut rng);
        let kappa = match kind {
            BoundKind::IntegralKernel => {
                let (l, m) = loop {
                    let l = rng.random_range(0..=2usize);
                    let m = rng.random_range(0..=2usize);
                    if l + m > 0 {
                        break (l, m);
                    }
                };
                Some(SplitTensor::from_fn(DIM, l, m, |_, _| normal_c(&mut rng) * 0.5))
            }
            _ => None,
        };
        rows.push(bound_case(kind, p, q, &phi, &y, kappa.as_ref())?);
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let mean_ratio = if rows.is_empty() { 0.0 } else { rows.iter().map(|r| r.ratio).sum::<f64>() / rows.len() as f64 };
    let exceedances = rows.iter().filter(|r| r.lhs > r.rhs).count();
    Ok(BoundReport { kind, p, q, cases: rows, max_ratio, mean_ratio, exceedances })
}
