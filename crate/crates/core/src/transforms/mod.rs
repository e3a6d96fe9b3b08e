//! μ_β-exponentials, the S- and T-transforms and the exponential pairing.

mod domain;

use num_complex::Complex64;

use crate::appell::{dual_pair, ChaosVector, Role};
use crate::error::{Error, Result};
use crate::special::{mittag_leffler, MLParams};
use crate::tensor::multiindex::factorial;
use crate::tensor::SymTensor;

pub use domain::{domain_radius, epsilon_beta, DomainRadius};

/// Largest admissible `Σ_{n>N} |ξ|^n / n!` (the tail at `|ω| = 1`).
pub const MAX_UNIT_TAIL: f64 = 1e-3;

/// Bilinear form `⟨a, b⟩ = Σ a_k b_k` (no conjugation).
pub fn bilinear(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean length `(Σ |ξ_k|²)^{1/2}`.
pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `Σ_{n>N} x^n / n!` for `x ≥ 0`.
pub fn exp_tail(x: f64, trunc: usize) -> f64 {
    let mut term = 1.0;
    for n in 1..=trunc {
        term *= x / n as f64;
    }
    let mut s = 0.0;
    let mut n = trunc + 1;
    loop {
        term *= x / n as f64;
        s += term;
        if term <= 1e-17 * s || term == 0.0 {
            return s;
        }
        n += 1;
    }
}

/// Fails with `OutsideDomain` unless `½|⟨ξ,ξ⟩| < ε_β`.
pub fn check_domain(params: &MLParams, xi: &[Complex64]) -> Result<()> {
    let eps = epsilon_beta(params)?;
    let half = 0.5 * bilinear(xi, xi).norm();
    if half < eps {
        Ok(())
    } else {
        Err(Error::OutsideDomain(format!("½|⟨ξ,ξ⟩| = {half:.6} is not below ε_β = {eps:.6} (β = {})", params.beta)))
    }
}

/// `l_β(ξ) = E_β(½⟨ξ,ξ⟩)`, the normalizer of the μ_β-exponential.
pub fn normalizer(params: &MLParams, xi: &[Complex64]) -> Result<Complex64> {
    mittag_leffler(params, 0.5 * bilinear(xi, xi))
}

/// Truncated μ_β-exponential `e_{μβ}(·; ξ) = Σ_{n≤N} ⟨P_n(·), ξ^{⊗n}⟩ / n!`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpVector {
    pub xi: Vec<Complex64>,
    pub trunc: usize,
    pub body: ChaosVector,
}

impl ExpVector {
    /// Bound on the neglected terms at `|ω| = omega_norm`.
    pub fn tail_bound(&self, omega_norm: f64) -> f64 {
        exp_tail(norm(&self.xi) * omega_norm, self.trunc)
    }

    /// Closed-form value `e^{⟨ω,ξ⟩} / E_β(½⟨ξ,ξ⟩)` of the untruncated exponential.
    pub fn exact_value(&self, omega: &[Complex64]) -> Result<Complex64> {
        Ok(bilinear(omega, &self.xi).exp() / normalizer(&self.body.params, &self.xi)?)
    }
}

pub fn exp_vector(params: &MLParams, xi: &[Complex64], trunc: usize) -> Result<ExpVector> {
    params.validate()?;
    if xi.is_empty() {
        return Err(Error::InvalidParams("ξ must have at least one component".into()));
    }
    check_domain(params, xi)?;
    let l = normalizer(params, xi)?;
    if l.re <= 0.0 {
        return Err(Error::OutsideDomain(format!("E_β(½⟨ξ,ξ⟩) = {l} has non-positive real part")));
    }
    let tail = exp_tail(norm(xi), trunc);
    if tail > MAX_UNIT_TAIL {
        return Err(Error::OutsideDomain(format!(
            "|ξ| = {:.4} leaves a truncation tail {tail:.3e} at degree {trunc}",
            norm(xi)
        )));
    }
    let kernels =
        (0..=trunc).map(|n| SymTensor::power(xi, n).scale(Complex64::new(1.0 / factorial(n), 0.0))).collect();
    let body = ChaosVector::new(*params, xi.len(), Role::Test, kernels)?;
    Ok(ExpVector { xi: xi.to_vec(), trunc, body })
}

/// `S Φ(ξ) = Σ_n ⟨Φ^{(n)}, ξ^{⊗n}⟩`.
pub fn s_transform(big_phi: &ChaosVector, xi: &[Complex64]) -> Result<Complex64> {
    if big_phi.role != Role::Distribution {
        return Err(Error::BasisMismatch(format!("S-transform needs a distribution, got {:?}", big_phi.role)));
    }
    if xi.len() != big_phi.dim {
        return Err(Error::DimMismatch(big_phi.dim, xi.len()));
    }
    check_domain(&big_phi.params, xi)?;
    Ok(big_phi.kernels.iter().map(|k| k.pair_power(xi)).sum())
}

/// `S Φ(ξ)` by pairing against the truncated exponential body; equal to
/// [`s_transform`] since the `n!` of the dual pairing cancels the `1/n!`.
pub fn s_transform_via_pairing(big_phi: &ChaosVector, xi: &[Complex64]) -> Result<Complex64> {
    let e = ExpVector {
        xi: xi.to_vec(),
        trunc: big_phi.trunc(),
        body: ChaosVector::new(
            big_phi.params,
            xi.len(),
            Role::Test,
            (0..=big_phi.trunc())
                .map(|n| SymTensor::power(xi, n).scale(Complex64::new(1.0 / factorial(n), 0.0)))
                .collect(),
        )?,
    };
    check_domain(&big_phi.params, xi)?;
    dual_pair(big_phi, &e.body)
}

/// `T Φ(φ) = E_β(-½⟨φ,φ⟩) · S Φ(iφ)`.
pub fn t_transform(big_phi: &ChaosVector, phi: &[Complex64]) -> Result<Complex64> {
    let i_phi: Vec<Complex64> = phi.iter().map(|x| x * Complex64::i()).collect();
    let s = s_transform(big_phi, &i_phi)?;
    Ok(mittag_leffler(&big_phi.params, -0.5 * bilinear(phi, phi))? * s)
}

/// `Î(ξ,η) = E_β(½⟨ξ+η,ξ+η⟩) / (E_β(½⟨ξ,ξ⟩) E_β(½⟨η,η⟩))`.
pub fn exp_pairing(params: &MLParams, xi: &[Complex64], eta: &[Complex64]) -> Result<Complex64> {
    if xi.len() != eta.len() {
        return Err(Error::DimMismatch(xi.len(), eta.len()));
    }
    let sum: Vec<Complex64> = xi.iter().zip(eta).map(|(a, b)| a + b).collect();
    for v in [xi, eta, &sum[..]] {
        check_domain(params, v)?;
    }
    Ok(normalizer(params, &sum)? / (normalizer(params, xi)? * normalizer(params, eta)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appell::AppellSystem;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_vector_gives_constant_one() {
        let p = MLParams::new(0.5).unwrap();
        let e = exp_vector(&p, &[c(0.0, 0.0); 3], 6).unwrap();
        assert_eq!(e.body.kernels[0].scalar_value(), c(1.0, 0.0));
        assert!(e.body.kernels[1..].iter().all(|k| k.is_zero()));
    }

    #[test]
    fn second_kernel_is_half_square() {
        let p = MLParams::new(0.5).unwrap();
        let xi = [c(0.3, 0.1), c(-0.2, 0.0)];
        let e = exp_vector(&p, &xi, 4).unwrap();
        let want = SymTensor::power(&xi, 2).scale(c(0.5, 0.0));
        assert!(e.body.kernels[2].max_abs_diff(&want).unwrap() < 1e-17);
    }

    #[test]
    fn body_matches_closed_form() {
        let p = MLParams::new(0.5).unwrap();
        let xi = [c(0.3, 0.0), c(-0.35, 0.0)];
        let e = exp_vector(&p, &xi, 20).unwrap();
        let sys = AppellSystem::new(p, 2, 20).unwrap();
        let omega = [c(1.2, 0.0), c(-1.5, 0.0)];
        let got = sys.eval(&e.body, &omega).unwrap();
        let want = e.exact_value(&omega).unwrap();
        assert!((got - want).norm() < 1e-8 + e.tail_bound(norm(&omega)));
    }

    #[test]
    fn domain_rejections() {
        let p = MLParams::new(0.5).unwrap();
        let eps = epsilon_beta(&p).unwrap();
        let big = (2.0 * eps).sqrt() * 1.01;
        assert!(matches!(exp_vector(&p, &[c(big, 0.0)], 40), Err(Error::OutsideDomain(_))));
        assert!(matches!(exp_vector(&p, &[c(1.5, 0.0)], 2), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn transform_examples() {
        let p = MLParams::new(0.5).unwrap();
        let xi = [c(0.2, -0.1), c(0.4, 0.0)];
        let q0 = ChaosVector::constant(p, 2, Role::Distribution, c(2.5, 1.0));
        assert_eq!(s_transform(&q0, &xi).unwrap(), c(2.5, 1.0));
        let y = [c(1.0, 0.0), c(-3.0, 0.5)];
        let q1 = ChaosVector::single(p, Role::Distribution, SymTensor::from_vector(&y));
        assert!((s_transform(&q1, &xi).unwrap() - bilinear(&y, &xi)).norm() < 1e-15);
        assert!((s_transform_via_pairing(&q1, &xi).unwrap() - bilinear(&y, &xi)).norm() < 1e-15);

        let one = ChaosVector::constant(p, 2, Role::Distribution, c(1.0, 0.0));
        let phi = [c(0.7, 0.0), c(-0.4, 0.0)];
        let ch = mittag_leffler(&p, -0.5 * bilinear(&phi, &phi)).unwrap();
        assert!((t_transform(&one, &phi).unwrap() - ch).norm() < 1e-15);
        let t1 = t_transform(&q1, &phi).unwrap();
        assert!((t1 - Complex64::i() * bilinear(&y, &phi) * ch).norm() < 1e-14);
        assert_eq!(t_transform(&q1, &[c(0.0, 0.0); 2]).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn pairing_examples() {
        let p = MLParams::new(0.5).unwrap();
        let xi = [c(0.3, 0.2), c(-0.1, 0.0)];
        let zero = [c(0.0, 0.0); 2];
        assert!((exp_pairing(&p, &xi, &zero).unwrap() - 1.0).norm() < 1e-15);
        let eta = [c(0.1, 0.0), c(0.25, -0.3)];
        assert!((exp_pairing(&p, &xi, &eta).unwrap() - exp_pairing(&p, &eta, &xi).unwrap()).norm() < 1e-15);
        let g = MLParams::new(1.0).unwrap();
        let v = exp_pairing(&g, &xi, &eta).unwrap();
        assert!((v - bilinear(&xi, &eta).exp()).norm() < 1e-14);
    }

    #[test]
    fn tail_sums() {
        assert!((exp_tail(1.0, 0) - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        assert_eq!(exp_tail(0.0, 3), 0.0);
        assert!((exp_tail(0.5, 2) - (0.5f64.exp() - 1.0 - 0.5 - 0.125)).abs() < 1e-16);
    }
}
