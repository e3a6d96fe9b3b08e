//! Appell system of the Mittag-Leffler measure: the `b_n` coefficients,
//! polynomial kernels `P_n(ω)`, moment kernels `M_n`, basis changes and
//! pairings of truncated chaos expansions.

mod chaos;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::dd::Dd;
use crate::special::{rgamma_real, MLParams};
use crate::tensor::multiindex::{binomial, factorial, multisets, runs};
use crate::tensor::{contract, sym_product, SymTensor};

pub use chaos::{ChaosVector, Role};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Taylor coefficients of `1 / E_β(z) = Σ b_n z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AppellCoeffs {
    pub beta: f64,
    pub b: Vec<f64>,
}

impl AppellCoeffs {
    /// `|b_n + Σ_{k=1}^n b_{n-k}/Γ(βk+1)|`.
    pub fn recursion_residual(&self, n: usize) -> f64 {
        let s: f64 = (1..=n).map(|k| self.b[n - k] * rgamma_real(self.beta * k as f64 + 1.0)).sum();
        (self.b[n] + s).abs()
    }
}

/// `b_0 = 1`, `b_n = -Σ_{k=1}^n b_{n-k} / Γ(βk+1)`, accumulated in double-double.
pub fn appell_coeffs(params: &MLParams, n: usize) -> Result<AppellCoeffs> {
    params.validate()?;
    let beta = params.beta;
    let w: Vec<Dd> = (0..=n).map(|k| crate::special::rgamma_dd(Dd::prod(beta, k as f64).add_f64(1.0))).collect();
    let mut b: Vec<Dd> = Vec::with_capacity(n + 1);
    b.push(Dd::ONE);
    for m in 1..=n {
        let mut s = Dd::ZERO;
        for k in 1..=m {
            s = s + b[m - k] * w[k];
        }
        b.push(-s);
    }
    Ok(AppellCoeffs { beta, b: b.into_iter().map(Dd::to_f64).collect() })
}

/// `sym(Tr^{⊗k})` in closed form: entry `k! Π (2m_i)! / ((2k)! Π m_i!)`
/// when every index occurs an even number `2m_i` of times, zero otherwise.
pub fn trace_power(dim: usize, k: usize) -> SymTensor {
    let norm = factorial(k) / factorial(2 * k);
    let mut t = SymTensor::zeros(dim, 2 * k);
    for key in multisets(dim, k) {
        let doubled: Vec<usize> = key.iter().flat_map(|&i| [i, i]).collect();
        let v: f64 = runs(&key).iter().map(|&(_, m)| factorial(2 * m) / factorial(m)).product();
        t.set(&doubled, Complex64::new(v * norm, 0.0));
    }
    t
}

/// Precomputed tables for one `(β, d, N)`: `b_n`, `sym(Tr^{⊗k})`, `P_n(0)`
/// for `n ≤ N` and `M_n` for `n ≤ 2N`.
#[derive(Debug, Clone)]
pub struct AppellSystem {
    params: MLParams,
    dim: usize,
    max_degree: usize,
    coeffs: AppellCoeffs,
    trace_powers: Vec<SymTensor>,
    p_zero: Vec<SymTensor>,
    moments: Vec<SymTensor>,
}

impl AppellSystem {
    pub fn new(params: MLParams, dim: usize, max_degree: usize) -> Result<Self> {
        params.validate()?;
        if dim == 0 {
            return Err(Error::InvalidParams("dimension must be at least 1".into()));
        }
        let coeffs = appell_coeffs(&params, max_degree)?;
        let trace_powers: Vec<SymTensor> = (0..=max_degree).map(|k| trace_power(dim, k)).collect();
        let p_zero = (0..=max_degree)
            .map(|n| {
                if n % 2 == 1 {
                    return SymTensor::zeros(dim, n);
                }
                let k = n / 2;
                let c = coeffs.b[k] * factorial(n) / 2f64.powi(k as i32);
                trace_powers[k].scale(Complex64::new(c, 0.0))
            })
            .collect();
        let moments = (0..=2 * max_degree)
            .map(|n| {
                if n % 2 == 1 {
                    return SymTensor::zeros(dim, n);
                }
                let m = n / 2;
                let c = factorial(n) / 2f64.powi(m as i32) * rgamma_real(params.beta * m as f64 + 1.0);
                trace_powers[m].scale(Complex64::new(c, 0.0))
            })
            .collect();
        Ok(AppellSystem { params, dim, max_degree, coeffs, trace_powers, p_zero, moments })
    }

    /// Process-wide cached system for `(β, d, N)`.
    pub fn shared(params: MLParams, dim: usize, max_degree: usize) -> Result<Arc<Self>> {
        type Cache = Mutex<HashMap<(u64, usize, usize), Arc<AppellSystem>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let key = (params.beta.to_bits(), dim, max_degree);
        if let Some(s) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(s.clone());
        }
        let sys = Arc::new(AppellSystem::new(params, dim, max_degree)?);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        if guard.len() >= 64 {
            guard.clear();
        }
        guard.insert(key, sys.clone());
        Ok(sys)
    }

    /// Shared system sized for the given vectors' truncations.
    pub fn for_vectors(vs: &[&ChaosVector]) -> Result<Arc<Self>> {
        let first = vs.first().ok_or_else(|| Error::InvalidParams("no vectors given".into()))?;
        for v in vs {
            first.check_compatible(v)?;
        }
        let n = vs.iter().map(|v| v.trunc()).max().unwrap_or(0);
        AppellSystem::shared(first.params, first.dim, n)
    }

    pub fn params(&self) -> &MLParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn coeffs(&self) -> &AppellCoeffs {
        &self.coeffs
    }

    pub fn trace_pow(&self, k: usize) -> Result<&SymTensor> {
        self.trace_powers.get(k).ok_or(Error::DegreeOverflow { degree: 2 * k, budget: 2 * self.max_degree })
    }

    /// `P_n(0)`.
    pub fn p_at_zero(&self, n: usize) -> Result<&SymTensor> {
        self.p_zero.get(n).ok_or(Error::DegreeOverflow { degree: n, budget: self.max_degree })
    }

    /// Moment kernel `M_n`, available up to `2N`.
    pub fn moment(&self, n: usize) -> Result<&SymTensor> {
        self.moments.get(n).ok_or(Error::DegreeOverflow { degree: n, budget: 2 * self.max_degree })
    }

    pub fn moment_budget(&self) -> usize {
        2 * self.max_degree
    }

    fn check_vector(&self, v: &ChaosVector) -> Result<()> {
        if v.dim != self.dim {
            return Err(Error::DimMismatch(self.dim, v.dim));
        }
        if !v.params.same_beta(&self.params) {
            return Err(Error::BetaMismatch(self.params.beta, v.params.beta));
        }
        if v.trunc() > self.max_degree {
            return Err(Error::DegreeOverflow { degree: v.trunc(), budget: self.max_degree });
        }
        Ok(())
    }

    /// `P_n(ω) = Σ_k b_k n!/(2^k (n-2k)!) · sym(Tr^{⊗k}) ⊗̂ ω^{⊗(n-2k)}`.
    pub fn kernel(&self, omega: &[Complex64], n: usize) -> Result<SymTensor> {
        if omega.len() != self.dim {
            return Err(Error::DimMismatch(self.dim, omega.len()));
        }
        if n > self.max_degree {
            return Err(Error::DegreeOverflow { degree: n, budget: self.max_degree });
        }
        let mut out = SymTensor::zeros(self.dim, n);
        for k in 0..=n / 2 {
            let c = self.coeffs.b[k] * factorial(n) / (2f64.powi(k as i32) * factorial(n - 2 * k));
            let term = sym_product(&self.trace_powers[k], &SymTensor::power(omega, n - 2 * k))?;
            out.axpy(Complex64::new(c, 0.0), &term)?;
        }
        Ok(out)
    }

    /// Test function in the P-basis to the monomial basis:
    /// `a_k = Σ_{n≥k} C(n,k) contract(φ_n, P_{n-k}(0))`.
    pub fn p_to_monomial(&self, v: &ChaosVector) -> Result<ChaosVector> {
        self.check_vector(v)?;
        if v.role != Role::Test {
            return Err(Error::BasisMismatch(format!("expected a P-basis test function, got {:?}", v.role)));
        }
        let mut out = ChaosVector::zeros(v.params, v.dim, Role::Monomial, v.trunc());
        for (n, phi) in v.kernels.iter().enumerate() {
            if phi.is_zero() {
                continue;
            }
            for k in (n % 2..=n).step_by(2) {
                let c = contract(phi, &self.p_zero[n - k])?;
                out.kernels[k].axpy(Complex64::new(binomial(n, k), 0.0), &c)?;
            }
        }
        Ok(out)
    }

    /// Monomial basis to the P-basis: `φ_k = Σ_{n≥k} C(n,k) contract(a_n, M_{n-k})`.
    pub fn monomial_to_p(&self, v: &ChaosVector) -> Result<ChaosVector> {
        self.check_vector(v)?;
        if v.role != Role::Monomial {
            return Err(Error::BasisMismatch(format!("expected a monomial-basis vector, got {:?}", v.role)));
        }
        let mut out = ChaosVector::zeros(v.params, v.dim, Role::Test, v.trunc());
        for (n, a) in v.kernels.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for k in (n % 2..=n).step_by(2) {
                let c = contract(a, &self.moments[n - k])?;
                out.kernels[k].axpy(Complex64::new(binomial(n, k), 0.0), &c)?;
            }
        }
        Ok(out)
    }

    /// Converts a test function (either basis) to the monomial basis.
    pub fn to_monomial(&self, v: &ChaosVector) -> Result<ChaosVector> {
        match v.role {
            Role::Monomial => {
                self.check_vector(v)?;
                Ok(v.clone())
            }
            Role::Test => self.p_to_monomial(v),
            Role::Distribution => Err(Error::BasisMismatch("a distribution has no monomial expansion".into())),
        }
    }

    /// Pointwise value of a test function (either basis) at ω.
    pub fn eval(&self, v: &ChaosVector, omega: &[Complex64]) -> Result<Complex64> {
        self.to_monomial(v)?.eval_monomial(omega)
    }

    /// Exact bilinear `E[f g]` of two test functions (either basis):
    /// `Σ_{m,n} ⟨M_{m+n}, a_m ⊗̂ b_n⟩`.
    pub fn l2_bilinear(&self, f: &ChaosVector, g: &ChaosVector) -> Result<Complex64> {
        let a = self.to_monomial(f)?;
        let b = self.to_monomial(g)?;
        let (ma, mb) = (a.max_degree(), b.max_degree());
        if ma + mb > self.moment_budget() {
            return Err(Error::DegreeOverflow { degree: ma + mb, budget: self.moment_budget() });
        }
        let mut s = ZERO;
        for (n, bn) in b.kernels.iter().enumerate().take(mb + 1) {
            if bn.is_zero() {
                continue;
            }
            for (m, am) in a.kernels.iter().enumerate().take(ma + 1) {
                if (m + n) % 2 == 1 || am.is_zero() {
                    continue;
                }
                s += contract(&self.moments[m + n], bn)?.pairing(am)?;
            }
        }
        Ok(s)
    }

    /// `L²(μ_β)` inner product `∫ f conj(g) dμ_β`.
    pub fn l2_pairing(&self, f: &ChaosVector, g: &ChaosVector) -> Result<Complex64> {
        self.l2_bilinear(f, &g.conj())
    }

    /// Distribution acting on a P-basis test function: `Σ n! ⟨Φ^{(n)}, φ^{(n)}⟩`.
    pub fn dual_pair(&self, big_phi: &ChaosVector, phi: &ChaosVector) -> Result<Complex64> {
        dual_pair(big_phi, phi)
    }

    /// The distribution `Φ_g` with `⟨⟨Φ_g, φ⟩⟩ = E[g φ]` for every test
    /// function of degree ≤ N: `Φ_g^{(k)} = E[g P_k] / k!`.
    pub fn embed(&self, g: &ChaosVector) -> Result<ChaosVector> {
        let a = self.to_monomial(g)?;
        let n = self.max_degree;
        // T_i = E[g ω^{⊗i}] = Σ_j contract(M_{i+j}, a_j)
        let mut t: Vec<SymTensor> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut ti = SymTensor::zeros(self.dim, i);
            for (j, aj) in a.kernels.iter().enumerate() {
                if (i + j) % 2 == 1 || aj.is_zero() {
                    continue;
                }
                ti.axpy(Complex64::new(1.0, 0.0), &contract(self.moment(i + j)?, aj)?)?;
            }
            t.push(ti);
        }
        let mut out = ChaosVector::zeros(g.params, g.dim, Role::Distribution, n);
        for k in 0..=n {
            for i in (k % 2..=k).step_by(2) {
                if t[i].is_zero() {
                    continue;
                }
                let term = sym_product(&t[i], &self.p_zero[k - i])?;
                out.kernels[k].axpy(Complex64::new(binomial(k, i) / factorial(k), 0.0), &term)?;
            }
        }
        Ok(out)
    }
}

/// `Σ_n n! ⟨Φ^{(n)}, φ^{(n)}⟩` for a distribution and a P-basis test function.
pub fn dual_pair(big_phi: &ChaosVector, phi: &ChaosVector) -> Result<Complex64> {
    big_phi.check_compatible(phi)?;
    if big_phi.role != Role::Distribution || phi.role != Role::Test {
        return Err(Error::BasisMismatch(format!(
            "dual pairing needs (distribution, P-basis test function), got ({:?}, {:?})",
            big_phi.role, phi.role
        )));
    }
    let mut s = ZERO;
    for (n, (a, b)) in big_phi.kernels.iter().zip(&phi.kernels).enumerate() {
        s += a.pairing(b)? * factorial(n);
    }
    Ok(s)
}

/// `P_n(ω)` as a symmetric tensor.
pub fn appell_kernel(params: &MLParams, omega: &[Complex64], n: usize) -> Result<SymTensor> {
    AppellSystem::shared(*params, omega.len(), n)?.kernel(omega, n)
}

/// Moment kernel `M_n` with `⟨M_n, θ^{⊗n}⟩ = ∫ ⟨ω, θ⟩^n dμ_β(ω)`.
pub fn moment_kernel(params: &MLParams, n: usize, d: usize) -> Result<SymTensor> {
    params.validate()?;
    if n % 2 == 1 {
        return Ok(SymTensor::zeros(d, n));
    }
    let m = n / 2;
    let c = factorial(n) / 2f64.powi(m as i32) * rgamma_real(params.beta * m as f64 + 1.0);
    Ok(trace_power(d, m).scale(Complex64::new(c, 0.0)))
}

pub fn p_to_monomial(v: &ChaosVector) -> Result<ChaosVector> {
    AppellSystem::for_vectors(&[v])?.p_to_monomial(v)
}

pub fn monomial_to_p(v: &ChaosVector) -> Result<ChaosVector> {
    AppellSystem::for_vectors(&[v])?.monomial_to_p(v)
}

/// `∫ f conj(g) dμ_β` for truncated test functions.
pub fn l2_pairing(f: &ChaosVector, g: &ChaosVector) -> Result<Complex64> {
    AppellSystem::for_vectors(&[f, g])?.l2_pairing(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::trace_tensor;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn coefficients() {
        let p = MLParams::new(1.0).unwrap();
        let b = appell_coeffs(&p, 10).unwrap();
        for (n, &v) in b.b.iter().enumerate() {
            let want = if n % 2 == 0 { 1.0 } else { -1.0 } / factorial(n);
            assert!((v - want).abs() < 1e-16, "n={n}");
        }
        let p = MLParams::new(0.37).unwrap();
        let b = appell_coeffs(&p, 20).unwrap();
        assert_eq!(b.b[0], 1.0);
        assert!((b.b[1] + rgamma_real(1.37)).abs() < 1e-16);
        for n in 1..=20 {
            assert!(b.recursion_residual(n) < 1e-12);
        }
    }

    #[test]
    fn trace_power_pairs_to_dot_power() {
        let th = [c(0.3), c(-1.2), c(0.7)];
        let dot: Complex64 = th.iter().map(|x| x * x).sum();
        for k in 0..5 {
            let v = trace_power(3, k).pair_power(&th);
            assert!((v - dot.powi(k as i32)).norm() < 1e-13, "k={k}");
        }
        assert_eq!(trace_power(2, 1), trace_tensor(2));
        let t2 = sym_product(&trace_tensor(3), &trace_tensor(3)).unwrap();
        assert!(t2.max_abs_diff(&trace_power(3, 2)).unwrap() < 1e-16);
    }

    #[test]
    fn low_order_kernels() {
        let p = MLParams::new(0.6).unwrap();
        let w = [c(0.4), c(-0.9)];
        let sys = AppellSystem::new(p, 2, 4).unwrap();
        assert_eq!(sys.kernel(&w, 0).unwrap(), SymTensor::one(2));
        assert_eq!(sys.kernel(&w, 1).unwrap(), SymTensor::from_vector(&w));
        let p2 = sys.kernel(&w, 2).unwrap();
        let want = SymTensor::power(&w, 2).sub(&trace_tensor(2).scale(c(rgamma_real(1.6)))).unwrap();
        assert!(p2.max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn hermite_limit() {
        let p = MLParams::new(1.0).unwrap();
        let sys = AppellSystem::new(p, 1, 8).unwrap();
        for &x in &[-2.0, 0.0, 2.0] {
            let (mut h0, mut h1) = (1.0, x);
            for n in 0..=8 {
                let hn = if n == 0 { 1.0 } else { h1 };
                let got = sys.kernel(&[c(x)], n).unwrap().pair_power(&[c(1.0)]);
                assert!((got.re - hn).abs() < 1e-11, "n={n} x={x}");
                if n >= 1 {
                    let h2 = x * h1 - n as f64 * h0;
                    h0 = h1;
                    h1 = h2;
                }
            }
        }
    }

    #[test]
    fn moments_match_closed_forms() {
        let p = MLParams::new(0.5).unwrap();
        let phi = [c(0.8), c(-0.3)];
        let n2: Complex64 = phi.iter().map(|x| x * x).sum();
        assert!(moment_kernel(&p, 1, 2).unwrap().is_zero());
        let m2 = moment_kernel(&p, 2, 2).unwrap().pair_power(&phi);
        assert!((m2 - n2 * rgamma_real(1.5)).norm() < 1e-15);
        let m4 = moment_kernel(&p, 4, 2).unwrap().pair_power(&phi);
        assert!((m4 - 6.0 * n2 * n2 * rgamma_real(2.0)).norm() < 1e-14);
    }

    #[test]
    fn basis_change_examples() {
        let p = MLParams::new(0.5).unwrap();
        let sys = AppellSystem::new(p, 2, 4).unwrap();
        let lin = ChaosVector::single(p, Role::Test, SymTensor::basis(2, 1));
        assert_eq!(sys.p_to_monomial(&lin).unwrap().kernels[1], lin.kernels[1]);

        let phi2 = SymTensor::from_fn(2, 2, |k| c(1.0 + k[0] as f64 + 2.0 * k[1] as f64));
        let m = sys.p_to_monomial(&ChaosVector::single(p, Role::Test, phi2.clone())).unwrap();
        assert_eq!(m.kernels[2], phi2);
        let b1 = sys.coeffs().b[1];
        let want = trace_tensor(2).pairing(&phi2).unwrap() * b1;
        assert!((m.kernels[0].scalar_value() - want).norm() < 1e-15);

        // ω^{⊗2} = P_2 + M_2
        let sq = ChaosVector::single(p, Role::Monomial, phi2.clone());
        let back = sys.monomial_to_p(&sq).unwrap();
        assert_eq!(back.kernels[2], phi2);
        let m0 = sys.moment(2).unwrap().pairing(&phi2).unwrap();
        assert!((back.kernels[0].scalar_value() - m0).norm() < 1e-15);

        let one = ChaosVector::constant(p, 2, Role::Monomial, c(2.5));
        assert_eq!(sys.monomial_to_p(&one).unwrap().kernels[0], SymTensor::scalar(2, c(2.5)));
    }

    #[test]
    fn hermite_expansion_of_fourth_power() {
        let p = MLParams::new(1.0).unwrap();
        let sys = AppellSystem::new(p, 1, 4).unwrap();
        let w4 = ChaosVector::single(p, Role::Monomial, SymTensor::power(&[c(1.0)], 4));
        let h = sys.monomial_to_p(&w4).unwrap();
        let coeff: Vec<f64> = h.kernels.iter().map(|k| k.get(&vec![0; k.degree()]).re).collect();
        assert_eq!(coeff, vec![3.0, 0.0, 6.0, 0.0, 1.0]);
    }

    #[test]
    fn l2_examples() {
        let p = MLParams::new(0.5).unwrap();
        let one = ChaosVector::constant(p, 2, Role::Test, c(1.0));
        assert!((l2_pairing(&one, &one).unwrap() - 1.0).norm() < 1e-15);
        let phi = [c(0.6), Complex64::new(0.2, -0.4)];
        let lin = ChaosVector::single(p, Role::Test, SymTensor::from_vector(&phi));
        let norm2: f64 = phi.iter().map(|x| x.norm_sqr()).sum();
        assert!((l2_pairing(&lin, &lin).unwrap() - norm2 * rgamma_real(1.5)).norm() < 1e-15);
        let a = SymTensor::from_fn(2, 2, |k| c(0.3 + k[1] as f64));
        let p2 = ChaosVector::single(p, Role::Test, a);
        assert!(l2_pairing(&p2, &one).unwrap().norm() < 1e-15);
    }

    #[test]
    fn overflow_is_reported() {
        let p = MLParams::new(0.5).unwrap();
        let sys = AppellSystem::new(p, 2, 2).unwrap();
        let big = ChaosVector::single(p, Role::Test, SymTensor::power(&[c(1.0), c(0.0)], 3));
        assert!(matches!(sys.p_to_monomial(&big), Err(Error::DegreeOverflow { .. })));
        assert!(matches!(sys.moment(5), Err(Error::DegreeOverflow { .. })));
    }
}
