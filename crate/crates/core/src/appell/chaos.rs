//! Truncated chaos expansions: finite sequences of symmetric kernels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::MLParams;
use crate::tensor::multiindex::factorial;
use crate::tensor::{weighted_norm, SymTensor, WeightProfile};

/// What the kernels of a [`ChaosVector`] expand against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    /// Test function `φ = Σ ⟨P_n(·), φ^{(n)}⟩`.
    #[serde(rename = "test")]
    Test,
    /// Polynomial in the monomial basis `Σ ⟨ω^{⊗n}, a_n⟩`.
    #[serde(rename = "mono")]
    Monomial,
    /// Distribution `Φ = Σ Q_n(Φ^{(n)})`.
    #[serde(rename = "dist")]
    Distribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChaosJson")]
pub struct ChaosVector {
    #[serde(flatten)]
    pub params: MLParams,
    pub dim: usize,
    pub role: Role,
    /// `kernels[n]` has degree n.
    pub kernels: Vec<SymTensor>,
}

#[derive(Deserialize)]
struct ChaosJson {
    #[serde(flatten)]
    params: MLParams,
    dim: usize,
    role: Role,
    kernels: Vec<SymTensor>,
}

impl TryFrom<ChaosJson> for ChaosVector {
    type Error = Error;

    fn try_from(j: ChaosJson) -> Result<Self> {
        ChaosVector::new(j.params, j.dim, j.role, j.kernels)
    }
}

impl ChaosVector {
    pub fn new(params: MLParams, dim: usize, role: Role, kernels: Vec<SymTensor>) -> Result<Self> {
        params.validate()?;
        if dim == 0 {
            return Err(Error::InvalidParams("dimension must be at least 1".into()));
        }
        for (n, k) in kernels.iter().enumerate() {
            if k.degree() != n {
                return Err(Error::DegreeMismatch { expected: n, found: k.degree() });
            }
            if k.dim() != dim {
                return Err(Error::DimMismatch(dim, k.dim()));
            }
        }
        let kernels = if kernels.is_empty() { vec![SymTensor::zeros(dim, 0)] } else { kernels };
        Ok(ChaosVector { params, dim, role, kernels })
    }

    /// All-zero vector with kernels up to degree `trunc`.
    pub fn zeros(params: MLParams, dim: usize, role: Role, trunc: usize) -> Self {
        let kernels = (0..=trunc).map(|n| SymTensor::zeros(dim, n)).collect();
        ChaosVector { params, dim, role, kernels }
    }

    /// Constant function (or `Q_0(c)`).
    pub fn constant(params: MLParams, dim: usize, role: Role, c: Complex64) -> Self {
        ChaosVector { params, dim, role, kernels: vec![SymTensor::scalar(dim, c)] }
    }

    /// Single-kernel vector: `⟨P_n(·), θ⟩`, `⟨ω^{⊗n}, θ⟩` or `Q_n(θ)` by role.
    pub fn single(params: MLParams, role: Role, kernel: SymTensor) -> Self {
        let (dim, n) = (kernel.dim(), kernel.degree());
        let mut v = ChaosVector::zeros(params, dim, role, n);
        v.kernels[n] = kernel;
        v
    }

    /// Highest stored degree.
    pub fn trunc(&self) -> usize {
        self.kernels.len() - 1
    }

    /// Highest degree with a non-zero kernel (0 for the zero vector).
    pub fn max_degree(&self) -> usize {
        self.kernels.iter().rposition(|k| !k.is_zero()).unwrap_or(0)
    }

    /// Kernel of degree n, zero beyond the truncation.
    pub fn kernel(&self, n: usize) -> SymTensor {
        self.kernels.get(n).cloned().unwrap_or_else(|| SymTensor::zeros(self.dim, n))
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    /// Pads with zero kernels or drops kernels beyond `trunc`.
    pub fn truncated(&self, trunc: usize) -> Self {
        let kernels = (0..=trunc).map(|n| self.kernel(n)).collect();
        ChaosVector { params: self.params, dim: self.dim, role: self.role, kernels }
    }

    pub(crate) fn check_compatible(&self, other: &ChaosVector) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        if !self.params.same_beta(&other.params) {
            return Err(Error::BetaMismatch(self.params.beta, other.params.beta));
        }
        Ok(())
    }

    fn check_same_role(&self, other: &ChaosVector) -> Result<()> {
        self.check_compatible(other)?;
        if self.role != other.role {
            return Err(Error::BasisMismatch(format!("{:?} vs {:?}", self.role, other.role)));
        }
        Ok(())
    }

    /// `self + c · other`, over the larger truncation.
    pub fn axpy(&self, c: Complex64, other: &ChaosVector) -> Result<Self> {
        self.check_same_role(other)?;
        let trunc = self.trunc().max(other.trunc());
        let mut out = self.truncated(trunc);
        for (n, k) in other.kernels.iter().enumerate() {
            out.kernels[n].axpy(c, k)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &ChaosVector) -> Result<Self> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &ChaosVector) -> Result<Self> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for k in &mut out.kernels {
            k.scale_mut(c);
        }
        out
    }

    /// Complex conjugate of every kernel. For real ω this conjugates the
    /// function values in every role, since `P_n(ω)` is real.
    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for k in &mut out.kernels {
            *k = k.conj();
        }
        out
    }

    /// Largest kernel-entry difference over both truncations.
    pub fn max_abs_diff(&self, other: &ChaosVector) -> Result<f64> {
        self.check_compatible(other)?;
        let trunc = self.trunc().max(other.trunc());
        let mut m: f64 = 0.0;
        for n in 0..=trunc {
            m = m.max(self.kernel(n).max_abs_diff(&other.kernel(n))?);
        }
        Ok(m)
    }

    /// Largest kernel entry.
    pub fn max_abs(&self) -> f64 {
        self.kernels.iter().map(|k| k.max_abs()).fold(0.0, f64::max)
    }

    /// Test-function norm `‖φ‖_{p,q}² = Σ (n!)² 2^{nq} |φ^{(n)}|_p²`.
    pub fn test_norm(&self, p: i32, q: f64) -> f64 {
        let w = WeightProfile::new(p);
        self.kernels
            .iter()
            .enumerate()
            .map(|(n, k)| factorial(n).powi(2) * (n as f64 * q).exp2() * weighted_norm(k, w).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Distribution norm `‖Φ‖_{-p,-q}² = Σ 2^{-nq} |Φ^{(n)}|_{-p}²`.
    pub fn dist_norm(&self, p: i32, q: f64) -> f64 {
        let w = WeightProfile::new(-p);
        self.kernels
            .iter()
            .enumerate()
            .map(|(n, k)| (-(n as f64) * q).exp2() * weighted_norm(k, w).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Evaluates a monomial-basis vector at `ω`.
    pub fn eval_monomial(&self, omega: &[Complex64]) -> Result<Complex64> {
        if self.role != Role::Monomial {
            return Err(Error::BasisMismatch(format!("pointwise evaluation needs the monomial basis, got {:?}", self.role)));
        }
        if omega.len() != self.dim {
            return Err(Error::DimMismatch(self.dim, omega.len()));
        }
        Ok(self.kernels.iter().map(|k| k.pair_power(omega)).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_layout() {
        let p = MLParams::new(0.5).unwrap();
        let v = ChaosVector::single(p, Role::Distribution, SymTensor::basis(2, 1));
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains(r#""beta":0.5"#) && s.contains(r#""role":"dist""#), "{s}");
        let back: ChaosVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let bad = s.replace(r#""degree":1"#, r#""degree":2"#);
        assert!(serde_json::from_str::<ChaosVector>(&bad).is_err());
    }

    #[test]
    fn arithmetic_checks_roles() {
        let p = MLParams::new(0.5).unwrap();
        let a = ChaosVector::constant(p, 2, Role::Test, Complex64::new(1.0, 0.0));
        let b = ChaosVector::single(p, Role::Test, SymTensor::basis(2, 0));
        let s = a.add(&b).unwrap();
        assert_eq!(s.trunc(), 1);
        assert!(a.add(&b.clone().with_role(Role::Distribution)).is_err());
        let q = ChaosVector::constant(MLParams::new(0.7).unwrap(), 2, Role::Test, Complex64::new(1.0, 0.0));
        assert!(matches!(a.add(&q), Err(Error::BetaMismatch(..))));
    }
}
