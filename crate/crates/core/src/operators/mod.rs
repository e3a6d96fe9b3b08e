//! Operator calculus on truncated chaos expansions.
//!
//! The index space is the coordinate basis: `∂_k = D_{e_k}` and `∂_k^*` its
//! adjoint under the dual pairing. Operators that lower degree act on every
//! role with the same kernel formula; creators embed test functions as
//! distributions first.

mod bounds;
mod kernel;
mod mehler;
mod rep;
mod symbol;

use num_complex::Complex64;

use crate::appell::{AppellSystem, ChaosVector, Role};
use crate::error::{Error, Result};
use crate::tensor::multiindex::{binomial, factorial, multiplicity};
use crate::tensor::{contract, sym_product, SymTensor};

pub use bounds::{norm_bound_report, BoundCase, BoundKind, BoundReport};
pub use kernel::{dual_pair_any, eta_form, integral_kernel_op};
pub use mehler::{
    mehler_baseline, mehler_exp, mehler_semigroup_defect, translation_vs_multiplication, MehlerBaseline,
    MehlerBaselineRow, TranslationCheck,
};
pub use rep::{OperatorKind, OperatorRep};
pub use symbol::{symbol, symbol_polynomiality, PolynomialityCheck, SymbolValue};

/// Largest chaos degree an operator output may reach.
pub const CAPACITY: usize = 64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Symmetric tensor with value 1 stored under the sorted key `k`; equal to
/// the sum over all orderings of `e_{k_1} ⊗ ... ⊗ e_{k_l}`, symmetrized.
pub(crate) fn key_unit(dim: usize, key: &[usize]) -> SymTensor {
    let mut t = SymTensor::zeros(dim, key.len());
    t.set(key, ONE);
    t
}

/// `e_{k_1} ⊗̂ ... ⊗̂ e_{k_l}` for one ordering of the key.
pub(crate) fn key_direction(dim: usize, key: &[usize]) -> SymTensor {
    key_unit(dim, key).scale(real(1.0 / multiplicity(key)))
}

/// `D(Φ^{(n)})`: kernel `m-n` receives `m!/(m-n)! · contract(φ^{(m)}, Φ^{(n)})`.
pub fn diff_const(kernel: &SymTensor, phi: &ChaosVector) -> Result<ChaosVector> {
    if kernel.dim() != phi.dim {
        return Err(Error::DimMismatch(phi.dim, kernel.dim()));
    }
    let n = kernel.degree();
    if n > phi.trunc() {
        return Err(Error::DegreeMismatch { expected: phi.trunc(), found: n });
    }
    let mut out = ChaosVector::zeros(phi.params, phi.dim, phi.role, phi.trunc() - n);
    for (m, k) in phi.kernels.iter().enumerate().skip(n) {
        if k.is_zero() {
            continue;
        }
        let c = factorial(m) / factorial(m - n);
        out.kernels[m - n].axpy(real(c), &contract(k, kernel)?)?;
    }
    Ok(out)
}

/// Gâteaux derivative `D_y`.
pub fn gateaux(y: &[Complex64], phi: &ChaosVector) -> Result<ChaosVector> {
    if y.len() != phi.dim {
        return Err(Error::DimMismatch(phi.dim, y.len()));
    }
    if phi.trunc() == 0 {
        return Ok(ChaosVector::zeros(phi.params, phi.dim, phi.role, 0));
    }
    diff_const(&SymTensor::from_vector(y), phi)
}

fn check_index(k: usize, dim: usize) -> Result<()> {
    if k >= dim {
        return Err(Error::InvalidParams(format!("basis index {k} out of range for dimension {dim}")));
    }
    Ok(())
}

/// `∂_k = D_{e_k}`.
pub fn annihilation(k: usize, phi: &ChaosVector) -> Result<ChaosVector> {
    check_index(k, phi.dim)?;
    if phi.trunc() == 0 {
        return Ok(ChaosVector::zeros(phi.params, phi.dim, phi.role, 0));
    }
    diff_const(&SymTensor::basis(phi.dim, k), phi)
}

/// Distribution form of `phi`: test functions are embedded at their own
/// truncation, which is exact against test functions of that degree.
pub(crate) fn as_distribution(phi: &ChaosVector) -> Result<ChaosVector> {
    match phi.role {
        Role::Distribution => Ok(phi.clone()),
        _ => AppellSystem::shared(phi.params, phi.dim, phi.trunc())?.embed(phi),
    }
}

/// `Ψ ↦ Σ_n Ψ^{(n)} ⊗̂ t` for a symmetric tensor `t` of degree `l`.
pub(crate) fn raise(psi: &ChaosVector, t: &SymTensor) -> Result<ChaosVector> {
    let l = t.degree();
    let trunc = psi.trunc() + l;
    if trunc > CAPACITY {
        return Err(Error::TruncationOverflow { degree: trunc, capacity: CAPACITY });
    }
    let mut out = ChaosVector::zeros(psi.params, psi.dim, Role::Distribution, trunc);
    for (n, k) in psi.kernels.iter().enumerate() {
        if !k.is_zero() {
            out.kernels[n + l] = sym_product(k, t)?;
        }
    }
    Ok(out)
}

/// Creation operator `∂_k^*`: `Q_n(G) ↦ Q_{n+1}(G ⊗̂ e_k)`.
pub fn creation(k: usize, phi: &ChaosVector) -> Result<ChaosVector> {
    check_index(k, phi.dim)?;
    raise(&as_distribution(phi)?, &SymTensor::basis(phi.dim, k))
}

/// Creation in the direction `y`: `Σ_k y_k ∂_k^*`.
pub fn creation_along(y: &[Complex64], phi: &ChaosVector) -> Result<ChaosVector> {
    if y.len() != phi.dim {
        return Err(Error::DimMismatch(phi.dim, y.len()));
    }
    raise(&as_distribution(phi)?, &SymTensor::from_vector(y))
}

fn check_function(phi: &ChaosVector, what: &str) -> Result<()> {
    if phi.role == Role::Distribution {
        return Err(Error::BasisMismatch(format!("{what} acts on test functions, got a distribution")));
    }
    Ok(())
}

/// `τ_y φ = φ(· + y)`: kernel `k` is `Σ_n C(n+k,k) contract(φ^{(n+k)}, y^{⊗n})`.
pub fn translate(y: &[Complex64], phi: &ChaosVector) -> Result<ChaosVector> {
    check_function(phi, "translation")?;
    if y.len() != phi.dim {
        return Err(Error::DimMismatch(phi.dim, y.len()));
    }
    let n_max = phi.trunc();
    let powers: Vec<SymTensor> = (0..=n_max).map(|n| SymTensor::power(y, n)).collect();
    let mut out = ChaosVector::zeros(phi.params, phi.dim, phi.role, n_max);
    for (m, k) in phi.kernels.iter().enumerate() {
        if k.is_zero() {
            continue;
        }
        for j in 0..=m {
            out.kernels[j].axpy(real(binomial(m, j)), &contract(k, &powers[m - j])?)?;
        }
    }
    Ok(out)
}

/// `Σ_{j≤K} D_y^j φ / j!`.
pub fn exp_gateaux(y: &[Complex64], phi: &ChaosVector, order: usize) -> Result<ChaosVector> {
    let mut acc = phi.clone();
    let mut term = phi.clone();
    for j in 1..=order {
        term = gateaux(y, &term)?.scale(real(1.0 / j as f64));
        if term.kernels.iter().all(|k| k.is_zero()) {
            break;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `σ_c φ = φ(c ·)` on a monomial-basis vector.
pub fn scale(c: f64, phi: &ChaosVector) -> Result<ChaosVector> {
    if phi.role != Role::Monomial {
        return Err(Error::BasisMismatch(format!(
            "scaling needs the monomial basis, got {:?}; convert with p_to_monomial first",
            phi.role
        )));
    }
    let mut out = phi.clone();
    for (m, k) in out.kernels.iter_mut().enumerate() {
        k.scale_mut(real(c.powi(m as i32)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appell::dual_pair;
    use crate::special::MLParams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params() -> MLParams {
        MLParams::new(0.5).unwrap()
    }

    #[test]
    fn diff_const_low_orders() {
        let p = params();
        let th = SymTensor::from_vector(&[c(1.0, 0.0), c(2.0, -1.0)]);
        let g = SymTensor::from_vector(&[c(0.5, 0.0), c(-1.0, 0.0)]);
        let phi = ChaosVector::single(p, Role::Test, th.clone());
        let out = diff_const(&g, &phi).unwrap();
        assert_eq!(out.kernels[0].scalar_value(), g.pairing(&th).unwrap());

        let th2 = SymTensor::from_fn(2, 2, |k| c(1.0 + k[0] as f64, k[1] as f64));
        let g2 = SymTensor::from_fn(2, 2, |k| c(0.5 * (k[0] + k[1]) as f64 - 0.2, 0.0));
        let phi2 = ChaosVector::single(p, Role::Test, th2.clone());
        let out2 = diff_const(&g2, &phi2).unwrap();
        assert!((out2.kernels[0].scalar_value() - 2.0 * g2.pairing(&th2).unwrap()).norm() < 1e-15);

        let g3 = SymTensor::from_fn(2, 3, |_| ONE);
        let padded = phi2.truncated(4);
        assert!(diff_const(&g3, &padded).unwrap().kernels.iter().all(|k| k.is_zero()));
        assert!(matches!(diff_const(&g3, &phi2), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn gateaux_of_linear_functional() {
        let p = params();
        let th = [c(0.3, 0.0), c(-1.1, 0.2)];
        let y = [c(2.0, 0.0), c(0.5, 0.0)];
        let phi = ChaosVector::single(p, Role::Test, SymTensor::from_vector(&th));
        let out = gateaux(&y, &phi).unwrap();
        assert!((out.kernels[0].scalar_value() - (y[0] * th[0] + y[1] * th[1])).norm() < 1e-15);
    }

    #[test]
    fn creation_on_vacuum() {
        let p = params();
        let one = ChaosVector::constant(p, 3, Role::Distribution, ONE);
        let out = creation(1, &one).unwrap();
        assert_eq!(out.kernels[1], SymTensor::basis(3, 1));
        assert!(out.kernels[0].is_zero());
        let test_one = ChaosVector::constant(p, 3, Role::Test, ONE);
        assert!(creation(1, &test_one).unwrap().max_abs_diff(&out).unwrap() < 1e-15);
    }

    #[test]
    fn creation_is_adjoint_of_annihilation() {
        let p = params();
        let big = ChaosVector::new(
            p,
            2,
            Role::Distribution,
            (0..=3).map(|n| SymTensor::from_fn(2, n, |k| c(0.3 * n as f64 - 0.1, k.iter().sum::<usize>() as f64))).collect(),
        )
        .unwrap();
        let phi = ChaosVector::new(
            p,
            2,
            Role::Test,
            (0..=4).map(|n| SymTensor::from_fn(2, n, |k| c(1.0 / (1 + n) as f64, -(k.len() as f64) * 0.1))).collect(),
        )
        .unwrap();
        for k in 0..2 {
            let lhs = dual_pair(&creation(k, &big).unwrap(), &phi).unwrap();
            let rhs = dual_pair(&big, &annihilation(k, &phi).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn translation_identity_and_exactness() {
        let p = params();
        let sys = AppellSystem::new(p, 2, 4).unwrap();
        let phi = ChaosVector::new(
            p,
            2,
            Role::Test,
            (0..=4).map(|n| SymTensor::from_fn(2, n, |k| c(0.2 + k.len() as f64 * 0.1, k.first().copied().unwrap_or(0) as f64))).collect(),
        )
        .unwrap();
        let zero = [c(0.0, 0.0); 2];
        assert_eq!(translate(&zero, &phi).unwrap(), phi);
        let y = [c(0.4, 0.0), c(-0.7, 0.0)];
        let w = [c(1.1, 0.0), c(0.3, 0.0)];
        let shifted: Vec<_> = w.iter().zip(&y).map(|(a, b)| a + b).collect();
        let lhs = sys.eval(&translate(&y, &phi).unwrap(), &w).unwrap();
        let rhs = sys.eval(&phi, &shifted).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        let series = exp_gateaux(&y, &phi, 4).unwrap();
        assert!(series.max_abs_diff(&translate(&y, &phi).unwrap()).unwrap() < 1e-12);
        assert!(matches!(translate(&y, &phi.clone().with_role(Role::Distribution)), Err(Error::BasisMismatch(_))));
    }

    #[test]
    fn scaling() {
        let p = params();
        let a = ChaosVector::new(
            p,
            1,
            Role::Monomial,
            vec![SymTensor::scalar(1, c(2.0, 0.0)), SymTensor::from_real_vector(&[3.0]), SymTensor::from_fn(1, 2, |_| c(-1.0, 0.0))],
        )
        .unwrap();
        assert_eq!(scale(1.0, &a).unwrap(), a);
        let z = scale(0.0, &a).unwrap();
        assert_eq!(z.kernels[0].scalar_value(), c(2.0, 0.0));
        assert!(z.kernels[1..].iter().all(|k| k.is_zero()));
        let w = [c(0.7, 0.0)];
        let lhs = scale(0.5, &a).unwrap().eval_monomial(&w).unwrap();
        let rhs = a.eval_monomial(&[c(0.35, 0.0)]).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
        assert!(matches!(scale(0.5, &a.with_role(Role::Test)), Err(Error::BasisMismatch(_))));
    }
}
