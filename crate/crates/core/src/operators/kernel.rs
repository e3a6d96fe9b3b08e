//! Integral kernel operators `Ξ_{l,m}(κ) = Σ κ[k; l] ∂_{k_1}^* ... ∂_{k_l}^* ∂_{l_1} ... ∂_{l_m}`.

use num_complex::Complex64;

use super::{as_distribution, diff_const, key_direction, key_unit, raise};
use crate::appell::{AppellSystem, ChaosVector, Role};
use crate::error::{Error, Result};
use crate::tensor::multiindex::multisets;
use crate::tensor::{SplitTensor, SymTensor};

/// `Ξ_{l,m}(κ) φ` as a distribution. The left block of `κ` indexes creators,
/// the right block annihilators.
pub fn integral_kernel_op(kappa: &SplitTensor, phi: &ChaosVector) -> Result<ChaosVector> {
    if kappa.dim() != phi.dim {
        return Err(Error::DimMismatch(phi.dim, kappa.dim()));
    }
    let (l, m) = (kappa.left(), kappa.right());
    let base = phi.trunc().saturating_sub(m);
    if base + l > super::CAPACITY {
        return Err(Error::TruncationOverflow { degree: base + l, capacity: super::CAPACITY });
    }
    let mut out = ChaosVector::zeros(phi.params, phi.dim, Role::Distribution, base + l);
    for left in multisets(phi.dim, l) {
        let slice = SymTensor::from_fn(phi.dim, m, |right| kappa.get(&left, right));
        if slice.is_zero() || m > phi.trunc() {
            continue;
        }
        let lowered = diff_const(&slice, phi)?;
        let psi = match phi.role {
            Role::Distribution => lowered,
            _ => AppellSystem::shared(phi.params, phi.dim, phi.trunc())?.embed(&lowered)?,
        };
        out = out.add(&raise(&psi, &key_unit(phi.dim, &left))?)?;
    }
    Ok(out)
}

/// `η_{φ,ψ}[k; l] = ⟨⟨∂_{k_1}^* ... ∂_{l_m} φ, ψ⟩⟩ = E[∂_{l⃗} φ · ∂_{k⃗} ψ]`,
/// so that `⟨⟨Ξ_{l,m}(κ) φ, ψ⟩⟩ = ⟨κ, η_{φ,ψ}⟩`.
pub fn eta_form(l: usize, m: usize, phi: &ChaosVector, psi: &ChaosVector) -> Result<SplitTensor> {
    phi.check_compatible(psi)?;
    for v in [phi, psi] {
        if v.role == Role::Distribution {
            return Err(Error::BasisMismatch("eta_form pairs two test functions".into()));
        }
    }
    let sys = AppellSystem::for_vectors(&[phi, psi])?;
    let lower = |key: &[usize], v: &ChaosVector| -> Result<Option<ChaosVector>> {
        if key.len() > v.trunc() {
            return Ok(None);
        }
        diff_const(&key_direction(v.dim, key), v).map(Some)
    };
    let rights: Vec<Option<ChaosVector>> =
        multisets(phi.dim, m).iter().map(|k| lower(k, phi)).collect::<Result<_>>()?;
    let lefts: Vec<Option<ChaosVector>> =
        multisets(phi.dim, l).iter().map(|k| lower(k, psi)).collect::<Result<_>>()?;
    let right_keys = multisets(phi.dim, m);
    let left_keys = multisets(phi.dim, l);
    let mut out = SplitTensor::zeros(phi.dim, l, m);
    for (lk, a) in left_keys.iter().zip(&lefts) {
        for (rk, b) in right_keys.iter().zip(&rights) {
            if let (Some(a), Some(b)) = (a, b) {
                let v = sys.l2_bilinear(b, a)?;
                if v != Complex64::new(0.0, 0.0) {
                    out.set(lk, rk, v);
                }
            }
        }
    }
    Ok(out)
}

/// `⟨⟨Ξ φ, ψ⟩⟩` for a distribution output and a test function in either basis.
pub fn dual_pair_any(big_phi: &ChaosVector, psi: &ChaosVector) -> Result<Complex64> {
    let psi = match psi.role {
        Role::Monomial => AppellSystem::for_vectors(&[psi])?.monomial_to_p(psi)?,
        _ => psi.clone(),
    };
    crate::appell::dual_pair(&as_distribution(big_phi)?, &psi)
}
