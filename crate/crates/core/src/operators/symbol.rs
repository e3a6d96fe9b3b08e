//! Operator symbols `Ξ̂(ξ,η) = ⟨⟨Ξ e_{μβ}(·;ξ), e_{μβ}(·;η)⟩⟩`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::OperatorRep;
use crate::appell::{dual_pair, AppellSystem, ChaosVector, Role};
use crate::error::Result;
use crate::transforms::{exp_pairing, exp_vector, s_transform};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolValue {
    /// `Ξ` applied to the truncated `e(·;ξ)`, paired with the truncated `e(·;η)`.
    pub path_a: Complex64,
    /// S-transform of the (embedded) output at `η`.
    pub path_b: Complex64,
    /// `factor(ξ,η) · Î(ξ,η)` for operators with a known symbol.
    pub closed_form: Option<Complex64>,
    /// `Î(ξ,η)`.
    pub exp_pairing: Complex64,
}

/// Symbol at `(ξ, η)` with exponentials truncated at degree `trunc`.
pub fn symbol(op: &OperatorRep, xi: &[Complex64], eta: &[Complex64], trunc: usize) -> Result<SymbolValue> {
    let e_xi = exp_vector(&op.params, xi, trunc)?;
    let e_eta = exp_vector(&op.params, eta, trunc)?;
    let out = op.apply(&e_xi.body)?;
    let path_a = pair_with(&out, &e_eta.body)?;
    let dist = match out.role {
        Role::Distribution => out,
        _ => AppellSystem::shared(op.params, op.dim, trunc.max(out.trunc()))?.embed(&out)?,
    };
    let path_b = s_transform(&dist, eta)?;
    let hat_i = exp_pairing(&op.params, xi, eta)?;
    Ok(SymbolValue { path_a, path_b, closed_form: op.symbol_factor(xi, eta).map(|f| f * hat_i), exp_pairing: hat_i })
}

fn pair_with(out: &ChaosVector, e_eta: &ChaosVector) -> Result<Complex64> {
    match out.role {
        Role::Distribution => dual_pair(out, e_eta),
        _ => AppellSystem::for_vectors(&[out, e_eta])?.l2_bilinear(out, e_eta),
    }
}

fn symbol_path_a(op: &OperatorRep, xi: &[Complex64], eta: &[Complex64], trunc: usize) -> Result<Complex64> {
    let out = op.apply(&exp_vector(&op.params, xi, trunc)?.body)?;
    pair_with(&out, &exp_vector(&op.params, eta, trunc)?.body)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialityCheck {
    pub degree: usize,
    pub predictions: usize,
    /// Largest `|predicted - direct| / max(1, |direct|)` over the off-grid points.
    pub max_error: f64,
}

/// Fits `(z, w) ↦ Ξ̂(ξ₁ + zξ₂, η₁ + wη₂)` on an `(N+1)×(N+1)` grid of roots of
/// unity and predicts `count` random points of the closed unit bidisc.
pub fn symbol_polynomiality(
    op: &OperatorRep,
    xi: (&[Complex64], &[Complex64]),
    eta: (&[Complex64], &[Complex64]),
    trunc: usize,
    count: usize,
    seed: u64,
) -> Result<PolynomialityCheck> {
    let line = |a: &[Complex64], b: &[Complex64], z: Complex64| -> Vec<Complex64> {
        a.iter().zip(b).map(|(x, y)| x + z * y).collect()
    };
    let eval = |z: Complex64, w: Complex64| symbol_path_a(op, &line(xi.0, xi.1, z), &line(eta.0, eta.1, w), trunc);
    let n = trunc + 1;
    let nodes: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect();
    let mut values = vec![vec![Complex64::default(); n]; n];
    for (j, z) in nodes.iter().enumerate() {
        for (k, w) in nodes.iter().enumerate() {
            values[j][k] = eval(*z, *w)?;
        }
    }
    // coefficient of z^a w^b is the 2-D discrete Fourier coefficient
    let mut coef = vec![vec![Complex64::default(); n]; n];
    for (a, row) in coef.iter_mut().enumerate() {
        for (b, c) in row.iter_mut().enumerate() {
            let mut s = Complex64::default();
            for j in 0..n {
                for k in 0..n {
                    s += values[j][k] * nodes[(a * j) % n].conj() * nodes[(b * k) % n].conj();
                }
            }
            *c = s / (n * n) as f64;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error: f64 = 0.0;
    for _ in 0..count {
        let mut draw = || Complex64::from_polar(rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>());
        let (z, w) = (draw(), draw());
        let mut pred = Complex64::default();
        for (a, row) in coef.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                pred += c * z.powu(a as u32) * w.powu(b as u32);
            }
        }
        let direct = eval(z, w)?;
        max_error = max_error.max((pred - direct).norm() / direct.norm().max(1.0));
    }
    Ok(PolynomialityCheck { degree: trunc, predictions: count, max_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::OperatorKind;
    use crate::special::MLParams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_gateaux_and_matrix_symbols() {
        let p = MLParams::new(0.5).unwrap();
        let xi = [c(0.2, 0.05), c(-0.15, 0.0), c(0.1, 0.0)];
        let eta = [c(0.1, 0.0), c(0.25, -0.1), c(-0.2, 0.0)];
        let ops = [
            OperatorRep::identity(p, 3),
            OperatorRep::new(OperatorKind::Gateaux(vec![c(1.0, 0.0), c(-0.5, 0.0), c(0.3, 0.2)]), p, 3).unwrap(),
            OperatorRep::new(
                OperatorKind::IntegralKernel(
                    OperatorRep::kernel_from_matrix(&[
                        vec![c(1.0, 0.0), c(0.2, 0.0), c(-0.4, 0.0)],
                        vec![c(0.0, 0.5), c(-1.0, 0.0), c(0.3, 0.0)],
                        vec![c(0.7, 0.0), c(0.1, 0.0), c(0.5, 0.0)],
                    ])
                    .unwrap(),
                ),
                p,
                3,
            )
            .unwrap(),
            OperatorRep::new(OperatorKind::Creation(1), p, 3).unwrap(),
        ];
        for op in &ops {
            let s = symbol(op, &xi, &eta, 14).unwrap();
            let want = s.closed_form.unwrap();
            assert!((s.path_a - want).norm() < 1e-8, "{:?}: {} vs {}", op.kind, s.path_a, want);
            assert!((s.path_a - s.path_b).norm() < 1e-8, "{:?}: {} vs {}", op.kind, s.path_a, s.path_b);
        }
    }

    #[test]
    fn symbol_is_polynomial_in_the_line_parameters() {
        let p = MLParams::new(0.5).unwrap();
        let op = OperatorRep::new(OperatorKind::Gateaux(vec![c(1.0, 0.0), c(0.5, 0.0)]), p, 2).unwrap();
        let xi1 = [c(0.1, 0.0), c(0.05, 0.0)];
        let xi2 = [c(0.1, 0.0), c(-0.1, 0.0)];
        let eta1 = [c(-0.1, 0.0), c(0.1, 0.0)];
        let eta2 = [c(0.05, 0.0), c(0.15, 0.0)];
        let chk = symbol_polynomiality(&op, (&xi1, &xi2), (&eta1, &eta2), 5, 20, 7).unwrap();
        assert!(chk.max_error < 1e-8, "{chk:?}");
    }
}
