use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{guarded, random_tensor, random_vector, real, rng, Check, VerifyConfig};
use crate::appell::{ChaosVector, Role};
use crate::error::Result;
use crate::operators::{
    dual_pair_any, eta_form, exp_gateaux, integral_kernel_op, symbol, symbol_polynomiality, translate, OperatorKind,
    OperatorRep,
};
use crate::special::MLParams;
use crate::tensor::SplitTensor;
use crate::transforms::{bilinear, exp_tail, exp_vector};

fn random_test(g: &mut ChaCha8Rng, p: MLParams, d: usize, n: usize) -> Result<ChaosVector> {
    ChaosVector::new(p, d, Role::Test, (0..=n).map(|k| random_tensor(g, d, k, 1.0)).collect())
}

fn random_matrix(g: &mut ChaCha8Rng, d: usize) -> Vec<Vec<Complex64>> {
    (0..d).map(|_| random_vector(g, d, 1.0, true)).collect()
}

/// Grid point `j` of the 20-point symbol grid.
fn grid_point(j: usize, d: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let t = |k: usize| 2.0 * PI * k as f64 / 20.0;
    let xi = (0..d).map(|k| real(0.3 / (d as f64).sqrt() * t(j + 3 * k).cos())).collect();
    let eta = (0..d).map(|k| real(0.25 / (d as f64).sqrt() * t(2 * j + 5 * k + 1).sin())).collect();
    (xi, eta)
}

/// Exponential truncation for closed-form symbol comparisons.
const SYMBOL_TRUNC: usize = 14;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

pub(super) fn checks(cfg: &VerifyConfig) -> Vec<Check> {
    let d = cfg.dim;
    let n = cfg.trunc;
    let ns = n.max(SYMBOL_TRUNC);
    let sym_note = format!("exponentials truncated at degree {ns}");
    let mut out = Vec::new();

    let r = "τ_y φ = Σ_j D_y^j φ / j! on polynomials of degree ≤ 6";
    out.push(guarded("translation_is_exp_gateaux", r, || {
        let p = cfg.params()?;
        let mut g = rng(cfg, 200);
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let phi = random_test(&mut g, p, d, 6)?;
            let y = random_vector(&mut g, d, 0.8, true);
            let a = translate(&y, &phi)?;
            worst = worst.max(a.max_abs_diff(&exp_gateaux(&y, &phi, 6)?)? / a.max_abs().max(1.0));
        }
        Ok(Check::small("translation_is_exp_gateaux", r, worst, 1e-10))
    }));

    let r = "τ_η e_{μβ}(·;θ) = e^{⟨η,θ⟩} e_{μβ}(·;θ)";
    out.push(guarded("translation_of_exponential", r, || {
        let p = cfg.params()?;
        let mut g = rng(cfg, 201);
        let mut excess: f64 = 0.0;
        let mut largest: f64 = 0.0;
        for _ in 0..5 {
            let theta = random_vector(&mut g, d, 0.3 / (d as f64).sqrt(), true);
            let eta = random_vector(&mut g, d, 0.5, true);
            let e = exp_vector(&p, &theta, n)?.body;
            let x = bilinear(&eta, &theta);
            let moved = translate(&eta, &e)?;
            let scaled = e.scale(x.exp());
            for k in 0..=n {
                let diff = moved.kernel(k).max_abs_diff(&scaled.kernel(k))?;
                let bound = e.kernel(k).max_abs() * exp_tail(x.norm(), n - k);
                largest = largest.max(diff);
                excess = excess.max(diff - bound * (1.0 + 1e-9) - 1e-15);
            }
        }
        Ok(Check::small("translation_of_exponential", r, excess.max(0.0), 0.0)
            .with_note(format!("largest kernel deviation {largest:.3e}, all within the per-degree tail bound")))
    }));

    let r = "Ξ̂ for D_ψ equals ⟨ψ,ξ⟩ Î(ξ,η)";
    out.push(guarded("gateaux_symbol_grid", r, || {
        let p = cfg.params()?;
        let psi = random_vector(&mut rng(cfg, 202), d, 1.0, true);
        let op = OperatorRep::new(OperatorKind::Gateaux(psi.clone()), p, d)?;
        let mut worst: f64 = 0.0;
        for j in 0..20 {
            let (xi, eta) = grid_point(j, d);
            let s = symbol(&op, &xi, &eta, ns)?;
            let want = bilinear(&psi, &xi) * s.exp_pairing;
            worst = worst.max(rel(s.path_a, want)).max(rel(s.path_b, want));
        }
        Ok(Check::small("gateaux_symbol_grid", r, worst, 1e-8).with_note(sym_note.clone()))
    }));

    let r = "Ξ̂ for Ξ_{1,1}(A) equals ⟨ξ,Aη⟩ Î(ξ,η)";
    out.push(guarded("kernel_symbol_matrices", r, || {
        let p = cfg.params()?;
        let mut g = rng(cfg, 203);
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let a = random_matrix(&mut g, 3);
            let op = OperatorRep::new(OperatorKind::IntegralKernel(OperatorRep::kernel_from_matrix(&a)?), p, 3)?;
            for _ in 0..4 {
                let xi = random_vector(&mut g, 3, 0.2, false);
                let eta = random_vector(&mut g, 3, 0.2, false);
                let s = symbol(&op, &xi, &eta, ns)?;
                let a_eta: Vec<Complex64> = a.iter().map(|row| bilinear(row, &eta)).collect();
                let want = bilinear(&xi, &a_eta) * s.exp_pairing;
                worst = worst.max(rel(s.path_a, want)).max(rel(s.path_b, want));
            }
        }
        Ok(Check::small("kernel_symbol_matrices", r, worst, 1e-8).with_note(sym_note.clone()))
    }));

    let r = "(z,w) ↦ Ξ̂(ξ₁+zξ₂, η₁+wη₂) is a polynomial of bidegree ≤ (N, N)";
    out.push(guarded("symbol_polynomiality", r, || {
        let p = cfg.params()?;
        let mut g = rng(cfg, 204);
        let ops = [
            OperatorKind::Gateaux(random_vector(&mut g, d, 1.0, true)),
            OperatorKind::IntegralKernel(OperatorRep::kernel_from_matrix(&random_matrix(&mut g, d))?),
            OperatorKind::Creation(0),
        ];
        let mut worst: f64 = 0.0;
        for (i, kind) in ops.into_iter().enumerate() {
            let op = OperatorRep::new(kind, p, d)?;
            let v: Vec<Vec<Complex64>> = (0..4).map(|_| random_vector(&mut g, d, 0.12, false)).collect();
            let chk = symbol_polynomiality(&op, (&v[0], &v[1]), (&v[2], &v[3]), n, 10, cfg.seed + i as u64)?;
            worst = worst.max(chk.max_error);
        }
        Ok(Check::small("symbol_polynomiality", r, worst, 1e-8))
    }));

    let r = "⟨⟨Ξ e(·;ξ), e(·;η)⟩⟩ = S(Ξ e(·;ξ))(η)";
    out.push(guarded("symbol_paths_agree", r, || {
        let p = cfg.params()?;
        let mut g = rng(cfg, 205);
        let mut worst: f64 = 0.0;
        for i in 0..50 {
            let kind = match i % 7 {
                0 => OperatorKind::Identity,
                1 => OperatorKind::Gateaux(random_vector(&mut g, d, 1.0, true)),
                2 => OperatorKind::Annihilation(g.random_range(0..d)),
                3 => OperatorKind::Creation(g.random_range(0..d)),
                4 => OperatorKind::Translate(random_vector(&mut g, d, 0.3, true)),
                5 => {
                    let (l, m) = (g.random_range(0..=2), g.random_range(0..=2));
                    OperatorKind::IntegralKernel(SplitTensor::from_fn(d, l, m, |_, _| {
                        Complex64::new(g.random_range(-1.0..1.0), g.random_range(-1.0..1.0))
                    }))
                }
                _ => OperatorKind::Composition(vec![
                    OperatorKind::Creation(g.random_range(0..d)),
                    OperatorKind::Gateaux(random_vector(&mut g, d, 1.0, false)),
                ]),
            };
            let op = OperatorRep::new(kind, p, d)?;
            let xi = random_vector(&mut g, d, 0.25 / (d as f64).sqrt(), true);
            let eta = random_vector(&mut g, d, 0.25 / (d as f64).sqrt(), true);
            let s = symbol(&op, &xi, &eta, n)?;
            worst = worst.max(rel(s.path_a, s.path_b));
        }
        Ok(Check::small("symbol_paths_agree", r, worst, 1e-8))
    }));

    let r = "⟨⟨Ξ_{l,m}(κ) φ, ψ⟩⟩ = ⟨κ, η_{φ,ψ}⟩";
    out.push(guarded("kernel_bilinear_form", r, || {
        let p = cfg.params()?;
        let mut g = rng(cfg, 206);
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let (l, m) = (g.random_range(0..=2), g.random_range(0..=2));
            let kappa = SplitTensor::from_fn(d, l, m, |_, _| Complex64::new(g.random_range(-1.0..1.0), 0.0));
            let phi = random_test(&mut g, p, d, 3)?;
            let psi = random_test(&mut g, p, d, 3)?;
            let lhs = dual_pair_any(&integral_kernel_op(&kappa, &phi)?, &psi)?;
            let rhs = kappa.pairing(&eta_form(l, m, &phi, &psi)?)?;
            worst = worst.max(rel(lhs, rhs));
        }
        Ok(Check::small("kernel_bilinear_form", r, worst, 1e-9))
    }));

    let r = "Ξ(aφ + bψ) = aΞφ + bΞψ";
    out.push(guarded("linearity", r, || {
        let p = cfg.params()?;
        let mut g = rng(cfg, 207);
        let (a, b) = (Complex64::new(0.7, -0.3), Complex64::new(-1.2, 0.4));
        let mut worst: f64 = 0.0;
        let kinds = [
            OperatorKind::Gateaux(random_vector(&mut g, d, 1.0, true)),
            OperatorKind::Creation(0),
            OperatorKind::Annihilation(d - 1),
            OperatorKind::Translate(random_vector(&mut g, d, 0.5, true)),
            OperatorKind::IntegralKernel(OperatorRep::kernel_from_matrix(&random_matrix(&mut g, d))?),
        ];
        for kind in kinds {
            let op = OperatorRep::new(kind, p, d)?;
            let phi = random_test(&mut g, p, d, 4)?;
            let psi = random_test(&mut g, p, d, 4)?;
            let lhs = op.apply(&phi.scale(a).add(&psi.scale(b))?)?;
            let rhs = op.apply(&phi)?.scale(a).add(&op.apply(&psi)?.scale(b))?;
            worst = worst.max(lhs.max_abs_diff(&rhs)? / rhs.max_abs().max(1.0));
        }
        Ok(Check::small("linearity", r, worst, 1e-12))
    }));

    let r = "τ_a τ_b = τ_{a+b}";
    out.push(guarded("translation_group", r, || {
        let p = cfg.params()?;
        let mut g = rng(cfg, 208);
        let phi = random_test(&mut g, p, d, 6)?;
        let a = random_vector(&mut g, d, 0.5, true);
        let b = random_vector(&mut g, d, 0.5, true);
        let ab: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = translate(&a, &translate(&b, &phi)?)?;
        let rhs = translate(&ab, &phi)?;
        Ok(Check::small("translation_group", r, lhs.max_abs_diff(&rhs)? / rhs.max_abs().max(1.0), 1e-12))
    }));
    out
}
