use num_complex::Complex64;
use rand::Rng;

use super::{guarded, guarded_many, random_tensor, random_vector, real, rng, Check, VerifyConfig};
use crate::appell::{ChaosVector, Role};
use crate::error::Result;
use crate::measure::{
    covariance_exact, density_check, estimate, laplace_exact, mc_characteristic, mc_covariance_pair, mc_laplace,
    mc_mehler, mc_moment, mc_pair, moment_exact, sample_measure, sample_subordinator, estimate_scalar, SampleBatch,
};
use crate::operators::{mehler_baseline, mehler_exp, mehler_semigroup_defect, translation_vs_multiplication};
use crate::special::quadrature::GaussLegendre;
use crate::special::{gamma_real, m_wright, mittag_leffler_real, MLParams};
use crate::transforms::{exp_pairing, exp_vector};

/// Slack for comparisons whose Monte Carlo error is exactly zero.
const ROUNDING: f64 = 1e-14;

/// Sample count at which the histogram tolerance of 0.01 is calibrated.
pub const DENSITY_SAMPLES: usize = 1_000_000;

const LAPLACE_S: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

fn real_vec(v: &[Complex64]) -> Vec<f64> {
    v.iter().map(|z| z.re).collect()
}

fn batch(cfg: &VerifyConfig, beta: f64, dim: usize, salt: u64) -> Result<SampleBatch> {
    sample_measure(&MLParams::new(beta)?, dim, cfg.samples, cfg.seed.wrapping_add(salt))
}

pub(super) fn checks(cfg: &VerifyConfig) -> Vec<Check> {
    let powered = cfg.powered();
    let d = cfg.dim;
    let mut out = Vec::new();

    let mut betas = vec![0.5, 0.75, 1.0];
    if !betas.contains(&cfg.beta) {
        betas.push(cfg.beta);
    }
    let r = "∫⟨ω,φ⟩^{2n} dμ_β = (2n)! / (2^n Γ(βn+1)) |φ|^{2n}, odd moments vanish";
    let phi = real_vec(&random_vector(&mut rng(cfg, 300), d, 1.0, false));
    for (i, &beta) in betas.iter().enumerate() {
        out.extend(guarded_many(&format!("moments_b{beta}"), r, || {
            let p = MLParams::new(beta)?;
            let b = batch(cfg, beta, d, 1000 + i as u64)?;
            (1..=4)
                .map(|k| {
                    let est = mc_moment(&b, &phi, k)?;
                    let want = real(moment_exact(&p, &phi, k)?);
                    Ok(Check::statistical(format!("moment_{k}_b{beta}"), r, &est, want, ROUNDING, powered))
                })
                .collect()
        }));
    }

    let r = "E e^{i⟨ω,φ⟩} = E_β(-½⟨φ,φ⟩) = T Q_0(1)(φ)";
    out.extend(guarded_many("characteristic_function", r, || {
        let p = cfg.params()?;
        let b = batch(cfg, cfg.beta, d, 2000)?;
        let mut g = rng(cfg, 301);
        (0..10)
            .map(|j| {
                let dir = real_vec(&random_vector(&mut g, d, 1.0, false));
                let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
                let radius = 2.0 * g.random::<f64>();
                let phi: Vec<f64> = dir.iter().map(|x| x * radius / len).collect();
                let est = mc_characteristic(&b, &phi)?;
                let want = mittag_leffler_real(&p, -0.5 * phi.iter().map(|x| x * x).sum::<f64>())?;
                Ok(Check::statistical(format!("characteristic_{j}"), r, &est, real(want), ROUNDING, powered))
            })
            .collect()
    }));

    let r = "∫⟨ω,φ⟩⟨ω,ψ⟩ dμ_β = ⟨φ,ψ⟩ / Γ(β+1)";
    out.extend(guarded_many("covariance", r, || {
        let p = cfg.params()?;
        let b = batch(cfg, cfg.beta, d, 2000)?;
        let phi = real_vec(&random_vector(&mut rng(cfg, 302), d, 1.0, false));
        // ψ ⊥ φ: rotate the first two coordinates, or the zero vector in d = 1
        let mut psi = vec![0.0; d];
        if d > 1 {
            psi[0] = -phi[1];
            psi[1] = phi[0];
        }
        Ok(vec![
            Check::statistical("covariance_orthogonal", r, &mc_covariance_pair(&b, &phi, &psi)?, real(0.0), ROUNDING, powered),
            Check::statistical(
                "covariance_diagonal",
                r,
                &mc_covariance_pair(&b, &phi, &phi)?,
                real(covariance_exact(&p, &phi, &phi)?),
                ROUNDING,
                powered,
            ),
        ])
    }));

    let r = "∫ 1 dμ_β = 1, ∫⟨P_2(·), a⟩ dμ_β = 0";
    out.extend(guarded_many("pair_constants", r, || {
        let p = cfg.params()?;
        let b = batch(cfg, cfg.beta, d, 2000)?;
        let one = ChaosVector::constant(p, d, Role::Test, real(1.0));
        let p2 = ChaosVector::single(p, Role::Test, random_tensor(&mut rng(cfg, 303), d, 2, 1.0));
        let e1 = mc_pair(&b, &one, &one)?;
        Ok(vec![
            Check::close("pair_one_one", r, e1.value, real(1.0), 0.0).with_note(format!("standard error {}", e1.std_error)),
            Check::statistical("pair_p2_one", r, &mc_pair(&b, &p2, &one)?, real(0.0), ROUNDING, powered),
        ])
    }));

    let r = "∫ e_{μβ}(ω;ξ) e_{μβ}(ω;η) dμ_β(ω) = Î(ξ,η)";
    out.push(guarded("exp_pairing_mc", r, || {
        let p = cfg.params()?;
        let b = batch(cfg, cfg.beta, 1, 3000)?;
        let (xi, eta) = ([real(0.4)], [real(0.4)]);
        let ex = exp_vector(&p, &xi, cfg.trunc)?;
        let ey = exp_vector(&p, &eta, cfg.trunc)?;
        let est = mc_pair(&b, &ex.body, &ey.body)?;
        // pointwise |e_N(ξ) e_N(η) - e(ξ) e(η)| ≤ t_ξ (|e(η)| + t_η) + |e(ξ)| t_η
        let tail = estimate(&b, |w| {
            let om = [real(w[0])];
            let (tx, ty) = (ex.tail_bound(w[0].abs()), ey.tail_bound(w[0].abs()));
            let (vx, vy) = (ex.exact_value(&om).unwrap_or_default().norm(), ey.exact_value(&om).unwrap_or_default().norm());
            real(tx * (vy + ty) + vx * ty)
        });
        let slack = tail.value.re + 4.0 * tail.std_error;
        let want = exp_pairing(&p, &xi, &eta)?;
        Ok(Check::statistical("exp_pairing_mc", r, &est, want, slack.max(ROUNDING), powered)
            .with_note(format!("d = 1, ξ = η = 0.4, degree {} truncation, tail tolerance {slack:.3e}", cfg.trunc)))
    }));

    if cfg.beta < 1.0 {
        out.extend(subordinator_checks(cfg, powered));
    }
    out
}

fn subordinator_checks(cfg: &VerifyConfig, powered: bool) -> Vec<Check> {
    let mut out = Vec::new();
    let r = "E e^{-sτ} = E_β(-s) for τ ~ M_β";
    let taus = match cfg.params().and_then(|_| sample_subordinator(cfg.beta, cfg.samples, cfg.seed.wrapping_add(4000))) {
        Ok(t) => t,
        Err(e) => return vec![Check::failed("subordinator", r, &e)],
    };
    for s in LAPLACE_S {
        let name = format!("laplace_s{s}");
        out.push(guarded(&name, r, || {
            let want = laplace_exact(&cfg.params()?, s)?;
            Ok(Check::statistical(name.clone(), r, &mc_laplace(&taus, s), real(want), ROUNDING, powered))
        }));
    }
    let r = "E τ = ∫ τ M_β(τ) dτ = 1/Γ(β+1)";
    out.extend(guarded_many("subordinator_mean", r, || {
        let p = cfg.params()?;
        let quad = GaussLegendre::new(20).composite(0.0, 40.0, 200, |t| t * m_wright(&p, t).unwrap_or(f64::NAN));
        let est = estimate_scalar(&taus, |t| t);
        Ok(vec![
            Check::close("mean_quadrature", r, quad, 1.0 / gamma_real(cfg.beta + 1.0), 1e-8),
            Check::statistical("mean_mc", r, &est, real(quad), ROUNDING, powered),
        ])
    }));
    let r = "histogram of τ on [0, 3) matches M_β in sup norm";
    out.push(guarded("density_histogram", r, || {
        let chk = density_check(&cfg.params()?, &taus, 3.0, 30)?;
        let mut c = Check::small("density_histogram", r, chk.sup_error, 0.01);
        if cfg.samples < DENSITY_SAMPLES {
            c.status = super::Status::Underpowered;
            c.note = Some(format!("tolerance 0.01 is calibrated for {DENSITY_SAMPLES} samples"));
        }
        Ok(c)
    }));
    out
}

pub(super) fn mehler_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let powered = cfg.powered();
    let times = [0.0, 0.1, 0.5, 1.0, 2.0];
    let mut out = Vec::new();

    let r = "β = 1: E(-½(1-e^{-2s})q) E(-½(1-e^{-2t})e^{-2s}q) = E(-½(1-e^{-2(t+s)})q)";
    out.push(guarded("gaussian_semigroup", r, || {
        let g = MLParams::new(1.0)?;
        let mut worst: f64 = 0.0;
        for xi in [&[1.0][..], &[1.0, 0.5][..], &[0.3, -1.2, 0.8][..]] {
            for &t in &times {
                for &s in &times {
                    worst = worst.max(mehler_semigroup_defect(&g, t, s, xi)?);
                }
            }
        }
        Ok(Check::small("gaussian_semigroup", r, worst, 1e-12))
    }));

    let r = "P_0 = identity: the semigroup defect vanishes at t = 0";
    out.push(guarded("zero_time_defect", r, || {
        let p = cfg.params()?;
        let worst = times.iter().map(|&s| mehler_semigroup_defect(&p, 0.0, s, &[1.0])).collect::<Result<Vec<_>>>()?;
        Ok(Check::small("zero_time_defect", r, worst.into_iter().fold(0.0, f64::max), 0.0))
    }));

    let r = "β < 1: P_t P_s ≠ P_{t+s}";
    out.push(guarded("half_order_defect", r, || {
        let d = mehler_semigroup_defect(&MLParams::new(0.5)?, 0.5, 0.5, &[1.0])?;
        Ok(Check::exceeds("half_order_defect", r, d, 10.0 * 1e-12).with_note("β = 0.5, t = s = 0.5, |ξ| = 1"))
    }));

    let r = "semigroup defects against the stored 50-digit series baseline";
    out.push(guarded("defect_baseline", r, || {
        let base = mehler_baseline()?;
        let p = MLParams::new(base.beta)?;
        let xi = [base.q.sqrt()];
        let mut worst: f64 = 0.0;
        for row in &base.rows {
            worst = worst.max((mehler_semigroup_defect(&p, row.t, row.s, &xi)? - row.defect).abs());
        }
        Ok(Check::small("defect_baseline", r, worst, 1e-9).with_note(format!("{} rows, β = {}", base.rows.len(), base.beta)))
    }));

    let r = "P_t e^{i⟨·,ξ⟩}(y) = ∫ e^{i⟨e^{-t}y + √(1-e^{-2t})ω, ξ⟩} dμ_β(ω)";
    out.extend(guarded_many("mehler_mc", r, || {
        let p = cfg.params()?;
        let d = cfg.dim;
        let b = batch(cfg, cfg.beta, d, 5000)?;
        let mut g = rng(cfg, 500);
        let y = real_vec(&random_vector(&mut g, d, 1.0, false));
        [0.1, 0.5, 1.0, 2.0, 4.0]
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                let xi = real_vec(&random_vector(&mut g, d, 1.5, false));
                let est = mc_mehler(&b, t, &y, &xi)?;
                let want = mehler_exp(&p, t, &y, &xi)?;
                Ok(Check::statistical(format!("mehler_mc_{j}"), r, &est, want, ROUNDING, powered))
            })
            .collect()
    }));

    let r = "C(ξ)/C(ξ-iη) = e^{-i⟨η,ξ⟩} / E(e^{⟨·,η⟩}), C(ξ) = E_β(-½⟨ξ,ξ⟩)";
    out.extend(guarded_many("translation_vs_multiplication", r, || {
        let (xi, eta) = ([0.5, -0.2], [0.3, 0.4]);
        let g = translation_vs_multiplication(&MLParams::new(1.0)?, &xi, &eta)?;
        let c = translation_vs_multiplication(&cfg.params()?, &xi, &eta)?;
        Ok(vec![
            Check::close("translation_gaussian", r, g.lhs, g.rhs, 1e-10),
            Check::reported("translation_gaussian_reciprocal", r, g.lhs, g.rhs_reciprocal)
                .with_note("the reciprocal right-hand side, which does not hold even for β = 1"),
            Check::reported(format!("translation_b{}", cfg.beta), r, c.lhs, c.rhs)
                .with_note(format!("margin {:.3e}", c.margin)),
        ])
    }));
    out
}
