use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::{guarded, random_tensor, random_vector, real, rng, Check, VerifyConfig};
use crate::appell::{AppellSystem, ChaosVector, Role};
use crate::special::{mittag_leffler, MLParams};
use crate::tensor::SymTensor;
use crate::transforms::{
    bilinear, domain_radius, exp_pairing, exp_vector, norm, s_transform, s_transform_via_pairing, t_transform,
};

fn random_distribution(cfg: &VerifyConfig, salt: u64, trunc: usize) -> crate::Result<ChaosVector> {
    let mut g = rng(cfg, salt);
    let kernels = (0..=trunc).map(|n| random_tensor(&mut g, cfg.dim, n, 1.0)).collect();
    ChaosVector::new(cfg.params()?, cfg.dim, Role::Distribution, kernels)
}

pub(super) fn checks(cfg: &VerifyConfig) -> Vec<Check> {
    let d = cfg.dim;
    let mut out = Vec::new();

    let r = "e_{μβ}(ω;ξ) = e^{⟨ω,ξ⟩} / E_β(½⟨ξ,ξ⟩) up to the truncation tail";
    out.push(guarded("exp_vector_pointwise", r, || {
        const N: usize = 20;
        let p = cfg.params()?;
        let sys = AppellSystem::shared(p, d, N)?;
        let mut g = rng(cfg, 100);
        let mut worst: f64 = f64::NEG_INFINITY;
        for _ in 0..20 {
            let xi = random_vector(&mut g, d, 0.5 / (d as f64).sqrt(), false);
            let omega = random_vector(&mut g, d, 2.0 / (d as f64).sqrt(), false);
            let e = exp_vector(&p, &xi, N)?;
            let err = (sys.eval(&e.body, &omega)? - e.exact_value(&omega)?).norm();
            worst = worst.max(err - e.tail_bound(norm(&omega)));
        }
        Ok(Check::small("exp_vector_pointwise", r, worst.max(0.0), 1e-8)
            .with_note("lhs is the largest error in excess of the tail bound"))
    }));

    let r = "S Q_n(G)(ξ) = ⟨G, ξ^{⊗n}⟩";
    out.push(guarded("s_transform_single_chaos", r, || {
        let p = cfg.params()?;
        let mut g = rng(cfg, 101);
        let mut worst: f64 = 0.0;
        for n in 0..=cfg.trunc {
            let big = random_tensor(&mut g, d, n, 1.0);
            let xi = random_vector(&mut g, d, 0.3, true);
            let got = s_transform(&ChaosVector::single(p, Role::Distribution, big.clone()), &xi)?;
            let want = big.pair_power(&xi);
            worst = worst.max((got - want).norm() / want.norm().max(1.0));
        }
        Ok(Check::small("s_transform_single_chaos", r, worst, 1e-12))
    }));

    let r = "S Φ(0) = Φ^{(0)} and S Φ(ξ) = ⟨⟨Φ, e_{μβ}(·;ξ)⟩⟩";
    out.push(guarded("s_transform_pairing", r, || {
        let phi = random_distribution(cfg, 102, cfg.trunc)?;
        let mut worst = (s_transform(&phi, &vec![Complex64::default(); d])? - phi.kernel(0).scalar_value()).norm();
        let mut g = rng(cfg, 103);
        for _ in 0..10 {
            let xi = random_vector(&mut g, d, 0.3, true);
            let a = s_transform(&phi, &xi)?;
            worst = worst.max((a - s_transform_via_pairing(&phi, &xi)?).norm() / a.norm().max(1.0));
        }
        Ok(Check::small("s_transform_pairing", r, worst, 1e-12))
    }));

    let r = "T Q_0(1)(φ) = E_β(-½⟨φ,φ⟩), T Q_1(y)(φ) = i⟨y,φ⟩ E_β(-½⟨φ,φ⟩)";
    out.push(guarded("t_transform", r, || {
        let p = cfg.params()?;
        let one = ChaosVector::constant(p, d, Role::Distribution, real(1.0));
        let mut g = rng(cfg, 104);
        let y = random_vector(&mut g, d, 1.0, false);
        let q1 = ChaosVector::single(p, Role::Distribution, SymTensor::from_vector(&y));
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let phi = random_vector(&mut g, d, 0.6 / (d as f64).sqrt(), false);
            let ch = mittag_leffler(&p, -0.5 * bilinear(&phi, &phi))?;
            worst = worst.max((t_transform(&one, &phi)? - ch).norm());
            let want = Complex64::i() * bilinear(&y, &phi) * ch;
            worst = worst.max((t_transform(&q1, &phi)? - want).norm());
        }
        Ok(Check::small("t_transform", r, worst, 1e-12))
    }));

    let r = "Î(ξ,0) = 1, Î(ξ,η) = Î(η,ξ), β = 1: Î(ξ,η) = e^{⟨ξ,η⟩}";
    out.push(guarded("exp_pairing_identities", r, || {
        let p = cfg.params()?;
        let gauss = MLParams::new(1.0)?;
        let mut g = rng(cfg, 105);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let xi = random_vector(&mut g, d, 0.4, true);
            let eta = random_vector(&mut g, d, 0.4, true);
            worst = worst.max((exp_pairing(&p, &xi, &vec![Complex64::default(); d])? - 1.0).norm());
            worst = worst.max((exp_pairing(&p, &xi, &eta)? - exp_pairing(&p, &eta, &xi)?).norm());
            worst = worst.max((exp_pairing(&gauss, &xi, &eta)? - bilinear(&xi, &eta).exp()).norm());
        }
        Ok(Check::small("exp_pairing_identities", r, worst, 1e-12))
    }));

    let r = "E[e_{μβ}(·;ξ) e_{μβ}(·;η)] = Î(ξ,η)";
    out.push(guarded("exp_pairing_l2", r, || {
        const N: usize = 16;
        let p = cfg.params()?;
        let sys = AppellSystem::shared(p, d, N)?;
        let mut g = rng(cfg, 106);
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let xi = random_vector(&mut g, d, 0.4 / (d as f64).sqrt(), false);
            let eta = random_vector(&mut g, d, 0.4 / (d as f64).sqrt(), true);
            let lhs = sys.l2_bilinear(&exp_vector(&p, &xi, N)?.body, &exp_vector(&p, &eta, N)?.body)?;
            worst = worst.max((lhs - exp_pairing(&p, &xi, &eta)?).norm());
        }
        Ok(Check::small("exp_pairing_l2", r, worst, 1e-8).with_note(format!("exponentials truncated at degree {N}")))
    }));

    let r = "λ ↦ S Φ(ξ₁ + λξ₂) is a polynomial of degree ≤ N";
    out.push(guarded("s_transform_polynomial", r, || {
        let n = cfg.trunc;
        let phi = random_distribution(cfg, 107, n)?;
        let mut g = rng(cfg, 108);
        let xi1 = random_vector(&mut g, d, 0.2, true);
        let xi2 = random_vector(&mut g, d, 0.2, true);
        let at = |lam: Complex64| {
            let v: Vec<Complex64> = xi1.iter().zip(&xi2).map(|(a, b)| a + lam * b).collect();
            s_transform(&phi, &v)
        };
        let nodes: Vec<Complex64> =
            (0..=n).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / (n + 1) as f64)).collect();
        let values = nodes.iter().map(|&z| at(z)).collect::<crate::Result<Vec<_>>>()?;
        let coef: Vec<Complex64> = (0..=n)
            .map(|k| {
                nodes.iter().zip(&values).map(|(z, v)| v * z.powu(k as u32).conj()).sum::<Complex64>() / (n + 1) as f64
            })
            .collect();
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let lam = Complex64::from_polar(g.random::<f64>().sqrt(), 2.0 * PI * g.random::<f64>());
            let pred: Complex64 = coef.iter().enumerate().map(|(k, c)| c * lam.powu(k as u32)).sum();
            let direct = at(lam)?;
            worst = worst.max((pred - direct).norm() / direct.norm().max(1.0));
        }
        Ok(Check::small("s_transform_polynomial", r, worst, 1e-9))
    }));

    let r = "ε_β = 0.8 · min(|nearest zero of E_β|, validated radius)";
    out.push(guarded("epsilon_beta", r, || {
        let dr = domain_radius(&cfg.params()?)?;
        Ok(Check::reported("epsilon_beta", r, dr.epsilon, dr.zero_radius.unwrap_or(dr.validated_radius))
            .with_note(format!("validated radius {:.3}", dr.validated_radius)))
    }));
    out
}
