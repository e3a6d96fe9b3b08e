use num_complex::Complex64;

use super::{guarded, Check, VerifyConfig};
use crate::special::{laplace_identity_residual, m_wright, mittag_leffler, MLParams};

const LAPLACE_BETAS: [f64; 3] = [0.25, 0.5, 0.75];
const LAPLACE_S: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];

pub(super) fn checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let r = "E_1(z) = e^z, |z| ≤ 10 (relative to max(1, |e^z|))";
    out.push(guarded("e1_matches_exp", r, || {
        let p = MLParams::new(1.0)?;
        let mut err: f64 = 0.0;
        for i in 0..=40 {
            let rad = 0.25 * i as f64;
            for j in 0..48 {
                let z = Complex64::from_polar(rad, 2.0 * std::f64::consts::PI * j as f64 / 48.0);
                let want = z.exp();
                err = err.max((mittag_leffler(&p, z)? - want).norm() / want.norm().max(1.0));
            }
        }
        Ok(Check::small("e1_matches_exp", r, err, 1e-12))
    }));
    let r = "M_{1/2}(x) = exp(-x²/4)/√π on [0, 6]";
    out.push(guarded("m_half_gaussian", r, || {
        let p = MLParams::new(0.5)?;
        let mut err: f64 = 0.0;
        for i in 0..=600 {
            let x = 0.01 * i as f64;
            let want = (-x * x / 4.0).exp() / std::f64::consts::PI.sqrt();
            err = err.max((m_wright(&p, x)? - want).abs());
        }
        Ok(Check::small("m_half_gaussian", r, err, 1e-10))
    }));
    let mut betas = LAPLACE_BETAS.to_vec();
    if cfg.beta < 1.0 && !betas.contains(&cfg.beta) {
        betas.push(cfg.beta);
    }
    let r = "∫_0^∞ e^{-sτ} M_β(τ) dτ = E_β(-s)";
    for beta in betas {
        for s in LAPLACE_S {
            let name = format!("laplace_b{beta}_s{s}");
            out.push(guarded(&name, r, || {
                let res = laplace_identity_residual(&MLParams::new(beta)?, s)?;
                Ok(Check::small(name.clone(), r, res, 1e-6))
            }));
        }
    }
    out
}
