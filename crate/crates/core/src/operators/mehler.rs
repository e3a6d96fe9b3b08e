//! Mehler evolution of exponentials and the translation-vs-multiplication check.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{mittag_leffler, mittag_leffler_real, MLParams};
use crate::transforms::bilinear;

const EMBEDDED_BASELINE: &str = include_str!("../../data/mehler_baseline.json");

/// Environment variable naming a directory that overrides the bundled data files.
pub const DATA_DIR_ENV: &str = "MLCALC_DATA_DIR";

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `P_t e^{i⟨y,ξ⟩} = e^{i e^{-t}⟨y,ξ⟩} E_β(-½(1-e^{-2t})⟨ξ,ξ⟩)`.
pub fn mehler_exp(params: &MLParams, t: f64, y: &[f64], xi: &[f64]) -> Result<Complex64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParams(format!("time must be non-negative, got {t}")));
    }
    if y.len() != xi.len() {
        return Err(Error::DimMismatch(y.len(), xi.len()));
    }
    let phase = Complex64::new(0.0, (-t).exp() * dot(y, xi)).exp();
    let decay = mittag_leffler_real(params, -0.5 * (-(-2.0 * t).exp_m1()) * dot(xi, xi))?;
    Ok(phase * decay)
}

/// `|E_β(-½(1-e^{-2s})q) E_β(-½(1-e^{-2t})e^{-2s}q) - E_β(-½(1-e^{-2(t+s)})q)|`, `q = ⟨ξ,ξ⟩`.
pub fn mehler_semigroup_defect(params: &MLParams, t: f64, s: f64, xi: &[f64]) -> Result<f64> {
    if !(t >= 0.0 && s >= 0.0) {
        return Err(Error::InvalidParams(format!("times must be non-negative, got t={t}, s={s}")));
    }
    let q = dot(xi, xi);
    let a = |u: f64| -0.5 * (-(-2.0 * u).exp_m1()) * q;
    let e = |x: f64| mittag_leffler_real(params, x);
    Ok((e(a(s))? * e(a(t) * (-2.0 * s).exp())? - e(a(t + s))?).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MehlerBaselineRow {
    pub t: f64,
    pub s: f64,
    pub defect: f64,
}

/// Reference semigroup defects from an independent 50-digit series evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MehlerBaseline {
    pub beta: f64,
    /// `⟨ξ,ξ⟩` shared by all rows.
    pub q: f64,
    pub rows: Vec<MehlerBaselineRow>,
}

impl MehlerBaseline {
    pub fn lookup(&self, t: f64, s: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.t == t && r.s == s).map(|r| r.defect)
    }
}

/// Loads `mehler_baseline.json` from `$MLCALC_DATA_DIR` when set, else the bundled copy.
pub fn mehler_baseline() -> Result<MehlerBaseline> {
    let text = match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => {
            let path = PathBuf::from(dir).join("mehler_baseline.json");
            std::fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        }
        None => EMBEDDED_BASELINE.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("mehler baseline: {e}")))
}

/// Both sides of the translation-vs-multiplication comparison
/// `C(ξ)/C(ξ-iη)` against `e^{-i⟨η,ξ⟩} / E(e^{⟨·,η⟩})`, `C(ξ) = E_β(-½⟨ξ,ξ⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TranslationCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// The reciprocal `E(e^{⟨·,η⟩}) / e^{i⟨η,ξ⟩}`, kept for comparison; it
    /// differs from `rhs` whenever `η ≠ 0`, even in the Gaussian case.
    pub rhs_reciprocal: Complex64,
    pub margin: f64,
}

pub fn translation_vs_multiplication(params: &MLParams, xi: &[f64], eta: &[f64]) -> Result<TranslationCheck> {
    if xi.len() != eta.len() {
        return Err(Error::DimMismatch(xi.len(), eta.len()));
    }
    let shifted: Vec<Complex64> = xi.iter().zip(eta).map(|(&a, &b)| Complex64::new(a, -b)).collect();
    let xi_c: Vec<Complex64> = xi.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    let ch = |v: &[Complex64]| mittag_leffler(params, -0.5 * bilinear(v, v));
    let lhs = ch(&xi_c)? / ch(&shifted)?;
    let mean_exp = mittag_leffler_real(params, 0.5 * dot(eta, eta))?;
    let phase = Complex64::new(0.0, dot(eta, xi)).exp();
    let rhs = 1.0 / (phase * mean_exp);
    Ok(TranslationCheck { lhs, rhs, rhs_reciprocal: mean_exp / phase, margin: (lhs - rhs).norm() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mehler_limits() {
        let p = MLParams::new(0.5).unwrap();
        let y = [0.3, -1.2];
        let xi = [0.8, 0.4];
        let at0 = mehler_exp(&p, 0.0, &y, &xi).unwrap();
        assert!((at0 - Complex64::new(0.0, dot(&y, &xi)).exp()).norm() < 1e-15);
        let far = mehler_exp(&p, 40.0, &y, &xi).unwrap();
        let lim = mittag_leffler_real(&p, -0.5 * dot(&xi, &xi)).unwrap();
        assert!((far - lim).norm() < 1e-14);
        let g = MLParams::new(1.0).unwrap();
        let t = 0.7;
        let v = mehler_exp(&g, t, &y, &xi).unwrap();
        let want = Complex64::new(-0.5 * (1.0 - (-2.0 * t).exp()) * dot(&xi, &xi), (-t).exp() * dot(&y, &xi)).exp();
        assert!((v - want).norm() < 1e-14);
    }

    #[test]
    fn semigroup_defects() {
        let g = MLParams::new(1.0).unwrap();
        for &(t, s) in &[(0.1, 0.2), (0.5, 0.5), (2.0, 1.0)] {
            assert!(mehler_semigroup_defect(&g, t, s, &[1.0, 0.5]).unwrap() < 1e-12);
        }
        let p = MLParams::new(0.5).unwrap();
        assert_eq!(mehler_semigroup_defect(&p, 0.0, 0.4, &[1.0]).unwrap(), 0.0);
        assert!(mehler_semigroup_defect(&p, 0.4, 0.0, &[1.0]).unwrap() < 1e-16);
        let base = mehler_baseline().unwrap();
        let d = mehler_semigroup_defect(&p, 0.5, 0.5, &[1.0]).unwrap();
        assert!(d > 1e-11);
        assert!((d - base.lookup(0.5, 0.5).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn translation_against_multiplication() {
        let g = MLParams::new(1.0).unwrap();
        let chk = translation_vs_multiplication(&g, &[0.5, 0.0], &[0.3, 0.4]).unwrap();
        assert!(chk.margin < 1e-10, "{chk:?}");
        assert!((chk.lhs - chk.rhs_reciprocal).norm() > 1e-3);
        let p = MLParams::new(0.5).unwrap();
        let chk = translation_vs_multiplication(&p, &[0.5], &[0.5]).unwrap();
        assert!(chk.margin > 1e-3, "{chk:?}");
    }
}
