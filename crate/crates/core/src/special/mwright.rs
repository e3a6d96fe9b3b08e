//! M-Wright function `M_β(x) = Σ (-x)^n / (n! Γ(-βn + 1 - β))`.

use std::f64::consts::PI;

use super::dd::{Dd, DdComplex};
use super::gamma::rgamma_progression;
use super::mittag_leffler::{sum_series, SeriesEval};
use super::quadrature::GaussLegendre;
use super::MLParams;
use crate::error::{Error, Result};

fn check_order(params: &MLParams) -> Result<()> {
    params.validate()?;
    if params.beta >= 1.0 {
        // M_1 is the point mass at 1
        return Err(Error::BetaOutOfRange(params.beta));
    }
    Ok(())
}

/// Power series of `M_β(x)` in double-double arithmetic.
///
/// Pole terms of `1/Γ` vanish exactly. Fails with `RangeWarning` when the
/// alternating-series cancellation bound exceeds `series_tol`.
pub fn m_wright_series(params: &MLParams, x: f64) -> Result<SeriesEval> {
    check_order(params)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::InvalidParams(format!("M-Wright argument must be >= 0, got {x}")));
    }
    let beta = params.beta;
    let inv_fact = rgamma_progression(1.0, 1.0, params.max_terms);
    let weights = rgamma_progression(-beta, 1.0 - beta, params.max_terms);
    let neg_x = Dd::from_f64(-x);
    let mut pow = Dd::ONE;
    let eval = sum_series("m_wright", params, |n| {
        if n > 0 {
            pow = pow * neg_x;
        }
        DdComplex { re: pow * inv_fact[n] * weights[n], im: Dd::ZERO }
    })?;
    if !eval.within(params.series_tol) {
        return Err(Error::RangeWarning { what: "m_wright", arg: x, bound: eval.rounding_bound() });
    }
    Ok(eval)
}

/// Kanter's function `A(φ) = [sin(βφ)^β sin((1-β)φ)^{1-β} / sin φ]^{1/(1-β)}`.
pub(crate) fn kanter(beta: f64, phi: f64) -> f64 {
    let num = (beta * phi).sin().powf(beta) * ((1.0 - beta) * phi).sin().powf(1.0 - beta);
    (num / phi.sin()).powf(1.0 / (1.0 - beta))
}

/// `M_β(x)` from the non-oscillatory integral representation
/// `M_β(x) = x^{β/(1-β)} / (π(1-β)) ∫_0^π A(φ) exp(-A(φ) x^{1/(1-β)}) dφ`,
/// valid for `x > 0` and `0 < β < 1`.
pub fn m_wright_integral(params: &MLParams, x: f64) -> Result<f64> {
    check_order(params)?;
    if x.is_nan() || x <= 0.0 {
        return Err(Error::InvalidParams(format!("integral representation needs x > 0, got {x}")));
    }
    let beta = params.beta;
    let c = x.powf(1.0 / (1.0 - beta));
    let gl = gauss16();
    let integral = gl.composite(0.0, PI, 96, |phi| {
        let a = kanter(beta, phi);
        if a.is_finite() {
            a * (-a * c).exp()
        } else {
            0.0
        }
    });
    Ok(x.powf(beta / (1.0 - beta)) / (PI * (1.0 - beta)) * integral)
}

fn gauss16() -> &'static GaussLegendre {
    use std::sync::OnceLock;
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// M-Wright function `M_β(x)` for `x >= 0`, `0 < β < 1`.
///
/// Uses the series while its cancellation bound holds and the integral
/// representation beyond.
pub fn m_wright(params: &MLParams, x: f64) -> Result<f64> {
    match m_wright_series(params, x) {
        Ok(s) => Ok(s.value.re),
        Err(Error::RangeWarning { .. }) | Err(Error::NonConvergent { .. }) if x > 0.0 => m_wright_integral(params, x),
        Err(e) => Err(e),
    }
}
