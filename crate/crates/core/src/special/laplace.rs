//! Numerical check of `∫_0^∞ e^{-sτ} M_β(τ) dτ = E_β(-s)`.

use super::mittag_leffler::mittag_leffler_real;
use super::mwright::m_wright;
use super::quadrature::GaussLegendre;
use super::MLParams;
use crate::error::{Error, Result};

/// Target for the neglected tail `∫_T^∞ e^{-sτ} M_β(τ) dτ`.
const TAIL_TOL: f64 = 1e-9;
const MAX_HORIZON: f64 = 4096.0;
const NODES_PER_PANEL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceCheck {
    pub s: f64,
    pub quadrature: f64,
    pub reference: f64,
    /// Upper integration limit T.
    pub horizon: f64,
    /// Crude tail estimate `e^{-sT} M_β(T) T`.
    pub tail: f64,
}

impl LaplaceCheck {
    pub fn residual(&self) -> f64 {
        (self.quadrature - self.reference).abs()
    }
}

/// Evaluates both sides of the Laplace identity.
pub fn laplace_check(params: &MLParams, s: f64) -> Result<LaplaceCheck> {
    params.validate()?;
    if params.beta >= 1.0 {
        return Err(Error::BetaOutOfRange(params.beta));
    }
    if !(0.0..=10.0).contains(&s) {
        return Err(Error::InvalidParams(format!("Laplace variable must lie in [0, 10], got {s}")));
    }
    let weight = |tau: f64| -> Result<f64> { Ok((-s * tau).exp() * m_wright(params, tau)?) };
    let mut horizon = 4.0;
    let tail = loop {
        let tail = weight(horizon)? * horizon;
        if tail < 0.1 * TAIL_TOL {
            break tail;
        }
        horizon *= 2.0;
        if horizon > MAX_HORIZON {
            return Err(Error::QuadratureFailure(format!("tail e^(-sT) M(T) T = {tail:.3e} at T = {horizon}")));
        }
    };
    let panels = (params.quad_points / NODES_PER_PANEL).max(1);
    let gl = GaussLegendre::new(NODES_PER_PANEL);
    let mut failure = None;
    let quadrature = gl.composite(0.0, horizon, panels, |tau| match weight(tau) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let reference = mittag_leffler_real(params, -s)?;
    Ok(LaplaceCheck { s, quadrature, reference, horizon, tail })
}

/// `|∫_0^∞ e^{-sτ} M_β(τ) dτ - E_β(-s)|` for `s ∈ [0, 10]`, `0 < β < 1`.
pub fn laplace_identity_residual(params: &MLParams, s: f64) -> Result<f64> {
    laplace_check(params, s).map(|c| c.residual())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_has_unit_mass() {
        for &b in &[0.25, 0.5, 0.75] {
            let r = laplace_identity_residual(&MLParams::new(b).unwrap(), 0.0).unwrap();
            assert!(r < 1e-6, "b={b} r={r}");
        }
    }

    #[test]
    fn identity_holds_at_unit_argument() {
        let c = laplace_check(&MLParams::new(0.5).unwrap(), 1.0).unwrap();
        assert!(c.residual() < 1e-6);
        assert!((c.reference - 0.427_583_576_155_807).abs() < 1e-14);
    }

    #[test]
    fn rejects_point_mass_and_bad_argument() {
        let one = MLParams::new(1.0).unwrap();
        assert!(matches!(laplace_identity_residual(&one, 1.0), Err(Error::BetaOutOfRange(_))));
        let half = MLParams::new(0.5).unwrap();
        assert!(laplace_identity_residual(&half, -0.5).is_err());
        assert!(laplace_identity_residual(&half, 11.0).is_err());
    }
}
