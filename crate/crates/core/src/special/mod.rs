//! Scalar special functions: reciprocal gamma, Mittag-Leffler, M-Wright.

pub mod dd;
mod gamma;
mod laplace;
mod mittag_leffler;
mod mwright;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gamma::{gamma_real, gamma_reciprocal, rgamma_dd, rgamma_real};
pub use laplace::{laplace_check, laplace_identity_residual, LaplaceCheck};
pub use mittag_leffler::{
    mittag_leffler, mittag_leffler_general, mittag_leffler_real, ml_derivative, ml_negative_axis, ml_series,
    SeriesEval,
};
pub use mwright::{m_wright, m_wright_integral, m_wright_series};
pub(crate) use mwright::kanter;

/// Order of the Mittag-Leffler family plus numerical tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MLParams {
    pub beta: f64,
    pub series_tol: f64,
    pub max_terms: usize,
    pub quad_points: usize,
}

impl Default for MLParams {
    fn default() -> Self {
        MLParams { beta: 0.5, series_tol: 1e-14, max_terms: 512, quad_points: 2000 }
    }
}

impl MLParams {
    pub fn new(beta: f64) -> Result<Self> {
        let p = MLParams { beta, ..Default::default() };
        p.validate()?;
        Ok(p)
    }

    pub fn with_series_tol(mut self, tol: f64) -> Self {
        self.series_tol = tol;
        self
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn with_quad_points(mut self, n: usize) -> Self {
        self.quad_points = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidParams(format!("beta must lie in (0, 1], got {}", self.beta)));
        }
        if self.series_tol.is_nan() || self.series_tol <= 0.0 {
            return Err(Error::InvalidParams(format!("series_tol must be positive, got {}", self.series_tol)));
        }
        if self.max_terms < 8 {
            return Err(Error::InvalidParams(format!("max_terms must be at least 8, got {}", self.max_terms)));
        }
        if self.quad_points < 20 {
            return Err(Error::InvalidParams(format!("quad_points must be at least 20, got {}", self.quad_points)));
        }
        Ok(())
    }

    /// True when both parameter sets describe the same measure.
    pub fn same_beta(&self, other: &MLParams) -> bool {
        self.beta == other.beta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_params() {
        assert!(MLParams::new(0.0).is_err());
        assert!(MLParams::new(1.2).is_err());
        assert!(MLParams::new(f64::NAN).is_err());
        assert!(MLParams::new(1.0).is_ok());
        assert!(MLParams::new(0.5).unwrap().with_max_terms(4).validate().is_err());
        assert!(MLParams::new(0.5).unwrap().with_series_tol(0.0).validate().is_err());
    }

    #[test]
    fn serde_fills_defaults() {
        let p: MLParams = serde_json::from_str(r#"{"beta": 0.75}"#).unwrap();
        assert_eq!(p.beta, 0.75);
        assert_eq!(p.max_terms, 512);
        assert_eq!(p.series_tol, 1e-14);
    }
}
