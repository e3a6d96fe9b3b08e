//! Mittag-Leffler functions `E_β(z) = Σ z^n / Γ(βn+1)` and `E_{β,γ}`.
//!
//! The power series is summed in double-double arithmetic with a running
//! bound on the rounding error (proportional to `Σ|term|`). A result is only
//! returned when that bound is below `series_tol · max(1, |E|)`. On the
//! negative real axis, where the series cancels catastrophically for small β,
//! `E_β(-x)` falls back to its completely-monotone integral representation.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::dd::{DdComplex, DD_EPS};
use super::gamma::rgamma_progression;
use super::MLParams;
use crate::error::{Error, Result};

/// Raw result of a double-double series summation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    pub value: Complex64,
    pub terms: usize,
    /// `Σ |term_n|`; the cancellation condition number times `|value|`.
    pub abs_sum: f64,
}

impl SeriesEval {
    /// Upper bound on the accumulated rounding error of the summation.
    pub fn rounding_bound(&self) -> f64 {
        self.abs_sum * (2.0 * self.terms as f64 + 64.0) * DD_EPS
    }

    /// True when the rounding bound meets `tol · max(1, |value|)`.
    pub fn within(&self, tol: f64) -> bool {
        self.rounding_bound() <= tol * self.value.norm().max(1.0)
    }
}

/// Sums a series term by term with the three-small-terms stopping rule.
pub(crate) fn sum_series<F>(what: &'static str, params: &MLParams, mut term: F) -> Result<SeriesEval>
where
    F: FnMut(usize) -> DdComplex,
{
    let mut sum = DdComplex::ZERO;
    let mut abs_sum = 0.0;
    let mut small_run = 0;
    for n in 0..params.max_terms {
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::NonConvergent { what, terms: n });
        }
        sum = sum + t;
        let mag = t.norm_f64();
        abs_sum += mag;
        if !abs_sum.is_finite() {
            return Err(Error::NonConvergent { what, terms: n });
        }
        let scale = sum.norm_f64().max(1.0);
        if mag < params.series_tol * scale {
            small_run += 1;
            if small_run == 3 {
                return Ok(SeriesEval { value: sum.to_c64(), terms: n + 1, abs_sum });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergent { what, terms: params.max_terms })
}

/// Raw power series of `E_{β,γ}(z)` without range validation.
pub fn ml_series(params: &MLParams, gamma: f64, z: Complex64) -> Result<SeriesEval> {
    params.validate()?;
    let beta = params.beta;
    let zd = DdComplex::from_c64(z);
    let weights = rgamma_progression(beta, gamma, params.max_terms);
    let mut pow = DdComplex::ONE;
    sum_series("mittag_leffler", params, |n| {
        if n > 0 {
            pow = pow * zd;
        }
        pow.scale(weights[n])
    })
}

/// `E_β(-x)` for `x >= 0` and `0 < β < 1` from the spectral representation
/// `E_β(-x) = ∫_0^∞ K_β(r) e^{-r x^{1/β}} dr`,
/// `K_β(r) = sin(βπ) r^{β-1} / (π (r^{2β} + 2 r^β cos βπ + 1))`.
///
/// Integrated with the trapezoid rule in `u = ln r`, which converges
/// geometrically because the integrand is analytic in a strip.
pub fn ml_negative_axis(beta: f64, x: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::BetaOutOfRange(beta));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidParams(format!("negative-axis argument must be finite and >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let t = x.powf(1.0 / beta);
    let (s, c) = (beta * PI).sin_cos();
    // pole distance of the integrand from the real u-axis, capped so that
    // exp(-t e^u) stays bounded inside the strip
    let strip = (PI * (1.0 - beta) / beta).min(1.2);
    let h = (strip / 12.0).max(1e-3);
    let scale_floor = (1.0 / (1.0 + x)).ln();
    let u_min = ((1e-18f64).ln() + scale_floor) / beta;
    let u_max = (750.0 / t).ln();
    if u_max <= u_min {
        return Ok(0.0);
    }
    let steps = ((u_max - u_min) / h).ceil() as usize;
    let mut total = 0.0;
    let mut comp = 0.0;
    for j in 0..=steps {
        let u = u_min + j as f64 * h;
        let r = u.exp();
        let rb = (beta * u).exp();
        let f = s / PI * rb / (rb * rb + 2.0 * rb * c + 1.0) * (-r * t).exp();
        // Kahan summation
        let y = f - comp;
        let tmp = total + y;
        comp = (tmp - total) - y;
        total = tmp;
    }
    Ok(total * h)
}

/// Generalized Mittag-Leffler function `E_{β,γ}(z) = Σ z^n / Γ(βn+γ)`.
pub fn mittag_leffler_general(params: &MLParams, gamma: f64, z: Complex64) -> Result<Complex64> {
    params.validate()?;
    let series = ml_series(params, gamma, z);
    if let Ok(s) = &series {
        if s.within(params.series_tol) {
            return Ok(s.value);
        }
    }
    if gamma == 1.0 && z.im == 0.0 && z.re < 0.0 && params.beta < 1.0 {
        return ml_negative_axis(params.beta, -z.re).map(|v| Complex64::new(v, 0.0));
    }
    match series {
        Ok(s) => Err(Error::NonConvergent { what: "mittag_leffler (cancellation)", terms: s.terms }),
        Err(e) => Err(e),
    }
}

/// Mittag-Leffler function `E_β(z)`.
pub fn mittag_leffler(params: &MLParams, z: Complex64) -> Result<Complex64> {
    mittag_leffler_general(params, 1.0, z)
}

/// `E_β(x)` for real x.
pub fn mittag_leffler_real(params: &MLParams, x: f64) -> Result<f64> {
    mittag_leffler(params, Complex64::new(x, 0.0)).map(|v| v.re)
}

/// `d/dz E_β(z) = E_{β,β}(z) / β`.
pub fn ml_derivative(params: &MLParams, z: Complex64) -> Result<Complex64> {
    mittag_leffler_general(params, params.beta, z).map(|v| v / params.beta)
}
