//! Radius `ε_β` of the disc around 0 on which `E_β` is zero-free.
//!
//! Zeros are located with the argument principle on circles `|z| = r`;
//! the scan stops where the validated series evaluation ends. `ε_β` is 0.8
//! times the smaller of the first-zero radius and that validated radius.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::Result;
use crate::special::{mittag_leffler, ml_derivative, MLParams};

const SAFETY: f64 = 0.8;
const SCAN_STEP: f64 = 0.25;
const SCAN_MAX: f64 = 60.0;
const BASE_SAMPLES: usize = 256;
const MAX_SAMPLES: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainRadius {
    /// Modulus of the nearest zero, if one lies inside the validated disc.
    pub zero_radius: Option<f64>,
    /// Largest scanned radius on which every sample evaluated.
    pub validated_radius: f64,
    pub epsilon: f64,
}

/// Winding number of `E_β` on `|z| = r` with `m` samples; `Some(None)` when a
/// phase step is too large to resolve.
fn winding(params: &MLParams, r: f64, m: usize) -> Option<Option<i64>> {
    let start = mittag_leffler(params, Complex64::new(r, 0.0)).ok()?;
    let mut total = 0.0;
    let mut prev = start;
    for j in 1..=m {
        let v = if j == m { start } else { mittag_leffler(params, Complex64::from_polar(r, 2.0 * PI * j as f64 / m as f64)).ok()? };
        let step = (v / prev).arg();
        if step.abs() > PI / 3.0 {
            return Some(None);
        }
        total += step;
        prev = v;
    }
    Some(Some((total / (2.0 * PI)).round() as i64))
}

/// Number of zeros inside `|z| < r`, or `None` when the circle cannot be evaluated.
fn zeros_inside(params: &MLParams, r: f64) -> Option<i64> {
    let mut m = BASE_SAMPLES;
    while m <= MAX_SAMPLES {
        if let Some(n) = winding(params, r, m)? {
            return Some(n);
        }
        m *= 2;
    }
    None
}

/// Newton iteration from the sample of least modulus on `|z| = r`.
fn nearest_zero(params: &MLParams, r: f64) -> Option<Complex64> {
    let mut z = (0..BASE_SAMPLES)
        .map(|j| Complex64::from_polar(r, 2.0 * PI * j as f64 / BASE_SAMPLES as f64))
        .filter_map(|z| mittag_leffler(params, z).ok().map(|v| (z, v.norm())))
        .min_by(|a, b| a.1.total_cmp(&b.1))?
        .0;
    for _ in 0..60 {
        let step = mittag_leffler(params, z).ok()? / ml_derivative(params, z).ok()?;
        z -= step;
        if step.norm() <= 1e-15 * z.norm() {
            return Some(z);
        }
    }
    None
}

fn compute(params: &MLParams) -> DomainRadius {
    let mut validated = 0.0;
    let mut bracket = None;
    let mut r = SCAN_STEP;
    while r <= SCAN_MAX {
        match zeros_inside(params, r) {
            Some(0) => validated = r,
            Some(_) => {
                bracket = Some(r);
                validated = r;
                break;
            }
            None => break,
        }
        r += SCAN_STEP;
    }
    let zero_radius = bracket.and_then(|hi| nearest_zero(params, hi)).map(|z| z.norm());
    let limit = zero_radius.map_or(validated, |z| z.min(validated));
    DomainRadius { zero_radius, validated_radius: validated, epsilon: SAFETY * limit }
}

/// Zero-free radius data for `E_β`, computed once per β.
pub fn domain_radius(params: &MLParams) -> Result<DomainRadius> {
    params.validate()?;
    static CACHE: OnceLock<Mutex<HashMap<u64, DomainRadius>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = params.beta.to_bits();
    if let Some(d) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(*d);
    }
    let base = MLParams::new(params.beta)?;
    let d = compute(&base);
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(key, d);
    Ok(d)
}

/// `ε_β`: admissible bound for `½|⟨ξ,ξ⟩|`.
pub fn epsilon_beta(params: &MLParams) -> Result<f64> {
    domain_radius(params).map(|d| d.epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_zero_is_erfc_zero() {
        // E_{1/2}(z) = e^{z²} erfc(-z); first erfc zero at -1.354810 ± 1.991467i
        let d = domain_radius(&MLParams::new(0.5).unwrap()).unwrap();
        let want = (1.354_810_128_112_01f64.powi(2) + 1.991_466_842_833_88f64.powi(2)).sqrt();
        assert!((d.zero_radius.unwrap() - want).abs() < 1e-6, "{d:?}");
        assert!((d.epsilon - 0.8 * want).abs() < 1e-5);
    }

    #[test]
    fn exponential_has_no_zeros() {
        let d = domain_radius(&MLParams::new(1.0).unwrap()).unwrap();
        assert!(d.zero_radius.is_none());
        assert!(d.validated_radius > 10.0);
        assert_eq!(d.epsilon, 0.8 * d.validated_radius);
    }
}
