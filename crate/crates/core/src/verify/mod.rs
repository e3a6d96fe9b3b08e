//! Verification suites: every check records both sides, the tolerance and the
//! identity it exercises.

mod appell;
mod mc;
mod operators;
mod special;
mod transforms;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::MCEstimate;
use crate::operators::{norm_bound_report, BoundKind, BoundReport};
use crate::special::MLParams;
use crate::tensor::SymTensor;

/// Statistical checks below this many samples are flagged underpowered.
pub const MIN_SAMPLES: usize = 10_000;

/// Acceptance band for Monte Carlo checks, in standard errors.
pub const SIGMA_BAND: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub beta: f64,
    pub dim: usize,
    pub trunc: usize,
    pub seed: u64,
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { beta: 0.5, dim: 2, trunc: 8, seed: 1, samples: 100_000 }
    }
}

impl VerifyConfig {
    pub fn params(&self) -> Result<MLParams> {
        MLParams::new(self.beta)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        if self.dim == 0 || self.dim > 4 {
            return Err(Error::InvalidParams(format!("verification runs in dimension 1..=4, got {}", self.dim)));
        }
        if !(2..=20).contains(&self.trunc) {
            return Err(Error::InvalidParams(format!("verification truncation must lie in 2..=20, got {}", self.trunc)));
        }
        Ok(())
    }

    fn powered(&self) -> bool {
        self.samples >= MIN_SAMPLES
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Special,
    Appell,
    Transforms,
    Operators,
    Mc,
    Mehler,
    Bounds,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Special, Suite::Appell, Suite::Transforms, Suite::Operators, Suite::Mc, Suite::Mehler, Suite::Bounds];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Special => "special",
            Suite::Appell => "appell",
            Suite::Transforms => "transforms",
            Suite::Operators => "operators",
            Suite::Mc => "mc",
            Suite::Mehler => "mehler",
            Suite::Bounds => "bounds",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([&Suite::All])
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded for inspection, never a failure.
    Reported,
    /// Too few samples for the statistical band to mean anything.
    Underpowered,
}

/// A real or complex side of a check; complex values serialize as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Complex([f64; 2]),
    /// A non-finite value, written as `null`.
    Missing(()),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Complex([z.re, z.im])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity or formula under test.
    pub reference: String,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigmas: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

impl Check {
    /// `|lhs - rhs| ≤ tol`.
    pub fn close(name: impl Into<String>, reference: &str, lhs: impl Into<Value>, rhs: impl Into<Value>, tol: f64) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let ok = distance(lhs, rhs) <= tol;
        Check { name: name.into(), reference: reference.into(), status: pass_if(ok), lhs, rhs, tol: Some(tol), sigmas: None, note: None }
    }

    /// A non-negative error measure `err ≤ tol`; the right side is 0.
    pub fn small(name: impl Into<String>, reference: &str, err: f64, tol: f64) -> Self {
        Check::close(name, reference, err, 0.0, tol)
    }

    /// `lhs > rhs`.
    pub fn exceeds(name: impl Into<String>, reference: &str, lhs: f64, rhs: f64) -> Self {
        Check {
            name: name.into(),
            reference: reference.into(),
            status: pass_if(lhs > rhs),
            lhs: lhs.into(),
            rhs: rhs.into(),
            tol: None,
            sigmas: None,
            note: None,
        }
    }

    /// Monte Carlo estimate against its analytic value within
    /// [`SIGMA_BAND`] standard errors plus `slack`.
    pub fn statistical(
        name: impl Into<String>,
        reference: &str,
        est: &MCEstimate,
        analytic: Complex64,
        slack: f64,
        powered: bool,
    ) -> Self {
        let status = if !powered {
            Status::Underpowered
        } else {
            pass_if(est.within(analytic, SIGMA_BAND, slack))
        };
        let sigmas = est.sigmas(analytic);
        Check {
            name: name.into(),
            reference: reference.into(),
            status,
            lhs: est.value.into(),
            rhs: analytic.into(),
            tol: Some(SIGMA_BAND * est.std_error + slack),
            sigmas: Some(sigmas),
            note: (!powered).then(|| format!("{} samples; the {SIGMA_BAND}-sigma band is not meaningful below {MIN_SAMPLES}", est.count)),
        }
    }

    pub fn reported(name: impl Into<String>, reference: &str, lhs: impl Into<Value>, rhs: impl Into<Value>) -> Self {
        Check {
            name: name.into(),
            reference: reference.into(),
            status: Status::Reported,
            lhs: lhs.into(),
            rhs: rhs.into(),
            tol: None,
            sigmas: None,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn failed(name: impl Into<String>, reference: &str, err: &Error) -> Self {
        Check {
            name: name.into(),
            reference: reference.into(),
            status: Status::Fail,
            lhs: f64::NAN.into(),
            rhs: f64::NAN.into(),
            tol: None,
            sigmas: None,
            note: Some(err.to_string()),
        }
    }
}

fn distance(a: Value, b: Value) -> f64 {
    let z = |v: Value| match v {
        Value::Real(x) => Complex64::new(x, 0.0),
        Value::Complex([re, im]) => Complex64::new(re, im),
        Value::Missing(()) => Complex64::new(f64::NAN, 0.0),
    };
    let d = (z(a) - z(b)).norm();
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

pub(crate) fn rng(cfg: &VerifyConfig, salt: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(salt);
    r
}

pub(crate) fn random_vector(rng: &mut ChaCha8Rng, dim: usize, scale: f64, complex: bool) -> Vec<Complex64> {
    (0..dim)
        .map(|_| {
            let im = if complex { rng.random_range(-scale..scale) } else { 0.0 };
            Complex64::new(rng.random_range(-scale..scale), im)
        })
        .collect()
}

pub(crate) fn random_tensor(rng: &mut ChaCha8Rng, dim: usize, degree: usize, scale: f64) -> SymTensor {
    SymTensor::from_fn(dim, degree, |_| Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale)))
}

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Runs a check body, turning an unexpected error into a failed check.
pub(crate) fn guarded(name: &str, reference: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::failed(name, reference, &e))
}

/// Like [`guarded`] for bodies producing several checks.
pub(crate) fn guarded_many(name: &str, reference: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Vec<Check> {
    f().unwrap_or_else(|e| vec![Check::failed(name, reference, &e)])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub config: VerifyConfig,
    /// Seconds since the Unix epoch; omitted in deterministic runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bound_tables: Vec<BoundReport>,
}

impl Report {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// No asserted check failed.
    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report { suite, config: *cfg, timestamp: None, checks: Vec::new(), bound_tables: Vec::new() };
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        let (mut checks, tables) = run_one(s, cfg)?;
        if suite == Suite::All {
            for c in &mut checks {
                c.name = format!("{s}/{}", c.name);
            }
        }
        report.checks.extend(checks);
        report.bound_tables.extend(tables);
    }
    Ok(report)
}

fn run_one(suite: Suite, cfg: &VerifyConfig) -> Result<(Vec<Check>, Vec<BoundReport>)> {
    Ok(match suite {
        Suite::Special => (special::checks(cfg), vec![]),
        Suite::Appell => (appell::checks(cfg), vec![]),
        Suite::Transforms => (transforms::checks(cfg), vec![]),
        Suite::Operators => (operators::checks(cfg), vec![]),
        Suite::Mc => (mc::checks(cfg), vec![]),
        Suite::Mehler => (mc::mehler_checks(cfg), vec![]),
        Suite::Bounds => bounds(cfg)?,
        Suite::All => unreachable!("expanded by run"),
    })
}

/// `(p, q)` pairs of the bound tables.
pub const BOUND_ORDERS: [(i32, i32); 3] = [(1, 1), (2, 1), (1, 2)];

/// Random cases per bound table.
pub const BOUND_CASES: usize = 50;

fn bounds(cfg: &VerifyConfig) -> Result<(Vec<Check>, Vec<BoundReport>)> {
    let params = cfg.params()?;
    let mut checks = Vec::new();
    let mut tables = Vec::new();
    for kind in [BoundKind::Translation, BoundKind::Gateaux, BoundKind::IntegralKernel] {
        for &(p, q) in &BOUND_ORDERS {
            let name = format!("{}_p{p}_q{q}", kind.name());
            let reference = match kind {
                BoundKind::Translation => "‖τ_y φ‖_{p,q} ≤ C ‖φ‖_{p+q,q} exp(c|y|²_{-(p+q)})",
                BoundKind::Gateaux => "‖D_y φ‖_{p,q} ≤ C |y|_{-(p+q)} ‖φ‖_{p+q,q}",
                BoundKind::IntegralKernel => "‖Ξ_{l,m}(κ) φ‖_{-p,-q} ≤ C_{l,m} |κ|_{-p} ‖φ‖_{p,q}",
            };
            let seed = cfg.seed ^ ((p as u64) << 8 | q as u64);
            match norm_bound_report(kind, &params, p, q, BOUND_CASES, seed) {
                Ok(r) => {
                    checks.push(Check::reported(name, reference, r.max_ratio, 1.0).with_note(format!(
                        "max lhs/rhs over {} cases; mean {:.3e}, {} exceedances",
                        r.cases.len(),
                        r.mean_ratio,
                        r.exceedances
                    )));
                    tables.push(r);
                }
                Err(e) => checks.push(Check::reported(name, reference, f64::NAN, 1.0).with_note(format!("not generated: {e}"))),
            }
        }
    }
    Ok((checks, tables))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.iter().chain([&Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
            assert_eq!(serde_json::to_string(s).unwrap(), format!("\"{s}\""));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn check_constructors() {
        assert_eq!(Check::small("a", "x", 1e-13, 1e-12).status, Status::Pass);
        assert_eq!(Check::small("a", "x", f64::NAN, 1e-12).status, Status::Fail);
        assert_eq!(Check::exceeds("a", "x", 2.0, 1.0).status, Status::Pass);
        let est = MCEstimate { value: Complex64::new(1.0, 0.0), std_error: 0.1, count: 10 };
        let c = Check::statistical("m", "x", &est, Complex64::new(5.0, 0.0), 0.0, false);
        assert_eq!(c.status, Status::Underpowered);
        let c = Check::statistical("m", "x", &est, Complex64::new(1.3, 0.0), 0.0, true);
        assert_eq!(c.status, Status::Pass);
        let json = serde_json::to_value(&c).unwrap();
        for key in ["name", "reference", "status", "lhs", "rhs", "tol", "sigmas"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn bounds_are_only_reported() {
        let r = run(Suite::Bounds, &VerifyConfig::default()).unwrap();
        assert_eq!(r.checks.len(), 9);
        assert!(r.checks.iter().all(|c| c.status == Status::Reported));
        assert_eq!(r.bound_tables.len(), 9);
        assert!(r.passed());
    }
}
