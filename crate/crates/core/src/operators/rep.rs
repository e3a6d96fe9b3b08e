//! Serializable operator descriptions.
//!
//! Wire format: `{"kind": "gateaux", "params": {"beta": 0.5}, "dim": 2, "y": [[1, 0], 0.5]}`.
//! Kinds and their fields:
//! `identity`; `diff_const` (`kappa`: SymTensor); `gateaux`, `translate` (`y`);
//! `creation`, `annihilation` (`k`); `scale` (`c`);
//! `integral_kernel` (`kernel`: SplitTensor, or `matrix` A giving `Ξ_{1,1}` with symbol `⟨ξ, Aη⟩ Î`);
//! `composition` (`factors`, applied right to left).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{annihilation, creation, diff_const, gateaux, integral_kernel_op, scale, translate};
use crate::appell::ChaosVector;
use crate::cjson;
use crate::error::{Error, Result};
use crate::special::MLParams;
use crate::tensor::{SplitTensor, SymTensor};
use crate::transforms::bilinear;

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    Identity,
    DiffConst(SymTensor),
    Gateaux(Vec<Complex64>),
    Creation(usize),
    Annihilation(usize),
    Translate(Vec<Complex64>),
    Scale(f64),
    IntegralKernel(SplitTensor),
    /// `factors[0] ∘ factors[1] ∘ ...`
    Composition(Vec<OperatorKind>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorJson", into = "OperatorJson")]
pub struct OperatorRep {
    pub kind: OperatorKind,
    pub params: MLParams,
    pub dim: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct KindJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kappa: Option<SymTensor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kernel: Option<SplitTensor>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "cjson::opt_vec")]
    y: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "cjson::opt_matrix")]
    matrix: Option<Vec<Vec<Complex64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<KindJson>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct OperatorJson {
    #[serde(flatten)]
    kind: KindJson,
    #[serde(default)]
    params: MLParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
}

fn missing(kind: &str, field: &str) -> Error {
    Error::Parse(format!("operator kind {kind:?} needs field {field:?}"))
}

impl KindJson {
    fn parse(self) -> Result<(OperatorKind, Option<usize>)> {
        let kind = self.kind.as_str();
        Ok(match kind {
            "identity" => (OperatorKind::Identity, None),
            "diff_const" => {
                let t = self.kappa.ok_or_else(|| missing(kind, "kappa"))?;
                let d = t.dim();
                (OperatorKind::DiffConst(t), Some(d))
            }
            "gateaux" | "translate" => {
                let y = self.y.ok_or_else(|| missing(kind, "y"))?;
                let d = y.len();
                let k = if kind == "gateaux" { OperatorKind::Gateaux(y) } else { OperatorKind::Translate(y) };
                (k, Some(d))
            }
            "creation" => (OperatorKind::Creation(self.k.ok_or_else(|| missing(kind, "k"))?), None),
            "annihilation" => (OperatorKind::Annihilation(self.k.ok_or_else(|| missing(kind, "k"))?), None),
            "scale" => (OperatorKind::Scale(self.c.ok_or_else(|| missing(kind, "c"))?), None),
            "integral_kernel" => {
                let kernel = match (self.kernel, self.matrix) {
                    (Some(k), None) => k,
                    (None, Some(a)) => OperatorRep::kernel_from_matrix(&a)?,
                    _ => return Err(Error::Parse("integral_kernel needs exactly one of \"kernel\" or \"matrix\"".into())),
                };
                let d = kernel.dim();
                (OperatorKind::IntegralKernel(kernel), Some(d))
            }
            "composition" => {
                let mut dim = None;
                let mut out = Vec::new();
                for f in self.factors.ok_or_else(|| missing(kind, "factors"))? {
                    let (k, d) = f.parse()?;
                    dim = dim.or(d);
                    out.push(k);
                }
                (OperatorKind::Composition(out), dim)
            }
            other => return Err(Error::Parse(format!("unknown operator kind {other:?}"))),
        })
    }

    fn from_kind(k: &OperatorKind) -> Self {
        let mut j = KindJson::default();
        match k {
            OperatorKind::Identity => j.kind = "identity".into(),
            OperatorKind::DiffConst(t) => {
                j.kind = "diff_const".into();
                j.kappa = Some(t.clone());
            }
            OperatorKind::Gateaux(y) => {
                j.kind = "gateaux".into();
                j.y = Some(y.clone());
            }
            OperatorKind::Translate(y) => {
                j.kind = "translate".into();
                j.y = Some(y.clone());
            }
            OperatorKind::Creation(k) => {
                j.kind = "creation".into();
                j.k = Some(*k);
            }
            OperatorKind::Annihilation(k) => {
                j.kind = "annihilation".into();
                j.k = Some(*k);
            }
            OperatorKind::Scale(c) => {
                j.kind = "scale".into();
                j.c = Some(*c);
            }
            OperatorKind::IntegralKernel(t) => {
                j.kind = "integral_kernel".into();
                j.kernel = Some(t.clone());
            }
            OperatorKind::Composition(fs) => {
                j.kind = "composition".into();
                j.factors = Some(fs.iter().map(KindJson::from_kind).collect());
            }
        }
        j
    }
}

impl TryFrom<OperatorJson> for OperatorRep {
    type Error = Error;

    fn try_from(j: OperatorJson) -> Result<Self> {
        let (kind, inferred) = j.kind.parse()?;
        let dim = match (j.dim, inferred) {
            (Some(a), Some(b)) if a != b => return Err(Error::DimMismatch(a, b)),
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Error::Parse("operator needs a \"dim\" field".into())),
        };
        OperatorRep::new(kind, j.params, dim)
    }
}

impl From<OperatorRep> for OperatorJson {
    fn from(op: OperatorRep) -> Self {
        OperatorJson { kind: KindJson::from_kind(&op.kind), params: op.params, dim: Some(op.dim) }
    }
}

fn validate_kind(kind: &OperatorKind, dim: usize) -> Result<()> {
    let check_dim = |d: usize| if d == dim { Ok(()) } else { Err(Error::DimMismatch(dim, d)) };
    match kind {
        OperatorKind::Identity | OperatorKind::Scale(_) => Ok(()),
        OperatorKind::DiffConst(t) => check_dim(t.dim()),
        OperatorKind::Gateaux(y) | OperatorKind::Translate(y) => check_dim(y.len()),
        OperatorKind::Creation(k) | OperatorKind::Annihilation(k) => {
            if *k < dim {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("basis index {k} out of range for dimension {dim}")))
            }
        }
        OperatorKind::IntegralKernel(t) => check_dim(t.dim()),
        OperatorKind::Composition(fs) => fs.iter().try_for_each(|f| validate_kind(f, dim)),
    }
}

fn apply_kind(kind: &OperatorKind, phi: &ChaosVector) -> Result<ChaosVector> {
    match kind {
        OperatorKind::Identity => Ok(phi.clone()),
        OperatorKind::DiffConst(t) => diff_const(t, phi),
        OperatorKind::Gateaux(y) => gateaux(y, phi),
        OperatorKind::Creation(k) => creation(*k, phi),
        OperatorKind::Annihilation(k) => annihilation(*k, phi),
        OperatorKind::Translate(y) => translate(y, phi),
        OperatorKind::Scale(c) => scale(*c, phi),
        OperatorKind::IntegralKernel(t) => integral_kernel_op(t, phi),
        OperatorKind::Composition(fs) => fs.iter().rev().try_fold(phi.clone(), |v, f| apply_kind(f, &v)),
    }
}

impl OperatorRep {
    pub fn new(kind: OperatorKind, params: MLParams, dim: usize) -> Result<Self> {
        params.validate()?;
        if dim == 0 {
            return Err(Error::InvalidParams("dimension must be at least 1".into()));
        }
        validate_kind(&kind, dim)?;
        Ok(OperatorRep { kind, params, dim })
    }

    pub fn identity(params: MLParams, dim: usize) -> Self {
        OperatorRep { kind: OperatorKind::Identity, params, dim }
    }

    /// `Ξ_{1,1}` whose symbol is `⟨ξ, Aη⟩ Î(ξ,η)`: `κ[k; l] = A[l][k]`.
    pub fn kernel_from_matrix(a: &[Vec<Complex64>]) -> Result<SplitTensor> {
        let t: Vec<Vec<Complex64>> = (0..a.len()).map(|k| a.iter().map(|row| row.get(k).copied().unwrap_or_default()).collect()).collect();
        if a.iter().any(|r| r.len() != a.len()) {
            return Err(Error::InvalidParams("kernel matrix must be square".into()));
        }
        SplitTensor::from_matrix(&t)
    }

    pub fn apply(&self, phi: &ChaosVector) -> Result<ChaosVector> {
        if phi.dim != self.dim {
            return Err(Error::DimMismatch(self.dim, phi.dim));
        }
        if !phi.params.same_beta(&self.params) {
            return Err(Error::BetaMismatch(self.params.beta, phi.params.beta));
        }
        apply_kind(&self.kind, phi)
    }

    /// Factor `f` with `Ξ̂(ξ,η) = f(ξ,η) · Î(ξ,η)`, for kinds where it is known.
    pub fn symbol_factor(&self, xi: &[Complex64], eta: &[Complex64]) -> Option<Complex64> {
        match &self.kind {
            OperatorKind::Identity => Some(Complex64::new(1.0, 0.0)),
            OperatorKind::DiffConst(t) => Some(t.pair_power(xi)),
            OperatorKind::Gateaux(y) => Some(bilinear(y, xi)),
            OperatorKind::Annihilation(k) => Some(xi[*k]),
            OperatorKind::Creation(k) => Some(eta[*k]),
            OperatorKind::Translate(y) => Some(bilinear(y, xi).exp()),
            OperatorKind::IntegralKernel(t) => Some(t.pair_powers(eta, xi)),
            OperatorKind::Scale(_) | OperatorKind::Composition(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_inference() {
        let op: OperatorRep =
            serde_json::from_str(r#"{"kind":"gateaux","params":{"beta":0.5},"y":[1.0,[0.5,-2.0]]}"#).unwrap();
        assert_eq!(op.dim, 2);
        assert_eq!(op.kind, OperatorKind::Gateaux(vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, -2.0)]));
        let s = serde_json::to_string(&op).unwrap();
        assert_eq!(serde_json::from_str::<OperatorRep>(&s).unwrap(), op);

        let m: OperatorRep =
            serde_json::from_str(r#"{"kind":"integral_kernel","params":{"beta":0.75},"matrix":[[1,2],[3,4]]}"#).unwrap();
        let OperatorKind::IntegralKernel(k) = &m.kind else { panic!() };
        assert_eq!(k.get(&[0], &[1]), Complex64::new(3.0, 0.0));
        let back: OperatorRep = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);

        let comp: OperatorRep = serde_json::from_str(
            r#"{"kind":"composition","dim":3,"factors":[{"kind":"creation","k":0},{"kind":"annihilation","k":2}]}"#,
        )
        .unwrap();
        assert_eq!(comp.kind, OperatorKind::Composition(vec![OperatorKind::Creation(0), OperatorKind::Annihilation(2)]));
    }

    #[test]
    fn json_rejections() {
        assert!(serde_json::from_str::<OperatorRep>(r#"{"kind":"identity"}"#).is_err());
        assert!(serde_json::from_str::<OperatorRep>(r#"{"kind":"warp","dim":2}"#).is_err());
        assert!(serde_json::from_str::<OperatorRep>(r#"{"kind":"creation","dim":2,"k":2}"#).is_err());
        assert!(serde_json::from_str::<OperatorRep>(r#"{"kind":"gateaux","dim":3,"y":[1,2]}"#).is_err());
        assert!(serde_json::from_str::<OperatorRep>(r#"{"kind":"identity","dim":2,"params":{"beta":1.5}}"#).is_err());
    }
}
