//! Wire format: `{"dim": d, "degree": n, "coeffs": {"0,1,1": [re, im], ...}}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SplitTensor, SymTensor};
use crate::error::Error;

#[derive(Serialize, Deserialize)]
pub(super) struct SymTensorJson {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<String, [f64; 2]>,
}

fn join(key: &[usize]) -> String {
    key.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

fn split_key(s: &str, dim: usize, len: usize) -> Result<Vec<usize>, Error> {
    let key: Vec<usize> = if s.is_empty() {
        Vec::new()
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad index {p:?} in key {s:?}: {e}"))))
            .collect::<Result<_, _>>()?
    };
    if key.len() != len {
        return Err(Error::Parse(format!("key {s:?} has length {}, expected {len}", key.len())));
    }
    if key.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Parse(format!("key {s:?} is not sorted")));
    }
    if key.iter().any(|&k| k >= dim) {
        return Err(Error::Parse(format!("key {s:?} out of range for dimension {dim}")));
    }
    Ok(key)
}

impl From<SymTensor> for SymTensorJson {
    fn from(t: SymTensor) -> Self {
        let coeffs = t.coeffs.iter().map(|(k, v)| (join(k), [v.re, v.im])).collect();
        SymTensorJson { dim: t.dim, degree: t.degree, coeffs }
    }
}

impl TryFrom<SymTensorJson> for SymTensor {
    type Error = Error;

    fn try_from(j: SymTensorJson) -> Result<Self, Error> {
        if j.dim == 0 {
            return Err(Error::Parse("dim must be at least 1".into()));
        }
        let mut t = SymTensor::zeros(j.dim, j.degree);
        for (k, [re, im]) in j.coeffs {
            let key = split_key(&k, j.dim, j.degree)?;
            t.coeffs.insert(key, Complex64::new(re, im));
        }
        Ok(t)
    }
}

/// Split kernels use `"left|right"` keys, e.g. `"0,2|1"`.
#[derive(Serialize, Deserialize)]
pub(super) struct SplitTensorJson {
    dim: usize,
    left: usize,
    right: usize,
    coeffs: BTreeMap<String, [f64; 2]>,
}

impl From<SplitTensor> for SplitTensorJson {
    fn from(t: SplitTensor) -> Self {
        let coeffs = t.iter().map(|(k, l, v)| (format!("{}|{}", join(k), join(l)), [v.re, v.im])).collect();
        SplitTensorJson { dim: t.dim(), left: t.left(), right: t.right(), coeffs }
    }
}

impl TryFrom<SplitTensorJson> for SplitTensor {
    type Error = Error;

    fn try_from(j: SplitTensorJson) -> Result<Self, Error> {
        if j.dim == 0 {
            return Err(Error::Parse("dim must be at least 1".into()));
        }
        let mut t = SplitTensor::zeros(j.dim, j.left, j.right);
        for (k, [re, im]) in j.coeffs {
            let (a, b) = k.split_once('|').ok_or_else(|| Error::Parse(format!("kernel key {k:?} lacks '|'")))?;
            let a = split_key(a, j.dim, j.left)?;
            let b = split_key(b, j.dim, j.right)?;
            t.set(&a, &b, Complex64::new(re, im));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_exact_roundtrip() {
        let t = SymTensor::from_fn(3, 3, |k| {
            Complex64::new(1.0 / (1.0 + k[0] as f64 * 7.0 + k[2] as f64), -(k[1] as f64).sqrt() * 1e-300)
        });
        let s = serde_json::to_string(&t).unwrap();
        let back: SymTensor = serde_json::from_str(&s).unwrap();
        for (k, v) in t.iter() {
            let w = back.get(k);
            assert_eq!(v.re.to_bits(), w.re.to_bits());
            assert_eq!(v.im.to_bits(), w.im.to_bits());
        }
        assert_eq!(back, t);
    }

    #[test]
    fn scalar_uses_empty_key() {
        let t = SymTensor::scalar(2, Complex64::new(0.5, -1.0));
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"dim":2,"degree":0,"coeffs":{"":[0.5,-1.0]}}"#);
    }

    #[test]
    fn rejects_malformed_keys() {
        for bad in [
            r#"{"dim":2,"degree":2,"coeffs":{"1,0":[1,0]}}"#,
            r#"{"dim":2,"degree":2,"coeffs":{"0":[1,0]}}"#,
            r#"{"dim":2,"degree":1,"coeffs":{"2":[1,0]}}"#,
            r#"{"dim":2,"degree":1,"coeffs":{"x":[1,0]}}"#,
            r#"{"dim":0,"degree":0,"coeffs":{}}"#,
        ] {
            assert!(serde_json::from_str::<SymTensor>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn split_roundtrip() {
        let k = SplitTensor::from_fn(2, 2, 1, |a, b| Complex64::new((a[0] + a[1]) as f64 + 0.1, b[0] as f64));
        let s = serde_json::to_string(&k).unwrap();
        let back: SplitTensor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
    }
}
