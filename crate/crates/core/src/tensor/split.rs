//! Tensors symmetric separately in a left block of `l` slots and a right
//! block of `m` slots, such as integral-operator kernels `κ(s_1..s_l; t_1..t_m)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::multiindex::{binomial, for_each_sub_multiset, merge, multiplicity, multisets, runs};
use super::{SymTensor, WeightProfile};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "super::json::SplitTensorJson", into = "super::json::SplitTensorJson")]
pub struct SplitTensor {
    dim: usize,
    left: usize,
    right: usize,
    coeffs: BTreeMap<(Vec<usize>, Vec<usize>), Complex64>,
}

impl PartialEq for SplitTensor {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.left == other.left
            && self.right == other.right
            && self.coeffs.iter().all(|(k, v)| other.coeffs.get(k).copied().unwrap_or(ZERO) == *v)
            && other.coeffs.iter().all(|(k, v)| self.coeffs.get(k).copied().unwrap_or(ZERO) == *v)
    }
}

impl SplitTensor {
    pub fn zeros(dim: usize, left: usize, right: usize) -> Self {
        assert!(dim >= 1, "tensor dimension must be at least 1");
        SplitTensor { dim, left, right, coeffs: BTreeMap::new() }
    }

    pub fn from_fn<F: FnMut(&[usize], &[usize]) -> Complex64>(dim: usize, left: usize, right: usize, mut f: F) -> Self {
        let mut t = SplitTensor::zeros(dim, left, right);
        let rights = multisets(dim, right);
        for k in multisets(dim, left) {
            for l in &rights {
                let c = f(&k, l);
                if c != ZERO {
                    t.coeffs.insert((k.clone(), l.clone()), c);
                }
            }
        }
        t
    }

    /// Regards a fully symmetric tensor as split after `left` slots.
    pub fn from_sym(t: &SymTensor, left: usize) -> Result<Self> {
        if left > t.degree() {
            return Err(Error::DegreeMismatch { expected: t.degree(), found: left });
        }
        let mut out = SplitTensor::zeros(t.dim(), left, t.degree() - left);
        for (key, v) in t.iter() {
            for_each_sub_multiset(key, left, |k, l, _| {
                out.coeffs.insert((k.to_vec(), l.to_vec()), v);
            });
        }
        Ok(out)
    }

    /// `u ⊗ v` with `u` on the left block and `v` on the right.
    pub fn outer(u: &SymTensor, v: &SymTensor) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::DimMismatch(u.dim(), v.dim()));
        }
        let mut out = SplitTensor::zeros(u.dim(), u.degree(), v.degree());
        for (k, a) in u.iter() {
            for (l, b) in v.iter() {
                out.coeffs.insert((k.to_vec(), l.to_vec()), a * b);
            }
        }
        Ok(out)
    }

    /// Matrix kernel with `κ[k; l] = a[k][l]`.
    pub fn from_matrix(a: &[Vec<Complex64>]) -> Result<Self> {
        let d = a.len();
        if d == 0 || a.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidParams("kernel matrix must be square and non-empty".into()));
        }
        Ok(SplitTensor::from_fn(d, 1, 1, |k, l| a[k[0]][l[0]]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn get(&self, left: &[usize], right: &[usize]) -> Complex64 {
        let mut k = left.to_vec();
        let mut l = right.to_vec();
        k.sort_unstable();
        l.sort_unstable();
        self.coeffs.get(&(k, l)).copied().unwrap_or(ZERO)
    }

    pub fn set(&mut self, left: &[usize], right: &[usize], c: Complex64) {
        assert_eq!(left.len(), self.left, "left index length mismatch");
        assert_eq!(right.len(), self.right, "right index length mismatch");
        assert!(left.iter().chain(right).all(|&i| i < self.dim), "index out of range");
        let mut k = left.to_vec();
        let mut l = right.to_vec();
        k.sort_unstable();
        l.sort_unstable();
        self.coeffs.insert((k, l), c);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &[usize], Complex64)> + '_ {
        self.coeffs.iter().map(|((k, l), v)| (k.as_slice(), l.as_slice(), *v))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut t = self.clone();
        for v in t.coeffs.values_mut() {
            *v *= c;
        }
        t
    }

    /// Bilinear pairing over all index tuples of both blocks.
    pub fn pairing(&self, other: &SplitTensor) -> Result<Complex64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        if self.left != other.left || self.right != other.right {
            return Err(Error::DegreeMismatch { expected: self.left + self.right, found: other.left + other.right });
        }
        Ok(self
            .coeffs
            .iter()
            .filter_map(|(key, v)| other.coeffs.get(key).map(|w| v * w * multiplicity(&key.0) * multiplicity(&key.1)))
            .sum())
    }

    /// `⟨κ, u^{⊗l} ⊗ v^{⊗m}⟩`.
    pub fn pair_powers(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let pw = |key: &[usize], x: &[Complex64]| key.iter().fold(Complex64::new(1.0, 0.0), |acc, &i| acc * x[i]);
        self.coeffs
            .iter()
            .map(|((k, l), c)| c * multiplicity(k) * multiplicity(l) * pw(k, u) * pw(l, v))
            .sum()
    }

    /// Full symmetrization over all `l + m` slots.
    pub fn symmetrize(&self) -> SymTensor {
        let n = self.left + self.right;
        let norm = binomial(n, self.left);
        let mut out = SymTensor::zeros(self.dim, n);
        for ((k, l), v) in &self.coeffs {
            let key = merge(k, l);
            let w: f64 =
                runs(&key).iter().map(|&(x, c)| binomial(c, k.iter().filter(|&&y| y == x).count())).product();
            out.add_at(&key, v * (w / norm));
        }
        out
    }

    /// `|κ|_p` over both blocks, with the weights of [`super::weighted_norm`].
    pub fn weighted_norm(&self, w: WeightProfile) -> f64 {
        let wk = |key: &[usize]| key.iter().map(|&i| w.weight(i)).product::<f64>();
        self.coeffs
            .iter()
            .map(|((k, l), v)| multiplicity(k) * multiplicity(l) * v.norm_sqr() * (wk(k) * wk(l)).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &SplitTensor) -> f64 {
        let a = self.coeffs.iter().map(|(key, v)| (v - other.coeffs.get(key).copied().unwrap_or(ZERO)).norm());
        let b = other.coeffs.iter().filter(|(key, _)| !self.coeffs.contains_key(*key)).map(|(_, v)| v.norm());
        a.chain(b).fold(0.0, f64::max)
    }
}
