//! Symmetric tensors over `C^d` stored by sorted multi-index.
//!
//! The coefficient under a sorted key is the common value of the fully
//! symmetric dense tensor at every permutation of that key. Pairings carry
//! the multinomial multiplicity, so `⟨a, b⟩` equals the dense sum over all
//! `d^n` index tuples.

mod dense;
mod json;
pub mod multiindex;
mod split;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use multiindex::{binomial, for_each_sub_multiset, merge, multiplicity, multisets};

pub use dense::{DenseTensor, Tensor};
pub use split::SplitTensor;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Degree-n symmetric tensor over `C^dim`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "json::SymTensorJson", into = "json::SymTensorJson")]
pub struct SymTensor {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Complex64>,
}

impl PartialEq for SymTensor {
    /// Entrywise equality; absent entries count as zero.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.degree == other.degree
            && self.coeffs.iter().all(|(k, v)| other.get_sorted(k) == *v)
            && other.coeffs.iter().all(|(k, v)| self.get_sorted(k) == *v)
    }
}

impl SymTensor {
    pub fn zeros(dim: usize, degree: usize) -> Self {
        assert!(dim >= 1, "tensor dimension must be at least 1");
        SymTensor { dim, degree, coeffs: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, c: Complex64) -> Self {
        let mut t = SymTensor::zeros(dim, 0);
        t.coeffs.insert(Vec::new(), c);
        t
    }

    pub fn one(dim: usize) -> Self {
        SymTensor::scalar(dim, ONE)
    }

    pub fn from_vector(v: &[Complex64]) -> Self {
        let mut t = SymTensor::zeros(v.len(), 1);
        for (k, &c) in v.iter().enumerate() {
            if c != ZERO {
                t.coeffs.insert(vec![k], c);
            }
        }
        t
    }

    pub fn from_real_vector(v: &[f64]) -> Self {
        let c: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        SymTensor::from_vector(&c)
    }

    /// Unit vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut t = SymTensor::zeros(dim, 1);
        t.coeffs.insert(vec![k], ONE);
        t
    }

    /// `v^{⊗n}`, with coefficient `Π v_{k_i}` under key `k`.
    pub fn power(v: &[Complex64], n: usize) -> Self {
        let mut t = SymTensor::zeros(v.len(), n);
        for key in multisets(v.len(), n) {
            let c = key.iter().fold(ONE, |acc, &k| acc * v[k]);
            if c != ZERO {
                t.coeffs.insert(key, c);
            }
        }
        t
    }

    /// Builds a tensor from `(index, value)` pairs; indices are sorted first,
    /// repeated keys accumulate.
    pub fn from_entries<I>(dim: usize, degree: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Complex64)>,
    {
        let mut t = SymTensor::zeros(dim, degree);
        for (mut key, c) in entries {
            if key.len() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: key.len() });
            }
            if let Some(&bad) = key.iter().find(|&&k| k >= dim) {
                return Err(Error::DimMismatch(dim, bad + 1));
            }
            key.sort_unstable();
            *t.coeffs.entry(key).or_insert(ZERO) += c;
        }
        Ok(t)
    }

    /// Every sorted key of this shape mapped through `f`.
    pub fn from_fn<F: FnMut(&[usize]) -> Complex64>(dim: usize, degree: usize, mut f: F) -> Self {
        let mut t = SymTensor::zeros(dim, degree);
        for key in multisets(dim, degree) {
            let c = f(&key);
            if c != ZERO {
                t.coeffs.insert(key, c);
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| *c == ZERO)
    }

    /// Value at any (not necessarily sorted) index tuple.
    pub fn get(&self, index: &[usize]) -> Complex64 {
        let mut key = index.to_vec();
        key.sort_unstable();
        self.get_sorted(&key)
    }

    fn get_sorted(&self, key: &[usize]) -> Complex64 {
        self.coeffs.get(key).copied().unwrap_or(ZERO)
    }

    pub fn set(&mut self, index: &[usize], c: Complex64) {
        let key = self.checked_key(index);
        self.coeffs.insert(key, c);
    }

    pub fn add_at(&mut self, index: &[usize], c: Complex64) {
        let key = self.checked_key(index);
        *self.coeffs.entry(key).or_insert(ZERO) += c;
    }

    fn checked_key(&self, index: &[usize]) -> Vec<usize> {
        assert_eq!(index.len(), self.degree, "index length must equal the tensor degree");
        assert!(index.iter().all(|&k| k < self.dim), "index out of range for dimension {}", self.dim);
        let mut key = index.to_vec();
        key.sort_unstable();
        key
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], Complex64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    /// The single entry of a degree-0 tensor.
    pub fn scalar_value(&self) -> Complex64 {
        debug_assert_eq!(self.degree, 0);
        self.get_sorted(&[])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut t = self.clone();
        t.scale_mut(c);
        t
    }

    pub fn scale_mut(&mut self, c: Complex64) {
        for v in self.coeffs.values_mut() {
            *v *= c;
        }
    }

    pub fn conj(&self) -> Self {
        let mut t = self.clone();
        for v in t.coeffs.values_mut() {
            *v = v.conj();
        }
        t
    }

    fn check_shape(&self, other: &SymTensor) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(())
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: Complex64, other: &SymTensor) -> Result<()> {
        self.check_shape(other)?;
        for (k, v) in &other.coeffs {
            *self.coeffs.entry(k.clone()).or_insert(ZERO) += c * v;
        }
        Ok(())
    }

    pub fn add(&self, other: &SymTensor) -> Result<Self> {
        let mut t = self.clone();
        t.axpy(ONE, other)?;
        Ok(t)
    }

    pub fn sub(&self, other: &SymTensor) -> Result<Self> {
        let mut t = self.clone();
        t.axpy(-ONE, other)?;
        Ok(t)
    }

    /// Bilinear pairing `Σ_tuples a_i b_i` (no conjugation).
    pub fn pairing(&self, other: &SymTensor) -> Result<Complex64> {
        self.check_shape(other)?;
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() { (self, other) } else { (other, self) };
        Ok(small
            .coeffs
            .iter()
            .filter_map(|(k, v)| large.coeffs.get(k).map(|w| v * w * multiplicity(k)))
            .sum())
    }

    /// Sesquilinear inner product `Σ_tuples a_i conj(b_i)`.
    pub fn inner(&self, other: &SymTensor) -> Result<Complex64> {
        self.pairing(&other.conj())
    }

    /// `⟨self, v^{⊗n}⟩` without forming the power.
    pub fn pair_power(&self, v: &[Complex64]) -> Complex64 {
        assert_eq!(v.len(), self.dim, "vector length must equal the tensor dimension");
        self.coeffs.iter().map(|(k, c)| c * multiplicity(k) * k.iter().fold(ONE, |acc, &i| acc * v[i])).sum()
    }

    /// Largest entrywise difference `max |a_k - b_k|` (over sorted keys).
    pub fn max_abs_diff(&self, other: &SymTensor) -> Result<f64> {
        self.check_shape(other)?;
        let a = self.coeffs.iter().map(|(k, v)| (v - other.get_sorted(k)).norm());
        let b = other.coeffs.iter().filter(|(k, _)| !self.coeffs.contains_key(*k)).map(|(_, v)| v.norm());
        Ok(a.chain(b).fold(0.0, f64::max))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Drops stored exact zeros.
    pub fn compact(&mut self) {
        self.coeffs.retain(|_, v| *v != ZERO);
    }
}

/// Symmetric tensor product `a ⊗̂ b`.
pub fn sym_product(a: &SymTensor, b: &SymTensor) -> Result<SymTensor> {
    if a.dim != b.dim {
        return Err(Error::DimMismatch(a.dim, b.dim));
    }
    let (n, m) = (a.degree, b.degree);
    let norm = binomial(n + m, n);
    let mut out = SymTensor::zeros(a.dim, n + m);
    for (ka, va) in &a.coeffs {
        for (kb, vb) in &b.coeffs {
            let key = merge(ka, kb);
            let w: f64 = multiindex::runs(&key)
                .iter()
                .map(|&(v, c)| binomial(c, ka.iter().filter(|&&x| x == v).count()))
                .product();
            *out.coeffs.entry(key).or_insert(ZERO) += va * vb * (w / norm);
        }
    }
    Ok(out)
}

/// Contracts the last `deg b` slots of `a` against `b`:
/// `c[I] = Σ_J a[I, J] b[J]` over index tuples `J`.
pub fn contract(a: &SymTensor, b: &SymTensor) -> Result<SymTensor> {
    if a.dim != b.dim {
        return Err(Error::DimMismatch(a.dim, b.dim));
    }
    if b.degree > a.degree {
        return Err(Error::DegreeMismatch { expected: a.degree, found: b.degree });
    }
    let k = b.degree;
    let mut out = SymTensor::zeros(a.dim, a.degree - k);
    for (key, va) in &a.coeffs {
        for_each_sub_multiset(key, k, |sub, rest, _| {
            if let Some(vb) = b.coeffs.get(sub) {
                *out.coeffs.entry(rest.to_vec()).or_insert(ZERO) += va * vb * multiplicity(sub);
            }
        });
    }
    Ok(out)
}

/// Trace tensor: the identity matrix as a degree-2 symmetric tensor.
pub fn trace_tensor(d: usize) -> SymTensor {
    let mut t = SymTensor::zeros(d, 2);
    for k in 0..d {
        t.coeffs.insert(vec![k, k], ONE);
    }
    t
}

/// Averages a raw tensor over all permutations of its slots.
pub fn symmetrize<T: Tensor + ?Sized>(t: &T) -> SymTensor {
    let (dim, degree) = (t.dim(), t.degree());
    let mut out = SymTensor::zeros(dim, degree);
    let mut sums: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
    dense::for_each_tuple(dim, degree, |idx| {
        let v = t.entry(idx);
        if v != ZERO {
            let mut key = idx.to_vec();
            key.sort_unstable();
            *sums.entry(key).or_insert(ZERO) += v;
        }
    });
    for (key, s) in sums {
        let m = multiplicity(&key);
        out.coeffs.insert(key, s / m);
    }
    out
}

/// Hilbert-scale weights `w_k = (k+1)^p`; negative `p` gives the dual norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightProfile {
    pub p: i32,
}

impl WeightProfile {
    pub fn new(p: i32) -> Self {
        WeightProfile { p }
    }

    pub fn weight(&self, k: usize) -> f64 {
        ((k + 1) as f64).powi(self.p)
    }

    pub fn dual(&self) -> Self {
        WeightProfile { p: -self.p }
    }
}

/// `|t|_p = (Σ_keys mult · |t_k|² · Π w_{k_i}²)^{1/2}`.
pub fn weighted_norm(t: &SymTensor, w: WeightProfile) -> f64 {
    t.coeffs
        .iter()
        .map(|(k, v)| {
            let wk: f64 = k.iter().map(|&i| w.weight(i)).product();
            multiplicity(k) * v.norm_sqr() * wk * wk
        })
        .sum::<f64>()
        .sqrt()
}
