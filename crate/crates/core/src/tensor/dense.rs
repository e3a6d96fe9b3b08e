//! Full `d^n` arrays: the brute-force reference representation.

use num_complex::Complex64;

use super::SymTensor;
use crate::error::{Error, Result};

/// Upper limit on dense storage; dense tensors are a verification aid for
/// small degrees, not a compute path.
pub const DENSE_MAX_ENTRIES: usize = 1 << 20;

/// Read access shared by the sparse symmetric and the dense representation.
pub trait Tensor {
    fn dim(&self) -> usize;
    fn degree(&self) -> usize;
    /// Entry at an arbitrary index tuple.
    fn entry(&self, index: &[usize]) -> Complex64;

    /// Brute-force bilinear pairing over all `d^n` index tuples.
    fn tuple_pairing(&self, other: &dyn Tensor) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: other.degree() });
        }
        let mut s = Complex64::new(0.0, 0.0);
        for_each_tuple(self.dim(), self.degree(), |idx| s += self.entry(idx) * other.entry(idx));
        Ok(s)
    }
}

impl Tensor for SymTensor {
    fn dim(&self) -> usize {
        SymTensor::dim(self)
    }

    fn degree(&self) -> usize {
        SymTensor::degree(self)
    }

    fn entry(&self, index: &[usize]) -> Complex64 {
        self.get(index)
    }
}

/// Calls `f` on every index tuple in row-major order.
pub(crate) fn for_each_tuple<F: FnMut(&[usize])>(dim: usize, degree: usize, mut f: F) {
    let mut idx = vec![0usize; degree];
    loop {
        f(&idx);
        let mut pos = degree;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < dim {
                break;
            }
            idx[pos] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dim: usize,
    degree: usize,
    data: Vec<Complex64>,
}

impl DenseTensor {
    fn len_for(dim: usize, degree: usize) -> usize {
        let len = dim.checked_pow(degree as u32).unwrap_or(usize::MAX);
        assert!(len <= DENSE_MAX_ENTRIES, "dense tensor {dim}^{degree} exceeds the size limit");
        len
    }

    pub fn zeros(dim: usize, degree: usize) -> Self {
        assert!(dim >= 1, "tensor dimension must be at least 1");
        DenseTensor { dim, degree, data: vec![Complex64::new(0.0, 0.0); Self::len_for(dim, degree)] }
    }

    /// Row-major data of length `dim^degree`.
    pub fn new(dim: usize, degree: usize, data: Vec<Complex64>) -> Result<Self> {
        let len = Self::len_for(dim, degree);
        if data.len() != len {
            return Err(Error::DegreeMismatch { expected: len, found: data.len() });
        }
        Ok(DenseTensor { dim, degree, data })
    }

    pub fn from_sym(t: &SymTensor) -> Self {
        let mut out = DenseTensor::zeros(t.dim(), t.degree());
        let mut pos = 0;
        for_each_tuple(t.dim(), t.degree(), |idx| {
            out.data[pos] = t.get(idx);
            pos += 1;
        });
        out
    }

    fn offset(&self, index: &[usize]) -> usize {
        assert_eq!(index.len(), self.degree, "index length must equal the tensor degree");
        index.iter().fold(0, |acc, &i| {
            assert!(i < self.dim, "index out of range");
            acc * self.dim + i
        })
    }

    pub fn set(&mut self, index: &[usize], c: Complex64) {
        let o = self.offset(index);
        self.data[o] = c;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Plain (unsymmetrized) tensor product.
    pub fn outer(&self, other: &DenseTensor) -> Result<DenseTensor> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        DenseTensor::new(self.dim, self.degree + other.degree, data)
    }

    /// Sums the last `deg b` slots against `b`.
    pub fn contract_last(&self, b: &DenseTensor) -> Result<DenseTensor> {
        if self.dim != b.dim {
            return Err(Error::DimMismatch(self.dim, b.dim));
        }
        if b.degree > self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: b.degree });
        }
        let inner = b.data.len();
        let data = self
            .data
            .chunks(inner)
            .map(|row| row.iter().zip(&b.data).map(|(x, y)| x * y).sum())
            .collect();
        DenseTensor::new(self.dim, self.degree - b.degree, data)
    }
}

impl Tensor for DenseTensor {
    fn dim(&self) -> usize {
        self.dim
    }

    fn degree(&self) -> usize {
        self.degree
    }

    fn entry(&self, index: &[usize]) -> Complex64 {
        self.data[self.offset(index)]
    }
}
