#![allow(dead_code)]

use mlcalc::tensor::SymTensor;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    c(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

pub fn random_vector(rng: &mut impl Rng, dim: usize, scale: f64) -> Vec<Complex64> {
    (0..dim).map(|_| random_complex(rng, scale)).collect()
}

pub fn random_real_vector(rng: &mut impl Rng, dim: usize, scale: f64) -> Vec<Complex64> {
    (0..dim).map(|_| c(rng.random_range(-scale..scale), 0.0)).collect()
}

pub fn random_tensor(rng: &mut impl Rng, dim: usize, degree: usize, scale: f64) -> SymTensor {
    SymTensor::from_fn(dim, degree, |_| random_complex(rng, scale))
}

/// Strategy producing a random symmetric tensor of the given shape.
pub fn tensor_strategy(dim: usize, degree: usize) -> impl Strategy<Value = SymTensor> {
    any::<u64>().prop_map(move |seed| random_tensor(&mut rng(seed), dim, degree, 1.0))
}
