//! Seeded random draws shared by the state constructors, the verification
//! suite, and tests. Every stream is `ChaCha8` so a seed reproduces the same
//! values on every platform.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hamiltonian::CouplingParams;
use crate::linalg::ComplexMatrix;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Square matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..dim * dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    ComplexMatrix::from_vec(dim, dim, data).expect("dim*dim entries")
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(dim, rng).hermitian_part()
}

/// Angles drawn uniformly from `[0, 2π)`, interaction picture.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> CouplingParams {
    CouplingParams::new(rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..2.0 * PI))
}
