#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wicklab::chaos::{ChaosFlavor, ChaosState};
use wicklab::gaussian::Covariance;
use wicklab::symtensor::{sorted_keys, SymTensor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random SPD matrix `B Bᵗ + d·I/2`.
pub fn random_spd(d: usize, seed: u64) -> DMatrix<f64> {
    let mut r = rng(seed);
    let b = DMatrix::from_fn(d, d, |_, _| r.gen_range(-1.0..1.0));
    &b * b.transpose() + DMatrix::identity(d, d) * (0.5 * d as f64)
}

pub fn random_tensor(rank: usize, d: usize, r: &mut ChaCha8Rng, complex: bool) -> SymTensor<Complex64> {
    let mut t = SymTensor::zeros(rank, d);
    for k in sorted_keys(d, rank) {
        let im = if complex { r.gen_range(-1.0..1.0) } else { 0.0 };
        t.set(k, Complex64::new(r.gen_range(-1.0..1.0), im));
    }
    t
}

pub fn random_state(flavor: ChaosFlavor, cov: &Covariance, top: usize, cutoff: usize, seed: u64) -> ChaosState {
    let mut r = rng(seed);
    let complex = flavor != ChaosFlavor::Real;
    let tensors = (0..=top).map(|n| random_tensor(n, cov.dim(), &mut r, complex)).collect();
    ChaosState::from_tensors(flavor, cov.clone(), cutoff, tensors).unwrap()
}

pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}
