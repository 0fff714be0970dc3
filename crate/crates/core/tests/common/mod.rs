#![allow(dead_code)]

use qbatt::qla::{eigh, Density};
use qbatt::{ComplexMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut h = (&g + &g.adjoint()).scale_real(0.5);
    h.hermitize();
    h
}

/// Full-rank density matrix `G G† / Tr`.
pub fn random_density(dim: usize, rng: &mut ChaCha8Rng) -> Density<f64> {
    let g = ginibre(dim, rng);
    let mut m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr);
    m.hermitize();
    Density::new(m).expect("G G† is a valid state")
}

pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    eigh(&random_hermitian(dim, rng))
        .expect("Hermitian input")
        .propagator(1.3)
}

pub fn random_probabilities(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..len).map(|_| rng.gen::<f64>()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}
