//! Random operators and states for sampling-based checks.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::operator::{CMatrix, ComplexVector, HermitianOperator};

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Hermitian part of a complex Gaussian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOperator {
    let g = CMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
    HermitianOperator::hermitian_part(&g).expect("square matrix")
}

/// Haar-random unit vector.
pub fn random_pure_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexVector {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| gaussian_complex(rng)).collect();
        if let Ok(v) = ComplexVector::normalized(v) {
            return v;
        }
    }
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOperator {
    HermitianOperator::projector(&random_pure_vector(d, rng))
}

/// Full-rank density matrix `G G^dagger / tr(G G^dagger)` from a Ginibre matrix `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOperator {
    let g = CMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
    let w = &g * g.adjoint();
    let tr: f64 = w.diagonal().iter().map(|z| z.re).sum();
    HermitianOperator::hermitian_part(&w.unscale(tr)).expect("square matrix")
}

pub fn random_real_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}
