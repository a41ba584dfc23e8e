//! Seeded random operators for property tests and sweeps.
//!
//! Hermitian draws use independent standard-normal entries, symmetrised and
//! normalised to unit spectral norm.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{expm, Operator};
use crate::scalar::{Real, C};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_matrix<R: Real>(d: usize, rng: &mut impl Rng) -> DMatrix<C<R>> {
    DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(R::lit(re), R::lit(im))
    })
}

/// Random Hermitian operator with `‖H‖_spectral = 1`.
pub fn random_hermitian<R: Real>(d: usize, rng: &mut impl Rng) -> Operator<R> {
    let g = Operator::wrap(gaussian_matrix::<R>(d, rng)).hermitian_part();
    let n = g.spectral_norm();
    g.scale_re(R::one() / n)
}

/// Random anti-Hermitian operator with spectral radius `radius`.
pub fn random_anti_hermitian<R: Real>(d: usize, radius: R, rng: &mut impl Rng) -> Operator<R> {
    random_hermitian::<R>(d, rng).scale(Complex::new(R::zero(), radius))
}

/// Random unitary `exp(−i·π·H)` with `H` unit-norm Hermitian.
pub fn random_unitary<R: Real>(d: usize, rng: &mut impl Rng) -> Operator<R> {
    let h = random_hermitian::<R>(d, rng);
    expm(&h.scale(Complex::new(R::zero(), -R::pi()))).expect("finite generator")
}

/// Arbitrary (non-Hermitian) operator with standard-normal entries.
pub fn random_operator<R: Real>(d: usize, rng: &mut impl Rng) -> Operator<R> {
    Operator::wrap(gaussian_matrix::<R>(d, rng))
}

/// Random unit state vector.
pub fn random_state<R: Real>(d: usize, rng: &mut impl Rng) -> super::StateVector<R> {
    let v = nalgebra::DVector::from_fn(d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(R::lit(re), R::lit(im))
    });
    super::normalize(&v).expect("nonzero gaussian vector")
}
