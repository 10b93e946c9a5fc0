//! Seeded random states, Hamiltonians and unitaries for testing and benchmarks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::qmat::{eig_hermitian, evolution_unitary, kets, ComplexMatrix, DensityMatrix};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let data = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(dim, dim, data).expect("supported dimension")
}

/// Uniformly distributed pure state vector.
pub fn pure_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let n = kets::norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Full-rank mixed state `G G† / Tr(G G†)` from a Ginibre matrix.
pub fn mixed_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<DensityMatrix> {
    let g = ginibre(rng, dim);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part())
}

/// Hermitian matrix with Gaussian entries, rescaled to Frobenius norm `norm`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, norm: f64) -> ComplexMatrix {
    let g = ginibre(rng, dim);
    let h = g.hermitian_part();
    h.scale_real(norm / h.frobenius_norm())
}

/// Hermitian generator with entries drawn as in [`hermitian`] but unnormalized.
pub fn gaussian_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ginibre(rng, dim).hermitian_part()
}

/// `e^{-iG}` for a Gaussian Hermitian generator `G`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<ComplexMatrix> {
    evolution_unitary(&gaussian_hermitian(rng, dim), 1.0)
}

/// Thermal state `e^{-βH} / Z`.
pub fn gibbs_state(h: &ComplexMatrix, beta: f64) -> Result<DensityMatrix> {
    let eig = eig_hermitian(h)?;
    let shift = eig.min_value();
    let unnormalized = eig.map_values(|e| Complex64::new((-beta * (e - shift)).exp(), 0.0));
    let z = unnormalized.trace().re;
    DensityMatrix::new(unnormalized.scale_real(1.0 / z).hermitian_part())
}
