use num_complex::Complex64;

use super::eig::eig_hermitian;
use super::matrix::{kron_vec, partial_trace, ComplexMatrix};
use crate::error::{Error, Result};

/// Tolerance on trace, normalization and positivity of states.
pub const STATE_TOL: f64 = 1e-10;

/// Standard single- and two-qubit state vectors.
pub mod kets {
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    pub fn zero() -> Vec<Complex64> {
        vec![c(1.0), c(0.0)]
    }

    pub fn one() -> Vec<Complex64> {
        vec![c(0.0), c(1.0)]
    }

    pub fn plus() -> Vec<Complex64> {
        vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]
    }

    pub fn minus() -> Vec<Complex64> {
        vec![c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)]
    }

    /// `cos(angle)|0⟩ + sin(angle)|1⟩`
    pub fn real(angle: f64) -> Vec<Complex64> {
        vec![c(angle.cos()), c(angle.sin())]
    }

    /// Computational basis vector of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Vec<Complex64> {
        let mut v = vec![c(0.0); dim];
        v[index] = c(1.0);
        v
    }

    /// Parses a bit string such as `"00"` or `"101"` into a basis vector.
    pub fn from_bits(bits: &str) -> Option<Vec<Complex64>> {
        if bits.is_empty() || bits.len() > 3 || !bits.chars().all(|ch| ch == '0' || ch == '1') {
            return None;
        }
        let index = usize::from_str_radix(bits, 2).ok()?;
        Some(basis(1 << bits.len(), index))
    }

    pub fn norm_sq(v: &[Complex64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(v: &[Complex64]) -> f64 {
        norm_sq(v).sqrt()
    }

    pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    /// Orthogonal partner `(-b*, a*)` of a qubit state `(a, b)`.
    pub fn orthogonal(v: &[Complex64]) -> Vec<Complex64> {
        vec![-v[1].conj(), v[0].conj()]
    }
}

/// Trace distance between two pure states, `sqrt(1 − |⟨a|b⟩|²)`.
pub fn trace_distance_pure(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap = kets::inner(a, b).norm_sqr() / (kets::norm_sq(a) * kets::norm_sq(b));
    (1.0 - overlap).max(0.0).sqrt()
}

/// Trace distance `½‖a − b‖₁` between two Hermitian matrices.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let eig = eig_hermitian(&(a - b).hermitian_part())?;
    Ok(0.5 * eig.values.iter().map(|v| v.abs()).sum::<f64>())
}

/// Trace-one positive-semidefinite matrix on one to three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        m.ensure_hermitian()?;
        if m.dim() < 2 {
            return Err(Error::InvalidState("a state needs at least one qubit".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = eig_hermitian(&m)?.min_value();
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self(m.hermitian_part()))
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = kets::norm(psi);
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("state vector norm {norm} differs from 1")));
        }
        Self::new(ComplexMatrix::projector(psi)?)
    }

    /// Computational basis state from a bit string, e.g. `"00"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let psi = kets::from_bits(bits).ok_or_else(|| Error::InvalidState(format!("bad basis label {bits:?}")))?;
        Self::pure(&psi)
    }

    pub fn product(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        Self::pure(&kron_vec(a, b))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// Convex mixture `Σ pᵢ ρᵢ`; weights must sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let mut acc = ComplexMatrix::zeros(first.1.dim());
        for (p, rho) in parts {
            if *p < 0.0 {
                return Err(Error::InvalidState(format!("negative weight {p}")));
            }
            acc = &acc + &rho.0.scale_real(*p);
        }
        Self::new(acc)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    /// `Tr(ρ·O)`, real part.
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        self.0.trace_product(op).re
    }

    /// Reduced state of one qubit of a two-qubit state (0 = A, 1 = B).
    pub fn reduced_qubit(&self, keep: usize) -> Result<DensityMatrix> {
        if self.dim() != 4 || keep > 1 {
            return Err(Error::DimensionMismatch("reduced_qubit expects a two-qubit state".into()));
        }
        let traced = partial_trace(&self.0, 1 - keep, &[2, 2])?;
        Ok(Self(traced.hermitian_part()))
    }

    /// `U ρ U†`
    pub fn evolve(&self, u: &ComplexMatrix) -> DensityMatrix {
        Self(self.0.conjugate_by(u).hermitian_part())
    }

    /// Largest-weight eigenvector, i.e. the state vector of a pure state.
    pub fn principal_vector(&self) -> Result<Vec<Complex64>> {
        let eig = eig_hermitian(&self.0)?;
        Ok(eig.vector(self.dim() - 1))
    }

    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0).re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eig_hermitian(&self.0)?.min_value())
    }
}
