use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm, relative to `‖H‖_F`, at which Jacobi stops.
pub const JACOBI_THRESHOLD: f64 = 1e-14;
/// Maximum number of cyclic sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative gap below which eigenvalues are treated as one degenerate cluster.
const CLUSTER_TOL: f64 = 1e-10;

/// Spectral decomposition `H = V·diag(values)·V†` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// The `k`-th eigenvector as a state vector.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    /// Rebuilds `V·f(Λ)·V†` for a scalar function of the eigenvalues.
    pub fn map_values(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let s = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        &scaled * &self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|x| Complex64::new(x, 0.0))
    }
}

/// Multiplies `v` by a unit phase so its first non-negligible entry is real
/// and non-negative.
pub fn fix_global_phase(v: &mut [Complex64]) {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-10) {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    h.ensure_hermitian()?;
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = h.frobenius_norm();
    let threshold = JACOBI_THRESHOLD * scale;

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off_diagonal_norm(&a) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut columns: Vec<Vec<Complex64>> = order.iter().map(|&j| (0..n).map(|i| v[(i, j)]).collect()).collect();

    // Re-orthonormalize inside degenerate clusters, in index order.
    let gap = CLUSTER_TOL * (1.0 + scale);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= gap {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt(&mut columns[start..end]);
        }
        start = end;
    }
    for col in columns.iter_mut() {
        fix_global_phase(col);
    }

    let mut vectors = ComplexMatrix::zeros(n);
    for (j, col) in columns.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            vectors[(i, j)] = *z;
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

/// One complex Jacobi rotation zeroing `a[p,q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.dim();
    // Phase e^{-iφ} makes the (p,q) entry real, then a real rotation
    // diagonalizes the 2x2 block.
    let phase = apq.conj() / r;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J = diag(1, phase) · [[c, s], [-s, c]]
    let j00 = Complex64::new(c, 0.0);
    let j01 = Complex64::new(s, 0.0);
    let j10 = phase * -s;
    let j11 = phase * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j00 + akq * j10;
        a[(k, q)] = akp * j01 + akq * j11;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j00 + vkq * j10;
        v[(k, q)] = vkp * j01 + vkq * j11;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j00.conj() * apk + j10.conj() * aqk;
        a[(q, k)] = j01.conj() * apk + j11.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

fn gram_schmidt(cols: &mut [Vec<Complex64>]) {
    for j in 0..cols.len() {
        for i in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let proj: Complex64 = done[i].iter().zip(&rest[0]).map(|(u, w)| u.conj() * w).sum();
            for (w, u) in rest[0].iter_mut().zip(&done[i]) {
                *w -= proj * u;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
}

/// `e^{-iHt}` via the eigendecomposition of `H`.
pub fn evolution_unitary(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(h)?;
    Ok(eig.map_values(|lambda| Complex64::from_polar(1.0, -lambda * t)))
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
}

/// `λ_min(m) ≥ -tol`.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<PsdCheck> {
    let eig = eig_hermitian(m)?;
    let min_eigenvalue = eig.min_value();
    Ok(PsdCheck { is_psd: min_eigenvalue >= -tol, min_eigenvalue })
}
