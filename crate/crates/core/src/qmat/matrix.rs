use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dimensions a matrix side may take: scalars and one to three qubits.
pub const SUPPORTED_DIMS: [usize; 4] = [1, 2, 4, 8];

/// Relative tolerance used wherever a Hermitian input is required.
pub const HERMITIAN_TOL: f64 = 1e-12;

fn check_dim(n: usize) -> Result<()> {
    if SUPPORTED_DIMS.contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(rows)?;
        check_dim(cols)?;
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a square matrix from real row-major entries.
    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        Self::new(n, n, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(n, n, vec![Complex64::new(0.0, 0.0); n * n]).expect("supported dimension")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        check_dim(values.len())?;
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Ok(m)
    }

    /// `|a⟩⟨b|`
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        check_dim(a.len())?;
        check_dim(b.len())?;
        let data = a.iter().flat_map(|x| b.iter().map(move |y| x * y.conj())).collect();
        Self::new(a.len(), b.len(), data)
    }

    /// `|v⟩⟨v|`
    pub fn projector(v: &[Complex64]) -> Result<Self> {
        Self::outer(v, v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)]);
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (out, b) in data[i * rhs.cols..(i + 1) * rhs.cols].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        Ok(Self { rows: self.rows, cols: rhs.cols, data })
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A · B · A†`
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(A·B)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Complex64 {
        assert!(self.cols == rhs.rows && self.rows == rhs.cols, "trace_product dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * rhs[(k, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `A − A†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= HERMITIAN_TOL * (1.0 + self.frobenius_norm())
    }

    /// Returns an error unless the matrix is square and Hermitian within
    /// [`HERMITIAN_TOL`]`·(1+‖A‖_F)`.
    pub fn ensure_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let deviation = self.hermiticity_deviation();
        if deviation > HERMITIAN_TOL * (1.0 + self.frobenius_norm()) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// `(A + A†)/2`
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }
}

/// Kronecker product `a ⊗ b`. Index `(i·n+k, j·n+l)` holds `a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows, cols: a.cols });
    }
    if !b.is_square() {
        return Err(Error::NonSquare { rows: b.rows, cols: b.cols });
    }
    let (m, n) = (a.rows, b.rows);
    check_dim(m * n)?;
    let mut out = ComplexMatrix::zeros(m * n);
    for i in 0..m {
        for j in 0..m {
            let aij = a[(i, j)];
            for k in 0..n {
                for l in 0..n {
                    out[(i * n + k, j * n + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of state vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn check_factors(m: &ComplexMatrix, subsystem: usize, dims: &[usize]) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let total: usize = dims.iter().product();
    if total != m.rows {
        return Err(Error::DimensionMismatch(format!("factor dimensions {dims:?} do not multiply to {}", m.rows)));
    }
    if subsystem >= dims.len() {
        return Err(Error::DimensionMismatch(format!("subsystem {subsystem} out of range for {} factors", dims.len())));
    }
    Ok(())
}

/// Splits a composite index into per-factor digits (most significant first).
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Traces out factor `subsystem` of a matrix on `dims[0] ⊗ dims[1] ⊗ …`.
pub fn partial_trace(m: &ComplexMatrix, subsystem: usize, dims: &[usize]) -> Result<ComplexMatrix> {
    check_factors(m, subsystem, dims)?;
    let kept: Vec<usize> = dims.iter().enumerate().filter(|&(i, _)| i != subsystem).map(|(_, &d)| d).collect();
    let out_dim: usize = kept.iter().product();
    let mut out = ComplexMatrix::zeros(out_dim);
    let mut row = vec![0; dims.len()];
    let mut col = vec![0; dims.len()];
    let mut row_kept = vec![0; kept.len()];
    let mut col_kept = vec![0; kept.len()];
    for r in 0..m.rows {
        digits(r, dims, &mut row);
        for c in 0..m.cols {
            digits(c, dims, &mut col);
            if row[subsystem] != col[subsystem] {
                continue;
            }
            let mut t = 0;
            for i in 0..dims.len() {
                if i != subsystem {
                    row_kept[t] = row[i];
                    col_kept[t] = col[i];
                    t += 1;
                }
            }
            out[(compose(&row_kept, &kept), compose(&col_kept, &kept))] += m[(r, c)];
        }
    }
    Ok(out)
}

/// Transposes factor `subsystem`: `(ρ^Γ)[(a,b),(a′,b′)] = ρ[(a,b′),(a′,b)]`.
pub fn partial_transpose(m: &ComplexMatrix, subsystem: usize, dims: &[usize]) -> Result<ComplexMatrix> {
    check_factors(m, subsystem, dims)?;
    let mut out = ComplexMatrix::zeros(m.rows);
    let mut row = vec![0; dims.len()];
    let mut col = vec![0; dims.len()];
    for r in 0..m.rows {
        digits(r, dims, &mut row);
        for c in 0..m.cols {
            digits(c, dims, &mut col);
            std::mem::swap(&mut row[subsystem], &mut col[subsystem]);
            out[(compose(&row, dims), compose(&col, dims))] = m[(r, c)];
            std::mem::swap(&mut row[subsystem], &mut col[subsystem]);
        }
    }
    Ok(out)
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
