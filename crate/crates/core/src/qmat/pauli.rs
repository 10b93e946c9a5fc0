//! Single-qubit Pauli operators and standard gates.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;

fn m2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![a, b, c, d]).expect("2x2")
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn i2() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn x() -> ComplexMatrix {
    m2(ZERO, ONE, ONE, ZERO)
}

pub fn y() -> ComplexMatrix {
    m2(ZERO, -I, I, ZERO)
}

pub fn z() -> ComplexMatrix {
    m2(ONE, ZERO, ZERO, -ONE)
}

pub fn hadamard() -> ComplexMatrix {
    (&x() + &z()).scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

/// `RY(λ) = exp(-iλY/2)`.
pub fn ry(angle: f64) -> ComplexMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    ComplexMatrix::from_real(2, &[c, -s, s, c]).expect("2x2")
}

/// Pauli operator for a letter in `{I, X, Y, Z}`.
pub fn from_letter(letter: char) -> Option<ComplexMatrix> {
    match letter {
        'I' => Some(i2()),
        'X' => Some(x()),
        'Y' => Some(y()),
        'Z' => Some(z()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ry_matches_exponential() {
        let lambda = 0.81;
        let expected = crate::qmat::evolution_unitary(&y(), lambda / 2.0).unwrap();
        assert!(ry(lambda).max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn hadamard_is_involution() {
        let h = hadamard();
        assert!((&h * &h).max_abs_diff(&i2()) < 1e-15);
    }
}
