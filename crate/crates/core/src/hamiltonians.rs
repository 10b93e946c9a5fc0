//! Two-qubit model Hamiltonians and their mixing angles.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{eig_hermitian, kets, kron, kron_vec, pauli, ComplexMatrix, EigenDecomposition};

/// Which model family a Hamiltonian belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelVariant {
    /// `−hZ⊗I − hI⊗Z + 2κ X⊗X`
    Original,
    /// `−hZ⊗I − hI⊗Z + κ(X⊗X + Y⊗Y)`
    FlipFlop,
    /// Spectral construction from product eigenvectors parameterized by `(α, β)`.
    AppendixB,
}

impl ModelVariant {
    pub fn name(self) -> &'static str {
        match self {
            ModelVariant::Original => "original",
            ModelVariant::FlipFlop => "flipflop",
            ModelVariant::AppendixB => "appendix_b",
        }
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Construction parameters of a model Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    Original {
        h: f64,
        kappa: f64,
    },
    FlipFlop {
        h: f64,
        kappa: f64,
    },
    /// Symmetric spectrum `{−E, −F, +F, +E}`.
    AppendixB {
        alpha: f64,
        beta: f64,
        big_e: f64,
        big_f: f64,
    },
    /// Arbitrary strictly increasing spectrum `E₁ < E₂ < E₃ < E₄`.
    AppendixBGeneral {
        alpha: f64,
        beta: f64,
        energies: [f64; 4],
    },
}

impl ModelParams {
    pub fn original(h: f64, kappa: f64) -> Result<Self> {
        check_couplings(h, kappa)?;
        Ok(Self::Original { h, kappa })
    }

    pub fn flipflop(h: f64, kappa: f64) -> Result<Self> {
        check_couplings(h, kappa)?;
        Ok(Self::FlipFlop { h, kappa })
    }

    pub fn appendix_b(alpha: f64, beta: f64, big_e: f64, big_f: f64) -> Result<Self> {
        if !(big_f > 0.0 && big_e > big_f && big_e.is_finite()) {
            return Err(Error::InvalidParameter(format!("appendix_b requires E > F > 0 (got E={big_e}, F={big_f})")));
        }
        check_angles(alpha, beta)?;
        Ok(Self::AppendixB { alpha, beta, big_e, big_f })
    }

    pub fn appendix_b_general(alpha: f64, beta: f64, energies: [f64; 4]) -> Result<Self> {
        if !energies.iter().all(|e| e.is_finite()) || !energies.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "energies must be finite and strictly increasing (got {energies:?})"
            )));
        }
        check_angles(alpha, beta)?;
        Ok(Self::AppendixBGeneral { alpha, beta, energies })
    }

    pub fn variant(&self) -> ModelVariant {
        match self {
            Self::Original { .. } => ModelVariant::Original,
            Self::FlipFlop { .. } => ModelVariant::FlipFlop,
            Self::AppendixB { .. } | Self::AppendixBGeneral { .. } => ModelVariant::AppendixB,
        }
    }

    /// `(h, κ)` for the coupled spin models.
    pub fn couplings(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Original { h, kappa } | Self::FlipFlop { h, kappa } => Some((h, kappa)),
            _ => None,
        }
    }

    /// Builds the Hamiltonian these parameters describe.
    pub fn build(&self) -> Result<Hamiltonian> {
        match *self {
            Self::Original { h, kappa } => build_original(h, kappa),
            Self::FlipFlop { h, kappa } => build_flipflop(h, kappa),
            Self::AppendixB { alpha, beta, big_e, big_f } => build_appendix_b(alpha, beta, big_e, big_f),
            Self::AppendixBGeneral { alpha, beta, energies } => build_appendix_b_general(alpha, beta, energies),
        }
    }
}

fn check_couplings(h: f64, kappa: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) || !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "h and kappa must be positive and finite (got h={h}, kappa={kappa})"
        )));
    }
    Ok(())
}

fn check_angles(alpha: f64, beta: f64) -> Result<()> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParameter("angles must be finite".into()));
    }
    Ok(())
}

/// A 4×4 Hermitian two-qubit Hamiltonian on `A ⊗ B`.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub matrix: ComplexMatrix,
    pub params: ModelParams,
}

impl Hamiltonian {
    pub fn variant(&self) -> ModelVariant {
        self.params.variant()
    }

    /// `Tr(H·ρ)`
    pub fn energy(&self, rho: &crate::qmat::DensityMatrix) -> f64 {
        rho.expectation(&self.matrix)
    }
}

/// Mixing angles `θ = ½·arctan(κ/h)` and `φ = ½·arctan(2κ/h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngles {
    pub theta: f64,
    pub phi: f64,
}

pub fn mixing_angles(h: f64, kappa: f64) -> Result<MixingAngles> {
    check_couplings(h, kappa)?;
    Ok(MixingAngles { theta: 0.5 * (kappa / h).atan(), phi: 0.5 * (2.0 * kappa / h).atan() })
}

fn local_field_terms(h: f64) -> Result<ComplexMatrix> {
    let za = kron(&pauli::z(), &pauli::i2())?;
    let zb = kron(&pauli::i2(), &pauli::z())?;
    Ok((&za + &zb).scale_real(-h))
}

pub fn build_original(h: f64, kappa: f64) -> Result<Hamiltonian> {
    let params = ModelParams::original(h, kappa)?;
    let xx = kron(&pauli::x(), &pauli::x())?;
    let matrix = &local_field_terms(h)? + &xx.scale_real(2.0 * kappa);
    Ok(Hamiltonian { matrix, params })
}

pub fn build_flipflop(h: f64, kappa: f64) -> Result<Hamiltonian> {
    let params = ModelParams::flipflop(h, kappa)?;
    let xx = kron(&pauli::x(), &pauli::x())?;
    let yy = kron(&pauli::y(), &pauli::y())?;
    let matrix = &local_field_terms(h)? + &(&xx + &yy).scale_real(kappa);
    Ok(Hamiltonian { matrix, params })
}

/// Single-qubit states `|φ⟩, |φ⊥⟩, |ψ⟩, |ψ⊥⟩` and the product eigenbasis
/// `v₁ = |ψ⟩|φ⊥⟩, v₂ = |0⟩|φ⟩, v₃ = |1⟩|φ⟩, v₄ = |ψ⊥⟩|φ⊥⟩`.
#[derive(Debug, Clone)]
pub struct AppendixBBasis {
    pub phi: Vec<Complex64>,
    pub phi_perp: Vec<Complex64>,
    pub psi: Vec<Complex64>,
    pub psi_perp: Vec<Complex64>,
    pub v: [Vec<Complex64>; 4],
}

pub fn appendix_b_basis(alpha: f64, beta: f64) -> AppendixBBasis {
    let combine = |a: f64, u: &[Complex64], b: f64, w: &[Complex64]| -> Vec<Complex64> {
        u.iter().zip(w).map(|(x, y)| x * a + y * b).collect()
    };
    let (zero, one) = (kets::zero(), kets::one());
    let (plus, minus) = (kets::plus(), kets::minus());
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let phi = combine(ca, &zero, sa, &one);
    let phi_perp = combine(sa, &zero, -ca, &one);
    let psi = combine(cb, &plus, sb, &minus);
    let psi_perp = combine(sb, &plus, -cb, &minus);
    let v = [kron_vec(&psi, &phi_perp), kron_vec(&zero, &phi), kron_vec(&one, &phi), kron_vec(&psi_perp, &phi_perp)];
    AppendixBBasis { phi, phi_perp, psi, psi_perp, v }
}

fn spectral_sum(basis: &AppendixBBasis, energies: [f64; 4]) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(4);
    for (v, e) in basis.v.iter().zip(energies) {
        m = &m + &ComplexMatrix::projector(v)?.scale_real(e);
    }
    Ok(m.hermitian_part())
}

/// `H = −E|v₁⟩⟨v₁| − F|v₂⟩⟨v₂| + F|v₃⟩⟨v₃| + E|v₄⟩⟨v₄|`
pub fn build_appendix_b(alpha: f64, beta: f64, big_e: f64, big_f: f64) -> Result<Hamiltonian> {
    let params = ModelParams::appendix_b(alpha, beta, big_e, big_f)?;
    let matrix = spectral_sum(&appendix_b_basis(alpha, beta), [-big_e, -big_f, big_f, big_e])?;
    Ok(Hamiltonian { matrix, params })
}

/// `H = Σ Eᵢ|vᵢ⟩⟨vᵢ|` with an arbitrary increasing spectrum.
pub fn build_appendix_b_general(alpha: f64, beta: f64, energies: [f64; 4]) -> Result<Hamiltonian> {
    let params = ModelParams::appendix_b_general(alpha, beta, energies)?;
    let matrix = spectral_sum(&appendix_b_basis(alpha, beta), energies)?;
    Ok(Hamiltonian { matrix, params })
}

/// Ascending spectrum of a model Hamiltonian.
pub fn spectrum(h: &Hamiltonian) -> Result<EigenDecomposition> {
    eig_hermitian(&h.matrix)
}

/// Ground state of the flip-flop model: the singlet for `κ > h`, `|00⟩` for
/// `κ < h`. The level crossing at `κ = h` is rejected.
pub fn flipflop_ground_state(h: f64, kappa: f64) -> Result<Vec<Complex64>> {
    check_couplings(h, kappa)?;
    if kappa == h {
        return Err(Error::InvalidParameter("flip-flop ground state is degenerate at kappa = h".into()));
    }
    if kappa > h {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ok(vec![Complex64::new(0.0, 0.0), Complex64::new(s, 0.0), Complex64::new(-s, 0.0), Complex64::new(0.0, 0.0)])
    } else {
        Ok(kets::basis(4, 0))
    }
}

/// Ground state `cos θ|00⟩ − sin θ|11⟩` of the original model, `tan 2θ = κ/h`.
pub fn original_ground_state(h: f64, kappa: f64) -> Result<Vec<Complex64>> {
    let MixingAngles { theta, .. } = mixing_angles(h, kappa)?;
    let (s, c) = theta.sin_cos();
    Ok(vec![Complex64::new(c, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(-s, 0.0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::kets::inner;

    fn residual(m: &ComplexMatrix, v: &[Complex64], lambda: f64) -> f64 {
        m.mul_vec(v).iter().zip(v).map(|(a, b)| (a - b * lambda).norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn flipflop_eigenpairs() {
        let h = build_flipflop(1.0, 1.5).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |x: f64| Complex64::new(x, 0.0);
        let pairs = [
            (vec![c(0.0), c(s), c(-s), c(0.0)], -3.0),
            (kets::basis(4, 0), -2.0),
            (kets::basis(4, 3), 2.0),
            (vec![c(0.0), c(s), c(s), c(0.0)], 3.0),
        ];
        for (v, e) in &pairs {
            assert!(residual(&h.matrix, v, *e) < 1e-14);
        }
        let spec = spectrum(&h).unwrap();
        for (got, want) in spec.values.iter().zip([-3.0, -2.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn flipflop_diagonal_entry() {
        for (h, k) in [(0.3, 2.0), (1.0, 0.2), (2.5, 2.5)] {
            let m = build_flipflop(h, k).unwrap();
            assert!((m.matrix[(0, 0)].re + 2.0 * h).abs() < 1e-15);
        }
    }

    #[test]
    fn flipflop_ground_state_branches() {
        let strong = flipflop_ground_state(1.0, 1.5).unwrap();
        assert!(strong[1].re > 0.0 && strong[2].re < 0.0);
        assert_eq!(flipflop_ground_state(1.0, 0.5).unwrap(), kets::basis(4, 0));
        assert!(flipflop_ground_state(1.0, 1.0).is_err());
        // |00⟩ is the ground state of the weak-coupling branch.
        let weak = spectrum(&build_flipflop(1.0, 0.5).unwrap()).unwrap();
        assert!((inner(&weak.vector(0), &kets::basis(4, 0)).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn original_ground_state_uses_theta() {
        let (h, k) = (1.0, 1.5);
        let ham = build_original(h, k).unwrap();
        let g = original_ground_state(h, k).unwrap();
        let e0 = -2.0 * (h * h + k * k).sqrt();
        assert!(residual(&ham.matrix, &g, e0) < 1e-13);
        let spec = spectrum(&ham).unwrap();
        assert!((spec.values[0] - e0).abs() < 1e-12);
        assert!((inner(&spec.vector(0), &g).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn original_decoupled_limit() {
        let spec = spectrum(&build_original(1.0, 1e-9).unwrap()).unwrap();
        for (got, want) in spec.values.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((got - want).abs() < 1e-8);
        }
    }

    #[test]
    fn appendix_b_trivial_angles() {
        let h = build_appendix_b(0.0, 0.0, 2.0, 1.0).unwrap();
        assert!((h.matrix[(0, 0)].re + 1.0).abs() < 1e-15);
        assert!(residual(&h.matrix, &kets::basis(4, 0), -1.0) < 1e-15);
    }

    #[test]
    fn appendix_b_spectrum_and_orthonormality() {
        let basis = appendix_b_basis(0.7, -1.3);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner(&basis.v[i], &basis.v[j]) - want).norm() < 1e-12);
            }
        }
        let spec = spectrum(&build_appendix_b(0.7, -1.3, 3.0, 0.4).unwrap()).unwrap();
        for (got, want) in spec.values.iter().zip([-3.0, -0.4, 0.4, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let general = build_appendix_b_general(0.7, -1.3, [-1.0, 0.5, 0.6, 4.0]).unwrap();
        let spec = spectrum(&general).unwrap();
        for (got, want) in spec.values.iter().zip([-1.0, 0.5, 0.6, 4.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(build_original(0.0, 1.0).is_err());
        assert!(build_flipflop(1.0, -1.0).is_err());
        assert!(build_appendix_b(0.1, 0.2, 1.0, 1.0).is_err());
        assert!(build_appendix_b(0.1, 0.2, 1.0, 0.0).is_err());
        assert!(build_appendix_b_general(0.1, 0.2, [0.0, 1.0, 1.0, 2.0]).is_err());
        assert!(mixing_angles(1.0, 0.0).is_err());
    }

    #[test]
    fn mixing_angle_values() {
        let a = mixing_angles(1.0, 1.5).unwrap();
        assert!((a.theta - 0.491_396_861_623_664_5).abs() < 1e-12);
        assert!((a.phi - 0.624_522_886_199_127_2).abs() < 1e-12);
        let eq = mixing_angles(2.0, 2.0).unwrap();
        assert!((eq.theta - std::f64::consts::PI / 8.0).abs() < 1e-15);
        let extracted = (a.phi - a.theta).sin().powi(2) * 2.0 * (1.0f64 + 4.0 * 2.25).sqrt();
        assert!((extracted - 0.1114).abs() < 1e-3);
    }
}
