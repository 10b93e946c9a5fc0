mod common;

use common::{c, to_m4};
use num_complex::Complex64;
use proptest::prelude::*;
use qetlab_core::qmat::{
    eig_hermitian, evolution_unitary, is_psd, kets, kron, partial_trace, partial_transpose, pauli, trace_distance,
    trace_distance_pure,
};
use qetlab_core::{ComplexMatrix, DensityMatrix, Error};

fn entries(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * n)
}

fn matrix(n: usize, e: &[(f64, f64)]) -> ComplexMatrix {
    ComplexMatrix::new(n, n, e.iter().map(|&(re, im)| Complex64::new(re, im)).collect()).unwrap()
}

fn hermitian(n: usize, e: &[(f64, f64)]) -> ComplexMatrix {
    matrix(n, e).hermitian_part()
}

#[test]
fn kron_entries() {
    let k = kron(&pauli::x(), &pauli::z()).unwrap();
    // X⊗Z: [[0, Z], [Z, 0]]
    assert_eq!(k[(0, 2)], c(1.0));
    assert_eq!(k[(1, 3)], c(-1.0));
    assert_eq!(k[(2, 0)], c(1.0));
    assert_eq!(k[(0, 0)], c(0.0));
}

#[test]
fn bell_state_reduces_to_maximally_mixed() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = DensityMatrix::pure(&[c(s), c(0.0), c(0.0), c(s)]).unwrap();
    for q in 0..2 {
        let r = bell.reduced_qubit(q).unwrap();
        assert!(r.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }
}

#[test]
fn dimension_errors() {
    assert!(matches!(
        kron(&ComplexMatrix::identity(4), &ComplexMatrix::identity(4)),
        Err(Error::UnsupportedDimension(16))
    ));
    assert!(ComplexMatrix::new(3, 3, vec![c(0.0); 9]).is_err());
    assert!(partial_trace(&ComplexMatrix::identity(4), 2, &[2, 2]).is_err());
}

#[test]
fn partial_transpose_of_bell_has_negative_eigenvalue() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = ComplexMatrix::projector(&[c(s), c(0.0), c(0.0), c(s)]).unwrap();
    let pt = partial_transpose(&bell, 1, &[2, 2]).unwrap();
    let eig = eig_hermitian(&pt).unwrap();
    assert!((eig.values[0] + 0.5).abs() < 1e-14);
    assert!(!is_psd(&pt, 1e-12).unwrap().is_psd);
}

#[test]
fn pure_and_mixed_trace_distances_agree() {
    let a = kets::real(0.3);
    let b = kets::real(1.1);
    let d = trace_distance(&ComplexMatrix::projector(&a).unwrap(), &ComplexMatrix::projector(&b).unwrap()).unwrap();
    assert!((d - 0.8f64.sin()).abs() < 1e-14);
    assert!((trace_distance_pure(&a, &b) - 0.8f64.sin()).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(e in entries(4)) {
        let h = hermitian(4, &e);
        let eig = eig_hermitian(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) < 1e-12);
        let gram = &eig.vectors.adjoint() * &eig.vectors;
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        // Trace and Frobenius norm are spectral invariants.
        let tr: f64 = eig.values.iter().sum();
        prop_assert!((tr - h.trace().re).abs() < 1e-12);
        let fro: f64 = eig.values.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((fro - h.frobenius_norm()).abs() < 1e-12);
        for k in 0..4 {
            let v = eig.vector(k);
            let lead = v.iter().find(|z| z.norm() > 1e-10).unwrap();
            prop_assert!(lead.im.abs() < 1e-14 && lead.re > 0.0);
        }
    }

    #[test]
    fn eight_dimensional_eigensolver(e in entries(8)) {
        let h = hermitian(8, &e);
        let eig = eig_hermitian(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) < 1e-11);
    }

    #[test]
    fn kron_mixed_product(a in entries(2), b in entries(2), c2 in entries(2), d in entries(2)) {
        let (a, b, c2, d) = (matrix(2, &a), matrix(2, &b), matrix(2, &c2), matrix(2, &d));
        let lhs = &kron(&a, &b).unwrap() * &kron(&c2, &d).unwrap();
        let rhs = kron(&(&a * &c2), &(&b * &d)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_matches_index_sum(e in entries(4)) {
        let m = matrix(4, &e);
        let raw = to_m4(&m);
        let tb = partial_trace(&m, 1, &[2, 2]).unwrap();
        let ta = partial_trace(&m, 0, &[2, 2]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let over_b = raw[2 * i][2 * j] + raw[2 * i + 1][2 * j + 1];
                let over_a = raw[i][j] + raw[2 + i][2 + j];
                prop_assert!((tb[(i, j)] - over_b).norm() < 1e-14);
                prop_assert!((ta[(i, j)] - over_a).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn partial_trace_of_product(a in entries(2), b in entries(2)) {
        let (a, b) = (matrix(2, &a), matrix(2, &b));
        let ab = kron(&a, &b).unwrap();
        let ta = partial_trace(&ab, 1, &[2, 2]).unwrap();
        prop_assert!(ta.max_abs_diff(&a.scale(b.trace())) < 1e-12);
    }

    #[test]
    fn partial_transpose_is_involution(e in entries(4)) {
        let m = matrix(4, &e);
        let raw = to_m4(&m);
        let pt = partial_transpose(&m, 1, &[2, 2]).unwrap();
        for a in 0..2 { for b in 0..2 { for a2 in 0..2 { for b2 in 0..2 {
            prop_assert_eq!(pt[(2 * a + b, 2 * a2 + b2)], raw[2 * a + b2][2 * a2 + b]);
        }}}}
        prop_assert!(partial_transpose(&pt, 1, &[2, 2]).unwrap().max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn evolution_is_unitary_and_composes(e in entries(4), t in 0.0..3.0f64) {
        let h = hermitian(4, &e);
        let u = evolution_unitary(&h, t).unwrap();
        prop_assert!((&u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        let half = evolution_unitary(&h, t / 2.0).unwrap();
        prop_assert!((&half * &half).max_abs_diff(&u) < 1e-11);
    }

    #[test]
    fn density_matrices_from_ginibre(e in entries(4)) {
        let g = matrix(4, &e);
        let m = &g * &g.adjoint();
        let tr = m.trace().re;
        prop_assume!(tr > 1e-3);
        let rho = DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap();
        prop_assert!(rho.purity() <= 1.0 + 1e-12);
        prop_assert!(rho.min_eigenvalue().unwrap() >= -1e-12);
        let evolved = rho.evolve(&kron(&pauli::hadamard(), &pauli::ry(0.7)).unwrap());
        prop_assert!((evolved.matrix().trace().re - 1.0).abs() < 1e-12);
    }
}
