//! End-to-end energy teleportation: Alice measures in the X basis, Bob rotates
//! into the ground state of his conditional effective Hamiltonian.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonians::{
    appendix_b_basis, mixing_angles, original_ground_state, Hamiltonian, MixingAngles, ModelParams,
};
use crate::qmat::{
    eig_hermitian, kets, kron, partial_trace, pauli, trace_distance, ComplexMatrix, DensityMatrix, STATE_TOL,
};
use crate::slp::{certify_slp, SlpCertificate, PSD_TOL};

/// Branches with probability below this carry no post-measurement state.
pub const NULL_BRANCH_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        }
    }

    /// `|+⟩` or `|−⟩`.
    pub fn alice_state(self) -> Vec<Complex64> {
        match self {
            Outcome::Plus => kets::plus(),
            Outcome::Minus => kets::minus(),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One outcome of Alice's measurement.
#[derive(Debug, Clone)]
pub struct Branch {
    pub outcome: Outcome,
    pub probability: f64,
    /// `None` when the outcome has (numerically) zero probability.
    pub post_state: Option<DensityMatrix>,
    pub alice_state: Vec<Complex64>,
}

impl Branch {
    pub fn is_null(&self) -> bool {
        self.post_state.is_none()
    }

    /// Bob's reduced state in this branch.
    pub fn bob_state(&self) -> Result<Option<DensityMatrix>> {
        self.post_state.as_ref().map(|s| s.reduced_qubit(1)).transpose()
    }
}

#[derive(Debug, Clone)]
pub struct MeasurementEnsemble {
    pub branches: [Branch; 2],
}

impl MeasurementEnsemble {
    pub fn branch(&self, outcome: Outcome) -> &Branch {
        match outcome {
            Outcome::Plus => &self.branches[0],
            Outcome::Minus => &self.branches[1],
        }
    }

    /// Unconditioned post-measurement state `Σ p_± ρ_±`.
    pub fn mixture(&self) -> Result<DensityMatrix> {
        let mut acc = ComplexMatrix::zeros(4);
        for b in &self.branches {
            if let Some(s) = &b.post_state {
                acc = &acc + &s.matrix().scale_real(b.probability);
            }
        }
        DensityMatrix::new(acc)
    }
}

/// Projective measurement of qubit A in `{|+⟩, |−⟩}`.
pub fn alice_x_measurement(rho: &DensityMatrix) -> Result<MeasurementEnsemble> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch("Alice's measurement expects a two-qubit state".into()));
    }
    let branch = |outcome: Outcome| -> Result<Branch> {
        let alice = outcome.alice_state();
        let proj = kron(&ComplexMatrix::projector(&alice)?, &pauli::i2())?;
        let unnormalized = &(&proj * rho.matrix()) * &proj;
        let probability = unnormalized.trace().re.clamp(0.0, 1.0);
        let post_state = if probability > NULL_BRANCH_TOL {
            Some(DensityMatrix::new(unnormalized.scale_real(1.0 / probability).hermitian_part())?)
        } else {
            None
        };
        Ok(Branch { outcome, probability, post_state, alice_state: alice })
    };
    Ok(MeasurementEnsemble { branches: [branch(Outcome::Plus)?, branch(Outcome::Minus)?] })
}

/// `⟨ψ_A|H|ψ_A⟩` on B with its spectral data.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    pub matrix: ComplexMatrix,
    pub outcome: Option<Outcome>,
    pub ground_state: Vec<Complex64>,
    pub excited_state: Vec<Complex64>,
    pub ground_energy: f64,
    pub excited_energy: f64,
}

impl EffectiveHamiltonian {
    /// Both levels coincide, so every Bob state is a ground state.
    pub fn is_degenerate(&self) -> bool {
        self.excited_energy - self.ground_energy <= 1e-12 * (1.0 + self.matrix.frobenius_norm())
    }
}

pub fn effective_hamiltonian(h: &ComplexMatrix, alice_state: &[Complex64]) -> Result<EffectiveHamiltonian> {
    if h.rows() != 4 || h.cols() != 4 || alice_state.len() != 2 {
        return Err(Error::DimensionMismatch("effective Hamiltonian needs a 4x4 H and a qubit state".into()));
    }
    let norm = kets::norm(alice_state);
    if (norm - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("Alice's state has norm {norm}")));
    }
    let mut m = ComplexMatrix::zeros(2);
    for b in 0..2 {
        for b2 in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for a2 in 0..2 {
                    acc += alice_state[a].conj() * h[(2 * a + b, 2 * a2 + b2)] * alice_state[a2];
                }
            }
            m[(b, b2)] = acc;
        }
    }
    let matrix = m.hermitian_part();
    let eig = eig_hermitian(&matrix)?;
    Ok(EffectiveHamiltonian {
        ground_state: eig.vector(0),
        excited_state: eig.vector(1),
        ground_energy: eig.values[0],
        excited_energy: eig.values[1],
        matrix,
        outcome: None,
    })
}

/// Effective Hamiltonian seen by Bob after outcome `outcome`.
pub fn effective_hamiltonian_for(h: &ComplexMatrix, outcome: Outcome) -> Result<EffectiveHamiltonian> {
    let mut eff = effective_hamiltonian(h, &outcome.alice_state())?;
    eff.outcome = Some(outcome);
    Ok(eff)
}

/// Unitary `|g⟩⟨b| + |g⊥⟩⟨b⊥|` taking `bob_state` to the ground state of `eff`,
/// with its first column phase-fixed. Identity when `eff` is degenerate or
/// `bob_state` is already the ground state.
pub fn optimal_conditional_unitary(eff: &EffectiveHamiltonian, bob_state: &[Complex64]) -> Result<ComplexMatrix> {
    let norm = kets::norm(bob_state);
    if bob_state.len() != 2 || (norm - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("Bob's state must be a normalized qubit (norm {norm})")));
    }
    let g = &eff.ground_state;
    if eff.is_degenerate() || kets::inner(g, bob_state).norm() >= 1.0 - 1e-14 {
        return Ok(ComplexMatrix::identity(2));
    }
    let u = &ComplexMatrix::outer(g, bob_state)?
        + &ComplexMatrix::outer(&kets::orthogonal(g), &kets::orthogonal(bob_state))?;
    Ok(fix_unitary_phase(&u))
}

/// Scales `u` so the first non-negligible entry of its first column is real
/// and non-negative.
pub fn fix_unitary_phase(u: &ComplexMatrix) -> ComplexMatrix {
    match (0..u.rows()).map(|i| u[(i, 0)]).find(|z| z.norm() > 1e-10) {
        Some(lead) => u.scale(lead.conj() / lead.norm()),
        None => u.clone(),
    }
}

/// Summary of one protocol execution.
#[derive(Debug, Clone)]
pub struct ProtocolReport {
    pub params: ModelParams,
    pub hamiltonian: Hamiltonian,
    pub initial_state: DensityMatrix,
    pub ensemble: MeasurementEnsemble,
    /// Indexed `[+, −]`.
    pub effective_hams: [EffectiveHamiltonian; 2],
    /// Indexed `[+, −]`.
    pub conditional_unitaries: [ComplexMatrix; 2],
    pub final_state: DensityMatrix,
    /// `Tr(Hρ)` before Alice measures.
    pub energy_initial: f64,
    /// `Tr(Hρ_SLP)` on the post-measurement mixture.
    pub energy_before: f64,
    pub energy_after: f64,
    /// `energy_before − energy_after`.
    pub extracted: f64,
    pub slp_initial: SlpCertificate,
    pub slp_post_measurement: SlpCertificate,
    /// `⟨Y⊗Y⟩` on the initial, post-measurement and final states.
    pub yy_expectation_trace: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Initial state used by [`run_protocol`] for each model family.
pub fn initial_state(params: &ModelParams) -> Result<DensityMatrix> {
    match *params {
        ModelParams::Original { h, kappa } => DensityMatrix::pure(&original_ground_state(h, kappa)?),
        ModelParams::FlipFlop { .. } => DensityMatrix::basis("00"),
        ModelParams::AppendixB { alpha, beta, .. } | ModelParams::AppendixBGeneral { alpha, beta, .. } => {
            DensityMatrix::pure(&appendix_b_basis(alpha, beta).v[1])
        }
    }
}

pub fn run_protocol(params: &ModelParams) -> Result<ProtocolReport> {
    run_protocol_from(params, initial_state(params)?)
}

/// Runs the protocol from an arbitrary two-qubit starting state.
pub fn run_protocol_from(params: &ModelParams, initial: DensityMatrix) -> Result<ProtocolReport> {
    let hamiltonian = params.build()?;
    let h = &hamiltonian.matrix;
    let yy = kron(&pauli::y(), &pauli::y())?;
    let mut warnings = Vec::new();

    let ensemble = alice_x_measurement(&initial)?;
    let rho_slp = ensemble.mixture()?;
    let slp_initial = certify_slp(&initial, h, PSD_TOL)?;
    let slp_post_measurement = certify_slp(&rho_slp, h, PSD_TOL)?;
    for (cert, what) in [(&slp_initial, "initial"), (&slp_post_measurement, "post-measurement")] {
        if cert.indeterminate {
            warnings.push(format!("{what} state is borderline: smallest M eigenvalue {:.3e}", cert.min_eigenvalue()));
        } else if !cert.psd_verdict {
            warnings.push(format!("{what} state is not SLP; energy is extractable without teleportation"));
        }
    }

    let mut effs = Vec::with_capacity(2);
    let mut unitaries = Vec::with_capacity(2);
    let mut final_m = ComplexMatrix::zeros(4);
    for branch in &ensemble.branches {
        let eff = effective_hamiltonian_for(h, branch.outcome)?;
        let u = match branch.bob_state()? {
            Some(bob) => {
                if bob.purity() < 1.0 - 1e-9 {
                    warnings.push(format!(
                        "Bob's state after outcome {} is mixed; rotating its dominant eigenvector",
                        branch.outcome
                    ));
                }
                if eff.is_degenerate() {
                    warnings.push(format!(
                        "effective Hamiltonian for outcome {} is degenerate; identity applied",
                        branch.outcome
                    ));
                }
                optimal_conditional_unitary(&eff, &bob.principal_vector()?)?
            }
            None => ComplexMatrix::identity(2),
        };
        if let Some(post) = &branch.post_state {
            let lifted = kron(&pauli::i2(), &u)?;
            final_m = &final_m + &post.matrix().conjugate_by(&lifted).scale_real(branch.probability);
        }
        effs.push(eff);
        unitaries.push(u);
    }
    let final_state = DensityMatrix::new(final_m.hermitian_part())?;

    let energy_initial = hamiltonian.energy(&initial);
    let energy_before = hamiltonian.energy(&rho_slp);
    let energy_after = hamiltonian.energy(&final_state);
    let yy_expectation_trace = vec![initial.expectation(&yy), rho_slp.expectation(&yy), final_state.expectation(&yy)];
    let [eff_plus, eff_minus]: [EffectiveHamiltonian; 2] = effs.try_into().expect("two branches");
    let [u_plus, u_minus]: [ComplexMatrix; 2] = unitaries.try_into().expect("two branches");

    Ok(ProtocolReport {
        params: *params,
        hamiltonian,
        initial_state: initial,
        ensemble,
        effective_hams: [eff_plus, eff_minus],
        conditional_unitaries: [u_plus, u_minus],
        final_state,
        energy_initial,
        energy_before,
        energy_after,
        extracted: energy_before - energy_after,
        slp_initial,
        slp_post_measurement,
        yy_expectation_trace,
        warnings,
    })
}

/// `2 sin²θ √(h²+κ²)`, extraction of the flip-flop protocol.
pub fn flipflop_extraction(h: f64, kappa: f64) -> Result<f64> {
    let MixingAngles { theta, .. } = mixing_angles(h, kappa)?;
    Ok(2.0 * theta.sin().powi(2) * h.hypot(kappa))
}

/// `2 sin²(φ−θ) √(h²+4κ²)`, extraction of the original protocol.
pub fn original_extraction(h: f64, kappa: f64) -> Result<f64> {
    let MixingAngles { theta, phi } = mixing_angles(h, kappa)?;
    Ok(2.0 * (phi - theta).sin().powi(2) * h.hypot(2.0 * kappa))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    pub kappa_over_h: f64,
    pub e_new: f64,
    pub e_orig: f64,
    pub ratio: f64,
    /// `κ = h`, the flip-flop level crossing.
    pub at_crossing: bool,
}

/// Closed-form extraction of both protocols at `h = 1`.
pub fn extraction_ratio_sweep(kappa_over_h: &[f64]) -> Result<Vec<RatioPoint>> {
    kappa_over_h
        .par_iter()
        .map(|&k| {
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::InvalidParameter(format!("kappa/h must be positive and finite, got {k}")));
            }
            let e_new = flipflop_extraction(1.0, k)?;
            let e_orig = original_extraction(1.0, k)?;
            Ok(RatioPoint { kappa_over_h: k, e_new, e_orig, ratio: e_new / e_orig, at_crossing: k == 1.0 })
        })
        .collect()
}

/// Iterates `ψ ← (P_± ⊗ I)(I − iH·dt)ψ` with renormalization from
/// `|±⟩|0⟩` and returns Bob's reduced state.
pub fn zeno_evolve(h: &ComplexMatrix, outcome: Outcome, t: f64, steps: usize) -> Result<DensityMatrix> {
    if steps == 0 {
        return Err(Error::InvalidParameter("zeno_evolve needs at least one step".into()));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("evolution time must be non-negative, got {t}")));
    }
    if h.rows() != 4 || h.cols() != 4 {
        return Err(Error::DimensionMismatch("zeno_evolve expects a 4x4 Hamiltonian".into()));
    }
    let dt = t / steps as f64;
    let alice = outcome.alice_state();
    let step_op = &ComplexMatrix::identity(4) - &h.scale(Complex64::new(0.0, dt));
    let proj = kron(&ComplexMatrix::projector(&alice)?, &pauli::i2())?;
    let map = &proj * &step_op;

    let mut psi = crate::qmat::kron_vec(&alice, &kets::zero());
    for step in 1..=steps {
        psi = map.mul_vec(&psi);
        let norm = kets::norm(&psi);
        if !norm.is_finite() || norm <= 1e-150 {
            return Err(Error::NormCollapse { step });
        }
        psi.iter_mut().for_each(|z| *z /= norm);
    }
    let full = ComplexMatrix::projector(&psi)?;
    DensityMatrix::new(partial_trace(&full, 0, &[2, 2])?.hermitian_part())
}

/// `e^{-iH_eff t}|0⟩` for the effective Hamiltonian of `outcome`.
pub fn zeno_exact(h: &ComplexMatrix, outcome: Outcome, t: f64) -> Result<DensityMatrix> {
    let eff = effective_hamiltonian_for(h, outcome)?;
    let u = crate::qmat::evolution_unitary(&eff.matrix, t)?;
    DensityMatrix::pure(&u.mul_vec(&kets::zero()))
}

/// Trace distance between the Zeno iteration and exact effective evolution.
pub fn zeno_trace_distance(h: &ComplexMatrix, outcome: Outcome, t: f64, steps: usize) -> Result<f64> {
    let iterated = zeno_evolve(h, outcome, t, steps)?;
    let exact = zeno_exact(h, outcome, t)?;
    trace_distance(iterated.matrix(), exact.matrix())
}
