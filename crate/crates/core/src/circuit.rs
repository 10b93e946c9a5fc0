//! Gate-level density-matrix simulation of the dynamic (mid-circuit
//! measurement) and deferred (controlled-gate) protocol circuits, plus Pauli
//! shot sampling.
//!
//! Qubit 0 is Alice and the most significant bit.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::hamiltonians::{mixing_angles, MixingAngles};
use crate::qmat::{kron, pauli, ComplexMatrix, DensityMatrix};

/// Unitarity tolerance for gate matrices.
pub const UNITARY_TOL: f64 = 1e-12;
/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Z,
    X,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H {
        target: usize,
    },
    X {
        target: usize,
    },
    /// `exp(−i·angle·Y/2)`
    Ry {
        target: usize,
        angle: f64,
    },
    /// Arbitrary single-qubit unitary.
    Unitary {
        target: usize,
        matrix: ComplexMatrix,
    },
    /// Applies `matrix` to `target` when `control` is in `|control_value⟩`.
    Controlled {
        control: usize,
        control_value: u8,
        target: usize,
        matrix: ComplexMatrix,
    },
    /// Projective measurement; outcome 0 is `|0⟩` (Z) or `|+⟩` (X).
    Measure {
        qubit: usize,
        basis: Basis,
    },
    /// Applies `matrix` to `target` in branches whose latest outcome is `outcome`.
    Conditional {
        outcome: u8,
        target: usize,
        matrix: ComplexMatrix,
    },
}

impl Gate {
    fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H { target } | Gate::X { target } | Gate::Ry { target, .. } | Gate::Unitary { target, .. } => {
                vec![*target]
            }
            Gate::Controlled { control, target, .. } => vec![*control, *target],
            Gate::Measure { qubit, .. } => vec![*qubit],
            Gate::Conditional { target, .. } => vec![*target],
        }
    }

    fn single_qubit_matrix(&self) -> Option<ComplexMatrix> {
        match self {
            Gate::H { .. } => Some(pauli::hadamard()),
            Gate::X { .. } => Some(pauli::x()),
            Gate::Ry { angle, .. } => Some(pauli::ry(*angle)),
            Gate::Unitary { matrix, .. } | Gate::Conditional { matrix, .. } => Some(matrix.clone()),
            Gate::Controlled { .. } | Gate::Measure { .. } => None,
        }
    }

    fn validate(&self, qubits: usize) -> Result<()> {
        let used = self.qubits();
        if let Some(&q) = used.iter().find(|&&q| q >= qubits) {
            return Err(Error::QubitOutOfRange { index: q, qubits });
        }
        if used.len() == 2 && used[0] == used[1] {
            return Err(Error::InvalidCircuit("control and target must differ".into()));
        }
        match self {
            Gate::Ry { angle, .. } if !angle.is_finite() => {
                Err(Error::InvalidCircuit(format!("rotation angle {angle} is not finite")))
            }
            Gate::Controlled { control_value: v, .. } | Gate::Conditional { outcome: v, .. } if *v > 1 => {
                Err(Error::InvalidCircuit("classical values must be 0 or 1".into()))
            }
            Gate::Unitary { matrix, .. } | Gate::Controlled { matrix, .. } | Gate::Conditional { matrix, .. } => {
                check_unitary(matrix)
            }
            _ => Ok(()),
        }
    }
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::InvalidCircuit("gate matrices must be 2x2".into()));
    }
    let dev = (&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(2));
    if dev > UNITARY_TOL {
        return Err(Error::InvalidCircuit(format!("gate matrix deviates from unitary by {dev:.3e}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitMode {
    /// Mid-circuit measurement with classically conditioned gates.
    Dynamic,
    /// Quantum-controlled gates with all measurements delayed.
    Deferred,
}

impl fmt::Display for CircuitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CircuitMode::Dynamic => "dynamic",
            CircuitMode::Deferred => "deferred",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
    mode: CircuitMode,
}

impl Circuit {
    pub fn new(qubits: usize, mode: CircuitMode, gates: Vec<Gate>) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::InvalidCircuit(format!("unsupported register size {qubits}")));
        }
        let mut measured = false;
        for g in &gates {
            g.validate(qubits)?;
            match (mode, g) {
                (CircuitMode::Dynamic, Gate::Conditional { .. }) if !measured => {
                    return Err(Error::InvalidCircuit("conditional gate before any measurement".into()));
                }
                (CircuitMode::Deferred, Gate::Conditional { .. }) => {
                    return Err(Error::InvalidCircuit("deferred circuits cannot use classical control".into()));
                }
                (CircuitMode::Deferred, Gate::Controlled { .. }) if measured => {
                    return Err(Error::InvalidCircuit("controlled gate after a measurement".into()));
                }
                (_, Gate::Measure { .. }) => measured = true,
                _ => {}
            }
        }
        Ok(Self { qubits, gates, mode })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn mode(&self) -> CircuitMode {
        self.mode
    }

    /// Runs the circuit on `initial`, tracking every measurement branch.
    pub fn simulate(&self, initial: &DensityMatrix) -> Result<Simulation> {
        if initial.dim() != 1 << self.qubits {
            return Err(Error::DimensionMismatch(format!(
                "state has dimension {}, circuit needs {}",
                initial.dim(),
                1 << self.qubits
            )));
        }
        let mut branches = vec![SimBranch { outcomes: Vec::new(), probability: 1.0, state: initial.clone() }];
        for gate in &self.gates {
            let mut next = Vec::with_capacity(branches.len() * 2);
            for b in branches {
                match gate {
                    Gate::Conditional { outcome, target, matrix } => {
                        let state = if b.outcomes.last() == Some(outcome) {
                            b.state.evolve(&embed_single(self.qubits, *target, matrix))
                        } else {
                            b.state
                        };
                        next.push(SimBranch { state, ..b });
                    }
                    _ => match apply_gate(&b.state, gate)? {
                        GateOutput::State(state) => next.push(SimBranch { state, ..b }),
                        GateOutput::Ensemble(outs) => {
                            for o in outs {
                                if let Some(state) = o.state {
                                    let mut outcomes = b.outcomes.clone();
                                    outcomes.push(o.outcome);
                                    next.push(SimBranch {
                                        outcomes,
                                        probability: b.probability * o.probability,
                                        state,
                                    });
                                }
                            }
                        }
                    },
                }
            }
            branches = next;
        }
        let mut acc = ComplexMatrix::zeros(initial.dim());
        for b in &branches {
            acc = &acc + &b.state.matrix().scale_real(b.probability);
        }
        Ok(Simulation { final_state: DensityMatrix::new(acc.hermitian_part())?, branches })
    }
}

#[derive(Debug, Clone)]
pub struct SimBranch {
    pub outcomes: Vec<u8>,
    pub probability: f64,
    pub state: DensityMatrix,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub branches: Vec<SimBranch>,
    /// Probability-weighted mixture of all branches.
    pub final_state: DensityMatrix,
}

#[derive(Debug, Clone)]
pub struct MeasuredOutcome {
    pub outcome: u8,
    pub probability: f64,
    /// `None` for zero-probability outcomes.
    pub state: Option<DensityMatrix>,
}

#[derive(Debug, Clone)]
pub enum GateOutput {
    State(DensityMatrix),
    Ensemble(Vec<MeasuredOutcome>),
}

fn bit(index: usize, qubit: usize, qubits: usize) -> usize {
    (index >> (qubits - 1 - qubit)) & 1
}

/// `u` acting on `target` of an `qubits`-qubit register.
pub fn embed_single(qubits: usize, target: usize, u: &ComplexMatrix) -> ComplexMatrix {
    let dim = 1 << qubits;
    let mut out = ComplexMatrix::zeros(dim);
    let mask = 1 << (qubits - 1 - target);
    for r in 0..dim {
        for c in 0..dim {
            if r & !mask == c & !mask {
                out[(r, c)] = u[(bit(r, target, qubits), bit(c, target, qubits))];
            }
        }
    }
    out
}

/// `|v⟩⟨v|_control ⊗ u_target + (I − |v⟩⟨v|)_control ⊗ I`.
pub fn embed_controlled(qubits: usize, control: usize, value: u8, target: usize, u: &ComplexMatrix) -> ComplexMatrix {
    let dim = 1 << qubits;
    let active = embed_single(qubits, target, u);
    let mut out = ComplexMatrix::identity(dim);
    for r in 0..dim {
        if bit(r, control, qubits) != value as usize {
            continue;
        }
        for c in 0..dim {
            if bit(c, control, qubits) == value as usize {
                out[(r, c)] = active[(r, c)];
            }
        }
    }
    out
}

/// Applies one gate. Measurements return the branch ensemble; classically
/// conditioned gates are only meaningful inside [`Circuit::simulate`].
pub fn apply_gate(rho: &DensityMatrix, gate: &Gate) -> Result<GateOutput> {
    let qubits = rho.num_qubits();
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::InvalidCircuit(format!("unsupported register size {qubits}")));
    }
    gate.validate(qubits)?;
    match gate {
        Gate::Conditional { .. } => Err(Error::InvalidCircuit("conditional gates need a measurement record".into())),
        Gate::Controlled { control, control_value, target, matrix } => {
            Ok(GateOutput::State(rho.evolve(&embed_controlled(qubits, *control, *control_value, *target, matrix))))
        }
        Gate::Measure { qubit, basis } => {
            let (p0, p1) = match basis {
                Basis::Z => (crate::qmat::kets::zero(), crate::qmat::kets::one()),
                Basis::X => (crate::qmat::kets::plus(), crate::qmat::kets::minus()),
            };
            let mut outs = Vec::with_capacity(2);
            for (outcome, ket) in [(0u8, p0), (1u8, p1)] {
                let proj = embed_single(qubits, *qubit, &ComplexMatrix::projector(&ket)?);
                let unnormalized = &(&proj * rho.matrix()) * &proj;
                let probability = unnormalized.trace().re.clamp(0.0, 1.0);
                let state = if probability > 1e-14 {
                    Some(DensityMatrix::new(unnormalized.scale_real(1.0 / probability).hermitian_part())?)
                } else {
                    None
                };
                outs.push(MeasuredOutcome { outcome, probability, state });
            }
            Ok(GateOutput::Ensemble(outs))
        }
        single => {
            let target = single.qubits()[0];
            let u = single.single_qubit_matrix().expect("single-qubit gate");
            Ok(GateOutput::State(rho.evolve(&embed_single(qubits, target, &u))))
        }
    }
}

fn check_regime(h: f64, kappa: f64) -> Result<MixingAngles> {
    if h == kappa {
        return Err(Error::InvalidParameter("kappa = h is the degenerate crossing".into()));
    }
    mixing_angles(h, kappa)
}

/// Conditional rotations `(RY(−2θ), RY(+2θ))` for outcomes `(+, −)`.
pub fn protocol_rotations(h: f64, kappa: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let MixingAngles { theta, .. } = check_regime(h, kappa)?;
    Ok((pauli::ry(-2.0 * theta), pauli::ry(2.0 * theta)))
}

/// X measurement of Alice realized as H then a Z measurement, Bob's
/// conditional rotations, and a closing H that returns Alice to the X frame.
pub fn build_dynamic_circuit(h: f64, kappa: f64) -> Result<Circuit> {
    let (u_plus, u_minus) = protocol_rotations(h, kappa)?;
    build_dynamic_circuit_with(u_plus, u_minus)
}

pub fn build_dynamic_circuit_with(u_plus: ComplexMatrix, u_minus: ComplexMatrix) -> Result<Circuit> {
    Circuit::new(
        2,
        CircuitMode::Dynamic,
        vec![
            Gate::H { target: 0 },
            Gate::Measure { qubit: 0, basis: Basis::Z },
            Gate::Conditional { outcome: 0, target: 1, matrix: u_plus },
            Gate::Conditional { outcome: 1, target: 1, matrix: u_minus },
            Gate::H { target: 0 },
        ],
    )
}

/// Same transformation with Alice's qubit as a quantum control and the
/// measurement moved to the end.
pub fn build_deferred_circuit(h: f64, kappa: f64) -> Result<Circuit> {
    let (u_plus, u_minus) = protocol_rotations(h, kappa)?;
    build_deferred_circuit_with(u_plus, u_minus)
}

pub fn build_deferred_circuit_with(u_plus: ComplexMatrix, u_minus: ComplexMatrix) -> Result<Circuit> {
    Circuit::new(
        2,
        CircuitMode::Deferred,
        vec![
            Gate::H { target: 0 },
            Gate::Controlled { control: 0, control_value: 0, target: 1, matrix: u_plus },
            Gate::Controlled { control: 0, control_value: 1, target: 1, matrix: u_minus },
            Gate::Measure { qubit: 0, basis: Basis::Z },
            Gate::H { target: 0 },
        ],
    )
}

pub fn build_circuit(mode: CircuitMode, u_plus: ComplexMatrix, u_minus: ComplexMatrix) -> Result<Circuit> {
    match mode {
        CircuitMode::Dynamic => build_dynamic_circuit_with(u_plus, u_minus),
        CircuitMode::Deferred => build_deferred_circuit_with(u_plus, u_minus),
    }
}

/// Tensor product of Pauli letters, one per qubit, e.g. `"IZ"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliWord(String);

impl PauliWord {
    pub fn parse(word: &str) -> Result<Self> {
        let upper = word.to_ascii_uppercase();
        if upper.is_empty() || upper.len() > MAX_QUBITS || !upper.chars().all(|c| "IXYZ".contains(c)) {
            return Err(Error::MalformedPauliWord(word.to_string()));
        }
        Ok(Self(upper))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mut chars = self.0.chars();
        let first = pauli::from_letter(chars.next().expect("non-empty")).expect("validated");
        chars.fold(first, |acc, c| kron(&acc, &pauli::from_letter(c).expect("validated")).expect("at most 8x8"))
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `Tr(ρP)` for a Pauli word matching the register size.
pub fn expectation(rho: &DensityMatrix, word: &str) -> Result<f64> {
    let w = PauliWord::parse(word)?;
    if w.len() != rho.num_qubits() {
        return Err(Error::MalformedPauliWord(format!(
            "{word} has {} letters for a {}-qubit state",
            w.len(),
            rho.num_qubits()
        )));
    }
    let value = rho.matrix().trace_product(&w.matrix());
    if value.im.abs() > 1e-12 {
        return Err(Error::InvalidState(format!("expectation of {word} has imaginary part {:.3e}", value.im)));
    }
    Ok(value.re)
}

/// Mean of `shots` ±1 outcomes of a Pauli measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotEstimate {
    pub observable: String,
    pub shots: u64,
    pub mean: f64,
    /// `sqrt((1 − mean²)/shots)`.
    pub std_error: f64,
    pub seed: u64,
    /// Generator stream the outcomes were drawn from.
    pub stream: u64,
}

/// Samples with generator stream 0 of `seed`.
pub fn sample_pauli(rho: &DensityMatrix, word: &str, shots: u64, seed: u64) -> Result<ShotEstimate> {
    sample_pauli_stream(rho, word, shots, seed, 0)
}

/// Samples from stream `stream` of `seed`, so observables measured under one
/// base seed draw independent outcomes.
pub fn sample_pauli_stream(
    rho: &DensityMatrix,
    word: &str,
    shots: u64,
    seed: u64,
    stream: u64,
) -> Result<ShotEstimate> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let exact = expectation(rho, word)?;
    let p_plus = ((1.0 + exact) / 2.0).clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let ups = Binomial::new(shots, p_plus)
        .map_err(|e| Error::InvalidParameter(format!("binomial sampling: {e}")))?
        .sample(&mut rng);
    let mean = (2.0 * ups as f64 - shots as f64) / shots as f64;
    Ok(ShotEstimate {
        observable: PauliWord::parse(word)?.to_string(),
        shots,
        mean,
        std_error: ((1.0 - mean * mean).max(0.0) / shots as f64).sqrt(),
        seed,
        stream,
    })
}

/// Samples each word on its own stream `0, 1, 2, …` of `seed`.
pub fn sample_observables(rho: &DensityMatrix, words: &[&str], shots: u64, seed: u64) -> Result<Vec<ShotEstimate>> {
    words.iter().enumerate().map(|(i, w)| sample_pauli_stream(rho, w, shots, seed, i as u64)).collect()
}

/// An observable value with its uncertainty; exact values carry zero error.
#[derive(Debug, Clone, PartialEq)]
pub struct Measured {
    pub observable: String,
    pub value: f64,
    pub std_error: f64,
}

impl Measured {
    pub fn exact(observable: &str, value: f64) -> Self {
        Self { observable: observable.to_ascii_uppercase(), value, std_error: 0.0 }
    }
}

impl From<&ShotEstimate> for Measured {
    fn from(s: &ShotEstimate) -> Self {
        Self { observable: s.observable.clone(), value: s.mean, std_error: s.std_error }
    }
}

/// Observables entering Bob's energy.
pub const BOB_OBSERVABLES: [&str; 3] = ["IZ", "XX", "YY"];

/// `−h⟨IZ⟩ + κ⟨XX⟩ + κ⟨YY⟩` with errors added in quadrature.
pub fn bob_energy(measurements: &[Measured], h: f64, kappa: f64) -> Result<(f64, f64)> {
    let found: Vec<&str> = measurements.iter().map(|m| m.observable.as_str()).collect();
    let mut sorted = found.clone();
    sorted.sort_unstable();
    if sorted != ["IZ", "XX", "YY"] {
        return Err(Error::ObservableSet(found.iter().map(|s| s.to_string()).collect()));
    }
    let mut value = 0.0;
    let mut var = 0.0;
    for m in measurements {
        let coeff = if m.observable == "IZ" { -h } else { kappa };
        value += coeff * m.value;
        var += (coeff * m.std_error).powi(2);
    }
    Ok((value, var.sqrt()))
}

/// `IZ, XX, YY` expectations and Bob's energy for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRow {
    pub iz: f64,
    pub xx: f64,
    pub yy: f64,
    pub e_bob: f64,
}

pub fn exact_row(rho: &DensityMatrix, h: f64, kappa: f64) -> Result<ObservableRow> {
    let iz = expectation(rho, "IZ")?;
    let xx = expectation(rho, "XX")?;
    let yy = expectation(rho, "YY")?;
    let (e_bob, _) =
        bob_energy(&[Measured::exact("IZ", iz), Measured::exact("XX", xx), Measured::exact("YY", yy)], h, kappa)?;
    Ok(ObservableRow { iz, xx, yy, e_bob })
}

/// Chebyshev failure probability `1/(N·ε²)` for a unit-variance observable.
pub fn chebyshev_budget(shots: u64, epsilon: f64) -> Result<f64> {
    if shots == 0 || epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter("need shots >= 1 and epsilon > 0".into()));
    }
    Ok(1.0 / (shots as f64 * epsilon * epsilon))
}

/// Smallest shot count whose Chebyshev budget is at most `delta`.
pub fn shots_for_budget(epsilon: f64, delta: f64) -> Result<u64> {
    if epsilon.is_nan() || epsilon <= 0.0 || delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidParameter("need epsilon > 0 and delta > 0".into()));
    }
    Ok((1.0 / (delta * epsilon * epsilon) - 1e-9).ceil().max(1.0) as u64)
}
