//! Strong local passivity of a two-qubit state against a Hamiltonian.
//!
//! Two independent tests are provided. The eigenvalue test builds the 4×4
//! matrix `M = C − Tr_{B′}[J·C] ⊗ I` on `B⊗B′` and checks that its Hermitian
//! part is positive semidefinite. The oracle minimizes the energy change over
//! qubit channels on `B` directly, by multistart Nelder–Mead over
//! Stinespring dilations with a one-qubit environment.
//!
//! `M` is Hermitian exactly when no first-order extraction is possible, so the
//! anti-Hermitian remainder is reported as a stationarity residual.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::qmat::{
    eig_hermitian, evolution_unitary, kron, partial_trace, partial_transpose, ComplexMatrix, DensityMatrix,
};

/// Relative tolerance of the eigenvalue test, scaled by `1 + ‖H‖_F`.
pub const PSD_TOL: f64 = 1e-9;
/// Relative tolerance of the oracle, scaled by `1 + ‖H‖_F`.
pub const ORACLE_TOL: f64 = 1e-6;
/// Eigenvalues in `[-INDETERMINATE_BAND, -tol)` are flagged as borderline.
pub const INDETERMINATE_BAND: f64 = 1e-4;
/// Tolerance on `Σ K†K = I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Number of real parameters of a 4×4 Hermitian generator.
pub const GENERATOR_PARAMS: usize = 16;

/// Completely positive trace-preserving map on one qubit, in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() || kraus.len() > 4 {
            return Err(Error::InvalidParameter(format!(
                "a qubit channel needs 1 to 4 Kraus operators, got {}",
                kraus.len()
            )));
        }
        if let Some(k) = kraus.iter().find(|k| k.rows() != 2 || k.cols() != 2) {
            return Err(Error::DimensionMismatch(format!("Kraus operator is {}x{}, expected 2x2", k.rows(), k.cols())));
        }
        let channel = Self { kraus };
        let deviation = channel.completeness_deviation();
        if deviation > COMPLETENESS_TOL {
            return Err(Error::IncompleteChannel { deviation });
        }
        Ok(channel)
    }

    pub fn identity() -> Self {
        Self { kraus: vec![ComplexMatrix::identity(2)] }
    }

    /// Conjugation by a single 2×2 unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Replaces every input with the pure state `psi`.
    pub fn replacement(psi: &[Complex64]) -> Result<Self> {
        let kraus = (0..2)
            .map(|j| {
                let mut k = ComplexMatrix::zeros(2);
                for i in 0..2 {
                    k[(i, j)] = psi[i];
                }
                k
            })
            .collect();
        Self::new(kraus)
    }

    /// Channel `σ ↦ Tr_E[U(σ⊗|0⟩⟨0|)U†]` for a unitary on `B⊗E`.
    pub fn from_stinespring(u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != 4 || u.cols() != 4 {
            return Err(Error::DimensionMismatch("Stinespring unitary must be 4x4".into()));
        }
        Self::new(stinespring_kraus(u))
    }

    /// Recovers a minimal Kraus form from a Choi matrix.
    pub fn from_choi(choi: &ComplexMatrix) -> Result<Self> {
        if choi.rows() != 4 || choi.cols() != 4 {
            return Err(Error::DimensionMismatch("qubit Choi matrix must be 4x4".into()));
        }
        let eig = eig_hermitian(choi)?;
        let cutoff = 1e-13 * (1.0 + choi.frobenius_norm());
        let mut kraus = Vec::new();
        for (k, &mu) in eig.values.iter().enumerate().rev() {
            if mu < -cutoff {
                return Err(Error::InvalidParameter(format!("Choi matrix has eigenvalue {mu:.3e}")));
            }
            if mu <= cutoff {
                continue;
            }
            let w = eig.vector(k);
            let mut op = ComplexMatrix::zeros(2);
            for i in 0..2 {
                for o in 0..2 {
                    op[(o, i)] = w[2 * i + o] * mu.sqrt();
                }
            }
            kraus.push(op);
        }
        Self::new(kraus)
    }

    /// `p·G₁ + (1−p)·G₂`, recompressed to at most four Kraus operators.
    pub fn mixture(&self, other: &Self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("mixing weight {p} outside [0, 1]")));
        }
        let choi = &self.choi().scale_real(p) + &other.choi().scale_real(1.0 - p);
        Self::from_choi(&choi)
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `max |Σ K†K − I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(2);
        for k in &self.kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }

    /// Action on a single-qubit operator.
    pub fn apply(&self, sigma: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(2);
        for k in &self.kraus {
            out = &out + &sigma.conjugate_by(k);
        }
        out
    }

    /// `(I_A ⊗ G)(ρ)` on a two-qubit operator.
    pub fn apply_on_b(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != 4 || rho.cols() != 4 {
            return Err(Error::DimensionMismatch("apply_on_b expects a 4x4 operator".into()));
        }
        let id = ComplexMatrix::identity(2);
        let mut out = ComplexMatrix::zeros(4);
        for k in &self.kraus {
            out = &out + &rho.conjugate_by(&kron(&id, k)?);
        }
        Ok(out)
    }

    /// `J_G = Σ_{ij} |i⟩⟨j| ⊗ G(|i⟩⟨j|)` on `B⊗B′`.
    pub fn choi(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                let mut e = ComplexMatrix::zeros(2);
                e[(i, j)] = Complex64::new(1.0, 0.0);
                let g = self.apply(&e);
                for o in 0..2 {
                    for p in 0..2 {
                        out[(2 * i + o, 2 * j + p)] = g[(o, p)];
                    }
                }
            }
        }
        out
    }
}

fn stinespring_kraus(u: &ComplexMatrix) -> Vec<ComplexMatrix> {
    (0..2)
        .map(|e| {
            let mut k = ComplexMatrix::zeros(2);
            for o in 0..2 {
                for i in 0..2 {
                    k[(o, i)] = u[(2 * o + e, 2 * i)];
                }
            }
            k
        })
        .collect()
}

/// Hermitian 4×4 generator from 16 reals: four diagonal entries followed by
/// the real and imaginary parts of the six upper off-diagonal entries.
pub fn generator_from_params(params: &[f64]) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(4);
    for i in 0..4 {
        g[(i, i)] = Complex64::new(params[i], 0.0);
    }
    let mut k = 4;
    for i in 0..4 {
        for j in i + 1..4 {
            let z = Complex64::new(params[k], params[k + 1]);
            g[(i, j)] = z;
            g[(j, i)] = z.conj();
            k += 2;
        }
    }
    g
}

/// Channel dilated by `U = e^{-iG}` with `G` from [`generator_from_params`].
pub fn channel_from_params(params: &[f64]) -> Result<QuantumChannel> {
    if params.len() != GENERATOR_PARAMS {
        return Err(Error::InvalidParameter(format!(
            "expected {GENERATOR_PARAMS} generator parameters, got {}",
            params.len()
        )));
    }
    let u = evolution_unitary(&generator_from_params(params), 1.0)?;
    QuantumChannel::from_stinespring(&u)
}

/// Random channel from a Gaussian generator; deterministic in `seed`.
pub fn sample_cptp(seed: u64) -> QuantumChannel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<f64> = (0..GENERATOR_PARAMS).map(|_| StandardNormal.sample(&mut rng)).collect();
    channel_from_params(&params).expect("a Gaussian generator always dilates to a valid channel")
}

/// `2|Φ⁺⟩⟨Φ⁺|`, the Choi matrix of the identity channel.
pub fn build_choi_identity() -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(4);
    for &a in &[0, 3] {
        for &b in &[0, 3] {
            j[(a, b)] = Complex64::new(1.0, 0.0);
        }
    }
    j
}

fn check_pair(rho: &ComplexMatrix, h: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 || h.rows() != 4 || h.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected 4x4 state and Hamiltonian, got {}x{} and {}x{}",
            rho.rows(),
            rho.cols(),
            h.rows(),
            h.cols()
        )));
    }
    h.ensure_hermitian()
}

/// `C = Tr_A[(ρ^{Γ_B} ⊗ I_{B′}) · H_{AB′}]` on `B⊗B′`.
///
/// `H_{AB′}` acts on the first and third factors of `A⊗B⊗B′` and as the
/// identity on `B`.
pub fn build_c(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_pair(rho.matrix(), h)?;
    let rho_gamma = partial_transpose(rho.matrix(), 1, &[2, 2])?;
    let left = kron(&rho_gamma, &ComplexMatrix::identity(2))?;

    let mut lifted = ComplexMatrix::zeros(8);
    for a in 0..2 {
        for b in 0..2 {
            for bp in 0..2 {
                for a2 in 0..2 {
                    for bp2 in 0..2 {
                        lifted[(4 * a + 2 * b + bp, 4 * a2 + 2 * b + bp2)] = h[(2 * a + bp, 2 * a2 + bp2)];
                    }
                }
            }
        }
    }
    partial_trace(&(&left * &lifted), 0, &[2, 2, 2])
}

/// `M = C − Tr_{B′}[J·C] ⊗ I_{B′}`. Not Hermitian in general.
pub fn build_m(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let c = build_c(rho, h)?;
    let y = partial_trace(&(&build_choi_identity() * &c), 1, &[2, 2])?;
    Ok(&c - &kron(&y, &ComplexMatrix::identity(2))?)
}

/// Result of the channel-minimization oracle.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub min_delta_e: f64,
    pub channel: QuantumChannel,
    /// `ORACLE_TOL · (1 + ‖H‖_F)`.
    pub tolerance: f64,
    pub starts: usize,
    /// Starts that hit the iteration cap before converging.
    pub stagnated_starts: usize,
}

impl OracleResult {
    /// True when no channel lowers the energy beyond the tolerance.
    pub fn verdict(&self) -> bool {
        self.min_delta_e >= -self.tolerance
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub starts: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { starts: 64, iterations: 2000, seed: 0 }
    }
}

impl OracleConfig {
    pub fn new(starts: usize, seed: u64) -> Self {
        Self { starts, seed, ..Self::default() }
    }
}

#[derive(Debug, Clone)]
pub struct SlpCertificate {
    /// Eigenvalues of the Hermitian part of `M`, ascending.
    pub m_eigenvalues: [f64; 4],
    /// `‖M − M†‖_F`; nonzero means energy can be extracted at first order.
    pub stationarity_residual: f64,
    /// Absolute tolerance applied to the smallest eigenvalue.
    pub tolerance: f64,
    pub psd_verdict: bool,
    /// Smallest eigenvalue is negative but within the borderline band.
    pub indeterminate: bool,
    pub oracle: Option<OracleResult>,
}

impl SlpCertificate {
    pub fn min_eigenvalue(&self) -> f64 {
        self.m_eigenvalues[0]
    }

    pub fn oracle_min_delta_e(&self) -> Option<f64> {
        self.oracle.as_ref().map(|o| o.min_delta_e)
    }

    pub fn oracle_channel(&self) -> Option<&QuantumChannel> {
        self.oracle.as_ref().map(|o| &o.channel)
    }

    /// Whether the two tests agree; `None` without an oracle run or inside
    /// the indeterminate band.
    pub fn agreement(&self) -> Option<bool> {
        if self.indeterminate {
            return None;
        }
        self.oracle.as_ref().map(|o| o.verdict() == self.psd_verdict)
    }
}

/// Eigenvalue test with relative tolerance `tol`.
pub fn certify_slp(rho: &DensityMatrix, h: &ComplexMatrix, tol: f64) -> Result<SlpCertificate> {
    let m = build_m(rho, h)?;
    let eig = eig_hermitian(&m.hermitian_part())?;
    let m_eigenvalues = [eig.values[0], eig.values[1], eig.values[2], eig.values[3]];
    let tolerance = tol * (1.0 + h.frobenius_norm());
    let min = m_eigenvalues[0];
    Ok(SlpCertificate {
        m_eigenvalues,
        stationarity_residual: m.frobenius_distance(&m.adjoint()),
        tolerance,
        psd_verdict: min >= -tolerance,
        indeterminate: min < -tolerance && min >= -INDETERMINATE_BAND,
        oracle: None,
    })
}

/// Eigenvalue test followed by the oracle.
pub fn certify_slp_with_oracle(
    rho: &DensityMatrix,
    h: &ComplexMatrix,
    tol: f64,
    config: &OracleConfig,
) -> Result<SlpCertificate> {
    let mut cert = certify_slp(rho, h, tol)?;
    cert.oracle = Some(min_delta_e_oracle(rho, h, config)?);
    Ok(cert)
}

fn energy(rho: &ComplexMatrix, h: &ComplexMatrix) -> f64 {
    rho.trace_product(h).re
}

/// `Tr[H·(I⊗G)(ρ)] − Tr[H·ρ]`.
pub fn channel_delta_e(rho: &DensityMatrix, h: &ComplexMatrix, g: &QuantumChannel) -> Result<f64> {
    check_pair(rho.matrix(), h)?;
    let deviation = g.completeness_deviation();
    if deviation > COMPLETENESS_TOL {
        return Err(Error::IncompleteChannel { deviation });
    }
    let after = g.apply_on_b(rho.matrix())?;
    Ok(energy(&after, h) - energy(rho.matrix(), h))
}

fn delta_e_for_params(rho: &ComplexMatrix, h: &ComplexMatrix, before: f64, params: &[f64]) -> f64 {
    let Ok(u) = evolution_unitary(&generator_from_params(params), 1.0) else {
        return f64::INFINITY;
    };
    let id = ComplexMatrix::identity(2);
    let mut after = 0.0;
    for k in stinespring_kraus(&u) {
        let lifted = kron(&id, &k).expect("2x2 factors");
        after += energy(&rho.conjugate_by(&lifted), h);
    }
    after - before
}

/// Multistart minimization of `ΔE` over qubit channels on `B`.
///
/// Start 0 is the identity channel; start `k > 0` draws its generator from a
/// stream derived from `(seed, k)`. The best value over all starts is kept,
/// ties going to the lower start index, so the result is independent of
/// thread scheduling and non-increasing in `starts`.
pub fn min_delta_e_oracle(rho: &DensityMatrix, h: &ComplexMatrix, config: &OracleConfig) -> Result<OracleResult> {
    check_pair(rho.matrix(), h)?;
    if config.starts == 0 {
        return Err(Error::InvalidParameter("the oracle needs at least one start".into()));
    }
    let rho_m = rho.matrix();
    let before = energy(rho_m, h);
    let opts = NelderMeadOptions { max_iterations: config.iterations, ..NelderMeadOptions::default() };

    let runs: Vec<_> = (0..config.starts)
        .into_par_iter()
        .map(|start| {
            let x0: Vec<f64> = if start == 0 {
                vec![0.0; GENERATOR_PARAMS]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(start as u64);
                (0..GENERATOR_PARAMS).map(|_| StandardNormal.sample(&mut rng)).collect()
            };
            let r = nelder_mead(|p| delta_e_for_params(rho_m, h, before, p), &x0, &opts);
            (start, r)
        })
        .collect();

    let stagnated_starts = runs.iter().filter(|(_, r)| !r.converged).count();
    let (_, best) =
        runs.into_iter().min_by(|(ia, a), (ib, b)| a.f.total_cmp(&b.f).then(ia.cmp(ib))).expect("at least one start");
    let channel = channel_from_params(&best.x)?;
    // Report the energy of the returned channel rather than the optimizer's value.
    let min_delta_e = channel_delta_e(rho, h, &channel)?;
    Ok(OracleResult {
        min_delta_e,
        channel,
        tolerance: ORACLE_TOL * (1.0 + h.frobenius_norm()),
        starts: config.starts,
        stagnated_starts,
    })
}
