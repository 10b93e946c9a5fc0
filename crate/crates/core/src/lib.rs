//! Strong local passivity certification and quantum energy teleportation
//! protocols on two qubits.
//!
//! ```
//! use qetlab_core::protocol::run_protocol;
//! use qetlab_core::slp::{certify_slp_with_oracle, PSD_TOL};
//! use qetlab_core::{ModelParams, OracleConfig};
//!
//! let report = run_protocol(&ModelParams::flipflop(1.0, 1.5)?)?;
//! assert!((report.extracted - 0.8028).abs() < 1e-4);
//!
//! let rho = report.ensemble.mixture()?;
//! let cert = certify_slp_with_oracle(&rho, &report.hamiltonian.matrix, PSD_TOL, &OracleConfig::new(8, 0))?;
//! assert!(cert.psd_verdict && cert.agreement() == Some(true));
//! # Ok::<(), qetlab_core::Error>(())
//! ```

pub mod circuit;
pub mod error;
pub mod hamiltonians;
pub mod optim;
pub mod protocol;
pub mod qmat;
pub mod random;
pub mod slp;

pub use circuit::{Circuit, CircuitMode, Gate, ShotEstimate};
pub use error::{Error, Result};
pub use hamiltonians::{Hamiltonian, ModelParams, ModelVariant};
pub use protocol::{EffectiveHamiltonian, MeasurementEnsemble, Outcome, ProtocolReport};
pub use qmat::{ComplexMatrix, DensityMatrix, EigenDecomposition};
pub use slp::{OracleConfig, OracleResult, QuantumChannel, SlpCertificate};
