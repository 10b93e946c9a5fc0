//! Fixtures shared by the benchmarks.

use qetlab_core::hamiltonians::{build_flipflop, flipflop_ground_state};
use qetlab_core::protocol::alice_x_measurement;
use qetlab_core::{ComplexMatrix, DensityMatrix};

/// Flip-flop Hamiltonian at `h = 1`, `κ = 1.5`.
pub fn flipflop() -> ComplexMatrix {
    build_flipflop(1.0, 1.5).expect("valid couplings").matrix
}

/// Post-measurement mixture of the flip-flop singlet, a non-passive state.
pub fn singlet_post_measurement() -> DensityMatrix {
    let singlet = DensityMatrix::pure(&flipflop_ground_state(1.0, 1.5).expect("kappa > h")).expect("unit vector");
    alice_x_measurement(&singlet).expect("valid state").mixture().expect("valid mixture")
}
