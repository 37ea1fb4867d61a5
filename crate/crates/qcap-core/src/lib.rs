//! Exact quantum capacities and capacity upper bounds for a family of
//! two-qubit amplitude damping channels and their twirled relatives.
//!
//! The library provides:
//! - dense complex matrices, symbolic Pauli strings and a Jacobi
//!   eigensolver ([`matrix`], [`pauli`], [`eigen`]);
//! - channels in Kraus form with Choi fingerprints, the damping family
//!   Φ_{x,y,z}, its complementary channel and degrading map ([`channel`]);
//! - entropy, coherent information and the concave program whose optimum is
//!   the exact capacity of degradable family members ([`capacity`]);
//! - Pauli and localized Clifford twirling, each with a coefficient formula
//!   and an independent brute-force route ([`twirl`]);
//! - closed-form capacity upper bounds, including the convex-envelope curve
//!   for the four-dimensional depolarizing channel ([`bounds`]);
//! - a seeded verification suite covering all of the above ([`verify`]).

pub mod bounds;
pub mod capacity;
pub mod channel;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod pauli;
pub mod sampling;
pub mod twirl;
pub mod verify;

pub use bounds::{
    dep4_bound_curve, dep4_x_of_p, format_significant, locally_symmetric_bound, main_theorem_bound,
    no_cloning_p, sweep_curve, BoundCurve, LocallySymmetricBound, SweepKind,
};
pub use capacity::{
    capacity_diagonal_program, coherent_information, diagonal_coherent_information, eta,
    verify_diagonal_sufficiency, von_neumann_entropy, CapacityResult, DiagonalState,
    OptimizerConfig,
};
pub use channel::{
    channels_equal, check_covariance, make_degrading_map, make_depolarizing_4, make_pauli_channel,
    make_phi_a, make_phi_xyz, make_qubit_amplitude_damping, ChannelDescription, ChannelParamsXYZ,
    ChoiMatrix, KrausChannel,
};
pub use eigen::hermitian_eigenvalues;
pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use pauli::{
    commute_sign, factor_diagonal_times_pauli, pauli_expand, pauli_matrix, pauli_reconstruct,
    PauliString,
};
pub use twirl::{
    clifford_b_set, local_clifford_twirl, local_clifford_twirl_bruteforce, pauli_twirl,
    pauli_twirl_bruteforce, PauliChannel,
};
pub use verify::{run_verification, CheckReport};

/// Glob-import surface for downstream binaries and tests.
pub mod prelude {
    pub use crate::bounds::*;
    pub use crate::capacity::*;
    pub use crate::channel::*;
    pub use crate::error::*;
    pub use crate::matrix::ComplexMatrix;
    pub use crate::pauli::*;
    pub use crate::twirl::*;
}
