//! Geometric two-qubit entangling gates driven through a shared lossy
//! oscillator, with a closed-form open-system solver and a brute-force
//! master-equation reference.
//!
//! * [`pulse`] builds drive schedules, including moment-cancelling sequences.
//! * [`qubit`] holds the two-qubit algebra and the gate target.
//! * [`analytic`] evaluates the closed-form solution.
//! * [`oracle`] integrates the Lindblad equation directly.
//! * [`sweep`] runs fidelity sweeps and cross-checks the two engines.

pub mod analytic;
pub mod error;
pub mod fock;
pub mod joint;
pub mod linalg;
pub mod oracle;
pub mod pulse;
pub mod quad;
pub mod qubit;
pub mod sweep;

pub use analytic::{
    apply_lambda, coefficients, evolve_reduced, relax_channel, ReducedPropagationInput, SolutionCoefficients,
};
pub use error::{Error, Result};
pub use joint::JointState;
pub use num_complex::Complex64;
pub use oracle::{build_hamiltonian, evolve_master, nojump_propagator, IntegratorConfig, Propagation};
pub use pulse::{
    circular_circuit, step_circuit, symmetrized_sequence, time_reverse, CircuitKind, Orientation, PulseSchedule,
    PulseSegment, SequenceSpec,
};
pub use qubit::{gate_fidelity, ideal_gate, Basis, QubitState, ENTANGLING_PHASE};
pub use sweep::{cross_validate, emit_paths, run_sweep, Engine, SweepConfig, SweepResult, SweepRow};
