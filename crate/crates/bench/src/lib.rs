//! Shared fixtures for the engine benchmarks.

use symgate::{symmetrized_sequence, CircuitKind, PulseSchedule, SequenceSpec, ENTANGLING_PHASE};

/// Order-`k` step sequence at unit drive amplitude for the entangling phase.
pub fn sequence(order: u32) -> PulseSchedule {
    symmetrized_sequence(&SequenceSpec::new(CircuitKind::Step, 1.0, order, ENTANGLING_PHASE).expect("valid spec"))
        .expect("valid sequence")
}
