//! One verifier per published result. Each produces a report whose steps
//! can be re-executed offline.

mod report;
mod verify;

pub use report::{Conclusion, Operation, Outcome, Step, StepStatus, TheoremReport};
pub use verify::{
    sample_members, tau_subset_probe, verify_band_proposition, verify_example_e1,
    verify_example_e1_with, verify_theorem_t1, verify_vector_topology, BAND, EXAMPLE_E1,
    TAU_SUBSET, THEOREM_T1, VECTOR_TOPOLOGY,
};
