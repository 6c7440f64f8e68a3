//! Simulation and classical certification of single-qubit quantum models.
//!
//! A model is a prepared state, a set of labeled channels and a binary
//! measurement. The certification protocol runs short gate sequences whose
//! ideal outcome is deterministic and rejects on the first wrong answer; a model
//! that passes one repetition with probability `1 − ε` is, up to a unitary
//! gauge, `O(ε)`-close to the target. This crate provides the model arithmetic
//! (Choi matrices, fidelities), the protocol, the constructive gauge
//! extraction, random noisy models, the scatter experiment and the exact
//! universal-gate-set check.

pub mod channel;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod linalg;
pub mod model;
pub mod povm;
pub mod protocol;
pub mod randmodels;
pub mod rng;
pub mod schema;
pub mod selftest;
pub mod state;
pub mod universal;

pub use channel::{
    adjoint_apply, apply_channel, avg_gate_fidelity, choi_of_unitary, compose, diamond_bound,
    entanglement_fidelity, ChoiChannel,
};
pub use error::{Error, Result};
pub use experiments::{export_csv, scatter_sweep, ScatterPoint, SweepOutput, SweepSummary};
pub use linalg::{Ket, Mat2, Mat4, C64};
pub use model::{validate, GateLabel, QuantumModel, Violation, ViolationKind};
pub use povm::Povm;
pub use protocol::{
    pass_probability, run_protocol, s_gate_spec, sample_complexity, universal_spec, Outcome,
    ProtocolSpec, RunResult, Sequence, Verdict,
};
pub use randmodels::{random_noisy_model, NoiseConfig, NoiseKind};
pub use selftest::{certify, extract_frames, gauge_unitary, Frames, GaugeReport};
pub use state::{state_from_ket, QubitState};
pub use universal::{
    check_purity_after_double, extract_unitary, verify_universal, TBranch, UniversalReport,
    UniversalVerdict,
};
