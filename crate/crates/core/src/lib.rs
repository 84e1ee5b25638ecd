//! Exact simulation of entanglement extraction between two non-interacting
//! qubits `A` and `B` through a traveling mediator qubit `X`.
//!
//! Three post-selected mediator passes with fixed couplings take an arbitrary
//! mixed state of `A` and `B` to a pure entangled state. The crate builds the
//! resonant exchange Hamiltonians on `A ⊗ B ⊗ X`, derives the conditional
//! Kraus operators of each pass from the exact propagators, and evaluates the
//! yield and Wootters concurrence of the outcome, including sweeps over the
//! coupling angles and a comparison of the possible interaction orders.
//!
//! ```
//! use mediator_core::{maximally_mixed, run_protocol, concurrence, CouplingParams, Recipe};
//! use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
//!
//! let params = CouplingParams::new(FRAC_PI_4, FRAC_PI_2);
//! let out = run_protocol(&maximally_mixed(2)?, &Recipe::optimal(), &params)?;
//! assert!((out.probability - 0.25).abs() < 1e-12);
//! assert!((concurrence(&out.state)?.value - 1.0).abs() < 1e-9);
//! # Ok::<(), mediator_core::Error>(())
//! ```

pub mod closed_form;
pub mod entanglement;
pub mod error;
pub mod explorer;
pub mod hamiltonian;
pub mod linalg;
pub mod process;
pub mod sampling;
pub mod state;
pub mod verify;

pub use entanglement::{
    analytic_concurrence, analytic_yield_fraction, concurrence, max_condition, target_state, ConcurrenceResult,
};
pub use error::{Error, Result};
pub use explorer::{
    enumerate_recipes, find_optimum, initialization_demo, sweep, Axis, GridSpec, InitializationResult, OptimumReport,
    SweepPoint, SweepResult,
};
pub use hamiltonian::{excitation_number, h_free, h_int_xa, h_int_xb, propagator, Coupling, CouplingParams};
pub use linalg::ComplexMatrix;
pub use process::{
    apply_process, full_space_oracle, kraus_operator, pipeline_operator, run_protocol, Conditional, Direction,
    ProcessSpec, Recipe, SimOptions,
};
pub use state::{basis_state, maximally_mixed, random_density, DensityMatrix, PureState, Spin};
