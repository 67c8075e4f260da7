//! Classical, semiclassical and exact-quantum phase-space paths for a
//! one-dimensional particle prepared in a coherent state.
//!
//! The semiclassical path is built directly from the classical trajectory
//! and its tangent matrix: the thawed Gaussian centred on the trajectory is
//! used to average the force, and the resulting acceleration is integrated
//! to give `(q_sc, p_sc)`. A split-step Fourier propagator provides the
//! exact quantum reference.

pub mod classical;
pub mod error;
pub mod output;
pub mod potential;
pub mod quadrature;
pub mod quantum;
pub mod run;
pub mod scenario;
pub mod semiclassical;

pub use classical::{ClassicalState, PhasePoint, SystemParams, TangentMatrix};
pub use error::{Error, Result};
pub use potential::{PolynomialPotential, Potential, StepPotential};
pub use run::{compare, run_scenario, ComparisonSummary, PathRecord};
pub use scenario::Scenario;
