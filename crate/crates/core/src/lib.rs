//! Imaginary time evolution (ITE), its Riemannian gradient descent (RGD)
//! counterpart on SU(d), and the stochastic Pauli-sampled variant (SRGD).
//!
//! Everything is exact dense simulation: evolutions go through Hermitian
//! eigendecompositions so the only error left in a comparison is the one
//! being measured. The [`bounds`] module evaluates the closed-form error
//! bounds for these evolvers and [`ensemble`] checks them empirically.

pub mod bounds;
pub mod config;
pub mod ensemble;
mod error;
pub mod evolution;
pub mod hamiltonian;
pub mod linalg;
pub mod metrics;
pub mod report;
pub mod sampling;

pub use bounds::{BoundReport, EnergyDenominator, GradNormConvention};
pub use ensemble::{run_experiment, verify_bounds, EnsembleResult, ExperimentConfig, InitialState};
pub use error::{Error, Result};
pub use evolution::ScheduleConfig;
pub use hamiltonian::{HamiltonianSpec, PauliBasis, PauliLetter, PauliString};
pub use linalg::{CMatrix, HermitianOperator, StateVector, TangentGenerator};
pub use metrics::TrajectoryRecord;

pub use num_complex::Complex64;
