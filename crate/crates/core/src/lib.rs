//! Quaternionic quantum mechanics with non-anti-hermitian Hamiltonians on a
//! periodic 1-D grid.
//!
//! The crate evolves quaternion-valued wavefunctions under the
//! left-complex (LCWE, `iħ∂tΨ = HΨ`) and right-complex (RCWE,
//! `ħ(∂tΨ)i = HΨ`) wave equations and checks the identities they satisfy:
//! continuity with a source term, Ehrenfest relations and their breaking
//! terms, hermitian-Hamiltonian identities, stationarity, and agreement with
//! an independent complex solver in the complex limit.

pub mod dynamics;
pub mod error;
pub mod grid;
pub mod harness;
pub mod observables;
pub mod operator;
pub mod oracle_bridge;
pub mod potential;
pub mod quaternion;
pub mod states;

pub use dynamics::{evolve, step_rk4, Hamiltonian, SimulationConfig, Trajectory, Variant};
pub use error::{QqmError, Result};
pub use grid::{gradient, inner_product, laplacian, GridSpec, QField};
pub use harness::{fit_convergence, ConvergenceFit, FitParameter, ResidualReport, Tolerances};
pub use operator::{apply_operator, Operator};
pub use potential::PotentialSpec;
pub use quaternion::{qmul, Quaternion, SymplecticPair};
