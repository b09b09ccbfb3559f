//! Forward scattering: boundary conditions, modal and MFS solvers, synthetic data.

mod data;
mod mfs;
mod modal;
mod problem;
mod simulate;

pub use data::{DataKind, DataMatrix, Excitation};
pub use mfs::{solve_mfs, MfsConfig, MfsOperator, MfsSolution, FAILURE_RESIDUAL};
pub use modal::{default_max_mode, farfield_factor, solve_circle_modes, ModalSolution};
pub use problem::{incident_jet, trace, BoundaryCondition, Incidence, Scatterer, Scene, Trace};
pub use simulate::{
    eval_farfield, eval_scattered_jet, propagating_part, simulate, simulate_many, solve, Backend, Solution,
};
