//! The truncated Hamiltonian flow `Phi_N`: energy, vector field, splitting
//! integrator and a Duhamel/Picard cross-check solver.

pub mod evolve;
pub mod field;
pub mod hamiltonian;
pub mod picard;
pub mod splitting;

pub use evolve::{evolve, flow, Observers, TrajectoryRecord};
pub use field::{divergence_probe, vector_field, DivergenceProbe};
pub use hamiltonian::{hamiltonian, hamiltonian_complex_form, kinetic_energy};
pub use picard::{picard_solve, PicardOptions, PicardSolution};
pub use splitting::{lie_step, linear_substep, nonlinear_substep, strang_step, FlowParams, Scheme};
