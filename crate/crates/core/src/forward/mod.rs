//! Forward solvers: an upwind finite-difference scheme on the full field and a
//! characteristics marcher that only tracks `delta`, `xi` and `k(t, 0)`.

mod characteristics;
mod grid;
mod trace;
mod upwind;

pub use characteristics::solve_characteristics;
pub use grid::{steps_for, SpaceTimeGrid};
pub use trace::{BoundaryTrace, MassCurve};
pub use upwind::{mass_balance_residual, solve_upwind, solve_upwind_with, DensityField, Snapshot};
