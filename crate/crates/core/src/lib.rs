//! Generalized bathtub model of network trip flows.
//!
//! The state is the density `k(t, x)` of active trips indexed by remaining
//! distance `x`. Trips enter at rate `f(t)` with distance profile `phi(t, x)`,
//! travel at the network speed `V(delta / L)` and leave at `x = 0`:
//!
//! ```text
//! k_t - V(delta(t) / L) k_x = f(t) phi(t, x),    delta(t) = int k(t, x) dx
//! ```
//!
//! The crate provides two forward solvers ([`forward`]), reconstruction of the
//! inflow rate from the exit trace `k(t, 0)` ([`inverse`]), recovery of a
//! time-independent `phi` ([`inverse::distribution`]) and scripted numerical
//! studies ([`experiments`]). Everything numeric is generic over [`Real`]; the
//! aliases below fix the scalar to `f64` or `f32`.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod numeric;
mod scalar;

pub mod experiments;
pub mod forward;
pub mod inverse;
pub mod io;
pub mod model;

pub use error::{Category, Error, Result};
pub use forward::{
    solve_characteristics, solve_upwind, BoundaryTrace, DensityField, MassCurve, SpaceTimeGrid,
};
pub use inverse::distribution::{recover_distribution, DistributionRecovery};
pub use inverse::{
    cumulative_inflow, reconstruct_explicit, recover_f, solve_uniform_recursion,
    solve_volterra_successive, Method, Reconstruction,
};
pub use model::{
    eval_velocity, initial_mass, validate, InflowDistribution, InflowRate, InitialDensity,
    Scenario, ValidationReport, VelocityFunction,
};
pub use numeric::trapezoid;
pub use scalar::Real;

pub type Scenario64 = Scenario<f64>;
pub type Scenario32 = Scenario<f32>;
pub type VelocityFunction64 = VelocityFunction<f64>;
pub type InflowRate64 = InflowRate<f64>;
pub type InflowDistribution64 = InflowDistribution<f64>;
pub type InitialDensity64 = InitialDensity<f64>;
pub type BoundaryTrace64 = BoundaryTrace<f64>;
pub type MassCurve64 = MassCurve<f64>;
pub type DensityField64 = DensityField<f64>;
pub type Reconstruction64 = Reconstruction<f64>;
