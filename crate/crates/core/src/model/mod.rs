//! Scenario building blocks: velocity law, inflow rate, inflow distribution
//! and initial density.

mod distribution;
mod inflow;
mod initial;
mod scenario;
mod velocity;

pub use distribution::{InflowDistribution, PhiJet, NORMALIZATION_POINTS};
pub use inflow::InflowRate;
pub use initial::{initial_mass, InitialDensity};
pub use scenario::*;
pub use velocity::{eval_velocity, VelocityFunction};
