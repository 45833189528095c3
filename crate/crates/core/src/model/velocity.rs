use serde::{Deserialize, Serialize};

use crate::numeric::{check_ascending, interp_clamped};
use crate::{Error, Real, Result};

/// Speed-density law V(k) of the network (the macroscopic fundamental diagram).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum VelocityFunction<T> {
    /// `V(k) = v0 (1 - k / k_jam)`, clamped at zero above jam density.
    Greenshields {
        free_speed: T,
        jam_density: T,
    },
    Constant {
        speed: T,
    },
    /// Linear interpolation between breakpoints, constant beyond them.
    Tabulated {
        breakpoints: Vec<T>,
        values: Vec<T>,
    },
}

impl<T: Real> VelocityFunction<T> {
    pub fn greenshields(free_speed: T, jam_density: T) -> Self {
        VelocityFunction::Greenshields {
            free_speed,
            jam_density,
        }
    }

    pub fn constant(speed: T) -> Self {
        VelocityFunction::Constant { speed }
    }

    pub fn check(&self) -> Result<()> {
        match self {
            VelocityFunction::Greenshields {
                free_speed,
                jam_density,
            } => {
                if !(*free_speed >= T::zero()) || !(*jam_density > T::zero()) {
                    return Err(Error::Config(
                        "greenshields velocity needs free_speed >= 0 and jam_density > 0".into(),
                    ));
                }
            }
            VelocityFunction::Constant { speed } => {
                if !(*speed >= T::zero()) || !speed.is_finite() {
                    return Err(Error::Config(
                        "constant velocity must be finite and >= 0".into(),
                    ));
                }
            }
            VelocityFunction::Tabulated {
                breakpoints,
                values,
            } => {
                check_ascending("velocity breakpoints", breakpoints)?;
                if breakpoints.len() != values.len() {
                    return Err(Error::Config(
                        "velocity table: breakpoints and values differ in length".into(),
                    ));
                }
                if values.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
                    return Err(Error::Config(
                        "velocity table: values must be finite and >= 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Checked evaluation: rejects negative densities.
    pub fn eval(&self, k: T) -> Result<T> {
        if k < T::zero() || k.is_nan() {
            return Err(Error::Domain(format!(
                "velocity queried at negative density {k}"
            )));
        }
        Ok(self.speed(k))
    }

    /// Solver-side evaluation. Densities below zero (roundoff, noisy data) are
    /// treated as zero so the law is only ever evaluated on `[0, inf)`.
    #[inline]
    pub fn speed(&self, k: T) -> T {
        let k = k.max(T::zero());
        match self {
            VelocityFunction::Greenshields {
                free_speed,
                jam_density,
            } => (*free_speed * (T::one() - k / *jam_density)).max(T::zero()),
            VelocityFunction::Constant { speed } => *speed,
            VelocityFunction::Tabulated {
                breakpoints,
                values,
            } => interp_clamped(breakpoints, values, k),
        }
    }

    /// Upper bound `v_max = sup V`.
    pub fn max_speed(&self) -> T {
        match self {
            VelocityFunction::Greenshields { free_speed, .. } => *free_speed,
            VelocityFunction::Constant { speed } => *speed,
            VelocityFunction::Tabulated { values, .. } => {
                values.iter().copied().fold(T::zero(), T::max)
            }
        }
    }

    /// Minimum of V over the density range `[0, k_hi]`.
    pub fn min_speed_on(&self, k_hi: T) -> T {
        let k_hi = k_hi.max(T::zero());
        match self {
            VelocityFunction::Greenshields { .. } => self.speed(k_hi),
            VelocityFunction::Constant { speed } => *speed,
            VelocityFunction::Tabulated {
                breakpoints,
                values,
            } => breakpoints
                .iter()
                .zip(values)
                .filter(|(b, _)| **b <= k_hi)
                .map(|(_, v)| *v)
                .fold(self.speed(T::zero()).min(self.speed(k_hi)), T::min),
        }
    }

    pub fn lipschitz(&self) -> T {
        match self {
            VelocityFunction::Greenshields {
                free_speed,
                jam_density,
            } => *free_speed / *jam_density,
            VelocityFunction::Constant { .. } => T::zero(),
            VelocityFunction::Tabulated {
                breakpoints,
                values,
            } => breakpoints
                .windows(2)
                .zip(values.windows(2))
                .map(|(b, v)| ((v[1] - v[0]) / (b[1] - b[0])).abs())
                .fold(T::zero(), T::max),
        }
    }
}

/// Free-function form of [`VelocityFunction::eval`].
pub fn eval_velocity<T: Real>(v: &VelocityFunction<T>, k: T) -> Result<T> {
    v.eval(k)
}
