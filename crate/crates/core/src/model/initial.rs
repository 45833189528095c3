use serde::{Deserialize, Serialize};

use crate::numeric::{check_ascending, interp_zero, slope_zero, trapezoid};
use crate::{Error, Real, Result};

/// Initial density k(0, x) of active trips.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum InitialDensity<T> {
    Zero,
    /// `amplitude * exp(-width * (x - center)^2)`.
    GaussianBump {
        amplitude: T,
        width: T,
        center: T,
    },
    /// Linear interpolation on `grid`, zero outside it.
    Tabulated {
        grid: Vec<T>,
        values: Vec<T>,
    },
}

impl<T: Real> InitialDensity<T> {
    pub fn gaussian_bump(amplitude: T, width: T, center: T) -> Self {
        InitialDensity::GaussianBump {
            amplitude,
            width,
            center,
        }
    }

    pub fn check(&self) -> Result<()> {
        match self {
            InitialDensity::Zero => {}
            InitialDensity::GaussianBump {
                amplitude,
                width,
                center,
            } => {
                if !(*amplitude >= T::zero()) || !(*width > T::zero()) || !center.is_finite() {
                    return Err(Error::Config(
                        "gaussian bump needs amplitude >= 0, width > 0".into(),
                    ));
                }
            }
            InitialDensity::Tabulated { grid, values } => {
                check_ascending("initial density grid", grid)?;
                if grid.len() != values.len() {
                    return Err(Error::Config(
                        "initial density table: grid and values differ in length".into(),
                    ));
                }
                if values.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
                    return Err(Error::Config("initial density values must be >= 0".into()));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn value(&self, x: T) -> T {
        match self {
            InitialDensity::Zero => T::zero(),
            InitialDensity::GaussianBump {
                amplitude,
                width,
                center,
            } => {
                let d = x - *center;
                *amplitude * (-*width * d * d).exp()
            }
            InitialDensity::Tabulated { grid, values } => interp_zero(grid, values, x),
        }
    }

    pub fn derivative(&self, x: T) -> T {
        match self {
            InitialDensity::Zero => T::zero(),
            InitialDensity::GaussianBump { width, center, .. } => {
                -T::lit(2.0) * *width * (x - *center) * self.value(x)
            }
            InitialDensity::Tabulated { grid, values } => slope_zero(grid, values, x),
        }
    }

    pub fn sup_norm(&self) -> T {
        match self {
            InitialDensity::Zero => T::zero(),
            InitialDensity::GaussianBump { amplitude, .. } => *amplitude,
            InitialDensity::Tabulated { values, .. } => {
                values.iter().copied().fold(T::zero(), T::max)
            }
        }
    }

    /// Largest `|value(x)|` for `x > length`, sampled.
    pub fn leak_beyond(&self, length: T) -> T {
        match self {
            InitialDensity::Zero => T::zero(),
            InitialDensity::GaussianBump { center, .. } => {
                if *center > length {
                    self.sup_norm()
                } else {
                    self.value(length)
                }
            }
            InitialDensity::Tabulated { grid, values } => grid
                .iter()
                .zip(values)
                .filter(|(x, _)| **x > length)
                .map(|(_, v)| *v)
                .fold(self.value(length), T::max),
        }
    }
}

/// Total initial mass `int_0^inf k(0, x) dx`.
///
/// Closed form for the zero and Gaussian-bump densities (the bump is integrated
/// over the whole line); composite trapezoid with spacing `1e-4 * length`
/// otherwise.
pub fn initial_mass<T: Real>(initial: &InitialDensity<T>, length: T) -> T {
    match initial {
        InitialDensity::Zero => T::zero(),
        InitialDensity::GaussianBump {
            amplitude, width, ..
        } => *amplitude * (T::PI() / *width).sqrt(),
        InitialDensity::Tabulated { grid, .. } => {
            let end = grid[grid.len() - 1].max(length);
            let intervals = ((end / (T::lit(1e-4) * length)).ceil().to_usize()).unwrap_or(10_000);
            trapezoid(T::zero(), end, intervals.max(1), |x| initial.value(x))
        }
    }
}
