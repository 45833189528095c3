use serde::{Deserialize, Serialize};

use crate::numeric::{check_ascending, interp_zero, segment, slope_zero, trapezoid};
use crate::{Error, Real, Result};

/// Quadrature resolution for normalization checks.
pub const NORMALIZATION_POINTS: usize = 10_000;

/// Inflow distribution phi(t, x) over remaining trip distance `x >= 0`.
///
/// Every kind evaluates to zero for `x < 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum InflowDistribution<T> {
    /// `1/length` on `[0, length]`.
    Uniform { length: T },
    /// Normal density of standard deviation `width` centred at
    /// `b(t) = center + drift * t`.
    Gaussian { width: T, center: T, drift: T },
    /// Bilinear table: `values[i][j]` is phi at `(times[i], grid[j])`.
    /// Zero outside the grid, constant in time outside `times`.
    Tabulated {
        grid: Vec<T>,
        times: Vec<T>,
        values: Vec<Vec<T>>,
    },
}

/// phi together with its first partial derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiJet<T> {
    pub value: T,
    pub dx: T,
    pub dt: T,
}

impl<T: Real> InflowDistribution<T> {
    pub fn uniform(length: T) -> Self {
        InflowDistribution::Uniform { length }
    }

    pub fn gaussian(width: T, center: T, drift: T) -> Self {
        InflowDistribution::Gaussian {
            width,
            center,
            drift,
        }
    }

    pub fn check(&self) -> Result<()> {
        match self {
            InflowDistribution::Uniform { length } => {
                if !(*length > T::zero()) || !length.is_finite() {
                    return Err(Error::Config(
                        "uniform distribution needs length > 0".into(),
                    ));
                }
            }
            InflowDistribution::Gaussian {
                width,
                center,
                drift,
            } => {
                if !(*width > T::zero()) || !center.is_finite() || !drift.is_finite() {
                    return Err(Error::Config(
                        "gaussian distribution needs width > 0 and finite centre path".into(),
                    ));
                }
            }
            InflowDistribution::Tabulated {
                grid,
                times,
                values,
            } => {
                check_ascending("distribution grid", grid)?;
                check_ascending("distribution times", times)?;
                if grid[0] < T::zero() {
                    return Err(Error::Config(
                        "distribution grid must start at x >= 0".into(),
                    ));
                }
                if values.len() != times.len() || values.iter().any(|r| r.len() != grid.len()) {
                    return Err(Error::Config(
                        "distribution table: values must be times.len() rows of grid.len()".into(),
                    ));
                }
                if values
                    .iter()
                    .flatten()
                    .any(|v| !(*v >= T::zero()) || !v.is_finite())
                {
                    return Err(Error::Config(
                        "distribution table: values must be >= 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn center_at(center: T, drift: T, t: T) -> T {
        center + drift * t
    }

    /// Locates `t` in the time rows: (row, next row, weight of next row).
    fn time_bracket(times: &[T], t: T) -> (usize, usize, T) {
        let n = times.len();
        if n == 1 || t <= times[0] {
            return (0, 0, T::zero());
        }
        if t >= times[n - 1] {
            return (n - 1, n - 1, T::zero());
        }
        let i = segment(times, t);
        (i, i + 1, (t - times[i]) / (times[i + 1] - times[i]))
    }

    #[inline]
    pub fn density(&self, t: T, x: T) -> T {
        if x < T::zero() {
            return T::zero();
        }
        match self {
            InflowDistribution::Uniform { length } => {
                if x <= *length {
                    length.recip()
                } else {
                    T::zero()
                }
            }
            InflowDistribution::Gaussian {
                width,
                center,
                drift,
            } => gaussian_pdf(x - Self::center_at(*center, *drift, t), *width),
            InflowDistribution::Tabulated {
                grid,
                times,
                values,
            } => {
                let (i, j, w) = Self::time_bracket(times, t);
                let a = interp_zero(grid, &values[i], x);
                if i == j {
                    a
                } else {
                    a + w * (interp_zero(grid, &values[j], x) - a)
                }
            }
        }
    }

    /// phi, d(phi)/dx and d(phi)/dt. Derivatives of the uniform and tabulated
    /// kinds are taken piecewise (the jump of the uniform kind is not included).
    pub fn jet(&self, t: T, x: T) -> PhiJet<T> {
        let zero = PhiJet {
            value: T::zero(),
            dx: T::zero(),
            dt: T::zero(),
        };
        if x < T::zero() {
            return zero;
        }
        match self {
            InflowDistribution::Uniform { .. } => PhiJet {
                value: self.density(t, x),
                ..zero
            },
            InflowDistribution::Gaussian {
                width,
                center,
                drift,
            } => {
                let z = x - Self::center_at(*center, *drift, t);
                let value = gaussian_pdf(z, *width);
                let dx = -z / (*width * *width) * value;
                PhiJet {
                    value,
                    dx,
                    dt: -*drift * dx,
                }
            }
            InflowDistribution::Tabulated {
                grid,
                times,
                values,
            } => {
                let (i, j, w) = Self::time_bracket(times, t);
                let a = interp_zero(grid, &values[i], x);
                let sa = slope_zero(grid, &values[i], x);
                if i == j {
                    return PhiJet {
                        value: a,
                        dx: sa,
                        dt: T::zero(),
                    };
                }
                let b = interp_zero(grid, &values[j], x);
                let sb = slope_zero(grid, &values[j], x);
                PhiJet {
                    value: a + w * (b - a),
                    dx: sa + w * (sb - sa),
                    dt: (b - a) / (times[j] - times[i]),
                }
            }
        }
    }

    /// True when phi is C^2 in x everywhere on `[0, inf)`.
    pub fn is_smooth(&self) -> bool {
        matches!(self, InflowDistribution::Gaussian { .. })
    }

    /// First location where phi jumps in x, if any.
    pub fn jump_point(&self) -> Option<T> {
        match self {
            InflowDistribution::Uniform { length } => Some(*length),
            InflowDistribution::Gaussian { .. } => None,
            InflowDistribution::Tabulated { grid, values, .. } => {
                let first = grid[0];
                let last = grid[grid.len() - 1];
                let opens = first > T::zero() && values.iter().any(|r| r[0] != T::zero());
                let closes = values.iter().any(|r| r[r.len() - 1] != T::zero());
                match (opens, closes) {
                    (true, _) => Some(first),
                    (false, true) => Some(last),
                    _ => None,
                }
            }
        }
    }

    pub fn is_time_independent(&self) -> bool {
        match self {
            InflowDistribution::Uniform { .. } => true,
            InflowDistribution::Gaussian { drift, .. } => *drift == T::zero(),
            InflowDistribution::Tabulated { times, .. } => times.len() == 1,
        }
    }

    /// `sup_{t,x} phi`.
    pub fn sup_norm(&self) -> T {
        match self {
            InflowDistribution::Uniform { length } => length.recip(),
            InflowDistribution::Gaussian { width, .. } => gaussian_pdf(T::zero(), *width),
            InflowDistribution::Tabulated { values, .. } => {
                values.iter().flatten().copied().fold(T::zero(), T::max)
            }
        }
    }

    /// Right end of the region carrying the mass of phi(t, .).
    pub fn support_end(&self, t: T) -> T {
        match self {
            InflowDistribution::Uniform { length } => *length,
            InflowDistribution::Gaussian {
                width,
                center,
                drift,
            } => (Self::center_at(*center, *drift, t) + T::lit(12.0) * *width).max(*width),
            InflowDistribution::Tabulated { grid, .. } => grid[grid.len() - 1],
        }
    }

    /// `int_0^inf phi(t, x) dx`.
    pub fn mass(&self, t: T) -> T {
        match self {
            InflowDistribution::Tabulated { grid, .. } => {
                // exact for the piecewise-linear table
                let mut s = T::zero();
                for w in grid.windows(2) {
                    s = s + (w[1] - w[0]) * (self.density(t, w[0]) + self.density(t, w[1]));
                }
                s * T::lit(0.5)
            }
            _ => trapezoid(T::zero(), self.support_end(t), NORMALIZATION_POINTS, |x| {
                self.density(t, x)
            }),
        }
    }

    /// Mass the unrestricted profile puts outside `[0, length]`.
    pub fn tail_mass_outside(&self, t: T, length: T) -> T {
        match self {
            InflowDistribution::Gaussian {
                width,
                center,
                drift,
            } => {
                let b = Self::center_at(*center, *drift, t);
                let reach = T::lit(12.0) * *width;
                let pdf = |x: T| gaussian_pdf(x - b, *width);
                let below = if b - reach < T::zero() {
                    trapezoid(b - reach, T::zero(), NORMALIZATION_POINTS, pdf)
                } else {
                    T::zero()
                };
                let above = if b + reach > length {
                    trapezoid(length, b + reach, NORMALIZATION_POINTS, pdf)
                } else {
                    T::zero()
                };
                below + above
            }
            InflowDistribution::Uniform { length: l } => {
                if *l <= length {
                    T::zero()
                } else {
                    (*l - length) / *l
                }
            }
            InflowDistribution::Tabulated { grid, .. } => {
                let end = grid[grid.len() - 1];
                if end <= length {
                    T::zero()
                } else {
                    trapezoid(length, end, NORMALIZATION_POINTS, |x| self.density(t, x))
                }
            }
        }
    }

    /// `min_{t in [0, horizon]} phi(t, 0)`.
    pub fn min_at_origin(&self, horizon: T) -> T {
        match self {
            InflowDistribution::Uniform { length } => length.recip(),
            InflowDistribution::Gaussian { .. } => {
                // b(t) is affine, so |b| peaks at an endpoint
                self.density(T::zero(), T::zero())
                    .min(self.density(horizon, T::zero()))
            }
            InflowDistribution::Tabulated { times, .. } => {
                let mut m = self
                    .density(T::zero(), T::zero())
                    .min(self.density(horizon, T::zero()));
                for &t in times.iter().filter(|&&t| t > T::zero() && t < horizon) {
                    m = m.min(self.density(t, T::zero()));
                }
                m
            }
        }
    }
}

#[inline]
fn gaussian_pdf<T: Real>(z: T, width: T) -> T {
    let norm = (T::lit(2.0) * T::PI()).sqrt() * width;
    (-(z * z) / (T::lit(2.0) * width * width)).exp() / norm
}
