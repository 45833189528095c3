use serde::{Deserialize, Serialize};

use crate::numeric::{check_ascending, interp_clamped, trapezoid};
use crate::{Error, Real, Result};

/// Inflow rate f(t): trips entering the network per unit time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum InflowRate<T> {
    Constant {
        rate: T,
    },
    /// `f(t) = base + amplitude * sin(angular_frequency * t)`; with
    /// `amplitude == base` this is `base * (1 + sin(w t))`.
    Sinusoidal {
        amplitude: T,
        base: T,
        angular_frequency: T,
    },
    /// Linear interpolation, constant extrapolation.
    Tabulated {
        times: Vec<T>,
        values: Vec<T>,
    },
}

impl<T: Real> InflowRate<T> {
    pub fn constant(rate: T) -> Self {
        InflowRate::Constant { rate }
    }

    /// `base * (1 + sin(w t))`.
    pub fn sinusoidal(base: T, angular_frequency: T) -> Self {
        InflowRate::Sinusoidal {
            amplitude: base,
            base,
            angular_frequency,
        }
    }

    pub fn check(&self) -> Result<()> {
        match self {
            InflowRate::Constant { rate } => {
                if !rate.is_finite() {
                    return Err(Error::Config("inflow rate must be finite".into()));
                }
            }
            InflowRate::Sinusoidal {
                amplitude,
                base,
                angular_frequency,
            } => {
                if !(amplitude.is_finite() && base.is_finite() && angular_frequency.is_finite()) {
                    return Err(Error::Config(
                        "sinusoidal inflow parameters must be finite".into(),
                    ));
                }
            }
            InflowRate::Tabulated { times, values } => {
                check_ascending("inflow times", times)?;
                if times.len() != values.len() {
                    return Err(Error::Config(
                        "inflow table: times and values differ in length".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn rate(&self, t: T) -> T {
        match self {
            InflowRate::Constant { rate } => *rate,
            InflowRate::Sinusoidal {
                amplitude,
                base,
                angular_frequency,
            } => *base + *amplitude * (*angular_frequency * t).sin(),
            InflowRate::Tabulated { times, values } => interp_clamped(times, values, t),
        }
    }

    /// Closed-form `int_a^b f`, when one exists (not for tabulated rates).
    pub fn integral_exact(&self, a: T, b: T) -> Option<T> {
        match self {
            InflowRate::Constant { rate } => Some(*rate * (b - a)),
            InflowRate::Sinusoidal {
                amplitude,
                base,
                angular_frequency: w,
            } => {
                let osc = if *w == T::zero() {
                    T::zero()
                } else {
                    *amplitude * ((*w * a).cos() - (*w * b).cos()) / *w
                };
                Some(*base * (b - a) + osc)
            }
            InflowRate::Tabulated { .. } => None,
        }
    }

    /// `int_a^b f`: exact where available, else 100-interval trapezoid.
    pub fn integral(&self, a: T, b: T) -> T {
        self.integral_exact(a, b)
            .unwrap_or_else(|| trapezoid(a, b, 100, |t| self.rate(t)))
    }

    /// Mean of f over `[a, b]`.
    pub fn interval_mean(&self, a: T, b: T) -> T {
        self.integral(a, b) / (b - a)
    }

    /// `sup |f|` over all times (exact bound for the built-in kinds).
    pub fn sup_norm(&self) -> T {
        match self {
            InflowRate::Constant { rate } => rate.abs(),
            InflowRate::Sinusoidal {
                amplitude, base, ..
            } => base.abs() + amplitude.abs(),
            InflowRate::Tabulated { values, .. } => {
                values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
            }
        }
    }

    /// `inf f` on `[0, horizon]`, used for the nonnegativity check.
    pub fn inf_on(&self, horizon: T) -> T {
        match self {
            InflowRate::Constant { rate } => *rate,
            InflowRate::Sinusoidal {
                amplitude,
                base,
                angular_frequency: w,
            } => {
                // sin reaches -1 on the horizon once w*T covers 3pi/2
                if (*w * horizon).abs() >= T::lit(1.5) * T::PI() {
                    *base - amplitude.abs()
                } else {
                    let n = 2000;
                    (0..=n)
                        .map(|i| {
                            self.rate(horizon * T::from_usize_lossy(i) / T::from_usize_lossy(n))
                        })
                        .fold(T::infinity(), T::min)
                }
            }
            InflowRate::Tabulated { values, .. } => {
                values.iter().copied().fold(T::infinity(), T::min)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinusoidal_matches_closed_form() {
        let f = InflowRate::sinusoidal(0.2, 2.0 * std::f64::consts::PI);
        assert!((f.rate(0.25) - 0.4).abs() < 1e-15);
        // int_0^8 0.2 (1 + sin 2 pi t) dt = 1.6
        assert!((f.integral(0.0, 8.0) - 1.6).abs() < 1e-14);
        assert_eq!(f.sup_norm(), 0.4);
        assert!(f.inf_on(8.0).abs() < 1e-15);
    }

    #[test]
    fn tabulated_integral_uses_quadrature() {
        let f = InflowRate::Tabulated {
            times: vec![0.0_f64, 1.0],
            values: vec![0.0, 2.0],
        };
        f.check().unwrap();
        assert!(f.integral_exact(0.0, 1.0).is_none());
        assert!((f.integral(0.0, 1.0) - 1.0).abs() < 1e-14);
        assert_eq!(f.rate(5.0), 2.0);
    }
}
