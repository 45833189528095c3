use std::fmt;

use serde::{Deserialize, Serialize};

use crate::forward::{BoundaryTrace, MassCurve};
use crate::{Error, Real, Result, Scenario};

/// Which solver produced `delta`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Explicit,
    Successive,
    UniformRecursion,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Explicit => "explicit",
            Method::Successive => "successive",
            Method::UniformRecursion => "uniform-recursion",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Outer iterations of an iterative solver; zero for the explicit scheme.
    pub iterations: usize,
    /// Sup-norm update of every iteration.
    pub updates: Vec<f64>,
}

/// Recovered `xi_n`, `delta_n` (`N + 1` values) and `f_n` (`N` values, the
/// rate on `[t_n, t_{n+1})`).
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction<T> {
    pub dt: T,
    pub xi: Vec<T>,
    pub delta: Vec<T>,
    pub f: Vec<T>,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl<T: Real> Reconstruction<T> {
    pub fn steps(&self) -> usize {
        self.f.len()
    }

    pub fn time(&self, n: usize) -> T {
        T::from_usize_lossy(n) * self.dt
    }

    pub fn mass_curve(&self) -> MassCurve<T> {
        MassCurve {
            dt: self.dt,
            delta: self.delta.clone(),
            xi: Some(self.xi.clone()),
        }
    }
}

/// Left Riemann sums `xi_n = dt sum_{m<n} V(delta_m / L)`.
pub(crate) fn travelled<T: Real>(delta: &[T], dt: T, s: &Scenario<T>) -> Vec<T> {
    let mut xi = Vec::with_capacity(delta.len());
    let mut acc = T::zero();
    for d in delta {
        xi.push(acc);
        acc = acc + dt * s.velocity.speed(*d / s.length);
    }
    xi
}

/// Difference quotient `f_n = (delta_{n+1} - delta_n) / dt + V(delta_n / L) k(t_n, 0)`.
///
/// `f_n` approximates the mean of `f` over `[t_n, t_{n+1})`.
pub fn recover_f<T: Real>(
    mass: &MassCurve<T>,
    trace: &BoundaryTrace<T>,
    s: &Scenario<T>,
    method: Method,
) -> Result<Reconstruction<T>> {
    let tol = T::lit(1e-9) * trace.dt;
    if mass.delta.len() != trace.values.len() || (mass.dt - trace.dt).abs() > tol {
        return Err(Error::MeshMismatch(format!(
            "mass curve ({} samples, dt {}) vs trace ({} samples, dt {})",
            mass.delta.len(),
            mass.dt,
            trace.values.len(),
            trace.dt
        )));
    }
    let dt = trace.dt;
    let f = mass
        .delta
        .windows(2)
        .zip(&trace.values)
        .map(|(d, &k)| (d[1] - d[0]) / dt + s.velocity.speed(d[0] / s.length) * k)
        .collect();
    let xi = match &mass.xi {
        Some(xi) => xi.clone(),
        None => travelled(&mass.delta, dt, s),
    };
    Ok(Reconstruction {
        dt,
        xi,
        delta: mass.delta.clone(),
        f,
        method,
        diagnostics: Diagnostics::default(),
    })
}

/// `F(t_n) = dt sum_{m<n} f_m`, the recovered cumulative inflow.
pub fn cumulative_inflow<T: Real>(rec: &Reconstruction<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(rec.f.len() + 1);
    let mut acc = T::zero();
    out.push(acc);
    for &f in &rec.f {
        acc = acc + rec.dt * f;
        out.push(acc);
    }
    out
}
