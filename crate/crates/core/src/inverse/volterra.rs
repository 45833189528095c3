use rayon::prelude::*;

use super::reconstruction::travelled;
use super::{phi_at_origin, sup_diff};
use crate::forward::{BoundaryTrace, MassCurve};
use crate::{Error, Real, Result, Scenario};

/// One successive-approximation iterate.
#[derive(Clone, Debug, PartialEq)]
pub struct VolterraIterate<T> {
    pub iteration: usize,
    pub delta: Vec<T>,
    /// `max_n |delta_n - previous delta_n|`.
    pub update: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolterraSolution<T> {
    pub mass: MassCurve<T>,
    pub iterates: Vec<VolterraIterate<T>>,
}

impl<T: Real> VolterraSolution<T> {
    pub fn updates(&self) -> Vec<f64> {
        self.iterates.iter().map(|it| it.update.as_f64()).collect()
    }
}

/// Ratio of an update to the mass scale at which iteration is abandoned.
const DIVERGENCE_FACTOR: f64 = 1e8;

/// Successive approximation of the Volterra equation of the second kind for
/// `delta`, valid for Lipschitz `phi`:
///
/// ```text
/// delta(t) phi(t, 0) = k(t, 0) - k0(xi(t)) + delta_0 phi(0, xi(t))
///     - int_0^t [v k phi + v delta phi_x - delta phi_t](s, xi(t) - xi(s)) ds
/// ```
///
/// with `v = V(delta / L)` and `xi` built from the current iterate. Integrals
/// use left-point sums on the trace mesh. Starts from `delta = 0` (with
/// `delta_0` pinned to the initial mass) and stops once the sup-norm update
/// is at most `tol`.
///
/// An update larger than `1e8 * max(1, delta_0, L sup k(., 0))` is far
/// outside any attainable mass and stops the iteration as unstable.
///
/// A `phi` with a jump is accepted only while `xi` stays below the jump;
/// past it the formula above no longer holds.
pub fn solve_volterra_successive<T: Real>(
    trace: &BoundaryTrace<T>,
    s: &Scenario<T>,
    tol: T,
    max_iter: usize,
) -> Result<VolterraSolution<T>> {
    s.check()?;
    let n_steps = trace.steps();
    let dt = trace.dt;
    let k = &trace.values;
    let time = |n: usize| T::from_usize_lossy(n) * dt;
    let delta0 = s.initial_mass();
    let phi0 = (0..=n_steps)
        .map(|i| phi_at_origin(s, time(i), i))
        .collect::<Result<Vec<_>>>()?;

    let k_sup = k.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let scale = T::one().max(delta0.abs()).max(s.length * k_sup);
    let divergence = T::lit(DIVERGENCE_FACTOR) * scale;

    let mut delta = vec![T::zero(); n_steps + 1];
    let mut iterates = Vec::new();
    let mut history = Vec::new();
    for iteration in 1..=max_iter {
        let xi = travelled(&delta, dt, s);
        let v: Vec<T> = delta
            .iter()
            .map(|d| s.velocity.speed(*d / s.length))
            .collect();
        let mut next: Vec<T> = (0..=n_steps)
            .into_par_iter()
            .map(|i| {
                let x = xi[i];
                let mut quad = T::zero();
                for m in 0..i {
                    let j = s.distribution.jet(time(m), x - xi[m]);
                    quad = quad + v[m] * k[m] * j.value + v[m] * delta[m] * j.dx - delta[m] * j.dt;
                }
                let rhs = k[i] - s.initial.value(x) + delta0 * s.distribution.density(T::zero(), x)
                    - dt * quad;
                rhs / phi0[i]
            })
            .collect();
        next[0] = delta0;
        let update = sup_diff(&next, &delta);
        history.push(update.as_f64());
        if !update.is_finite() || update > divergence {
            return Err(Error::Instability {
                step: iteration,
                detail: format!(
                    "successive approximation diverges (sup-norm update {:e})",
                    update.as_f64()
                ),
            });
        }
        delta = next;
        iterates.push(VolterraIterate {
            iteration,
            delta: delta.clone(),
            update,
        });
        if update <= tol {
            let xi = travelled(&delta, dt, s);
            if let Some(jump) = s.distribution.jump_point() {
                if xi[n_steps] >= jump {
                    return Err(Error::assumption(
                        "lipschitz-inflow-distribution",
                        format!(
                            "xi(T) = {} reaches the jump of phi at {jump}; use the uniform recursion",
                            xi[n_steps]
                        ),
                    ));
                }
            }
            return Ok(VolterraSolution {
                mass: MassCurve {
                    dt,
                    delta,
                    xi: Some(xi),
                },
                iterates,
            });
        }
    }
    Err(Error::NonConvergence { history })
}
