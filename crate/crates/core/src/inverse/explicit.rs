use super::{phi_at_origin, recover_f, Method, Reconstruction};
use crate::forward::{BoundaryTrace, MassCurve};
use crate::{Error, Real, Result, Scenario};

/// One-pass explicit reconstruction of `delta` and `f` from the exit trace.
///
/// With `g_m = phi(t_m, xi_n - xi_m)` and `g_n = phi(t_n, 0)`,
///
/// ```text
/// delta_n g_n = k_n - k0(xi_n) + delta_0 phi(0, xi_n)
///             - dt sum_{m<n} v_m k_m g_m + sum_{m<n} delta_m (g_{m+1} - g_m)
/// ```
///
/// where `v_m = V(delta_m / L)`. Only earlier `delta_m` appear, so the values
/// are computed in order. `phi` is evaluated pointwise, which keeps the scheme
/// defined for a discontinuous `phi`.
pub fn reconstruct_explicit<T: Real>(
    trace: &BoundaryTrace<T>,
    s: &Scenario<T>,
) -> Result<Reconstruction<T>> {
    s.check()?;
    let n_steps = trace.steps();
    let dt = trace.dt;
    let k = &trace.values;
    let time = |n: usize| T::from_usize_lossy(n) * dt;
    let delta0 = s.initial_mass();

    let mut xi = vec![T::zero(); n_steps + 1];
    let mut delta = vec![T::zero(); n_steps + 1];
    let mut flux = vec![T::zero(); n_steps + 1];
    delta[0] = delta0;
    flux[0] = s.velocity.speed(delta0 / s.length) * k[0];
    let mut speed_prev = s.velocity.speed(delta0 / s.length);
    let mut g = vec![T::zero(); n_steps + 1];
    for n in 1..=n_steps {
        let x = xi[n - 1] + dt * speed_prev;
        xi[n] = x;
        let gn = phi_at_origin(s, time(n), n)?;
        for m in 0..n {
            g[m] = s.distribution.density(time(m), x - xi[m]);
        }
        g[n] = gn;
        let mut sum = k[n] - s.initial.value(x) + delta0 * g[0];
        let mut quad = T::zero();
        for m in 0..n {
            quad = quad + flux[m] * g[m];
            sum = sum + delta[m] * (g[m + 1] - g[m]);
        }
        sum = sum - dt * quad;
        let d = sum / gn;
        if !d.is_finite() {
            return Err(Error::Instability {
                step: n,
                detail: format!("explicit scheme produced delta = {d}"),
            });
        }
        delta[n] = d;
        speed_prev = s.velocity.speed(d / s.length);
        flux[n] = speed_prev * k[n];
    }
    let mass = MassCurve {
        dt,
        delta,
        xi: Some(xi),
    };
    recover_f(&mass, trace, s, Method::Explicit)
}
