use super::reconstruction::travelled;
use super::sup_diff;
use crate::forward::{BoundaryTrace, MassCurve};
use crate::{Error, InflowDistribution, Real, Result, Scenario};

#[derive(Clone, Debug, PartialEq)]
pub struct UniformRecursion<T> {
    pub mass: MassCurve<T>,
    /// Entry time `eta(t_n)` of a trip that covers the full length `L_phi`
    /// and exits at `t_n`; zero while `xi(t_n) <= L_phi`.
    pub eta: Vec<T>,
    /// First time `xi` exceeds `L_phi`, if it does.
    pub t_star: Option<T>,
    pub updates: Vec<f64>,
}

/// Mass recursion for a uniform `phi = 1_[0, L_phi] / L_phi`.
///
/// Only trips that entered after `eta(t)` can still be on the network, which
/// turns the balance into a delay equation:
///
/// ```text
/// delta(t) = delta(eta(t)) - int_{eta(t)}^t v k ds + L_phi (k(t, 0) - k0(xi(t)))
/// ```
///
/// with `eta = 0`, `delta(eta) = delta_0` while `xi(t) <= L_phi`, otherwise
/// `xi(t) - xi(eta(t)) = L_phi`. The iteration rebuilds `xi`, `eta` and the
/// flux integral from the current iterate; `eta` and `delta(eta)` are
/// interpolated linearly inside the bracketing mesh cell and the integral is
/// the left-point sum plus the partial cell.
pub fn solve_uniform_recursion<T: Real>(
    trace: &BoundaryTrace<T>,
    s: &Scenario<T>,
    tol: T,
    max_iter: usize,
) -> Result<UniformRecursion<T>> {
    s.check()?;
    let InflowDistribution::Uniform { length: span } = s.distribution else {
        return Err(Error::assumption(
            "uniform-inflow-distribution",
            "the delay recursion needs a uniform phi",
        ));
    };
    let k_hi = s.density_bound();
    let vmin = s.velocity.min_speed_on(k_hi);
    if !(vmin > T::zero()) {
        return Err(Error::assumption(
            "positive-min-speed",
            format!("V_min = {vmin} on [0, {k_hi}]"),
        ));
    }
    let n_steps = trace.steps();
    let dt = trace.dt;
    let k = &trace.values;
    let delta0 = s.initial_mass();

    let mut delta = vec![T::zero(); n_steps + 1];
    let mut updates = Vec::new();
    for _ in 0..max_iter {
        let speeds: Vec<T> = delta
            .iter()
            .map(|d| s.velocity.speed(*d / s.length))
            .collect();
        if let Some(n) = speeds.iter().position(|v| !(*v > T::zero())) {
            return Err(Error::assumption(
                "positive-min-speed",
                format!("iterate speed V = {} at step {n}", speeds[n]),
            ));
        }
        let xi = travelled(&delta, dt, s);
        let mut flux = Vec::with_capacity(n_steps + 1);
        let mut acc = T::zero();
        for m in 0..=n_steps {
            flux.push(acc);
            acc = acc + dt * speeds[m] * k[m];
        }

        let mut next = Vec::with_capacity(n_steps + 1);
        let mut eta = Vec::with_capacity(n_steps + 1);
        for i in 0..=n_steps {
            let x = xi[i];
            let local = span * (k[i] - s.initial.value(x));
            if x <= span {
                next.push(delta0 - flux[i] + local);
                eta.push(T::zero());
                continue;
            }
            let target = x - span;
            // xi_p <= target < xi_{p+1}, with p + 1 <= i since xi_i > target
            let p = xi[..=i].partition_point(|&z| z <= target) - 1;
            let lambda = (target - xi[p]) / (xi[p + 1] - xi[p]);
            let d_eta = delta[p] + lambda * (delta[p + 1] - delta[p]);
            let tail = flux[i] - flux[p] - lambda * dt * speeds[p] * k[p];
            next.push(d_eta - tail + local);
            eta.push((T::from_usize_lossy(p) + lambda) * dt);
        }
        next[0] = delta0;
        let update = sup_diff(&next, &delta);
        updates.push(update.as_f64());
        if !update.is_finite() {
            return Err(Error::Instability {
                step: updates.len(),
                detail: format!("uniform recursion update became {update}"),
            });
        }
        delta = next;
        if update <= tol {
            let xi = travelled(&delta, dt, s);
            let t_star = xi
                .iter()
                .position(|&z| z > span)
                .map(|n| T::from_usize_lossy(n) * dt);
            return Ok(UniformRecursion {
                mass: MassCurve {
                    dt,
                    delta,
                    xi: Some(xi),
                },
                eta,
                t_star,
                updates,
            });
        }
    }
    Err(Error::NonConvergence { history: updates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{InflowRate, InitialDensity, VelocityFunction};

    fn scenario(horizon: f64) -> Scenario<f64> {
        Scenario::new(
            10.0,
            horizon,
            VelocityFunction::constant(0.5),
            InflowRate::constant(0.15),
            InflowDistribution::uniform(10.0),
            InitialDensity::Zero,
        )
        .unwrap()
    }

    #[test]
    fn requires_uniform_phi() {
        let mut s = scenario(8.0);
        s.distribution = InflowDistribution::gaussian(1.0, 5.0, 0.0);
        let trace = BoundaryTrace::new(0.1, vec![0.0; 81]).unwrap();
        let err = solve_uniform_recursion(&trace, &s, 1e-12, 10).unwrap_err();
        assert_eq!(err.category(), crate::Category::AssumptionViolation);
    }

    #[test]
    fn requires_positive_speed() {
        let mut s = scenario(8.0);
        s.velocity = VelocityFunction::greenshields(1.0, 0.01);
        let trace = BoundaryTrace::new(0.1, vec![0.0; 81]).unwrap();
        assert!(solve_uniform_recursion(&trace, &s, 1e-12, 10).is_err());
    }

    #[test]
    fn constant_speed_steady_state() {
        // V = 0.5: k(t, 0) = 0.015 min(t, 20), and from t = 20 on the
        // balance is stationary at delta = 0.15 * 20 - 0.5 * 0.015 * 20^2 / 2 = 1.5
        let s = scenario(40.0);
        let dt = 0.1;
        let trace = BoundaryTrace::new(
            dt,
            (0..=400)
                .map(|n| {
                    let t = n as f64 * dt;
                    0.015 * t.min(20.0)
                })
                .collect(),
        )
        .unwrap();
        let sol = solve_uniform_recursion(&trace, &s, 1e-12, 200).unwrap();
        assert!((sol.t_star.unwrap() - 20.0).abs() <= 0.1 + 1e-9);
        let last = *sol.mass.delta.last().unwrap();
        assert!((last - 1.5).abs() < 1e-2, "{last}");
        for (n, &e) in sol.eta.iter().enumerate() {
            let t = n as f64 * dt;
            if e > 0.0 {
                assert!(e <= t - 10.0 / 0.5 + 1e-9);
            }
        }
    }
}
