use super::{steps_for, BoundaryTrace, MassCurve};
use crate::{Error, Real, Result, Scenario};

/// Mass below `-NEGATIVE_MASS_TOL` is reported as an instability.
const NEGATIVE_MASS_TOL: f64 = 1e-9;

/// Marches the exit density along characteristics.
///
/// With `xi_n = sum_{m<n} dt V(delta_m / L)` the exit density is
/// `k_n = k0(xi_n) + dt sum_{m<n} f(t_m) phi(t_m, xi_n - xi_m)` and the mass
/// follows the Euler step `delta_{n+1} = delta_n + dt (f(t_n) - V(delta_n / L) k_n)`.
/// All sums are left-point; the cost is quadratic in the number of steps.
pub fn solve_characteristics<T: Real>(
    s: &Scenario<T>,
    dt: T,
) -> Result<(MassCurve<T>, BoundaryTrace<T>)> {
    s.check()?;
    let n_steps = steps_for(s.horizon, dt, "time")?;
    let time = |n: usize| T::from_usize_lossy(n) * dt;
    let rates: Vec<T> = (0..=n_steps).map(|n| s.inflow.rate(time(n))).collect();

    let mut xi = Vec::with_capacity(n_steps + 1);
    let mut delta = Vec::with_capacity(n_steps + 1);
    let mut trace = Vec::with_capacity(n_steps + 1);
    xi.push(T::zero());
    delta.push(s.initial_mass());
    for n in 0..=n_steps {
        let x = xi[n];
        let inflow = (0..n).fold(T::zero(), |acc, m| {
            acc + rates[m] * s.distribution.density(time(m), x - xi[m])
        });
        let k = s.initial.value(x) + dt * inflow;
        trace.push(k);
        if n == n_steps {
            break;
        }
        let v = s.velocity.speed(delta[n] / s.length);
        let next = delta[n] + dt * (rates[n] - v * k);
        if !next.is_finite() || next < -T::lit(NEGATIVE_MASS_TOL) {
            return Err(Error::Instability {
                step: n + 1,
                detail: format!("characteristics mass became {next}"),
            });
        }
        delta.push(next);
        xi.push(x + dt * v);
    }
    Ok((
        MassCurve {
            dt,
            delta,
            xi: Some(xi),
        },
        BoundaryTrace::new(dt, trace)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{InflowDistribution, InflowRate, InitialDensity, VelocityFunction};

    fn scenario(v: VelocityFunction<f64>, f: f64) -> Scenario<f64> {
        Scenario::new(
            10.0,
            8.0,
            v,
            InflowRate::constant(f),
            InflowDistribution::uniform(10.0),
            InitialDensity::Zero,
        )
        .unwrap()
    }

    #[test]
    fn empty_network_moves_at_free_speed() {
        let s = scenario(VelocityFunction::greenshields(1.0, 1.0), 0.0);
        let (mass, trace) = solve_characteristics(&s, 0.01).unwrap();
        assert!(mass.delta.iter().all(|&d| d == 0.0));
        assert!(trace.values.iter().all(|&k| k == 0.0));
        let xi = mass.xi.unwrap();
        for (n, x) in xi.iter().enumerate() {
            assert!((x - 0.01 * n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_speed_mass_closed_form() {
        // delta(t) = f t - c (f / L) t^2 / 2 = 0.96 at t = 8
        let s = scenario(VelocityFunction::constant(0.5), 0.15);
        let (mass, trace) = solve_characteristics(&s, 1e-3).unwrap();
        let d8 = *mass.delta.last().unwrap();
        assert!((d8 - 0.96).abs() < 1e-3, "{d8}");
        assert!((trace.values.last().unwrap() - 0.12).abs() < 1e-9);
    }
}
