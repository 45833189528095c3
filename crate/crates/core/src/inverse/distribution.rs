//! Recovery of a time-independent inflow distribution `phi(x)` from the exit
//! trace when the inflow rate `f` is known.
//!
//! Substituting `z = xi(t)` turns the trace representation into a Volterra
//! equation of the first kind,
//! `k(xi^-1(z), 0) - k0(z) = int_0^z f / V (xi^-1(z - y)) phi(y) dy`,
//! which is discretised on `x_j = j dx` and solved by forward substitution.

use crate::forward::{BoundaryTrace, MassCurve};
use crate::{Error, Real, Result, Scenario};

/// Euler `delta_{n+1} = delta_n + dt (f(t_n) - V(delta_n / L) k_n)` with
/// `delta_0` the initial mass, and `xi_n = dt sum_{m<n} V(delta_m / L)`.
pub fn integrate_delta_xi<T: Real>(trace: &BoundaryTrace<T>, s: &Scenario<T>) -> MassCurve<T> {
    let dt = trace.dt;
    let n_steps = trace.steps();
    let mut delta = Vec::with_capacity(n_steps + 1);
    let mut xi = Vec::with_capacity(n_steps + 1);
    let (mut d, mut x) = (s.initial_mass(), T::zero());
    for (n, &k) in trace.values.iter().enumerate() {
        delta.push(d);
        xi.push(x);
        let v = s.velocity.speed(d / s.length);
        d = d + dt * (s.inflow.rate(trace.time(n)) - v * k);
        x = x + dt * v;
    }
    MassCurve {
        dt,
        delta,
        xi: Some(xi),
    }
}

/// Node data `(tau_j, f_j, v_j)` at `x_j = j dx`, obtained by convex
/// interpolation inside the cell `(xi_n, xi_{n+1}]` containing `x_j`.
/// Node 0 carries `(0, f(0), V(delta_0 / L))`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeData<T> {
    pub dx: T,
    pub x: Vec<T>,
    pub tau: Vec<T>,
    pub f: Vec<T>,
    pub v: Vec<T>,
    /// Requested nodes beyond `xi(T)`, which the data cannot reach.
    pub excluded: usize,
}

impl<T: Real> NodeData<T> {
    /// Number of unknowns `phi_1 .. phi_J`.
    pub fn unknowns(&self) -> usize {
        self.x.len() - 1
    }
}

/// Builds the node data for `x_j = j dx`, `dx = v_max T / n_x`, keeping the
/// nodes with `x_j <= xi(T)`.
pub fn interpolate_nodes<T: Real>(
    mass: &MassCurve<T>,
    s: &Scenario<T>,
    n_x: usize,
) -> Result<NodeData<T>> {
    let xi = mass
        .xi
        .as_ref()
        .ok_or_else(|| Error::Config("mass curve carries no xi".into()))?;
    if n_x == 0 {
        return Err(Error::Config("need at least one spatial node".into()));
    }
    if let Some(n) = xi.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::assumption(
            "positive-min-speed",
            format!("xi is not strictly increasing at step {n}"),
        ));
    }
    let horizon = mass.time(mass.steps());
    let dx = s.velocity.max_speed() * horizon / T::from_usize_lossy(n_x);
    let xi_end = xi[xi.len() - 1];
    let rate = |n: usize| s.inflow.rate(mass.time(n));
    let speed = |n: usize| s.velocity.speed(mass.delta[n] / s.length);

    let mut out = NodeData {
        dx,
        x: vec![T::zero()],
        tau: vec![T::zero()],
        f: vec![rate(0)],
        v: vec![speed(0)],
        excluded: 0,
    };
    for j in 1..=n_x {
        let x = T::from_usize_lossy(j) * dx;
        if x > xi_end + dx * T::lit(1e-9) {
            out.excluded = n_x + 1 - j;
            break;
        }
        // xi_n < x <= xi_{n+1}
        let n = (xi.partition_point(|&z| z < x) - 1).min(xi.len() - 2);
        let w = ((x - xi[n]) / (xi[n + 1] - xi[n])).min(T::one());
        let mix = |a: T, b: T| (T::one() - w) * a + w * b;
        out.x.push(x);
        out.tau.push(mix(mass.time(n), mass.time(n + 1)));
        out.f.push(mix(rate(n), rate(n + 1)));
        out.v.push(mix(speed(n), speed(n + 1)));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistributionRecovery<T> {
    pub nodes: NodeData<T>,
    /// `phi_hat(x_j)` for `j = 1 .. J`, already divided by `dx`.
    pub phi: Vec<T>,
}

impl<T: Real> DistributionRecovery<T> {
    /// Nodes `x_1 .. x_J` matching [`Self::phi`].
    pub fn x(&self) -> &[T] {
        &self.nodes.x[1..]
    }

    /// `dx sum_j phi_hat(x_j)`.
    pub fn mass(&self) -> T {
        self.phi.iter().fold(T::zero(), |a, &p| a + p) * self.nodes.dx
    }
}

/// Forward substitution for
/// `k(tau_j, 0) = k0(x_j) + sum_{l=1}^{j} (f_{j-l} / v_{j-l}) phi_l`.
///
/// The unknowns `phi_l` are quadrature-weighted values `phi(x_l) dx`; the
/// result is divided by `dx`. `k(tau_j, 0)` is interpolated linearly from the
/// trace.
pub fn solve_triangular<T: Real>(
    trace: &BoundaryTrace<T>,
    nodes: &NodeData<T>,
    s: &Scenario<T>,
) -> Result<DistributionRecovery<T>> {
    let (f0, v0) = (nodes.f[0], nodes.v[0]);
    if !(f0 > T::zero()) || !(v0 > T::zero()) {
        return Err(Error::assumption(
            "positive-initial-inflow",
            format!("singular diagonal: f(0) = {f0}, V(delta_0 / L) = {v0}"),
        ));
    }
    if let Some(j) = nodes.tau.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::Config(format!(
            "node times not increasing at node {j}"
        )));
    }
    let weight: Vec<T> = nodes.f.iter().zip(&nodes.v).map(|(&f, &v)| f / v).collect();
    let unknowns = nodes.unknowns();
    // phi[l - 1] holds phi_l
    let mut phi: Vec<T> = Vec::with_capacity(unknowns);
    for j in 1..=unknowns {
        let mut rhs = trace.sample(nodes.tau[j]) - s.initial.value(nodes.x[j]);
        for l in 1..j {
            rhs = rhs - weight[j - l] * phi[l - 1];
        }
        phi.push(rhs / weight[0]);
    }
    for p in phi.iter_mut() {
        *p = *p / nodes.dx;
    }
    if let Some(j) = phi.iter().position(|p| !p.is_finite()) {
        return Err(Error::Instability {
            step: j + 1,
            detail: "non-finite distribution value".into(),
        });
    }
    Ok(DistributionRecovery {
        nodes: nodes.clone(),
        phi,
    })
}

/// Full pipeline with `n_x` spatial cells over `[0, v_max T]`.
pub fn recover_distribution<T: Real>(
    trace: &BoundaryTrace<T>,
    s: &Scenario<T>,
    n_x: usize,
) -> Result<DistributionRecovery<T>> {
    let mass = integrate_delta_xi(trace, s);
    let nodes = interpolate_nodes(&mass, s, n_x)?;
    solve_triangular(trace, &nodes, s)
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
    fn empty_network_travels_at_free_speed() {
        let s = scenario(VelocityFunction::greenshields(1.0, 1.0), 0.0);
        let trace = BoundaryTrace::new(0.1, vec![0.0; 81]).unwrap();
        let m = integrate_delta_xi(&trace, &s);
        assert!(m.delta.iter().all(|&d| d == 0.0));
        for (n, x) in m.xi.unwrap().iter().enumerate() {
            assert!((x - 0.1 * n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_speed_node_times() {
        let s = scenario(VelocityFunction::constant(0.5), 0.15);
        let trace =
            BoundaryTrace::new(0.01, (0..=800).map(|n| 0.015 * n as f64 * 0.01).collect()).unwrap();
        let m = integrate_delta_xi(&trace, &s);
        let nodes = interpolate_nodes(&m, &s, 400).unwrap();
        // dx = 0.5 * 8 / 400 = 0.01 and xi(8) = 4 covers every node
        assert_eq!(nodes.unknowns(), 400);
        assert_eq!(nodes.excluded, 0);
        for (x, tau) in nodes.x.iter().zip(&nodes.tau) {
            assert!((tau - x / 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_speed_uniform_phi_is_recovered() {
        // linear exact trace, so the recovered density is 1 / L everywhere
        let s = scenario(VelocityFunction::constant(0.5), 0.15);
        let trace =
            BoundaryTrace::new(0.01, (0..=800).map(|n| 0.015 * n as f64 * 0.01).collect()).unwrap();
        let rec = recover_distribution(&trace, &s, 400).unwrap();
        for p in &rec.phi {
            assert!((p - 0.1).abs() < 1e-6, "{p}");
        }
        assert!((rec.mass() - 0.4).abs() < 1e-6);
    }

    #[test]
    fn trace_from_initial_data_alone_gives_zero() {
        let mut s = scenario(VelocityFunction::constant(0.5), 0.15);
        s.initial = InitialDensity::gaussian_bump(0.1, 10.0, 5.0);
        let dt = 0.01;
        let trace = BoundaryTrace::new(
            dt,
            (0..=800)
                .map(|n| s.initial.value(0.5 * n as f64 * dt))
                .collect(),
        )
        .unwrap();
        let rec = recover_distribution(&trace, &s, 400).unwrap();
        assert!(rec.phi.iter().all(|p| p.abs() < 1e-9));
    }

    #[test]
    fn zero_initial_inflow_is_singular() {
        let s = scenario(VelocityFunction::constant(0.5), 0.0);
        let trace = BoundaryTrace::new(0.1, vec![0.0; 81]).unwrap();
        let err = recover_distribution(&trace, &s, 40).unwrap_err();
        assert_eq!(err.category(), crate::Category::AssumptionViolation);
    }
}
