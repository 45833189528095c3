//! Inverse problems driven by the exit trace `k(t, 0)`.
//!
//! Inflow-rate reconstruction goes through the mass `delta(t)`: once `delta`
//! is known on the trace mesh, `f = delta' + V(delta / L) k(t, 0)`. Three
//! routes to `delta` are provided: a one-pass explicit scheme, successive
//! approximation of the Volterra equation of the second kind (smooth `phi`)
//! and a delay recursion specialised to uniform `phi`.

pub mod distribution;
mod explicit;
mod reconstruction;
mod uniform;
mod volterra;

pub use explicit::reconstruct_explicit;
pub use reconstruction::{cumulative_inflow, recover_f, Diagnostics, Method, Reconstruction};
pub use uniform::{solve_uniform_recursion, UniformRecursion};
pub use volterra::{solve_volterra_successive, VolterraIterate, VolterraSolution};

use crate::forward::BoundaryTrace;
use crate::{Error, Real, Result, Scenario};

/// Reconstructs `delta` and `f` with the chosen solver.
pub fn reconstruct<T: Real>(
    trace: &BoundaryTrace<T>,
    s: &Scenario<T>,
    method: Method,
    tol: T,
    max_iter: usize,
) -> Result<Reconstruction<T>> {
    let (mass, updates) = match method {
        Method::Explicit => return reconstruct_explicit(trace, s),
        Method::Successive => {
            let sol = solve_volterra_successive(trace, s, tol, max_iter)?;
            let updates = sol.updates();
            (sol.mass, updates)
        }
        Method::UniformRecursion => {
            let sol = solve_uniform_recursion(trace, s, tol, max_iter)?;
            (sol.mass, sol.updates)
        }
    };
    let mut rec = recover_f(&mass, trace, s, method)?;
    rec.diagnostics = Diagnostics {
        iterations: updates.len(),
        updates,
    };
    Ok(rec)
}

/// Default stopping threshold on the sup-norm update of the iterative solvers.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default iteration cap of the iterative solvers.
pub const DEFAULT_MAX_ITER: usize = 500;

/// `phi(t_n, 0)`, rejecting a non-positive value.
pub(crate) fn phi_at_origin<T: Real>(s: &Scenario<T>, t: T, step: usize) -> Result<T> {
    let p = s.distribution.density(t, T::zero());
    if p > T::zero() {
        Ok(p)
    } else {
        Err(Error::assumption(
            "positive-exit-distribution",
            format!("phi(t, 0) = {p} at step {step} (t = {t})"),
        ))
    }
}

pub(crate) fn sup_diff<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).abs())
        .fold(T::zero(), |m, d| if d.is_nan() { d } else { m.max(d) })
}
