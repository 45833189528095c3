use crate::{Error, Real, Result, Scenario};

/// Relative slack when checking that a step divides an interval.
const DIVISIBILITY_TOL: f64 = 1e-9;

/// Number of steps of size `step` covering `[0, span]`, if `step` divides it.
pub fn steps_for<T: Real>(span: T, step: T, what: &str) -> Result<usize> {
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::Config(format!(
            "{what} step must be > 0, got {step}"
        )));
    }
    let ratio = (span / step).as_f64();
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > DIVISIBILITY_TOL * n.max(1.0) {
        return Err(Error::Config(format!(
            "{what} step {step} does not divide {span} (ratio {ratio})"
        )));
    }
    Ok(n as usize)
}

/// Uniform mesh `t_n = n dt`, `x_j = j dx` on `[0, T] x [0, L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceTimeGrid<T> {
    pub dt: T,
    pub dx: T,
    /// Number of time steps `N_t`; there are `N_t + 1` time levels.
    pub steps: usize,
    /// Number of spatial nodes `N_x`; node `N_x` is the zero ghost.
    pub cells: usize,
}

impl<T: Real> SpaceTimeGrid<T> {
    pub fn new(s: &Scenario<T>, dt: T, dx: T) -> Result<Self> {
        Ok(SpaceTimeGrid {
            dt,
            dx,
            steps: steps_for(s.horizon, dt, "time")?,
            cells: steps_for(s.length, dx, "space")?,
        })
    }

    /// Square mesh `dx = dt`.
    pub fn square(s: &Scenario<T>, h: T) -> Result<Self> {
        Self::new(s, h, h)
    }

    pub fn time(&self, n: usize) -> T {
        T::from_usize_lossy(n) * self.dt
    }

    pub fn node(&self, j: usize) -> T {
        T::from_usize_lossy(j) * self.dx
    }

    pub fn courant(&self, vmax: T) -> T {
        vmax * self.dt / self.dx
    }

    pub fn check_cfl(&self, vmax: T) -> Result<()> {
        let c = self.courant(vmax);
        if c > T::one() + T::epsilon() * T::lit(4.0) {
            return Err(Error::Config(format!(
                "CFL violated: v_max dt / dx = {c} > 1"
            )));
        }
        Ok(())
    }
}
