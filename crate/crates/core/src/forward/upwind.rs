use super::{BoundaryTrace, MassCurve, SpaceTimeGrid};
use crate::{Error, Real, Result, Scenario};

/// Number of stored field snapshots when no stride is requested.
const DEFAULT_SNAPSHOTS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot<T> {
    pub step: usize,
    pub values: Vec<T>,
}

/// Output of [`solve_upwind`].
///
/// The full field at the finest meshes does not fit in memory, so rows are
/// kept only every `stride` steps (plus the final one). Per-step reductions
/// are kept for every level.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityField<T> {
    pub grid: SpaceTimeGrid<T>,
    pub stride: usize,
    pub snapshots: Vec<Snapshot<T>>,
    /// `k(t_n, 0)`.
    pub trace: Vec<T>,
    /// `dx * sum_j k(t_n, x_j)`.
    pub mass: Vec<T>,
    /// `sum_{m<n} dt * v^m`.
    pub xi: Vec<T>,
    pub max: Vec<T>,
    pub min: Vec<T>,
}

impl<T: Real> DensityField<T> {
    pub fn boundary_trace(&self) -> BoundaryTrace<T> {
        BoundaryTrace {
            dt: self.grid.dt,
            values: self.trace.clone(),
            sigma: T::zero(),
            seed: None,
        }
    }

    pub fn mass_curve(&self) -> MassCurve<T> {
        MassCurve {
            dt: self.grid.dt,
            delta: self.mass.clone(),
            xi: Some(self.xi.clone()),
        }
    }

    pub fn last(&self) -> &Snapshot<T> {
        self.snapshots.last().expect("final level is always stored")
    }
}

/// Upwind scheme with the default snapshot stride.
pub fn solve_upwind<T: Real>(s: &Scenario<T>, grid: &SpaceTimeGrid<T>) -> Result<DensityField<T>> {
    let stride = (grid.steps / DEFAULT_SNAPSHOTS).max(1);
    solve_upwind_with(s, grid, stride)
}

/// First-order upwind scheme, storing a snapshot every `stride` steps.
///
/// Characteristics move toward `x = 0`, so the difference uses the right
/// neighbour with a zero ghost value at `x = L`. The speed is evaluated from
/// the left Riemann sum of the current row.
pub fn solve_upwind_with<T: Real>(
    s: &Scenario<T>,
    grid: &SpaceTimeGrid<T>,
    stride: usize,
) -> Result<DensityField<T>> {
    s.check()?;
    grid.check_cfl(s.velocity.max_speed())?;
    let stride = stride.max(1);
    let (nt, nx) = (grid.steps, grid.cells);
    let xs: Vec<T> = (0..nx).map(|j| grid.node(j)).collect();
    let mut k: Vec<T> = xs.iter().map(|&x| s.initial.value(x)).collect();

    let static_phi = s.distribution.is_time_independent();
    let mut phi: Vec<T> = xs
        .iter()
        .map(|&x| s.distribution.density(T::zero(), x))
        .collect();

    let mut out = DensityField {
        grid: *grid,
        stride,
        snapshots: Vec::with_capacity(nt / stride + 2),
        trace: Vec::with_capacity(nt + 1),
        mass: Vec::with_capacity(nt + 1),
        xi: Vec::with_capacity(nt + 1),
        max: Vec::with_capacity(nt + 1),
        min: Vec::with_capacity(nt + 1),
    };
    let ratio = grid.dt / grid.dx;
    let mut next = vec![T::zero(); nx];
    let mut xi = T::zero();
    for n in 0..=nt {
        let (sum, hi, lo) = reduce(&k);
        if !sum.is_finite() {
            return Err(Error::Instability {
                step: n,
                detail: "non-finite density in upwind field".into(),
            });
        }
        let delta = grid.dx * sum;
        out.trace.push(k[0]);
        out.mass.push(delta);
        out.xi.push(xi);
        out.max.push(hi);
        out.min.push(lo);
        if n % stride == 0 || n == nt {
            out.snapshots.push(Snapshot {
                step: n,
                values: k.clone(),
            });
        }
        if n == nt {
            break;
        }

        let t = grid.time(n);
        let v = s.velocity.speed(delta / s.length);
        xi = xi + grid.dt * v;
        if !static_phi {
            for (p, &x) in phi.iter_mut().zip(&xs) {
                *p = s.distribution.density(t, x);
            }
        }
        let a = ratio * v;
        let src = grid.dt * s.inflow.rate(t);
        for ((out, w), p) in next.iter_mut().zip(k.windows(2)).zip(&phi) {
            *out = w[0] + a * (w[1] - w[0]) + src * *p;
        }
        // zero ghost value to the right of the last node
        next[nx - 1] = k[nx - 1] - a * k[nx - 1] + src * phi[nx - 1];
        std::mem::swap(&mut k, &mut next);
    }
    Ok(out)
}

/// Sum, maximum and minimum of `k`, accumulated over eight interleaved lanes
/// so the loop is not bound by floating point latency.
fn reduce<T: Real>(k: &[T]) -> (T, T, T) {
    const LANES: usize = 8;
    let mut sum = [T::zero(); LANES];
    let mut hi = [T::neg_infinity(); LANES];
    let mut lo = [T::infinity(); LANES];
    let chunks = k.chunks_exact(LANES);
    let rest = chunks.remainder();
    for c in chunks {
        for l in 0..LANES {
            sum[l] = sum[l] + c[l];
            hi[l] = if c[l] > hi[l] { c[l] } else { hi[l] };
            lo[l] = if c[l] < lo[l] { c[l] } else { lo[l] };
        }
    }
    for (l, &v) in rest.iter().enumerate() {
        sum[l] = sum[l] + v;
        hi[l] = hi[l].max(v);
        lo[l] = lo[l].min(v);
    }
    let total = sum.iter().fold(T::zero(), |a, &b| a + b);
    let hi = hi.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
    let lo = lo.iter().fold(T::infinity(), |a, &b| a.min(b));
    (total, hi, lo)
}

/// Per-step defect of the discrete mass balance
/// `delta_{n+1} - delta_n - dt (f(t_n) - V(delta_n / L) k(t_n, 0))`
/// with `delta` taken from the row sums of `field`.
pub fn mass_balance_residual<T: Real>(field: &DensityField<T>, s: &Scenario<T>) -> Vec<T> {
    let dt = field.grid.dt;
    field
        .mass
        .windows(2)
        .enumerate()
        .map(|(n, w)| {
            let t = field.grid.time(n);
            let v = s.velocity.speed(w[0] / s.length);
            w[1] - w[0] - dt * (s.inflow.rate(t) - v * field.trace[n])
        })
        .collect()
}
