use serde::Serialize;

use crate::forward::{solve_upwind_with, BoundaryTrace, DensityField, MassCurve, SpaceTimeGrid};
use crate::{Error, Result, Scenario};

/// Mesh of a reference forward run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ForwardMesh {
    pub dt: f64,
    pub dx: f64,
    /// Extrapolate `2 k_h - k_2h` onto the coarse mesh.
    pub richardson: bool,
}

impl ForwardMesh {
    /// `dx` defaults to `dt * max(1, v_max)`, the finest CFL-stable choice.
    pub fn new(s: &Scenario<f64>, dt: f64, dx: Option<f64>, richardson: bool) -> Self {
        ForwardMesh {
            dt,
            dx: dx.unwrap_or(dt * s.velocity.max_speed().max(1.0)),
            richardson,
        }
    }

    /// Step of the trace the run produces.
    pub fn trace_dt(&self) -> f64 {
        if self.richardson {
            2.0 * self.dt
        } else {
            self.dt
        }
    }
}

/// Exact-data trace and mass curve from the upwind solver.
#[derive(Clone, Debug, PartialEq)]
pub struct Oracle {
    pub mesh: ForwardMesh,
    pub trace: BoundaryTrace<f64>,
    pub mass: MassCurve<f64>,
}

impl Oracle {
    /// Trace subsampled to the inverse step `dt`.
    pub fn trace_at(&self, dt: f64) -> Result<BoundaryTrace<f64>> {
        self.trace.subsample_to(dt)
    }

    pub fn mass_at(&self, dt: f64) -> Result<MassCurve<f64>> {
        self.mass.subsample_to(dt)
    }
}

pub fn forward_oracle(s: &Scenario<f64>, mesh: ForwardMesh) -> Result<Oracle> {
    Ok(forward_run(s, mesh, 0)?.0)
}

/// Oracle plus the fine-mesh field with about `snapshots` stored rows
/// (only the first and last when zero).
pub fn forward_run(
    s: &Scenario<f64>,
    mesh: ForwardMesh,
    snapshots: usize,
) -> Result<(Oracle, DensityField<f64>)> {
    let run = |dt: f64, dx: f64, snapshots: usize| -> Result<DensityField<f64>> {
        let grid = SpaceTimeGrid::new(s, dt, dx)?;
        let stride = grid.steps.checked_div(snapshots).unwrap_or(grid.steps);
        solve_upwind_with(s, &grid, stride.max(1))
    };
    if !mesh.richardson {
        let field = run(mesh.dt, mesh.dx, snapshots)?;
        let oracle = Oracle {
            mesh,
            trace: field.boundary_trace(),
            mass: field.mass_curve(),
        };
        return Ok((oracle, field));
    }
    let (fine, coarse) = rayon::join(
        || run(mesh.dt, mesh.dx, snapshots),
        || run(2.0 * mesh.dt, 2.0 * mesh.dx, 0),
    );
    let (fine, coarse) = (fine?, coarse?);
    let extrapolate = |f: &[f64], c: &[f64]| -> Result<Vec<f64>> {
        if f.len() != 2 * c.len() - 1 {
            return Err(Error::MeshMismatch(
                "Richardson meshes are not nested".into(),
            ));
        }
        Ok(c.iter()
            .enumerate()
            .map(|(n, cv)| 2.0 * f[2 * n] - cv)
            .collect())
    };
    let trace = BoundaryTrace::new(coarse.grid.dt, extrapolate(&fine.trace, &coarse.trace)?)?;
    let mass = MassCurve {
        dt: coarse.grid.dt,
        delta: extrapolate(&fine.mass, &coarse.mass)?,
        xi: Some(extrapolate(&fine.xi, &coarse.xi)?),
    };
    Ok((Oracle { mesh, trace, mass }, fine))
}
