use crate::{Error, Real, Result};

/// Samples of the exit density `k(t_n, 0)` on a uniform time mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryTrace<T> {
    pub dt: T,
    pub values: Vec<T>,
    /// Noise amplitude the samples were corrupted with; zero for exact data.
    pub sigma: T,
    pub seed: Option<u64>,
}

impl<T: Real> BoundaryTrace<T> {
    pub fn new(dt: T, values: Vec<T>) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::Config(format!("trace step must be > 0, got {dt}")));
        }
        if values.len() < 2 {
            return Err(Error::Config("trace needs at least two samples".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("trace sample {i} is not finite")));
        }
        Ok(BoundaryTrace {
            dt,
            values,
            sigma: T::zero(),
            seed: None,
        })
    }

    /// Number of steps `N`; there are `N + 1` samples.
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn time(&self, n: usize) -> T {
        T::from_usize_lossy(n) * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.values.len()).map(|n| self.time(n))
    }

    pub fn horizon(&self) -> T {
        self.time(self.steps())
    }

    /// Linear interpolation in time, clamped to the sampled interval.
    pub fn sample(&self, t: T) -> T {
        let n = self.steps();
        if t <= T::zero() {
            return self.values[0];
        }
        let s = t / self.dt;
        let i = s.floor().to_usize().unwrap_or(n);
        if i >= n {
            return self.values[n];
        }
        let w = s - T::from_usize_lossy(i);
        self.values[i] + w * (self.values[i + 1] - self.values[i])
    }

    /// Keeps every `stride`-th sample.
    pub fn subsample(&self, stride: usize) -> Result<Self> {
        if stride == 0 || !self.steps().is_multiple_of(stride) {
            return Err(Error::MeshMismatch(format!(
                "stride {stride} does not divide {} trace steps",
                self.steps()
            )));
        }
        Ok(BoundaryTrace {
            dt: self.dt * T::from_usize_lossy(stride),
            values: self.values.iter().step_by(stride).copied().collect(),
            sigma: self.sigma,
            seed: self.seed,
        })
    }

    /// Resamples onto the coarser mesh of step `dt`, which must be a multiple
    /// of the current step.
    pub fn subsample_to(&self, dt: T) -> Result<Self> {
        let stride = super::steps_for(dt, self.dt, "subsample")
            .map_err(|_| Error::MeshMismatch(format!("{dt} is not a multiple of {}", self.dt)))?;
        self.subsample(stride)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.values.len() != other.values.len() {
            return Err(Error::MeshMismatch(format!(
                "trace lengths {} and {}",
                self.values.len(),
                other.values.len()
            )));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max))
    }
}

/// Total mass `delta(t_n)` and, when available, the travelled distance `xi(t_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MassCurve<T> {
    pub dt: T,
    pub delta: Vec<T>,
    pub xi: Option<Vec<T>>,
}

impl<T: Real> MassCurve<T> {
    pub fn steps(&self) -> usize {
        self.delta.len() - 1
    }

    pub fn time(&self, n: usize) -> T {
        T::from_usize_lossy(n) * self.dt
    }

    /// Keeps every `stride`-th sample.
    pub fn subsample(&self, stride: usize) -> Result<Self> {
        if stride == 0 || !self.steps().is_multiple_of(stride) {
            return Err(Error::MeshMismatch(format!(
                "stride {stride} does not divide {} steps",
                self.steps()
            )));
        }
        let pick = |v: &Vec<T>| v.iter().step_by(stride).copied().collect::<Vec<_>>();
        Ok(MassCurve {
            dt: self.dt * T::from_usize_lossy(stride),
            delta: pick(&self.delta),
            xi: self.xi.as_ref().map(pick),
        })
    }

    pub fn subsample_to(&self, dt: T) -> Result<Self> {
        let stride = super::steps_for(dt, self.dt, "subsample")
            .map_err(|_| Error::MeshMismatch(format!("{dt} is not a multiple of {}", self.dt)))?;
        self.subsample(stride)
    }

    /// `max_n |delta_n - other_n|` over a common mesh.
    pub fn delta_error(&self, other: &[T]) -> Result<T> {
        if self.delta.len() != other.len() {
            return Err(Error::MeshMismatch(format!(
                "mass curve lengths {} and {}",
                self.delta.len(),
                other.len()
            )));
        }
        Ok(self
            .delta
            .iter()
            .zip(other)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max))
    }
}
