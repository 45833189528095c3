use std::fmt;

use serde::{Deserialize, Serialize};

use super::{initial_mass, InflowDistribution, InflowRate, InitialDensity, VelocityFunction};
use crate::{Error, Real, Result};

/// A complete forward problem. The nonlocal kernel is always the constant
/// average `w(y) = 1/L` on `[0, L]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario<T> {
    #[serde(rename = "L")]
    pub length: T,
    #[serde(rename = "T")]
    pub horizon: T,
    pub velocity: VelocityFunction<T>,
    pub inflow: InflowRate<T>,
    pub distribution: InflowDistribution<T>,
    pub initial: InitialDensity<T>,
}

impl<T: Real> Scenario<T> {
    pub fn new(
        length: T,
        horizon: T,
        velocity: VelocityFunction<T>,
        inflow: InflowRate<T>,
        distribution: InflowDistribution<T>,
        initial: InitialDensity<T>,
    ) -> Result<Self> {
        let s = Scenario {
            length,
            horizon,
            velocity,
            inflow,
            distribution,
            initial,
        };
        s.check()?;
        Ok(s)
    }

    /// Structural checks (well-formed parameters). Modelling assumptions are
    /// reported separately by [`validate`].
    pub fn check(&self) -> Result<()> {
        if !(self.length > T::zero()) || !self.length.is_finite() {
            return Err(Error::Config("kernel length L must be > 0".into()));
        }
        if !(self.horizon > T::zero()) || !self.horizon.is_finite() {
            return Err(Error::Config("horizon T must be > 0".into()));
        }
        self.velocity.check()?;
        self.inflow.check()?;
        self.distribution.check()?;
        self.initial.check()
    }

    pub fn initial_mass(&self) -> T {
        initial_mass(&self.initial, self.length)
    }

    /// Nonlocal kernel weight `w(y)`.
    pub fn kernel(&self, y: T) -> T {
        if y >= T::zero() && y <= self.length {
            self.length.recip()
        } else {
            T::zero()
        }
    }

    /// A-priori bound on the average density `delta / L` over the horizon.
    pub fn density_bound(&self) -> T {
        (self.initial_mass() + self.horizon * self.inflow.sup_norm()) / self.length
    }

    pub fn with_horizon(&self, horizon: T) -> Self {
        Scenario {
            horizon,
            ..self.clone()
        }
    }
}

/// Whether a failed check blocks the scenario or only informs solver choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Requirement,
    Property,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub assumption: &'static str,
    pub kind: CheckKind,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// True when every requirement holds; properties may fail.
    pub fn is_admissible(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.passed || c.kind == CheckKind::Property)
    }

    /// First failed requirement as an error.
    pub fn into_result(self) -> Result<Self> {
        match self
            .checks
            .iter()
            .find(|c| !c.passed && c.kind == CheckKind::Requirement)
        {
            Some(c) => Err(Error::Assumption {
                assumption: c.assumption,
                detail: format!("{}: {}", c.name, c.detail),
            }),
            None => Ok(self),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = match (c.passed, c.kind) {
                (true, _) => "pass",
                (false, CheckKind::Requirement) => "FAIL",
                (false, CheckKind::Property) => "no",
            };
            writeln!(
                f,
                "{status:>4}  {:<22} [{}] {}",
                c.name, c.assumption, c.detail
            )?;
        }
        for w in &self.warnings {
            writeln!(f, "warn  {w}")?;
        }
        Ok(())
    }
}

pub const CHECK_DOMAIN: &str = "domain";
pub const CHECK_VELOCITY: &str = "velocity-admissible";
pub const CHECK_INFLOW: &str = "inflow-nonnegative";
pub const CHECK_NORMALIZED: &str = "phi-normalized";
pub const CHECK_PHI_ORIGIN: &str = "phi-positive-at-0";
pub const CHECK_PHI_SMOOTH: &str = "phi-c2";
pub const CHECK_PHI_SUPPORT: &str = "phi-supported-in-L";
pub const CHECK_INITIAL: &str = "initial-supported";
pub const CHECK_F0: &str = "inflow-positive-at-0";
pub const CHECK_VMIN: &str = "velocity-bounded-below";

/// Tolerance on `|int phi - 1|`.
pub const NORMALIZATION_TOL: f64 = 1e-6;
/// Tail mass outside `[0, L]` below which phi counts as supported there.
pub const SUPPORT_TAIL_TOL: f64 = 1e-8;
/// Initial density values beyond `L` below this count as zero.
pub const INITIAL_LEAK_TOL: f64 = 1e-12;
/// `phi(t,0) / sup phi` below this triggers a conditioning warning.
pub const ORIGIN_CONDITIONING: f64 = 1e-8;

/// Reports which modelling assumptions a scenario satisfies.
pub fn validate<T: Real>(s: &Scenario<T>) -> ValidationReport {
    let mut r = ValidationReport::default();
    let mut push = |name, assumption, kind, passed, detail: String| {
        r.checks.push(Check {
            name,
            assumption,
            kind,
            passed,
            detail,
        })
    };
    let horizon = s.horizon;
    let length = s.length;

    push(
        CHECK_DOMAIN,
        "constant-kernel",
        CheckKind::Requirement,
        s.check().is_ok(),
        format!("L = {length}, T = {horizon}"),
    );

    let vmax = s.velocity.max_speed();
    let lip = s.velocity.lipschitz();
    push(
        CHECK_VELOCITY,
        "lipschitz-velocity",
        CheckKind::Requirement,
        s.velocity.speed(T::zero()) >= T::zero() && vmax.is_finite() && lip.is_finite(),
        format!("v_max = {vmax}, Lipschitz = {lip}"),
    );

    let f_inf = s.inflow.inf_on(horizon);
    push(
        CHECK_INFLOW,
        "nonnegative-inflow",
        CheckKind::Requirement,
        f_inf >= T::zero() && s.inflow.sup_norm().is_finite(),
        format!("inf f = {f_inf}, sup f = {}", s.inflow.sup_norm()),
    );

    let samples = 101;
    let worst = (0..samples)
        .map(|i| horizon * T::from_usize_lossy(i) / T::from_usize_lossy(samples - 1))
        .map(|t| (s.distribution.mass(t) - T::one()).abs())
        .fold(T::zero(), T::max);
    push(
        CHECK_NORMALIZED,
        "inflow-distribution",
        CheckKind::Requirement,
        worst <= T::lit(NORMALIZATION_TOL),
        format!("max |int phi - 1| = {:e}", worst.as_f64()),
    );

    let phi0 = s.distribution.min_at_origin(horizon);
    push(
        CHECK_PHI_ORIGIN,
        "inflow-distribution",
        CheckKind::Requirement,
        phi0 > T::zero(),
        format!("min_t phi(t,0) = {:e}", phi0.as_f64()),
    );
    if phi0 > T::zero() && phi0 < T::lit(ORIGIN_CONDITIONING) * s.distribution.sup_norm() {
        r.warnings.push(format!(
            "phi(t,0) drops to {:e}; inverse schemes divide by it and will lose all accuracy",
            phi0.as_f64()
        ));
    }

    push(
        CHECK_PHI_SMOOTH,
        "inflow-distribution",
        CheckKind::Property,
        s.distribution.is_smooth(),
        match s.distribution.jump_point() {
            Some(x) => format!("jump at x = {x}"),
            None if s.distribution.is_smooth() => "smooth".to_string(),
            None => "piecewise smooth".to_string(),
        },
    );

    let tail = [T::zero(), horizon]
        .into_iter()
        .map(|t| s.distribution.tail_mass_outside(t, length))
        .fold(T::zero(), T::max);
    let supported = tail < T::lit(SUPPORT_TAIL_TOL);
    push(
        CHECK_PHI_SUPPORT,
        "inflow-distribution",
        CheckKind::Property,
        supported,
        format!("mass outside [0, L] = {:e}", tail.as_f64()),
    );
    if !supported {
        r.warnings.push(format!(
            "phi puts {:e} of its mass outside [0, L]",
            tail.as_f64()
        ));
    }

    let leak = s.initial.leak_beyond(length);
    push(
        CHECK_INITIAL,
        "initial-support",
        CheckKind::Requirement,
        leak < T::lit(INITIAL_LEAK_TOL),
        format!("max k0(x > L) = {:e}", leak.as_f64()),
    );

    let f0 = s.inflow.rate(T::zero());
    push(
        CHECK_F0,
        "positive-initial-inflow",
        CheckKind::Requirement,
        f0 > T::zero(),
        format!("f(0) = {f0}"),
    );

    let k_hi = s.density_bound();
    let vmin = s.velocity.min_speed_on(k_hi);
    push(
        CHECK_VMIN,
        "positive-min-speed",
        CheckKind::Requirement,
        vmin > T::zero(),
        format!("V_min = {vmin} on [0, {k_hi}]"),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_51a() -> Scenario<f64> {
        Scenario::new(
            10.0,
            8.0,
            VelocityFunction::greenshields(1.0, 1.0),
            InflowRate::constant(0.15),
            InflowDistribution::uniform(10.0),
            InitialDensity::Zero,
        )
        .unwrap()
    }

    #[test]
    fn example_51_fails_only_smoothness() {
        let r = validate(&example_51a());
        let failed: Vec<_> = r.failures().map(|c| c.name).collect();
        assert_eq!(failed, vec![CHECK_PHI_SMOOTH]);
        assert!(r.is_admissible());
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn gaussian_distribution_is_smooth() {
        let mut s = example_51a();
        s.inflow = InflowRate::sinusoidal(0.2, 2.0 * std::f64::consts::PI);
        s.distribution = InflowDistribution::gaussian(0.4, 3.0, 0.5);
        let r = validate(&s);
        assert!(r.passed(CHECK_PHI_SMOOTH));
        assert!(r.passed(CHECK_PHI_SUPPORT));
        // positive, so the requirement holds, but flagged as ill-conditioned
        assert!(r.passed(CHECK_PHI_ORIGIN));
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn zero_inflow_fails_f0_check() {
        let mut s = example_51a();
        s.inflow = InflowRate::constant(0.0);
        let r = validate(&s);
        assert!(!r.passed(CHECK_F0));
        assert!(!r.is_admissible());
        let err = r.into_result().unwrap_err();
        assert_eq!(err.category(), crate::Category::AssumptionViolation);
    }

    #[test]
    fn constant_speed_zero_fails_vmin() {
        let mut s = example_51a();
        s.velocity = VelocityFunction::constant(0.0);
        assert!(!validate(&s).passed(CHECK_VMIN));
    }

    #[test]
    fn structural_errors() {
        let mut s = example_51a();
        s.length = -1.0;
        assert!(s.check().is_err());
        assert!(!validate(&s).passed(CHECK_DOMAIN));
    }
}
