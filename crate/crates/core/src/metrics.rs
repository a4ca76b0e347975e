//! Fidelity-based metrics `d(ρ,σ) = f(F(ρ,σ))`.
//!
//! Any `f` that is strictly decreasing on `[0, 1]` with `f(1) = 0` generates
//! an uncertainty relation; [`MetricKind`] covers the angle, Bures and
//! root-infidelity members and [`CustomMetric`] accepts user-supplied ones.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::fidelity;
use crate::states::{DensityMatrix, PureState};
use crate::tolerances::Tolerances;

/// A decreasing function `f: [0, 1] → [0, ∞)` with `f(1) = 0`.
pub trait DecreasingFn: Sync {
    /// Evaluates `f(x)` for `x ∈ [0, 1]`.
    fn eval(&self, x: f64) -> f64;

    fn label(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    /// `arccos √F`
    Angle,
    /// `√(2 − 2√F)`
    Bures,
    /// `√(1 − F)`
    RootInfidelity,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [MetricKind::Angle, MetricKind::Bures, MetricKind::RootInfidelity];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Angle => "angle",
            MetricKind::Bures => "bures",
            MetricKind::RootInfidelity => "root-infidelity",
        }
    }
}

impl DecreasingFn for MetricKind {
    fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            MetricKind::Angle => x.sqrt().clamp(0.0, 1.0).acos(),
            MetricKind::Bures => (2.0 - 2.0 * x.sqrt()).max(0.0).sqrt(),
            MetricKind::RootInfidelity => (1.0 - x).max(0.0).sqrt(),
        }
    }

    fn label(&self) -> String {
        self.name().to_string()
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "angle" => Ok(MetricKind::Angle),
            "bures" => Ok(MetricKind::Bures),
            "root-infidelity" => Ok(MetricKind::RootInfidelity),
            other => Err(Error::Domain(format!(
                "unknown metric `{other}` (expected angle, bures or root-infidelity)"
            ))),
        }
    }
}

/// User-supplied generator function, checked on construction.
pub struct CustomMetric<F> {
    name: String,
    f: F,
}

impl<F: Fn(f64) -> f64 + Sync> CustomMetric<F> {
    /// Accepts `f` only if `f(1) = 0` and `f` is strictly decreasing and
    /// finite on a uniform grid of step `1e-3`.
    pub fn new(name: impl Into<String>, f: F) -> Result<Self> {
        let at_one = f(1.0);
        if at_one.abs() > 1e-12 {
            return Err(Error::Domain(format!("f(1) = {at_one}, expected 0")));
        }
        let mut prev = f(0.0);
        for i in 1..=1000 {
            let y = f(i as f64 * 1e-3);
            if !y.is_finite() || !prev.is_finite() || y >= prev {
                return Err(Error::Domain(format!(
                    "f is not strictly decreasing near x = {}",
                    i as f64 * 1e-3
                )));
            }
            prev = y;
        }
        Ok(Self { name: name.into(), f })
    }
}

impl<F: Fn(f64) -> f64 + Sync> DecreasingFn for CustomMetric<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x.clamp(0.0, 1.0))
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

/// `f(x)` after checking `x ∈ [−guard, 1 + guard]`.
pub fn apply_fn(f: &(impl DecreasingFn + ?Sized), x: f64) -> Result<f64> {
    let guard = Tolerances::DEFAULT.guard;
    if !(x >= -guard && x <= 1.0 + guard) {
        return Err(Error::Domain(format!("argument {x} outside [0, 1]")));
    }
    Ok(f.eval(x.clamp(0.0, 1.0)))
}

pub fn f_of(kind: MetricKind, x: f64) -> Result<f64> {
    apply_fn(&kind, x)
}

pub fn metric_distance(kind: MetricKind, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    f_of(kind, fidelity(rho, sigma)?)
}

/// `arccos |⟨ψ|φ⟩|`.
pub fn wootters_distance(psi: &PureState, phi: &PureState) -> Result<f64> {
    Ok(psi.inner(phi)?.norm().clamp(0.0, 1.0).acos())
}
