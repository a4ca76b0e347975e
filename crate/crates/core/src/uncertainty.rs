//! Outcome probabilities, the overlap of two eigenbases, uncertainty
//! measures `U(A;ρ) = f(P_{A;ρ})` and the relation `U(A;ρ) + U(B;ρ) ≥ f(c²)`.
//!
//! With the angle metric the relation is the Landau–Pollak inequality
//! `arccos √P_A + arccos √P_B ≥ arccos c`, valid for mixed states in any
//! dimension.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::check_dims;
use crate::metrics::{apply_fn, DecreasingFn, MetricKind};
use crate::states::{DensityMatrix, ProjectiveObservable};
use crate::tolerances::Tolerances;

/// `p_i = ⟨a_i|ρ|a_i⟩`, each clamped to `[0, 1]`.
pub fn outcome_probabilities(obs: &ProjectiveObservable, rho: &DensityMatrix) -> Result<Vec<f64>> {
    check_dims(obs.dim(), rho.dim())?;
    let basis = obs.eigenbasis();
    let m = rho.matrix();
    let n = obs.dim();
    let probs = (0..n)
        .map(|i| {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for r in 0..n {
                let mut row = num_complex::Complex64::new(0.0, 0.0);
                for c in 0..n {
                    row += m[(r, c)] * basis[(c, i)];
                }
                acc += basis[(r, i)].conj() * row;
            }
            debug_assert!(acc.im.abs() < 1e-10);
            acc.re.clamp(0.0, 1.0)
        })
        .collect();
    Ok(probs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxProbability {
    pub value: f64,
    /// Smallest index attaining the maximum.
    pub index: usize,
}

/// `P_{A;ρ} = max_i p_i(A;ρ)`.
pub fn max_probability(obs: &ProjectiveObservable, rho: &DensityMatrix) -> Result<MaxProbability> {
    let probs = outcome_probabilities(obs, rho)?;
    Ok(argmax(&probs))
}

fn argmax(values: &[f64]) -> MaxProbability {
    let mut best = MaxProbability { value: values[0], index: 0 };
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > best.value {
            best = MaxProbability { value: v, index: i };
        }
    }
    best
}

/// `c = max_{ij} |⟨a_i|b_j⟩|`, clamped to `[0, 1]`.
pub fn overlap(a: &ProjectiveObservable, b: &ProjectiveObservable) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let cross = a.eigenbasis().adjoint().matmul(b.eigenbasis())?;
    let c = cross.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(c.clamp(0.0, 1.0))
}

/// `max_{ij} √Tr(Π^A_i Π^B_j)`, evaluated from the projectors themselves.
pub fn overlap_via_projectors(a: &ProjectiveObservable, b: &ProjectiveObservable) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let n = a.dim();
    let pa: Vec<_> = (0..n).map(|i| crate::states::projector(a, i)).collect::<Result<_>>()?;
    let pb: Vec<_> = (0..n).map(|j| crate::states::projector(b, j)).collect::<Result<_>>()?;
    let mut best: f64 = 0.0;
    for p in &pa {
        for q in &pb {
            let tr = p.matrix().matmul(q.matrix())?.trace().re;
            best = best.max(tr.max(0.0).sqrt());
        }
    }
    Ok(best.clamp(0.0, 1.0))
}

pub fn uncertainty_measure(kind: MetricKind, obs: &ProjectiveObservable, rho: &DensityMatrix) -> Result<f64> {
    apply_fn(&kind, max_probability(obs, rho)?.value)
}

/// The state-dependent inputs of the relation: both maximal probabilities
/// and the basis overlap. Shared by every metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub p_max_a: MaxProbability,
    pub p_max_b: MaxProbability,
    pub overlap_c: f64,
}

pub fn measure(
    a: &ProjectiveObservable,
    b: &ProjectiveObservable,
    rho: &DensityMatrix,
) -> Result<Measurement> {
    check_dims(a.dim(), b.dim())?;
    Ok(Measurement {
        p_max_a: max_probability(a, rho)?,
        p_max_b: max_probability(b, rho)?,
        overlap_c: overlap(a, b)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct URReport {
    pub p_max_a: f64,
    pub p_max_b: f64,
    pub u_a: f64,
    pub u_b: f64,
    pub overlap_c: f64,
    pub bound: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Finding {
    Holds,
    /// `slack < -tolerance`. For valid inputs this indicates a numerical or
    /// implementation defect, never an input error.
    Violation { slack: f64 },
}

impl URReport {
    pub fn from_measurement(f: &(impl DecreasingFn + ?Sized), m: &Measurement) -> Result<Self> {
        let u_a = apply_fn(f, m.p_max_a.value)?;
        let u_b = apply_fn(f, m.p_max_b.value)?;
        let bound = apply_fn(f, m.overlap_c * m.overlap_c)?;
        Ok(Self {
            p_max_a: m.p_max_a.value,
            p_max_b: m.p_max_b.value,
            u_a,
            u_b,
            overlap_c: m.overlap_c,
            bound,
            slack: u_a + u_b - bound,
        })
    }

    pub fn finding(&self, tolerance: f64) -> Finding {
        if self.slack < -tolerance {
            Finding::Violation { slack: self.slack }
        } else {
            Finding::Holds
        }
    }

    /// Re-checks the field relations against `f`:
    /// `u = f(p)`, `bound = f(c²)`, `slack = u_a + u_b − bound`.
    pub fn is_consistent_with(&self, f: &(impl DecreasingFn + ?Sized), tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol;
        close(self.u_a, f.eval(self.p_max_a))
            && close(self.u_b, f.eval(self.p_max_b))
            && close(self.bound, f.eval(self.overlap_c * self.overlap_c))
            && close(self.slack, self.u_a + self.u_b - self.bound)
    }

    /// Bures relation in the normalisation
    /// `√(1 − √P_A) + √(1 − √P_B) ≥ √(1 − c)`, i.e. the Bures-kind report
    /// divided by `√2`. Returns `(lhs, rhs)`.
    pub fn bures_halved(&self) -> (f64, f64) {
        let lhs = (1.0 - self.p_max_a.sqrt()).max(0.0).sqrt() + (1.0 - self.p_max_b.sqrt()).max(0.0).sqrt();
        let rhs = (1.0 - self.overlap_c).max(0.0).sqrt();
        (lhs, rhs)
    }
}

/// Evaluates `U(A;ρ) + U(B;ρ) ≥ f(c²)` for one of the named metrics.
/// A negative slack is reported, not raised.
pub fn check_ur(
    kind: MetricKind,
    a: &ProjectiveObservable,
    b: &ProjectiveObservable,
    rho: &DensityMatrix,
) -> Result<URReport> {
    check_ur_with(&kind, a, b, rho)
}

pub fn check_ur_with(
    f: &(impl DecreasingFn + ?Sized),
    a: &ProjectiveObservable,
    b: &ProjectiveObservable,
    rho: &DensityMatrix,
) -> Result<URReport> {
    URReport::from_measurement(f, &measure(a, b, rho)?)
}

/// Probability interval `[1/N − guard, 1]` every maximal probability lies in.
pub fn probability_floor(dim: usize) -> f64 {
    1.0 / dim as f64 - Tolerances::DEFAULT.guard
}
