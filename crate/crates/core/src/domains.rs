//! Feasibility domains of the pair `(P_A, P_B)`.
//!
//! For overlap `c` and metric `λ` the relation `f(P_A) + f(P_B) ≥ f(c²)`
//! admits exactly the points of `[1/N, 1]²` with `P_B ≤ g_{λ,c}(P_A)`, where
//! `g = 1` on `[1/N, c²]` and `g = h_{λ,c}` on `[c², 1]`.
//!
//! The curved branch `h` is available twice: in closed form
//! ([`h_boundary`]) and as the inverted positive root of a quadratic in a
//! substitution variable `ξ` ([`boundary_from_quadratic`]).
//!
//! | metric | `ξ`            | `a₁`            | `a₀`          |
//! |--------|----------------|-----------------|---------------|
//! | angle  | `√(1−P_B)`     | `2c√(1−P_A)`    | `c² − P_A`    |
//! | Bures  | `√(2−2√P_B)`   | `2√(2−2√P_A)`   | `2(c − √P_A)` |
//! | RI     | `√(1−P_B)`     | `2√(1−P_A)`     | `c² − P_A`    |
//!
//! The Bures row follows from completing the square in
//! `√(2−2√P_A) + ξ ≥ √(2−2c)`: `(ξ + u_A)² ≥ 2 − 2c` with `u_A² = 2 − 2√P_A`,
//! so `a₀ = u_A² − (2 − 2c) = 2(c − √P_A)`. Note that `a₀` depends on `P_A`,
//! not on `P_B`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::tolerances::Tolerances;

/// One `(λ, c, N)` configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: MetricKind,
    pub overlap_c: f64,
    pub dim: usize,
}

impl DomainSpec {
    /// Requires `N ≥ 2` and `1/√N − guard ≤ c ≤ 1 + guard`.
    pub fn new(kind: MetricKind, overlap_c: f64, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let guard = Tolerances::DEFAULT.guard;
        let lower = 1.0 / (dim as f64).sqrt();
        if !(overlap_c >= lower - guard && overlap_c <= 1.0 + guard) {
            return Err(Error::Domain(format!(
                "overlap {overlap_c} outside [1/√N, 1] = [{lower}, 1] for N = {dim}"
            )));
        }
        Ok(Self { kind, overlap_c: overlap_c.min(1.0), dim })
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::Domain(format!("dimension {dim} < 2")));
    }
    Ok(())
}

fn check_overlap(c: f64) -> Result<f64> {
    let guard = Tolerances::DEFAULT.guard;
    if !(c > 0.0 && c <= 1.0 + guard) {
        return Err(Error::Domain(format!("overlap {c} outside (0, 1]")));
    }
    Ok(c.min(1.0))
}

/// Closed-form curved branch `h_{λ,c}(p)` for `p ∈ [c², 1]`, clamped to
/// `[0, 1]`.
pub fn h_boundary(kind: MetricKind, c: f64, p: f64) -> Result<f64> {
    let c = check_overlap(c)?;
    let guard = Tolerances::DEFAULT.guard;
    let c2 = c * c;
    if !(p >= c2 - guard && p <= 1.0 + guard) {
        return Err(Error::Domain(format!("p = {p} outside the curved branch [{c2}, 1]")));
    }
    let p = p.clamp(c2, 1.0);
    let h = match kind {
        MetricKind::Angle => {
            let s = (1.0 - p).sqrt() * (1.0 - c2).sqrt() + c * p.sqrt();
            s * s
        }
        MetricKind::Bures => {
            let s = p.sqrt() + 2.0 * (1.0 - p.sqrt()).max(0.0).sqrt() * (1.0 - c).sqrt() + c - 1.0;
            s * s
        }
        MetricKind::RootInfidelity => p + 2.0 * (1.0 - p).sqrt() * (1.0 - c2).sqrt() + c2 - 1.0,
    };
    Ok(h.clamp(0.0, 1.0))
}

/// `g_{λ,c}(p)`: `1` for `p ≤ c²`, `h_{λ,c}(p)` above.
pub fn g_boundary(kind: MetricKind, c: f64, p: f64, dim: usize) -> Result<f64> {
    check_dim(dim)?;
    let c = check_overlap(c)?;
    let guard = Tolerances::DEFAULT.guard;
    let floor = 1.0 / dim as f64;
    if !(p >= floor - guard && p <= 1.0 + guard) {
        return Err(Error::Domain(format!("p = {p} outside [1/N, 1] = [{floor}, 1]")));
    }
    if p <= c * c {
        Ok(1.0)
    } else {
        h_boundary(kind, c, p)
    }
}

/// Membership of `(p_a, p_b)` in `D_{λ,c}` with tolerance `guard` on every
/// comparison. Invalid or non-finite input is simply outside.
pub fn in_domain(kind: MetricKind, c: f64, dim: usize, p_a: f64, p_b: f64) -> bool {
    let guard = Tolerances::DEFAULT.guard;
    if dim < 2 || !p_a.is_finite() || !p_b.is_finite() {
        return false;
    }
    let floor = 1.0 / dim as f64;
    let in_box = |p: f64| p >= floor - guard && p <= 1.0 + guard;
    if !in_box(p_a) || !in_box(p_b) {
        return false;
    }
    match g_boundary(kind, c, p_a.clamp(floor, 1.0), dim) {
        Ok(g) => p_b <= g + guard,
        Err(_) => false,
    }
}

/// `ξ² + a₁ξ + a₀ ≥ 0`, the relation rewritten in the substitution variable
/// `ξ` of the metric (see the module table).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub kind: MetricKind,
    /// `ξ` evaluated at the supplied `P_B`.
    pub xi: f64,
    pub a1: f64,
    pub a0: f64,
}

impl QuadraticForm {
    pub fn xi_semantics(&self) -> &'static str {
        xi_semantics(self.kind)
    }

    pub fn discriminant(&self) -> f64 {
        self.a1 * self.a1 - 4.0 * self.a0
    }

    /// `(ξ₋, ξ₊)`.
    pub fn roots(&self) -> (f64, f64) {
        roots(self.a1, self.a0)
    }

    pub fn value(&self) -> f64 {
        self.xi * self.xi + self.a1 * self.xi + self.a0
    }

    /// Whether the relation holds at `ξ`, within `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.value() >= -tol
    }
}

pub fn xi_semantics(kind: MetricKind) -> &'static str {
    match kind {
        MetricKind::Angle | MetricKind::RootInfidelity => "xi = sqrt(1 - P_B)",
        MetricKind::Bures => "xi = sqrt(2 - 2 sqrt(P_B))",
    }
}

fn check_unit(name: &str, x: f64) -> Result<f64> {
    let guard = Tolerances::DEFAULT.guard;
    if !(x >= -guard && x <= 1.0 + guard) {
        return Err(Error::Domain(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

fn coefficients(kind: MetricKind, c: f64, p_a: f64) -> (f64, f64) {
    match kind {
        MetricKind::Angle => (2.0 * c * (1.0 - p_a).sqrt(), c * c - p_a),
        MetricKind::RootInfidelity => (2.0 * (1.0 - p_a).sqrt(), c * c - p_a),
        MetricKind::Bures => (2.0 * (2.0 - 2.0 * p_a.sqrt()).max(0.0).sqrt(), 2.0 * (c - p_a.sqrt())),
    }
}

fn xi_of(kind: MetricKind, p_b: f64) -> f64 {
    match kind {
        MetricKind::Angle | MetricKind::RootInfidelity => (1.0 - p_b).sqrt(),
        MetricKind::Bures => (2.0 - 2.0 * p_b.sqrt()).max(0.0).sqrt(),
    }
}

fn p_b_of_xi(kind: MetricKind, xi: f64) -> f64 {
    match kind {
        MetricKind::Angle | MetricKind::RootInfidelity => 1.0 - xi * xi,
        MetricKind::Bures => {
            let s = 1.0 - xi * xi / 2.0;
            s * s
        }
    }
}

fn roots(a1: f64, a0: f64) -> (f64, f64) {
    let disc = (a1 * a1 - 4.0 * a0).max(0.0).sqrt();
    // a₁ ≥ 0 for every row, so -a₁ - √disc never cancels; recover the other
    // root from the product ξ₋ξ₊ = a₀
    let lower = (-a1 - disc) / 2.0;
    let upper = if lower != 0.0 { a0 / lower } else { (-a1 + disc) / 2.0 };
    (lower, upper)
}

pub fn quadratic_form(kind: MetricKind, c: f64, p_a: f64, p_b: f64) -> Result<QuadraticForm> {
    let c = check_overlap(c)?;
    let p_a = check_unit("P_A", p_a)?;
    let p_b = check_unit("P_B", p_b)?;
    let (a1, a0) = coefficients(kind, c, p_a);
    Ok(QuadraticForm { kind, xi: xi_of(kind, p_b), a1, a0 })
}

/// Bound on `P_B` from the positive root `ξ₊` of the quadratic, for
/// `p_a ∈ [c², 1]`.
pub fn boundary_from_quadratic(kind: MetricKind, c: f64, p_a: f64) -> Result<f64> {
    let c = check_overlap(c)?;
    let guard = Tolerances::DEFAULT.guard;
    if !(p_a >= c * c - guard && p_a <= 1.0 + guard) {
        return Err(Error::Domain(format!("p_a = {p_a} outside [c², 1]")));
    }
    let p_a = p_a.clamp(c * c, 1.0);
    let (a1, a0) = coefficients(kind, c, p_a);
    let (_, upper) = roots(a1, a0);
    Ok(p_b_of_xi(kind, upper.max(0.0)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub p: f64,
    pub g: f64,
}

/// `n_points` samples of `g` on a uniform grid over `[1/N, 1]`; the last
/// sample sits exactly at `p = 1`.
pub fn region_samples(spec: &DomainSpec, n_points: usize) -> Result<Vec<RegionPoint>> {
    if n_points < 2 {
        return Err(Error::Domain(format!("n_points = {n_points} < 2")));
    }
    let start = 1.0 / spec.dim as f64;
    let step = (1.0 - start) / (n_points - 1) as f64;
    (0..n_points)
        .map(|i| {
            let p = if i == n_points - 1 { 1.0 } else { start + step * i as f64 };
            Ok(RegionPoint { p, g: g_boundary(spec.kind, spec.overlap_c, p, spec.dim)? })
        })
        .collect()
}

/// `region_<kind>_<c>.csv`, `c` in shortest round-trip decimal form.
pub fn region_file_name(spec: &DomainSpec) -> String {
    format!("region_{}_{}.csv", spec.kind.name(), spec.overlap_c)
}

/// CSV with header `p,g`; numbers in shortest round-trip form.
pub fn write_region_csv(mut out: impl Write, points: &[RegionPoint]) -> std::io::Result<()> {
    writeln!(out, "p,g")?;
    for pt in points {
        writeln!(out, "{},{}", pt.p, pt.g)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionData {
    pub spec: DomainSpec,
    pub points: Vec<RegionPoint>,
}
