//! Numerical tolerances shared by every module.
//!
//! All values are absolute unless the field says otherwise.

/// Tolerance record. [`Tolerances::DEFAULT`] is what the free functions of
/// this crate use; the `*_with` variants accept a custom record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max element of `|H - H†|` accepted as Hermitian.
    pub hermitian: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm falls below this
    /// value times `max(1, ‖H‖_F)`.
    pub jacobi_off: f64,
    /// Maximum number of cyclic Jacobi sweeps.
    pub max_sweeps: usize,
    /// Eigenvalues in `[-psd_clamp, 0)` are clamped to zero; anything lower
    /// is reported as `NotPsd`.
    pub psd_clamp: f64,
    /// Eigenvalues with magnitude below `spectral_noise · N · ε · max|λ|` are
    /// round-off and are treated as exact zeros by square-root routines.
    pub spectral_noise: f64,
    /// Eigenvalues above this count toward the rank of a density matrix.
    pub rank: f64,
    /// Unit-trace check for density matrices.
    pub trace: f64,
    /// Unit-norm check for pure states.
    pub norm: f64,
    /// Orthonormality check for observable eigenbases.
    pub orthonormal: f64,
    /// Guard band around `[0, 1]` for fidelities and probabilities.
    pub guard: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        jacobi_off: 1e-12,
        max_sweeps: 100,
        psd_clamp: 1e-10,
        spectral_noise: 64.0,
        rank: 1e-10,
        trace: 1e-10,
        norm: 1e-12,
        orthonormal: 1e-10,
        guard: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Default tolerance for counting a relation violation (`slack < -tol`).
pub const UR_TOLERANCE: f64 = 1e-9;
