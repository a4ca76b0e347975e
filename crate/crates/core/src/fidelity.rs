//! Uhlmann fidelity.
//!
//! [`fidelity`] evaluates `(Tr √(√ρ σ √ρ))²` literally. [`fidelity_oracle`]
//! evaluates the squared trace norm `‖√ρ √σ‖₁²`, the closed form of the
//! maximal purification overlap; the two share only the eigensolver.

use crate::error::Result;
use crate::linalg::{check_dims, hermitian_eig, nuclear_norm, psd_roots, psd_sqrt, ComplexMatrix};
use crate::states::{
    apply_aux_unitary, purify_padded, sample_haar_unitary, stream_seed, DensityMatrix, PureState,
};
use crate::tolerances::Tolerances;

/// `F(ρ,σ) = (Tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    fidelity_from_sqrt(&sqrt_rho, sigma)
}

/// Same as [`fidelity`] with `√ρ` already computed.
pub fn fidelity_from_sqrt(sqrt_rho: &ComplexMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(sqrt_rho.dim(), sigma.dim())?;
    let inner = sqrt_rho.matmul(sigma.matrix())?.matmul(sqrt_rho)?.hermitian_part();
    // Tr √M is the sum of the square roots of the spectrum of M
    let eig = hermitian_eig(&inner)?;
    let trace: f64 = psd_roots(&eig.eigenvalues, &Tolerances::DEFAULT)?.iter().sum();
    Ok(clamp_unit(trace * trace))
}

/// `|⟨ψ|φ⟩|²`.
pub fn fidelity_pure_pure(psi: &PureState, phi: &PureState) -> Result<f64> {
    Ok(clamp_unit(psi.inner(phi)?.norm_sqr()))
}

/// `⟨ψ|σ|ψ⟩` for a pure `ψ`.
pub fn fidelity_pure_mixed(psi: &PureState, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(psi.dim(), sigma.dim())?;
    let sigma_psi = sigma.matrix().apply(psi.amplitudes())?;
    let value = crate::states::inner(psi.amplitudes(), &sigma_psi);
    debug_assert!(value.im.abs() < 1e-10, "⟨ψ|σ|ψ⟩ has imaginary part {}", value.im);
    Ok(clamp_unit(value.re))
}

/// `‖√ρ √σ‖₁²`, clamped to `[0, 1]`.
pub fn fidelity_oracle(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let product = psd_sqrt(rho.matrix())?.matmul(&psd_sqrt(sigma.matrix())?)?;
    let norm = nuclear_norm(&product)?;
    Ok(clamp_unit(norm * norm))
}

/// Random search over purifications of `sigma` against a fixed purification
/// of `rho`.
///
/// Both spectral purifications are embedded in an auxiliary space of
/// dimension `max(rank ρ, rank σ)`; each trial applies a Haar-random unitary
/// to the auxiliary factor of `σ`'s purification and records the squared
/// overlap. The returned maximum never exceeds `F(ρ,σ)` and approaches it as
/// `trials` grows.
pub fn purification_overlap_search(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let n = rho.dim();
    let aux = rho.rank()?.max(sigma.rank()?);
    let psi = purify_padded(rho, aux)?;
    let phi = purify_padded(sigma, aux)?;

    let mut best: f64 = 0.0;
    for t in 0..trials.max(1) {
        let u = sample_haar_unitary(aux, stream_seed(seed, t as u64));
        let rotated = apply_aux_unitary(&phi, n, &u)?;
        best = best.max(psi.inner(&rotated)?.norm_sqr());
    }
    Ok(clamp_unit(best))
}

fn clamp_unit(x: f64) -> f64 {
    debug_assert!(
        x > -Tolerances::DEFAULT.guard && x < 1.0 + 1e-6,
        "fidelity {x} far outside [0, 1]"
    );
    x.clamp(0.0, 1.0)
}
