//! Quantum-state data model and seeded samplers.
//!
//! Composite vectors use the system-major flat index `n·K + k` for the
//! amplitude of `|n⟩ ⊗ |k⟩`, where `K` is the auxiliary dimension.
//!
//! Random objects come from ChaCha20 streams seeded with [`rng_for`]. Sweeps
//! derive per-trial seeds with [`stream_seed`]: `seed ⊕ splitmix64(stream)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_dims, hermitian_eig, ComplexMatrix, ONE, ZERO};
use crate::tolerances::Tolerances;

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureStateRepr", into = "PureStateRepr")]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Fails unless the Euclidean norm is 1 within the configured tolerance.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty state vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = vector_norm(&amplitudes);
        if (norm - 1.0).abs() > Tolerances::DEFAULT.norm {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a non-zero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vector_norm(&amplitudes);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("cannot normalise a zero vector".into()));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amplitudes: amps })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
                .expect("same vector")
                .hermitian_part(),
        }
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Serialize, Deserialize)]
struct PureStateRepr {
    dim: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<PureStateRepr> for PureState {
    type Error = Error;

    fn try_from(repr: PureStateRepr) -> Result<Self> {
        check_dims(repr.dim, repr.amplitudes.len())?;
        Self::new(repr.amplitudes.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<PureState> for PureStateRepr {
    fn from(s: PureState) -> Self {
        Self { dim: s.dim(), amplitudes: s.amplitudes.iter().map(|z| [z.re, z.im]).collect() }
    }
}

/// Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity. The stored matrix is
    /// the exact Hermitian part of the input.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > Tolerances::DEFAULT.hermitian {
            return Err(Error::NotHermitian { deviation });
        }
        let rho = Self::from_matrix_unchecked(matrix);
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix: matrix.hermitian_part() }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(probs))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::from_real_diagonal(&vec![1.0 / dim as f64; dim]) }
    }

    /// Re-checks every invariant.
    pub fn validate(&self) -> Result<()> {
        let tol = Tolerances::DEFAULT;
        if self.matrix.dim() == 0 {
            return Err(Error::InvalidState("zero-dimensional density matrix".into()));
        }
        let deviation = self.matrix.hermitian_deviation();
        if deviation > tol.hermitian {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = self.matrix.trace();
        if (trace.re - 1.0).abs() > tol.trace || trace.im.abs() > tol.trace {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let eig = hermitian_eig(&self.matrix)?;
        let min = eig.eigenvalues[0];
        if min < -tol.psd_clamp {
            return Err(Error::NotPsd { eigenvalue: min });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Number of eigenvalues above the rank threshold.
    pub fn rank(&self) -> Result<usize> {
        let eig = hermitian_eig(&self.matrix)?;
        Ok(eig.eigenvalues.iter().filter(|&&l| l > Tolerances::DEFAULT.rank).count())
    }
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    dim: usize,
    matrix: ComplexMatrix,
}

impl TryFrom<DensityRepr> for DensityMatrix {
    type Error = Error;

    fn try_from(repr: DensityRepr) -> Result<Self> {
        check_dims(repr.dim, repr.matrix.dim())?;
        Self::new(repr.matrix)
    }
}

impl From<DensityMatrix> for DensityRepr {
    fn from(rho: DensityMatrix) -> Self {
        Self { dim: rho.dim(), matrix: rho.matrix }
    }
}

/// Non-degenerate observable, represented by its orthonormal eigenbasis
/// (column `i` is `|a_i⟩`). Eigenvalue labels never enter any formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ObservableRepr", into = "ObservableRepr")]
pub struct ProjectiveObservable {
    eigenbasis: ComplexMatrix,
}

impl ProjectiveObservable {
    pub fn new(eigenbasis: ComplexMatrix) -> Result<Self> {
        let n = eigenbasis.dim();
        if n == 0 {
            return Err(Error::InvalidState("zero-dimensional observable".into()));
        }
        let gram = eigenbasis.adjoint().matmul(&eigenbasis)?;
        let dev = gram.max_abs_diff(&ComplexMatrix::identity(n))?;
        if dev > Tolerances::DEFAULT.orthonormal {
            return Err(Error::InvalidState(format!(
                "eigenbasis columns are not orthonormal (max |E†E - I| = {dev:e})"
            )));
        }
        Ok(Self { eigenbasis })
    }

    pub fn computational(dim: usize) -> Self {
        Self { eigenbasis: ComplexMatrix::identity(dim) }
    }

    /// Discrete Fourier basis: `|f_k⟩ = Σ_j ω^{jk} |j⟩ / √N`.
    /// For `N = 2` this is the Hadamard basis.
    pub fn fourier(dim: usize) -> Self {
        let n = dim as f64;
        let norm = 1.0 / n.sqrt();
        let eigenbasis = ComplexMatrix::from_fn(dim, |j, k| {
            let angle = 2.0 * std::f64::consts::PI * ((j * k) % dim) as f64 / n;
            Complex64::from_polar(norm, angle)
        });
        Self { eigenbasis }
    }

    pub fn dim(&self) -> usize {
        self.eigenbasis.dim()
    }

    pub fn eigenbasis(&self) -> &ComplexMatrix {
        &self.eigenbasis
    }

    /// `|a_i⟩`.
    pub fn eigenvector(&self, i: usize) -> Result<PureState> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim() });
        }
        Ok(PureState { amplitudes: self.eigenbasis.column(i) })
    }
}

#[derive(Serialize, Deserialize)]
struct ObservableRepr {
    dim: usize,
    eigenbasis: ComplexMatrix,
}

impl TryFrom<ObservableRepr> for ProjectiveObservable {
    type Error = Error;

    fn try_from(repr: ObservableRepr) -> Result<Self> {
        check_dims(repr.dim, repr.eigenbasis.dim())?;
        Self::new(repr.eigenbasis)
    }
}

impl From<ProjectiveObservable> for ObservableRepr {
    fn from(obs: ProjectiveObservable) -> Self {
        Self { dim: obs.dim(), eigenbasis: obs.eigenbasis }
    }
}

/// JSON fixture file: one state or observable, tagged by `"type"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Fixture {
    Density(DensityMatrix),
    Pure(PureState),
    Observable(ProjectiveObservable),
}

impl Fixture {
    /// Density matrix of a state fixture (pure states become `|ψ⟩⟨ψ|`).
    pub fn into_density(self) -> Result<DensityMatrix> {
        match self {
            Fixture::Density(rho) => Ok(rho),
            Fixture::Pure(psi) => Ok(psi.to_density()),
            Fixture::Observable(_) => {
                Err(Error::InvalidState("expected a state, found an observable".into()))
            }
        }
    }

    pub fn into_observable(self) -> Result<ProjectiveObservable> {
        match self {
            Fixture::Observable(obs) => Ok(obs),
            _ => Err(Error::InvalidState("expected an observable, found a state".into())),
        }
    }
}

/// Rank-one projector `|a_i⟩⟨a_i|`.
pub fn projector(obs: &ProjectiveObservable, i: usize) -> Result<DensityMatrix> {
    Ok(obs.eigenvector(i)?.to_density())
}

/// Spectral purification `Σ_k √λ_k |v_k⟩ ⊗ |e_k⟩` with the minimal auxiliary
/// dimension (the rank of `rho`). Eigenpairs are taken largest first.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let rank = rho.rank()?;
    purify_padded(rho, rank)
}

/// Spectral purification embedded in an auxiliary space of dimension
/// `aux_dim ≥ rank(rho)`.
pub fn purify_padded(rho: &DensityMatrix, aux_dim: usize) -> Result<PureState> {
    let tol = Tolerances::DEFAULT;
    let eig = hermitian_eig(rho.matrix())?;
    if let Some(&min) = eig.eigenvalues.first() {
        if min < -tol.psd_clamp {
            return Err(Error::NotPsd { eigenvalue: min });
        }
    }
    let mut kept: Vec<usize> = (0..rho.dim()).filter(|&k| eig.eigenvalues[k] > tol.rank).collect();
    kept.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
    if aux_dim < kept.len() {
        return Err(Error::Domain(format!(
            "auxiliary dimension {aux_dim} is smaller than the rank {}",
            kept.len()
        )));
    }

    let n = rho.dim();
    let mut amps = vec![ZERO; n * aux_dim];
    for (k, &idx) in kept.iter().enumerate() {
        let weight = eig.eigenvalues[idx].sqrt();
        for row in 0..n {
            amps[row * aux_dim + k] = eig.eigenvectors[(row, idx)] * weight;
        }
    }
    // dropped eigenvalues (≤ rank threshold) leave the norm short by at most N·1e-10
    PureState::normalized(amps)
}

/// `Tr_aux |ψ⟩⟨ψ|` for `ψ ∈ C^{sys_dim} ⊗ C^{aux_dim}`.
pub fn partial_trace_aux(psi: &PureState, sys_dim: usize, aux_dim: usize) -> Result<DensityMatrix> {
    check_dims(sys_dim * aux_dim, psi.dim())?;
    let a = psi.amplitudes();
    let matrix = ComplexMatrix::from_fn(sys_dim, |m, n| {
        let rm = &a[m * aux_dim..(m + 1) * aux_dim];
        let rn = &a[n * aux_dim..(n + 1) * aux_dim];
        rm.iter().zip(rn).map(|(x, y)| x * y.conj()).sum()
    });
    Ok(DensityMatrix::from_matrix_unchecked(matrix))
}

/// Applies a unitary to the auxiliary factor: `(I ⊗ U)|ψ⟩`.
pub fn apply_aux_unitary(
    psi: &PureState,
    sys_dim: usize,
    unitary: &ComplexMatrix,
) -> Result<PureState> {
    let aux = unitary.dim();
    check_dims(sys_dim * aux, psi.dim())?;
    let mut out = Vec::with_capacity(psi.dim());
    for block in psi.amplitudes().chunks(aux) {
        out.extend(unitary.apply(block)?);
    }
    Ok(PureState { amplitudes: out })
}

/// SplitMix64 finaliser.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sub-stream `stream` of `seed`.
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    seed ^ splitmix64(stream)
}

pub fn rng_for(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn gaussian_column(rng: &mut ChaCha20Rng, n: usize) -> Vec<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * scale, im * scale)
        })
        .collect()
}

fn normalize_in_place(v: &mut [Complex64]) {
    let norm = vector_norm(v);
    for z in v.iter_mut() {
        *z /= norm;
    }
}

/// Haar-random unitary: a Ginibre matrix (drawn column by column)
/// orthonormalised by modified Gram-Schmidt, which yields the QR factor with
/// a real positive triangular diagonal.
pub fn sample_haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng_for(seed);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v = gaussian_column(&mut rng, dim);
        // two projection passes keep the columns orthogonal to ~1e-15
        for _ in 0..2 {
            for q in &cols {
                let proj = inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        normalize_in_place(&mut v);
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, |r, c| cols[c][r])
}

/// Haar-random pure state: the first column of
/// `sample_haar_unitary(dim, seed)`, without building the rest.
pub fn sample_pure(dim: usize, seed: u64) -> PureState {
    let mut rng = rng_for(seed);
    let mut v = gaussian_column(&mut rng, dim);
    normalize_in_place(&mut v);
    PureState { amplitudes: v }
}

/// Reduced state of a Haar-random pure state on `C^dim ⊗ C^aux_dim`.
/// `aux_dim = 1` gives pure states, `aux_dim ≥ dim` generic full-rank ones.
pub fn sample_mixed(dim: usize, aux_dim: usize, seed: u64) -> DensityMatrix {
    let psi = sample_pure(dim * aux_dim, seed);
    partial_trace_aux(&psi, dim, aux_dim).expect("dimensions agree by construction")
}

pub fn sample_observable(dim: usize, seed: u64) -> ProjectiveObservable {
    ProjectiveObservable { eigenbasis: sample_haar_unitary(dim, seed) }
}
