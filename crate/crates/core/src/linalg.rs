//! Dense complex matrix kernel.
//!
//! Everything here works on small square matrices (a few dozen rows at most).
//! The eigensolver is a cyclic Jacobi method for Hermitian matrices; the PSD
//! square root and the nuclear norm are spectral functions built on top of it.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
///
/// Serialises as nested rows of `[re, im]` pairs.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>", into = "Vec<Vec<[f64; 2]>>")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries. Fails if `data.len()` is not a
    /// perfect square or any entry is not finite.
    pub fn from_row_major(data: Vec<Complex64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(Error::InvalidMatrix(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        let m = Self { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::InvalidMatrix(format!(
                "row of length {} in a matrix with {} rows",
                bad.len(),
                dim
            )));
        }
        Self::from_row_major(rows.concat())
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Result<Self> {
        check_dims(u.len(), v.len())?;
        Ok(Self::from_fn(u.len(), |r, c| u[r] * v[c].conj()))
    }

    /// `V · diag(values) · V†`.
    pub fn from_spectrum(vectors: &ComplexMatrix, values: &[f64]) -> Result<Self> {
        check_dims(vectors.dim, values.len())?;
        let n = vectors.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = ZERO;
                for (k, &lambda) in values.iter().enumerate() {
                    acc += vectors[(r, k)] * vectors[(c, k)].conj() * lambda;
                }
                out[(r, c)] = acc;
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        check_dims(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                let out_row = &mut out.data[r * n..(r + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `M·v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dims(self.dim, v.len())?;
        Ok(self
            .rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<Self> {
        check_dims(self.dim, rhs.dim)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<Self> {
        check_dims(self.dim, rhs.dim)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Largest element-wise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> Result<f64> {
        check_dims(self.dim, rhs.dim)?;
        Ok(self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max element of `|H - H†|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// `(H + H†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for r in 0..n {
            out[(r, r)] = Complex64::new(self[(r, r)].re, 0.0);
            for c in r + 1..n {
                let z = (self[(r, c)] + self[(c, r)].conj()) * 0.5;
                out[(r, c)] = z;
                out[(c, r)] = z.conj();
            }
        }
        out
    }

    fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidMatrix("non-finite entry".into()))
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> =
                row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<[f64; 2]>>> for ComplexMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<[f64; 2]>>) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        Self::from_rows(&rows)
    }
}

impl From<ComplexMatrix> for Vec<Vec<[f64; 2]>> {
    fn from(m: ComplexMatrix) -> Self {
        m.rows().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub fn mat_trace(m: &ComplexMatrix) -> Complex64 {
    m.trace()
}

pub fn mat_adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

/// Eigenvalues in ascending order; column `k` of `eigenvectors` belongs to
/// `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        ComplexMatrix::from_spectrum(&self.eigenvectors, &self.eigenvalues)
            .expect("decomposition dimensions agree")
    }
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig_with(h, &Tolerances::DEFAULT)
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation that zeroes it.
pub fn hermitian_eig_with(h: &ComplexMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    h.check_finite()?;
    let deviation = h.hermitian_deviation();
    if deviation > tol.hermitian {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol.jacobi_off * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == tol.max_sweeps {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort: ties keep their original index order
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += a[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let r = b.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let phase = b / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] acting on (p, q)
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(app - t * r, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * r, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_map(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let values: Vec<f64> = eig.eigenvalues.iter().map(|&l| f(l)).collect();
    Ok(ComplexMatrix::from_spectrum(&eig.eigenvectors, &values)?.hermitian_part())
}

/// Principal square root of a positive-semidefinite matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let tol = Tolerances::DEFAULT;
    let eig = hermitian_eig(m)?;
    let roots = psd_roots(&eig.eigenvalues, &tol)?;
    Ok(ComplexMatrix::from_spectrum(&eig.eigenvectors, &roots)?.hermitian_part())
}

/// Square roots of a spectrum. Tiny negatives are clamped to zero and
/// round-off level eigenvalues are zeroed, since `√ε` would otherwise leak
/// ~1e-8 into every trace of the result.
pub(crate) fn psd_roots(eigenvalues: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let floor = spectral_noise_floor(eigenvalues, tol);
    eigenvalues
        .iter()
        .map(|&l| {
            if l < -tol.psd_clamp {
                Err(Error::NotPsd { eigenvalue: l })
            } else if l <= floor {
                Ok(0.0)
            } else {
                Ok(l.sqrt())
            }
        })
        .collect()
}

pub(crate) fn spectral_noise_floor(eigenvalues: &[f64], tol: &Tolerances) -> f64 {
    let max = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    tol.spectral_noise * eigenvalues.len() as f64 * f64::EPSILON * max
}

/// Trace norm `Tr|M|`: the sum of square roots of the eigenvalues of `M†M`.
///
/// Gram eigenvalues at round-off level (relative to the largest) count as
/// zero; their square roots would otherwise add `O(√ε)` to the norm.
pub fn nuclear_norm(m: &ComplexMatrix) -> Result<f64> {
    m.check_finite()?;
    let gram = m.adjoint().matmul(m)?.hermitian_part();
    let eig = hermitian_eig(&gram)?;
    let floor = spectral_noise_floor(&eig.eigenvalues, &Tolerances::DEFAULT);
    Ok(eig.eigenvalues.iter().filter(|&&l| l > floor).map(|&l| l.sqrt()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![ZERO, c(0.0, -1.0)], vec![c(0.0, 1.0), ZERO]]).unwrap()
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0]);
        let gram = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn diagonal_eigenvalues() {
        let eig = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[0.6, 0.4])).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.4, 0.6]);
        // columns permuted in lockstep
        assert_eq!(eig.eigenvectors[(1, 0)], ONE);
        assert_eq!(eig.eigenvectors[(0, 1)], ONE);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        // characteristic polynomial λ² - 1
        let x = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap();
        let eig = hermitian_eig(&x).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().max_abs_diff(&x).unwrap() < 1e-14);
    }

    #[test]
    fn complex_pivot_is_diagonalised() {
        let y = pauli_y();
        let eig = hermitian_eig(&y).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        for k in 0..2 {
            let vk = eig.eigenvectors.column(k);
            let hv = y.apply(&vk).unwrap();
            for (a, b) in hv.iter().zip(&vk) {
                assert!((a - b * eig.eigenvalues[k]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn three_by_three_complex() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.0)],
            vec![c(0.0, -0.5), c(0.3, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eig(&h).unwrap();
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert!(eig.reconstruct().max_abs_diff(&h).unwrap() < 1e-13);
        let trace: f64 = eig.eigenvalues.iter().sum();
        assert!((trace - 1.5).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sweep_limit_reports_no_convergence() {
        let tol = Tolerances { max_sweeps: 0, ..Tolerances::DEFAULT };
        assert!(matches!(
            hermitian_eig_with(&pauli_y(), &tol),
            Err(Error::NoConvergence { sweeps: 0, .. })
        ));
        // already diagonal: converges without a sweep
        assert!(hermitian_eig_with(&ComplexMatrix::identity(3), &tol).is_ok());
    }

    #[test]
    fn sqrt_examples() {
        let id = ComplexMatrix::identity(3);
        assert!(psd_sqrt(&id).unwrap().max_abs_diff(&id).unwrap() < 1e-15);

        let s = psd_sqrt(&ComplexMatrix::from_real_diagonal(&[4.0, 9.0])).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[2.0, 3.0]);
        assert!(s.max_abs_diff(&expected).unwrap() < 1e-15);

        let proj = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(psd_sqrt(&proj).unwrap().max_abs_diff(&proj).unwrap() < 1e-15);
    }

    #[test]
    fn sqrt_clamps_round_off_but_rejects_negative() {
        let tiny = ComplexMatrix::from_real_diagonal(&[1.0, -1e-12]);
        let s = psd_sqrt(&tiny).unwrap();
        assert_eq!(s[(1, 1)], ZERO);

        let neg = ComplexMatrix::from_real_diagonal(&[1.0, -1e-6]);
        assert!(matches!(psd_sqrt(&neg), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn nuclear_norm_examples() {
        assert!((nuclear_norm(&ComplexMatrix::identity(2)).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(nuclear_norm(&ComplexMatrix::zeros(3)).unwrap(), 0.0);
        // normal matrix: singular values are |eigenvalues|
        let m = ComplexMatrix::from_real_diagonal(&[-3.0, 4.0]);
        assert!((nuclear_norm(&m).unwrap() - 7.0).abs() < 1e-14);
    }

    #[test]
    fn nuclear_norm_of_non_normal_matrix() {
        // [[0, 1], [0, 0]] has singular values (1, 0)
        let m = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!((nuclear_norm(&m).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(
            mat_mul(&a, &b),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn trace_and_adjoint() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, 0.0)], vec![ZERO, c(0.5, -1.0)]])
            .unwrap();
        assert_eq!(mat_trace(&m), c(1.5, 1.0));
        let adj = mat_adjoint(&m);
        assert_eq!(adj[(1, 0)], c(3.0, 0.0));
        assert_eq!(adj[(0, 0)], c(1.0, -2.0));
    }

    #[test]
    fn rejects_ragged_or_non_finite() {
        assert!(ComplexMatrix::from_rows(&[vec![ONE], vec![ONE, ONE]]).is_err());
        assert!(ComplexMatrix::from_row_major(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::from_row_major(vec![ONE; 3]).is_err());
    }

    #[test]
    fn json_layout_is_nested_rows_of_pairs() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), ZERO]])
            .unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[[1.0,0.0],[0.0,-1.0]],[[0.0,1.0],[0.0,0.0]]]");
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
