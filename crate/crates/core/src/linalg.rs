//! Dense complex linear algebra on small matrices, plus closed-form
//! determinant and inverse of rank-two updates of the identity.
//!
//! Matrices here are at most a few dozen rows, so everything is stored as a
//! row-major `Vec<C64>` and factored with textbook LU.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;
use crate::C64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let v = self[(r, c)];
                write!(f, "{:+.6e}{:+.6e}i  ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    /// Column vector `n x 1`.
    pub fn column(v: &[C64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Row vector `1 x n`.
    pub fn row(v: &[C64]) -> Self {
        Self { rows: 1, cols: v.len(), data: v.to_vec() }
    }

    /// `u · ᵗv` (bilinear, no conjugation).
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
    }

    /// Assembles `[[a, b], [c, d]]` from four blocks of compatible shapes.
    pub fn from_blocks(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (r0, c0) = (a.rows, a.cols);
        Self::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < r0, j < c0) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - c0)],
            (false, true) => c[(i - r0, j)],
            (false, false) => d[(i - r0, j - c0)],
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row_vec(&self, r: usize) -> Vec<C64> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col_vec(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_col(&mut self, c: usize, v: &[C64]) {
        assert_eq!(v.len(), self.rows);
        for (r, &x) in v.iter().enumerate() {
            self[(r, c)] = x;
        }
    }

    /// Copy of the `rows x cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(C64::conj).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * k).collect() }
    }

    pub fn scale_re(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Frobenius distance `||self - other||_F`.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||A - B||_F <= abs + rel * max(||A||_F, ||B||_F)`.
    pub fn approx_eq_with(&self, other: &CMatrix, abs: f64, rel: f64) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        let scale = self.frobenius_norm().max(other.frobenius_norm());
        self.distance(other) <= abs + rel * scale
    }

    /// Equality under the crate-wide matrix tolerance pair.
    pub fn approx_eq(&self, other: &CMatrix) -> bool {
        self.approx_eq_with(other, tol::MATRIX_ABS, tol::MATRIX_REL)
    }

    /// Frobenius norm of `M - M*`.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        self.distance(&self.adjoint())
    }

    pub fn try_mul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    fn singular_threshold(&self) -> f64 {
        tol::SINGULAR_REL * self.frobenius_norm().powi(self.rows as i32)
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| lu[a * n + k].norm().total_cmp(&lu[b * n + k].norm()))
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            if pivot == ZERO {
                continue;
            }
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= factor * u;
                }
            }
        }
        Ok(Lu { n, lu, perm, sign, threshold: self.singular_threshold() })
    }

    pub fn det(&self) -> Result<C64> {
        Ok(self.lu()?.det())
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.lu()?.inverse()
    }
}

/// Packed LU factors `P M = L U` (unit lower `L`).
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    sign: f64,
    threshold: f64,
}

impl Lu {
    pub fn det(&self) -> C64 {
        (0..self.n).map(|i| self.lu[i * self.n + i]).product::<C64>() * self.sign
    }

    fn check_regular(&self) -> Result<()> {
        let det = self.det().norm();
        if det < self.threshold || det == 0.0 {
            return Err(Error::Singular { det, threshold: self.threshold });
        }
        Ok(())
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: b.len() });
        }
        self.check_regular()?;
        Ok(self.solve_unchecked(b))
    }

    fn solve_unchecked(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[i * n + k];
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[i * n + k];
                let xk = x[k];
                x[i] -= u * xk;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.check_regular()?;
        let n = self.n;
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![ZERO; n];
        for c in 0..n {
            e.iter_mut().for_each(|x| *x = ZERO);
            e[c] = ONE;
            inv.set_col(c, &self.solve_unchecked(&e));
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_re(-1.0)
    }
}

/// Canonical bilinear pairing `⟨w, z⟩ = Σ w_k z_k`.
pub fn pairing(w: &[C64], z: &[C64]) -> C64 {
    w.iter().zip(z).map(|(a, b)| a * b).sum()
}

/// Hermitian inner product `Σ conj(u_k) v_k`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum()
}

/// The 2x2 matrix of pairings `λ_ij = ⟨W_i, Z_j⟩` attached to the update
/// `Z₁ᵗW₁ + Z₂ᵗW₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda2x2 {
    pub l11: C64,
    pub l12: C64,
    pub l21: C64,
    pub l22: C64,
}

impl Lambda2x2 {
    pub fn new(z1: &[C64], w1: &[C64], z2: &[C64], w2: &[C64]) -> Result<Self> {
        let n = z1.len();
        for v in [w1, z2, w2] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        Ok(Self {
            l11: pairing(w1, z1),
            l12: pairing(w1, z2),
            l21: pairing(w2, z1),
            l22: pairing(w2, z2),
        })
    }

    pub fn trace(&self) -> C64 {
        self.l11 + self.l22
    }

    pub fn det(&self) -> C64 {
        self.l11 * self.l22 - self.l12 * self.l21
    }

    /// `det(1₂ + Λ)`.
    pub fn det_one_plus(&self) -> C64 {
        (ONE + self.l11) * (ONE + self.l22) - self.l12 * self.l21
    }
}

/// The rank-two matrix `Z₁ᵗW₁ + Z₂ᵗW₂`.
pub fn rank2_matrix(z1: &[C64], w1: &[C64], z2: &[C64], w2: &[C64]) -> CMatrix {
    &CMatrix::outer(z1, w1) + &CMatrix::outer(z2, w2)
}

/// `det(u·1ₙ + Z₁ᵗW₁ + Z₂ᵗW₂) = u^{n-2} (u² + u·tr Λ + det Λ)` for `n ≥ 2`.
pub fn rank2_det(u: C64, z1: &[C64], w1: &[C64], z2: &[C64], w2: &[C64]) -> Result<C64> {
    let n = z1.len();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    let lam = Lambda2x2::new(z1, w1, z2, w2)?;
    Ok(u.powi(n as i32 - 2) * (u * u + u * lam.trace() + lam.det()))
}

/// `(1ₙ + Z₁ᵗW₁ + Z₂ᵗW₂)⁻¹` through the 2x2 pairing matrix.
pub fn rank2_inverse(z1: &[C64], w1: &[C64], z2: &[C64], w2: &[C64]) -> Result<CMatrix> {
    let lam = Lambda2x2::new(z1, w1, z2, w2)?;
    let det = lam.det_one_plus();
    let norm = ((ONE + lam.l11).norm_sqr()
        + lam.l12.norm_sqr()
        + lam.l21.norm_sqr()
        + (ONE + lam.l22).norm_sqr())
    .sqrt();
    let threshold = tol::SINGULAR_REL * norm * norm;
    if det.norm() < threshold || det == ZERO {
        return Err(Error::Singular { det: det.norm(), threshold });
    }
    let n = z1.len();
    let correction = CMatrix::from_fn(n, n, |i, j| {
        (ONE + lam.l22) * z1[i] * w1[j] - lam.l12 * z1[i] * w2[j] - lam.l21 * z2[i] * w1[j]
            + (ONE + lam.l11) * z2[i] * w2[j]
    });
    Ok(&CMatrix::identity(n) - &correction.scale(ONE / det))
}

/// `(1ₙ + Z ᵗW)⁻¹ = 1ₙ − Z ᵗW / (1 + ⟨W, Z⟩)`.
pub fn rank1_inverse(z: &[C64], w: &[C64]) -> Result<CMatrix> {
    let zeros = vec![ZERO; z.len()];
    rank2_inverse(z, w, &zeros, &zeros)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn hermitian_min_eigenvalue(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.into_iter().fold(f64::INFINITY, f64::min))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let deviation = m.hermitian_deviation();
    if deviation > tol::HERMITIAN * m.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = &(m + &m.adjoint()).scale_re(0.5);
    let mut eig: Vec<f64> = sym.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Eigenvalues of a general complex square matrix via a complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let schur = m.to_nalgebra().schur();
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn gauss_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
        (0..n).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
    }

    fn gauss_mat(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let v = gauss_vec(rng, n * n);
        CMatrix::from_fn(n, n, |i, j| v[i * n + j])
    }

    /// Cyclic Jacobi on the real symmetric embedding `[[Re, -Im], [Im, Re]]`;
    /// each eigenvalue of the Hermitian matrix appears twice.
    fn jacobi_real_embedding(m: &CMatrix) -> Vec<f64> {
        let n = m.rows();
        let dim = 2 * n;
        let mut a = vec![vec![0.0; dim]; dim];
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)];
                a[i][j] = v.re;
                a[i + n][j + n] = v.re;
                a[i][j + n] = -v.im;
                a[i + n][j] = v.im;
            }
        }
        for _sweep in 0..100 {
            let off: f64 = (0..dim)
                .flat_map(|i| (0..dim).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i][j] * a[i][j])
                .sum();
            if off < 1e-26 {
                break;
            }
            for p in 0..dim {
                for q in p + 1..dim {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let cs = 1.0 / (t * t + 1.0).sqrt();
                    let sn = t * cs;
                    for row in a.iter_mut() {
                        let (akp, akq) = (row[p], row[q]);
                        row[p] = cs * akp - sn * akq;
                        row[q] = sn * akp + cs * akq;
                    }
                    let (rp, rq) = (a[p].clone(), a[q].clone());
                    for k in 0..dim {
                        a[p][k] = cs * rp[k] - sn * rq[k];
                        a[q][k] = sn * rp[k] + cs * rq[k];
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..dim).map(|i| a[i][i]).collect();
        eig.sort_by(f64::total_cmp);
        eig
    }

    #[test]
    fn rank2_det_identity_aligned() {
        let z1 = [c(1.0, 0.0), c(0.0, 0.0)];
        let z2 = [c(0.0, 0.0), c(0.0, 0.0)];
        let d = rank2_det(ONE, &z1, &z1, &z2, &z2).unwrap();
        assert!((d - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rank2_det_vanishes_at_zero_u() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<Vec<C64>> = (0..4).map(|_| gauss_vec(&mut rng, 3)).collect();
        let d = rank2_det(ZERO, &v[0], &v[1], &v[2], &v[3]).unwrap();
        assert_eq!(d, ZERO);
    }

    #[test]
    fn rank2_det_matches_dense_lu_n4() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v: Vec<Vec<C64>> = (0..4).map(|_| gauss_vec(&mut rng, 4)).collect();
        let closed = rank2_det(ONE, &v[0], &v[1], &v[2], &v[3]).unwrap();
        let dense = (&CMatrix::identity(4) + &rank2_matrix(&v[0], &v[1], &v[2], &v[3]))
            .det()
            .unwrap();
        assert!((closed - dense).norm() / dense.norm() < 1e-12);
    }

    #[test]
    fn rank2_det_rejects_short_or_mismatched() {
        let a = [ONE];
        assert!(matches!(rank2_det(ONE, &a, &a, &a, &a), Err(Error::DimensionMismatch { .. })));
        let b = [ONE, ONE];
        let c3 = [ONE, ONE, ONE];
        assert!(matches!(rank2_det(ONE, &b, &b, &c3, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rank1_inverse_special_case() {
        let n = 4;
        let mut z = vec![ZERO; n];
        z[0] = ONE;
        let inv = rank1_inverse(&z, &z).unwrap();
        let mut d = vec![ONE; n];
        d[0] = c(0.5, 0.0);
        assert!(inv.distance(&CMatrix::from_diag(&d)) < 1e-15);
    }

    #[test]
    fn rank2_inverse_of_zero_update_is_identity() {
        let z = vec![ZERO; 3];
        let inv = rank2_inverse(&z, &z, &z, &z).unwrap();
        assert_eq!(inv, CMatrix::identity(3));
    }

    #[test]
    fn rank2_inverse_matches_dense_n5() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v: Vec<Vec<C64>> = (0..4).map(|_| gauss_vec(&mut rng, 5)).collect();
        let closed = rank2_inverse(&v[0], &v[1], &v[2], &v[3]).unwrap();
        let dense = (&CMatrix::identity(5) + &rank2_matrix(&v[0], &v[1], &v[2], &v[3]))
            .inverse()
            .unwrap();
        assert!(closed.max_abs() > 0.0);
        assert!((&closed - &dense).max_abs() < 1e-11);
    }

    #[test]
    fn rank2_inverse_singular_correction() {
        // ⟨W, Z⟩ = -1 makes 1 + Z ᵗW singular.
        let z = [ONE, ZERO];
        let w = [c(-1.0, 0.0), ZERO];
        assert!(matches!(rank1_inverse(&z, &w), Err(Error::Singular { .. })));
    }

    #[test]
    fn dense_identity_and_symplectic_unit() {
        let id = CMatrix::identity(5);
        assert_eq!(id.det().unwrap(), ONE);
        assert_eq!(id.inverse().unwrap(), id);

        let s = CMatrix::from_real_rows(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[-1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
        ]);
        assert!((s.det().unwrap() - ONE).norm() < 1e-15);
        assert!(s.inverse().unwrap().distance(&-&s) < 1e-15);
    }

    #[test]
    fn dense_inverse_self_consistent_6x6() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let m = gauss_mat(&mut rng, 6);
        let inv = m.inverse().unwrap();
        assert!((&(&m * &inv) - &CMatrix::identity(6)).max_abs() < 1e-12);
    }

    #[test]
    fn dense_singular_matrix_errors() {
        let m = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(m.inverse(), Err(Error::Singular { .. })));
        let z = CMatrix::zeros(3, 3);
        assert!(matches!(z.inverse(), Err(Error::Singular { .. })));
        assert_eq!(z.det().unwrap(), ZERO);
    }

    #[test]
    fn det_matches_cofactor_expansion_3x3() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = gauss_mat(&mut rng, 3);
        let e = |i, j| m[(i, j)];
        let cof = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
        assert!((m.det().unwrap() - cof).norm() < 1e-12 * cof.norm().max(1.0));
    }

    #[test]
    fn min_eigenvalue_trivial_cases() {
        let id = CMatrix::identity(4);
        assert!((hermitian_min_eigenvalue(&id).unwrap() - 1.0).abs() < 1e-14);
        let s = 2.0;
        let d = [c(s, 0.0), c(s, 0.0), c(1.0 / s, 0.0), c(1.0 / s, 0.0)];
        let m = CMatrix::from_diag(&d);
        assert!((hermitian_min_eigenvalue(&m).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn min_eigenvalue_matches_jacobi_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [2, 3, 5, 8] {
            let b = gauss_mat(&mut rng, n);
            let m = &b + &b.adjoint();
            let oracle = jacobi_real_embedding(&m);
            let got = hermitian_eigenvalues(&m).unwrap();
            for (k, &lam) in got.iter().enumerate() {
                assert!((lam - oracle[2 * k]).abs() < 1e-9, "n={n} k={k}");
                assert!((lam - oracle[2 * k + 1]).abs() < 1e-9, "n={n} k={k}");
            }
            assert!((hermitian_min_eigenvalue(&m).unwrap() - oracle[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn min_eigenvalue_rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(hermitian_min_eigenvalue(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn general_eigenvalues_of_triangular() {
        let m = CMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(3.0, 0.0)],
            vec![ZERO, c(-2.0, 0.5)],
        ]);
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - c(-2.0, 0.5)).norm() < 1e-12);
        assert!((ev[1] - c(1.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn approx_eq_uses_abs_and_rel() {
        let a = CMatrix::identity(3).scale_re(1e6);
        let b = &a + &CMatrix::identity(3).scale_re(1e-3);
        assert!(a.approx_eq(&b));
        let c2 = &a + &CMatrix::identity(3).scale_re(1.0);
        assert!(!a.approx_eq(&c2));
        assert!(!a.approx_eq(&CMatrix::identity(2)));
    }
}
