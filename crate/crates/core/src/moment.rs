//! Moment maps into `𝔰𝔩(n+1, ℂ)` and the invariant function `τ`.
//!
//! Duals are identified with matrices through the trace form
//! `B(X, Y) = tr(XY)`, so `μ₊` is the conjugate `g λ^∨ g⁻¹` by the chart
//! representative `g = σ_α u_z u⁻_w`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ChartPoint, ModelParams};
use crate::linalg::{self, norm_sqr, pairing, CMatrix};
use crate::{tol, C64};

/// A traceless `(n+1) x (n+1)` complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebraElement(CMatrix);

impl LieAlgebraElement {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        let tr = matrix.trace().norm();
        if tr > tol::TRACE * matrix.frobenius_norm().max(1.0) {
            return Err(Error::InvalidParams(format!("trace {tr:e} is not zero")));
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `B(X, Y) = tr(XY)`.
    pub fn trace_form(&self, other: &LieAlgebraElement) -> C64 {
        (&self.0 * &other.0).trace()
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        linalg::eigenvalues(&self.0)
    }
}

/// `λ^∨ = s/(n+1) · diag(1, …, 1, −n)`.
pub fn lambda_vee(params: &ModelParams) -> LieAlgebraElement {
    let n = params.n;
    let k = params.s / (n as f64 + 1.0);
    let mut diag = vec![k; n + 1];
    diag[n] = -k * n as f64;
    LieAlgebraElement(CMatrix::from_diag(&diag))
}

/// The two distinct eigenvalues of `λ^∨`: `s/(n+1)` (multiplicity `n`) and
/// `−ns/(n+1)`.
pub fn orbit_eigenvalues(params: &ModelParams) -> (C64, C64) {
    let k = params.s / (params.n as f64 + 1.0);
    (k, -k * params.n as f64)
}

/// `μ₊ = g λ^∨ g⁻¹` with `g = σ_α u_z u⁻_w`.
pub fn mu_plus(p: &ChartPoint, params: &ModelParams) -> LieAlgebraElement {
    let g = p.representative(params).expect("chart point validated");
    let gi = p.representative_inverse(params).expect("chart point validated");
    LieAlgebraElement(&(g.matrix() * lambda_vee(params).matrix()) * gi.matrix())
}

/// `μ₋ = −μ₊*`.
pub fn mu_minus(p: &ChartPoint, params: &ModelParams) -> LieAlgebraElement {
    LieAlgebraElement(-&mu_plus(p, params).0.adjoint())
}

/// `τ = −B(μ₊, μ₋) + |s|²/(n+1)`.
pub fn tau_global(p: &ChartPoint, params: &ModelParams) -> f64 {
    let mp = mu_plus(p, params);
    let mm = mu_minus(p, params);
    -mp.trace_form(&mm).re + params.tau0 / (params.n as f64 + 1.0)
}

/// `τ = (‖z‖² + 1)(‖ξ‖² + |s − ξz|²)`.
pub fn tau_local(p: &ChartPoint, params: &ModelParams) -> f64 {
    let psi1 = norm_sqr(&p.z) + 1.0;
    let sxz = params.s - pairing(&p.xi, &p.z);
    let psi2 = norm_sqr(&p.xi) + sxz.norm_sqr();
    psi1 * psi2
}

/// The point of the Lagrangian locus over `z`: `ξ = s z* / (1 + ‖z‖²)`.
pub fn lagrangian_point(z: &[C64], alpha: usize, params: &ModelParams) -> Result<ChartPoint> {
    let k = params.s / (1.0 + norm_sqr(z));
    let xi = z.iter().map(|zi| k * zi.conj()).collect();
    ChartPoint::new(alpha, z.to_vec(), xi, params)
}

/// `‖ξ − s z*/(1 + ‖z‖²)‖`: distance from the Lagrangian locus along the fibre.
pub fn lagrangian_distance(p: &ChartPoint, params: &ModelParams) -> f64 {
    let k = params.s / (1.0 + norm_sqr(&p.z));
    p.xi.iter().zip(&p.z).map(|(x, z)| (x - k * z.conj()).norm_sqr()).sum::<f64>().sqrt()
}

/// `‖(μ − a)(μ − b)‖_F + |tr μ|` for the orbit eigenvalues `a`, `b`.
///
/// Zero exactly when `μ` is diagonalizable with eigenvalues in `{a, b}` and
/// trace zero, which pins the multiplicities to those of `λ^∨`.
pub fn spectrum_defect(mu: &LieAlgebraElement, params: &ModelParams) -> f64 {
    let (a, b) = orbit_eigenvalues(params);
    let dim = params.n + 1;
    let id = CMatrix::identity(dim);
    let left = &mu.0 - &id.scale(a);
    let right = &mu.0 - &id.scale(b);
    (&left * &right).frobenius_norm() + mu.0.trace().norm()
}
