//! `SL(n+1, ℂ)` machinery behind the chart atlas.
//!
//! A point of chart `α` with coordinates `(z, ξ)` is represented by the
//! group element `σ_α · u_z · u⁻_w` with `w = −ξ/s`, taken modulo the Levi
//! subgroup `L` of block-diagonal matrices. Changing chart or acting by the
//! group amounts to re-factoring such a product as `u_z' · u⁻_w' · t` with
//! `t ∈ L`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm_sqr, CMatrix, ONE, ZERO};
use crate::{tol, C64};

/// Dimension `n` of `CPⁿ` and the twist `s ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub s: C64,
    /// `|s|²`, the minimum of `τ`.
    pub tau0: f64,
}

impl ModelParams {
    pub fn new(n: usize, s: C64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::InvalidParams("s must be finite".into()));
        }
        if s == ZERO {
            return Err(Error::InvalidParams("s must be nonzero".into()));
        }
        Ok(Self { n, s, tau0: s.norm_sqr() })
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }
}

/// An element of `SL(n+1, ℂ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement(CMatrix);

impl GroupElement {
    /// Checks squareness and `det = 1` up to `1e-9`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        let det = matrix.det()?;
        if (det - ONE).norm() > 1e-9 {
            return Err(Error::InvalidParams(format!("determinant {det} is not 1")));
        }
        Ok(Self(matrix))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn compose(&self, rhs: &GroupElement) -> GroupElement {
        Self(&self.0 * &rhs.0)
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        Ok(Self(self.0.inverse()?))
    }

    /// `‖g g* − 1‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.0 * &self.0.adjoint()).distance(&CMatrix::identity(self.dim()))
    }
}

/// Chart index plus local coordinates. `z` is a column, `ξ` a row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub alpha: usize,
    pub z: Vec<C64>,
    pub xi: Vec<C64>,
}

impl ChartPoint {
    pub fn new(alpha: usize, z: Vec<C64>, xi: Vec<C64>, params: &ModelParams) -> Result<Self> {
        let n = params.n;
        if alpha > n {
            return Err(Error::ChartIndex { index: alpha, n });
        }
        for v in [&z, &xi] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        if !z.iter().chain(&xi).all(|x| x.re.is_finite() && x.im.is_finite()) {
            return Err(Error::InvalidParams("coordinates must be finite".into()));
        }
        Ok(Self { alpha, z, xi })
    }

    /// `z = ξ = 0` in chart `alpha`.
    pub fn base(alpha: usize, n: usize) -> Self {
        Self { alpha, z: vec![ZERO; n], xi: vec![ZERO; n] }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// The `2n` coordinates `(z₁..z_n, ξ₁..ξ_n)`, i.e. `z_{n+i} = ξ_i`.
    pub fn coords(&self) -> Vec<C64> {
        self.z.iter().chain(&self.xi).copied().collect()
    }

    pub fn from_coords(alpha: usize, coords: &[C64]) -> Self {
        let n = coords.len() / 2;
        Self { alpha, z: coords[..n].to_vec(), xi: coords[n..].to_vec() }
    }

    /// `w = −ξ/s`.
    pub fn w(&self, params: &ModelParams) -> Vec<C64> {
        self.xi.iter().map(|x| -x / params.s).collect()
    }

    /// The representative `σ_α u_z u⁻_w`.
    pub fn representative(&self, params: &ModelParams) -> Result<GroupElement> {
        let sig = sigma(self.alpha, params.n)?;
        let u = u_upper(&self.z);
        let l = u_lower(&self.w(params));
        Ok(GroupElement(&(&sig.0 * &u.0) * &l.0))
    }

    /// Exact inverse of [`Self::representative`]: `u⁻_{-w} u_{-z} σ_αᵀ`.
    pub fn representative_inverse(&self, params: &ModelParams) -> Result<GroupElement> {
        let sig = sigma(self.alpha, params.n)?;
        let neg = |v: &[C64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let l = u_lower(&neg(&self.w(params)));
        let u = u_upper(&neg(&self.z));
        Ok(GroupElement(&(&l.0 * &u.0) * &sig.0.transpose()))
    }

    /// Max-modulus distance to another point in the same chart.
    pub fn distance(&self, other: &ChartPoint) -> f64 {
        self.coords().iter().zip(other.coords()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// An element `diag(A, d)` of the Levi subgroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeviElement {
    pub a: CMatrix,
    pub d: C64,
}

impl LeviElement {
    pub fn new(a: CMatrix, d: C64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
        }
        let det = a.det()? * d;
        if (det - ONE).norm() > 1e-9 {
            return Err(Error::InvalidParams(format!("Levi element has determinant {det}")));
        }
        Ok(Self { a, d })
    }

    pub fn identity(n: usize) -> Self {
        Self { a: CMatrix::identity(n), d: ONE }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.a.rows();
        CMatrix::from_blocks(
            &self.a,
            &CMatrix::zeros(n, 1),
            &CMatrix::zeros(1, n),
            &CMatrix::from_diag(&[self.d]),
        )
    }

    pub fn compose(&self, rhs: &LeviElement) -> LeviElement {
        Self { a: &self.a * &rhs.a, d: self.d * rhs.d }
    }

    pub fn distance(&self, other: &LeviElement) -> f64 {
        (self.a.distance(&other.a).powi(2) + (self.d - other.d).norm_sqr()).sqrt()
    }
}

/// Signed cyclic permutation matrix for chart `alpha`.
///
/// Maps `e_k ↦ e_{k+1}` for `alpha ≤ k < n` and `e_n ↦ e_alpha`, fixing the
/// other basis vectors, so that `σ_α e_n = e_α`. When the cycle has even
/// length the image of `e_alpha` is negated to bring the determinant to 1.
pub fn sigma(alpha: usize, n: usize) -> Result<GroupElement> {
    if alpha > n {
        return Err(Error::ChartIndex { index: alpha, n });
    }
    let dim = n + 1;
    let mut m = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        let image = match k {
            k if k < alpha => k,
            k if k == n => alpha,
            k => k + 1,
        };
        m[(image, k)] = ONE;
    }
    let cycle_len = n - alpha + 1;
    if cycle_len.is_multiple_of(2) {
        m[(alpha + 1, alpha)] = -ONE;
    }
    Ok(GroupElement(m))
}

/// `u_z = [[1ₙ, z], [0, 1]]`.
pub fn u_upper(z: &[C64]) -> GroupElement {
    let n = z.len();
    let mut m = CMatrix::identity(n + 1);
    for (i, &zi) in z.iter().enumerate() {
        m[(i, n)] = zi;
    }
    GroupElement(m)
}

/// `u⁻_w = [[1ₙ, 0], [w, 1]]`.
pub fn u_lower(w: &[C64]) -> GroupElement {
    let n = w.len();
    let mut m = CMatrix::identity(n + 1);
    for (j, &wj) in w.iter().enumerate() {
        m[(n, j)] = wj;
    }
    GroupElement(m)
}

/// Output of [`gauss_factor`]: `M = u_z · u⁻_w · t`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussFactors {
    pub z: Vec<C64>,
    pub w: Vec<C64>,
    pub t: LeviElement,
}

impl GaussFactors {
    pub fn reconstruct(&self) -> CMatrix {
        &(&u_upper(&self.z).0 * &u_lower(&self.w).0) * &self.t.to_matrix()
    }
}

/// Factors `M = u_z · u⁻_w · diag(A, d)`.
///
/// With `M = [[M₁₁, M₁₂], [M₂₁, M₂₂]]`: `d = M₂₂`, `z = M₁₂/d`,
/// `A = M₁₁ − z M₂₁`, `w = M₂₁ A⁻¹`.
pub fn gauss_factor(m: &CMatrix) -> Result<GaussFactors> {
    if !m.is_square() || m.rows() < 2 {
        return Err(Error::DimensionMismatch { expected: m.rows().max(2), found: m.cols() });
    }
    let n = m.rows() - 1;
    let d = m[(n, n)];
    if d.norm() < tol::PIVOT {
        return Err(Error::NotFactorizable { pivot: d.norm(), threshold: tol::PIVOT });
    }
    let z: Vec<C64> = (0..n).map(|i| m[(i, n)] / d).collect();
    let m21 = m.row_vec(n);
    let a = CMatrix::from_fn(n, n, |i, j| m[(i, j)] - z[i] * m21[j]);
    let lu = a.lu()?;
    let det_a = lu.det();
    if det_a.norm() < tol::PIVOT {
        return Err(Error::NotFactorizable { pivot: det_a.norm(), threshold: tol::PIVOT });
    }
    // w = M₂₁ A⁻¹  ⇔  ᵗA ᵗw = ᵗM₂₁
    let w = a.transpose().lu()?.solve(&m21[..n]).map_err(|_| Error::NotFactorizable {
        pivot: det_a.norm(),
        threshold: tol::PIVOT,
    })?;
    Ok(GaussFactors { z, w, t: LeviElement { a, d } })
}

/// Re-expresses `p` in chart `beta`.
///
/// Returns the new point and the Levi element `t` with
/// `σ_β⁻¹ σ_α u_z u⁻_w = u_z' u⁻_w' t`.
pub fn transition(
    p: &ChartPoint,
    beta: usize,
    params: &ModelParams,
) -> Result<(ChartPoint, LeviElement)> {
    if beta > params.n {
        return Err(Error::ChartIndex { index: beta, n: params.n });
    }
    if beta == p.alpha {
        return Ok((p.clone(), LeviElement::identity(params.n)));
    }
    let m = &sigma(beta, params.n)?.0.transpose() * &p.representative(params)?.0;
    let f = gauss_factor(&m).map_err(|e| match e {
        Error::NotFactorizable { .. } => Error::Overlap { from: p.alpha, to: beta },
        other => other,
    })?;
    let xi = f.w.iter().map(|w| -params.s * w).collect();
    Ok((ChartPoint { alpha: beta, z: f.z, xi }, f.t))
}

/// `⟨λ, X⟩ = −s · X_{nn}` for `X` in the parabolic subalgebra.
pub fn character_pairing(x: &CMatrix, params: &ModelParams) -> Result<C64> {
    let n = params.n;
    if x.rows() != n + 1 || x.cols() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: x.rows() });
    }
    let upper_right = norm_sqr(&(0..n).map(|i| x[(i, n)]).collect::<Vec<_>>()).sqrt();
    if upper_right > tol::PARABOLIC * x.frobenius_norm().max(1.0) {
        return Err(Error::NotParabolic { norm: upper_right });
    }
    Ok(-params.s * x[(n, n)])
}

/// The holomorphic action of `g` on the bundle.
///
/// Forms `g' = g σ_α u_z u⁻_w` and re-factors it in chart `α` when
/// possible, otherwise in the factorizable chart with the largest Gauss
/// pivot.
pub fn group_action(g: &GroupElement, p: &ChartPoint, params: &ModelParams) -> Result<ChartPoint> {
    if g.dim() != params.n + 1 {
        return Err(Error::DimensionMismatch { expected: params.n + 1, found: g.dim() });
    }
    let gp = &g.0 * &p.representative(params)?.0;
    let factor_in = |beta: usize| -> Result<(GaussFactors, f64)> {
        let m = &sigma(beta, params.n)?.0.transpose() * &gp;
        let pivot = m[(params.n, params.n)].norm();
        Ok((gauss_factor(&m)?, pivot))
    };
    let chosen = match factor_in(p.alpha) {
        Ok((f, _)) => (p.alpha, f),
        Err(_) => {
            let mut best: Option<(usize, GaussFactors, f64)> = None;
            for beta in 0..=params.n {
                if let Ok((f, pivot)) = factor_in(beta) {
                    if best.as_ref().is_none_or(|b| pivot > b.2) {
                        best = Some((beta, f, pivot));
                    }
                }
            }
            let (beta, f, _) = best.ok_or(Error::NoAdmissibleChart)?;
            (beta, f)
        }
    };
    let (beta, f) = chosen;
    let xi = f.w.iter().map(|w| -params.s * w).collect();
    Ok(ChartPoint { alpha: beta, z: f.z, xi })
}

/// Seeded element of `SU(dim)`: Gram–Schmidt on a complex Gaussian matrix,
/// then a global phase to bring the determinant to 1.
pub fn random_su(dim: usize, seed: u64) -> GroupElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_su_with(dim, &mut rng)
}

pub fn random_su_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> GroupElement {
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| (0..dim).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect())
        .collect();
    for k in 0..dim {
        for j in 0..k {
            let proj: C64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a.conj() * b).sum();
            let prev = cols[j].clone();
            for (x, q) in cols[k].iter_mut().zip(prev) {
                *x -= proj * q;
            }
        }
        let norm = norm_sqr(&cols[k]).sqrt();
        cols[k].iter_mut().for_each(|x| *x /= norm);
    }
    let mut m = CMatrix::from_fn(dim, dim, |i, j| cols[j][i]);
    let det = m.det().expect("square");
    let phase = C64::from_polar(1.0, -det.arg() / dim as f64);
    m = m.scale(phase);
    GroupElement(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::sampling::Sampler;

    fn params(n: usize, s: C64) -> ModelParams {
        ModelParams::new(n, s).unwrap()
    }

    #[test]
    fn model_params_reject_zero_twist() {
        assert!(ModelParams::new(2, ZERO).is_err());
        assert!(ModelParams::new(0, ONE).is_err());
        let p = params(3, c(1.0, 2.0));
        assert_eq!(p.tau0, 5.0);
    }

    #[test]
    fn sigma_last_chart_is_identity() {
        for n in 1..5 {
            assert_eq!(sigma(n, n).unwrap().matrix(), &CMatrix::identity(n + 1));
        }
    }

    #[test]
    fn sigma_n1_chart0() {
        let s = sigma(0, 1).unwrap();
        assert_eq!(s.matrix(), &CMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]));
    }

    #[test]
    fn sigma_special_unitary_and_maps_en_to_ealpha() {
        for n in 1..6 {
            for alpha in 0..=n {
                let s = sigma(alpha, n).unwrap();
                assert!(s.unitarity_defect() < 1e-14);
                assert!((s.matrix().det().unwrap() - ONE).norm() < 1e-14);
                assert_eq!(s.matrix()[(alpha, n)], ONE);
            }
        }
        assert!(matches!(sigma(3, 2), Err(Error::ChartIndex { .. })));
    }

    #[test]
    fn unipotents() {
        assert_eq!(u_upper(&[ZERO, ZERO]).matrix(), &CMatrix::identity(3));
        let u = u_upper(&[ONE, c(0.0, 1.0)]);
        let expected = CMatrix::from_rows(&[
            vec![ONE, ZERO, ONE],
            vec![ZERO, ONE, c(0.0, 1.0)],
            vec![ZERO, ZERO, ONE],
        ]);
        assert_eq!(u.matrix(), &expected);
        let z1 = [c(0.3, -1.0), c(2.0, 0.5)];
        let z2 = [c(-1.0, 0.25), c(0.0, 4.0)];
        let sum: Vec<C64> = z1.iter().zip(&z2).map(|(a, b)| a + b).collect();
        assert!(u_upper(&z1).compose(&u_upper(&z2)).matrix().distance(u_upper(&sum).matrix()) < 1e-15);
        assert!(u_lower(&z1).compose(&u_lower(&z2)).matrix().distance(u_lower(&sum).matrix()) < 1e-15);
    }

    #[test]
    fn gauss_factor_identity() {
        let f = gauss_factor(&CMatrix::identity(4)).unwrap();
        assert!(f.z.iter().chain(&f.w).all(|x| *x == ZERO));
        assert_eq!(f.t, LeviElement::identity(3));
    }

    #[test]
    fn gauss_factor_hand_example() {
        // [[-w, -1], [1 + zw, z]] with z = 2, w = 0
        let m = CMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 2.0]]);
        let f = gauss_factor(&m).unwrap();
        assert!((f.z[0] - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((f.w[0] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((f.t.a[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((f.t.d - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gauss_factor_round_trip() {
        let mut rng = Sampler::new(17);
        for n in 1..5 {
            for _ in 0..50 {
                let z = rng.complex_vec(n);
                let w = rng.complex_vec(n);
                let a = CMatrix::from_fn(n, n, |_, _| rng.complex());
                let d = ONE / a.det().unwrap();
                let t = LeviElement::new(a, d).unwrap();
                let m = GaussFactors { z: z.clone(), w: w.clone(), t: t.clone() }.reconstruct();
                let f = gauss_factor(&m).unwrap();
                let scale = 1.0 + m.max_abs();
                for (x, y) in f.z.iter().zip(&z).chain(f.w.iter().zip(&w)) {
                    assert!((x - y).norm() < 1e-10 * scale, "n={n}");
                }
                assert!(f.t.distance(&t) < 1e-10 * scale);
                assert!(f.reconstruct().distance(&m) < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn gauss_factor_zero_pivot() {
        let m = sigma(0, 2).unwrap().into_matrix();
        assert!(matches!(gauss_factor(&m), Err(Error::NotFactorizable { .. })));
    }

    #[test]
    fn transition_to_same_chart_is_identity() {
        let pr = params(2, c(1.0, -0.5));
        let p = ChartPoint::new(1, vec![c(0.2, 0.1), c(-1.0, 0.0)], vec![c(0.0, 1.0), ONE], &pr).unwrap();
        let (q, t) = transition(&p, 1, &pr).unwrap();
        assert_eq!(q, p);
        assert_eq!(t, LeviElement::identity(2));
    }

    #[test]
    fn transition_hand_example() {
        let pr = params(1, ONE);
        let p = ChartPoint::new(1, vec![c(2.0, 0.0)], vec![ZERO], &pr).unwrap();
        let (q, t) = transition(&p, 0, &pr).unwrap();
        assert_eq!(q.alpha, 0);
        assert!((q.z[0] - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((q.xi[0] - c(-2.0, 0.0)).norm() < 1e-15);
        assert!((t.a[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((t.d - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn transition_outside_overlap() {
        let pr = params(2, ONE);
        let p = ChartPoint::base(2, 2);
        assert!(matches!(transition(&p, 0, &pr), Err(Error::Overlap { from: 2, to: 0 })));
    }

    #[test]
    fn transition_round_trip_and_cocycle() {
        let mut rng = Sampler::new(99);
        for n in 1..4 {
            let pr = params(n, c(0.8, 0.6));
            for _ in 0..40 {
                let p = rng.point(&pr);
                let beta = rng.chart(n);
                let gamma = rng.chart(n);
                let (q, t_ab) = transition(&p, beta, &pr).unwrap();
                let (back, _) = transition(&q, p.alpha, &pr).unwrap();
                assert!(back.distance(&p) < 1e-9 * (1.0 + q.distance(&ChartPoint::base(beta, n))));

                let (r_direct, t_ag) = transition(&p, gamma, &pr).unwrap();
                let (r_via, t_bg) = transition(&q, gamma, &pr).unwrap();
                let scale = 1.0 + r_direct.coords().iter().map(|x| x.norm()).fold(0.0, f64::max);
                assert!(r_direct.distance(&r_via) < 1e-9 * scale);
                let composed = t_bg.compose(&t_ab);
                assert!(composed.distance(&t_ag) < 1e-9 * (1.0 + t_ag.a.frobenius_norm() + t_ag.d.norm()));
            }
        }
    }

    #[test]
    fn character_pairing_cases() {
        let pr = params(1, ONE);
        assert_eq!(character_pairing(&CMatrix::zeros(2, 2), &pr).unwrap(), ZERO);
        let x = CMatrix::from_diag(&[c(0.5, 0.0), c(-0.5, 0.0)]);
        assert!((character_pairing(&x, &pr).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        let bad = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(character_pairing(&bad, &pr), Err(Error::NotParabolic { .. })));
    }

    #[test]
    fn group_action_identity_and_coset_bookkeeping() {
        let pr = params(2, c(1.0, 1.0));
        let mut rng = Sampler::new(4);
        let p = rng.point(&pr);
        let q = group_action(&GroupElement::identity(3), &p, &pr).unwrap();
        assert_eq!(q.alpha, p.alpha);
        assert!(q.distance(&p) < 1e-12);

        // σ_β σ_α⁻¹ moves the base point of chart α to the base point of chart β.
        for alpha in 0..=2 {
            for beta in 0..=2 {
                let g = sigma(beta, 2).unwrap().compose(&sigma(alpha, 2).unwrap().inverse().unwrap());
                let q = group_action(&g, &ChartPoint::base(alpha, 2), &pr).unwrap();
                assert_eq!(q.alpha, beta, "alpha={alpha} beta={beta}");
                assert!(q.distance(&ChartPoint::base(beta, 2)) < 1e-14);
            }
        }
    }

    #[test]
    fn random_su_properties() {
        for dim in 2..6 {
            let u = random_su(dim, 7);
            assert!(u.unitarity_defect() < 1e-12);
            assert!((u.matrix().det().unwrap() - ONE).norm() < 1e-12);
            assert_eq!(random_su(dim, 7), u);
            assert!(random_su(dim, 8).matrix().distance(u.matrix()) > 1e-3);
        }
    }

    #[test]
    fn representative_inverse_is_exact() {
        let mut rng = Sampler::new(12);
        let pr = params(3, c(-0.4, 1.1));
        for _ in 0..10 {
            let p = rng.point(&pr);
            let g = p.representative(&pr).unwrap();
            let gi = p.representative_inverse(&pr).unwrap();
            assert!((g.matrix() * gi.matrix()).distance(&CMatrix::identity(4)) < 1e-10 * (1.0 + g.matrix().max_abs().powi(2)));
        }
    }
}
