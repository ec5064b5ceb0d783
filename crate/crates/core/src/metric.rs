//! The Ricci-flat Kähler metrics `g_{ij̄} = f(τ) τ_{ij̄} + f'(τ) τ_i τ_j̄`.
//!
//! All `2n`-indexed arrays use the ordering `(z₁, …, z_n, ξ₁, …, ξ_n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::fd_mixed_wirtinger;
use crate::group::{ChartPoint, ModelParams};
use crate::linalg::{norm_sqr, pairing, CMatrix, ZERO};
use crate::{tol, C64};

/// `τ` together with its first and mixed second Wirtinger derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct TauJet {
    pub tau: f64,
    /// `τ_i = ∂_i τ`
    pub grad: Vec<C64>,
    /// `τ_ī = conj(τ_i)`
    pub gradbar: Vec<C64>,
    /// `hess[(i, j)] = τ_{i,j̄}`
    pub hess: CMatrix,
}

impl TauJet {
    /// `τ_i τ_j̄` as a matrix, i.e. `b b*` with `b = grad`.
    pub fn grad_outer(&self) -> CMatrix {
        CMatrix::outer(&self.grad, &self.gradbar)
    }
}

/// Analytic jet of `τ = ψ₁ψ₂` with `ψ₁ = ‖z‖² + 1`, `ψ₂ = ‖ξ‖² + |s_xz|²`,
/// `s_xz = s − ξz`.
pub fn tau_jet(p: &ChartPoint, params: &ModelParams) -> TauJet {
    let n = params.n;
    let (z, xi) = (&p.z, &p.xi);
    let psi1 = norm_sqr(z) + 1.0;
    let sxz = params.s - pairing(xi, z);
    let psi2 = norm_sqr(xi) + sxz.norm_sqr();
    let sxz_bar = sxz.conj();

    let mut grad = vec![ZERO; 2 * n];
    for i in 0..n {
        grad[i] = psi2 * z[i].conj() - psi1 * sxz_bar * xi[i];
        grad[n + i] = psi1 * (xi[i].conj() - sxz_bar * z[i]);
    }
    let gradbar = grad.iter().map(C64::conj).collect();

    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let hess = CMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let (i, j) = (r % n, c % n);
        match (r < n, c < n) {
            (true, true) => {
                psi2 * delta(i, j) - sxz * z[i].conj() * xi[j].conj() - sxz_bar * xi[i] * z[j]
                    + psi1 * xi[i] * xi[j].conj()
            }
            (true, false) => {
                psi1 * xi[i] * z[j].conj() + z[i].conj() * xi[j] - sxz * z[i].conj() * z[j].conj()
            }
            (false, true) => {
                psi1 * z[i] * xi[j].conj() + xi[i].conj() * z[j] - sxz_bar * z[i] * z[j]
            }
            (false, false) => psi1 * (delta(i, j) + z[i] * z[j].conj()),
        }
    });
    TauJet { tau: psi1 * psi2, grad, gradbar, hess }
}

/// A profile `f` together with its derivative.
pub trait Profile {
    fn n(&self) -> usize;
    fn tau0(&self) -> f64;
    /// `(f(τ), f'(τ))`
    fn eval(&self, tau: f64) -> Result<(f64, f64)>;
}

/// Member `a ≥ 0` of the Ricci-flat family
/// `f(τ) = ((a + (τ−τ₀)ⁿ)^{1/n} / (τ(τ−τ₀)))^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricProfile {
    pub a: f64,
    pub n: usize,
    pub tau0: f64,
}

impl MetricProfile {
    pub fn new(a: f64, n: usize, tau0: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidParams(format!("profile parameter a = {a} must be >= 0")));
        }
        if !(tau0.is_finite() && tau0 > 0.0) {
            return Err(Error::InvalidParams(format!("tau0 = {tau0} must be > 0")));
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        Ok(Self { a, n, tau0 })
    }

    pub fn for_params(a: f64, params: &ModelParams) -> Result<Self> {
        Self::new(a, params.n, params.tau0)
    }

    /// The hyperkähler member `f = τ^{-1/2}`.
    pub fn hyperkahler(params: &ModelParams) -> Self {
        Self { a: 0.0, n: params.n, tau0: params.tau0 }
    }

    /// Smallest admissible `τ − τ₀`; zero for `a = 0`.
    pub fn exclusion(&self) -> f64 {
        if self.a == 0.0 {
            0.0
        } else {
            tol::LAGRANGIAN_EXCLUSION * self.tau0
        }
    }
}

impl Profile for MetricProfile {
    fn n(&self) -> usize {
        self.n
    }

    fn tau0(&self) -> f64 {
        self.tau0
    }

    fn eval(&self, tau: f64) -> Result<(f64, f64)> {
        f_profile(tau, self)
    }
}

/// `(f, f')` for a member of the Ricci-flat family, `f'` by differentiating
/// the closed form.
pub fn f_profile(tau: f64, profile: &MetricProfile) -> Result<(f64, f64)> {
    let MetricProfile { a, n, tau0 } = *profile;
    let domain = || Error::Domain { tau, tau0, a };
    if !tau.is_finite() || tau <= 0.0 {
        return Err(domain());
    }
    if a == 0.0 {
        // The band below τ₀ only absorbs roundoff on the Lagrangian locus.
        if tau < tau0 * (1.0 - 1e-9) {
            return Err(domain());
        }
        let f = tau.powf(-0.5);
        return Ok((f, -0.5 * f / tau));
    }
    let u = tau - tau0;
    if u < profile.exclusion() {
        return Err(domain());
    }
    let un = u.powi(n as i32);
    let root = (a + un).powf(1.0 / n as f64);
    let f = (root / (tau * u)).sqrt();
    // d/dτ log f² = uⁿ⁻¹/(a + uⁿ) − 1/τ − 1/u
    let dlog = u.powi(n as i32 - 1) / (a + un) - 1.0 / tau - 1.0 / u;
    Ok((f, 0.5 * f * dlog))
}

/// Constant profile `f ≡ c`, used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantProfile {
    pub value: f64,
    pub n: usize,
    pub tau0: f64,
}

impl Profile for ConstantProfile {
    fn n(&self) -> usize {
        self.n
    }

    fn tau0(&self) -> f64 {
        self.tau0
    }

    fn eval(&self, _tau: f64) -> Result<(f64, f64)> {
        Ok((self.value, 0.0))
    }
}

/// `f·(1 + δ)` for a family member `f`; not a solution when `δ ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbedProfile {
    pub base: MetricProfile,
    pub delta: f64,
}

impl Profile for PerturbedProfile {
    fn n(&self) -> usize {
        self.base.n
    }

    fn tau0(&self) -> f64 {
        self.base.tau0
    }

    fn eval(&self, tau: f64) -> Result<(f64, f64)> {
        let (f, fp) = self.base.eval(tau)?;
        Ok((f * (1.0 + self.delta), fp * (1.0 + self.delta)))
    }
}

/// The `2n x 2n` Hermitian matrix `A = (g_{ij̄})` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    pub a: CMatrix,
    pub point: ChartPoint,
    pub tau: f64,
    pub f: f64,
    pub fprime: f64,
}

impl MetricMatrix {
    pub fn det(&self) -> Result<f64> {
        Ok(self.a.det()?.re)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        crate::linalg::hermitian_min_eigenvalue(&self.a)
    }
}

/// `A = f(τ)·(τ_{ij̄}) + f'(τ)·(τ_i τ_j̄)`.
pub fn metric_matrix<P: Profile + ?Sized>(
    p: &ChartPoint,
    profile: &P,
    params: &ModelParams,
) -> Result<MetricMatrix> {
    let jet = tau_jet(p, params);
    let (f, fprime) = profile.eval(jet.tau)?;
    let a = &jet.hess.scale_re(f) + &jet.grad_outer().scale_re(fprime);
    Ok(MetricMatrix { a, point: p.clone(), tau: jet.tau, f, fprime })
}

/// Left side of the Ricci-flatness ODE
/// `2f'f^{2n−1}τⁿ(τ−τ₀) + f^{2n}τ^{n−1}(2τ−τ₀)`; equals 1 on solutions.
pub fn ode_residual<P: Profile + ?Sized>(f: f64, fprime: f64, tau: f64, profile: &P) -> f64 {
    let n = profile.n() as i32;
    let tau0 = profile.tau0();
    2.0 * fprime * f.powi(2 * n - 1) * tau.powi(n) * (tau - tau0)
        + f.powi(2 * n) * tau.powi(n - 1) * (2.0 * tau - tau0)
}

/// `det A` from the two determinant identities:
/// `f^{2n}·τ^{n−1}(2τ−τ₀) + f^{2n−1}f'·2τⁿ(τ−τ₀)`.
pub fn det_a_closed_form<P: Profile + ?Sized>(tau: f64, profile: &P) -> Result<f64> {
    let (f, fprime) = profile.eval(tau)?;
    Ok(ode_residual(f, fprime, tau, profile))
}

/// `(det (τ_{ij̄}), τ^{n−1}(2τ − τ₀))`.
pub fn prop32_check(p: &ChartPoint, params: &ModelParams) -> Result<(f64, f64)> {
    let jet = tau_jet(p, params);
    let n = params.n as i32;
    let lhs = jet.hess.det()?.re;
    let rhs = jet.tau.powi(n - 1) * (2.0 * jet.tau - params.tau0);
    Ok((lhs, rhs))
}

/// Both evaluations of `Σ_k τ_k̄ det(a₁, …, b, …, a_{2n})` against
/// `2τⁿ(τ − τ₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop33 {
    /// `det(A')·b* A'⁻¹ b`
    pub cramer: f64,
    /// Direct sum of column-replacement determinants (only for `n ≤ 2`).
    pub brute_force: Option<f64>,
    pub rhs: f64,
}

pub fn prop33_check(p: &ChartPoint, params: &ModelParams) -> Result<Prop33> {
    let jet = tau_jet(p, params);
    let n = params.n as i32;
    let lu = jet.hess.lu()?;
    let x = lu.solve(&jet.grad)?;
    let quad: C64 = jet.gradbar.iter().zip(&x).map(|(b, x)| b * x).sum();
    let cramer = (lu.det() * quad).re;
    let brute_force = if params.n <= 2 { Some(column_replacement_sum(&jet)?) } else { None };
    let rhs = 2.0 * jet.tau.powi(n) * (jet.tau - params.tau0);
    Ok(Prop33 { cramer, brute_force, rhs })
}

/// `Σ_k conj(b_k) det(A' with column k replaced by b)`.
pub fn column_replacement_sum(jet: &TauJet) -> Result<f64> {
    let mut total = ZERO;
    for k in 0..jet.grad.len() {
        let mut m = jet.hess.clone();
        m.set_col(k, &jet.grad);
        total += jet.gradbar[k] * m.det()?;
    }
    Ok(total.re)
}

/// Mixed second finite differences `∂_i∂̄_j log det A` over the `2n`
/// coordinates of the chart; the Ricci form up to a factor `i`.
pub fn ricci_form_fd<P: Profile + ?Sized>(
    p: &ChartPoint,
    profile: &P,
    params: &ModelParams,
) -> Result<CMatrix> {
    let alpha = p.alpha;
    let log_det = |w: &[C64]| -> Result<f64> {
        let q = ChartPoint::from_coords(alpha, w);
        Ok(metric_matrix(&q, profile, params)?.det()?.abs().ln())
    };
    fd_mixed_wirtinger(log_det, &p.coords(), tol::FD_STEP_RICCI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::fd::{fd_gradient, fd_wirtinger};
    use crate::linalg::ONE;
    use crate::moment::tau_local;
    use crate::sampling::Sampler;

    fn params(n: usize, s: C64) -> ModelParams {
        ModelParams::new(n, s).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn jet_at_origin() {
        let pr = params(2, c(1.0, 1.0));
        let jet = tau_jet(&ChartPoint::base(0, 2), &pr);
        assert_eq!(jet.tau, 2.0);
        assert!(jet.grad.iter().all(|g| *g == ZERO));
        let expected = CMatrix::from_diag(&[c(2.0, 0.0), c(2.0, 0.0), ONE, ONE]);
        assert_eq!(jet.hess, expected);
    }

    #[test]
    fn jet_matches_finite_differences() {
        let mut rng = Sampler::new(44);
        for n in 1..4 {
            let pr = params(n, c(0.7, -0.4));
            for _ in 0..20 {
                let p = rng.point(&pr);
                let jet = tau_jet(&p, &pr);
                assert!(jet.hess.hermitian_deviation() < 1e-12 * jet.hess.frobenius_norm());
                let alpha = p.alpha;
                let tau_at = |w: &[C64]| Ok(tau_local(&ChartPoint::from_coords(alpha, w), &pr));
                let fd = fd_gradient(tau_at, &p.coords(), tol::FD_STEP_FIRST).unwrap();
                let scale = jet.grad.iter().map(|g| g.norm()).fold(0.0, f64::max);
                for k in 0..2 * n {
                    assert!((fd.holo[k] - jet.grad[k]).norm() < 1e-6 * scale);
                    assert!((fd.anti[k] - jet.gradbar[k]).norm() < 1e-6 * scale);
                }
                let hscale = jet.hess.max_abs();
                for i in 0..2 * n {
                    let gi = |w: &[C64]| Ok(tau_jet(&ChartPoint::from_coords(alpha, w), &pr).grad[i]);
                    let fd = fd_wirtinger(gi, &p.coords(), tol::FD_STEP_FIRST).unwrap();
                    for j in 0..2 * n {
                        assert!((fd.anti[j] - jet.hess[(i, j)]).norm() < 1e-5 * hscale);
                    }
                }
            }
        }
    }

    #[test]
    fn f_profile_hyperkahler_member() {
        let prof = MetricProfile::new(0.0, 2, 1.0).unwrap();
        let (f, fp) = f_profile(4.0, &prof).unwrap();
        assert_eq!((f, fp), (0.5, -1.0 / 16.0));
        // allowed on the Lagrangian locus itself
        assert!(f_profile(1.0, &prof).is_ok());
    }

    #[test]
    fn f_profile_eguchi_hanson_limit_formula() {
        let prof = MetricProfile::new(1.0, 1, 1e-12).unwrap();
        for tau in [1.0, 2.0, 5.0, 10.0] {
            let (f, _) = f_profile(tau, &prof).unwrap();
            let expected = (1.0 + tau).sqrt() / tau;
            assert!(rel(f, expected) < 1e-9);
        }
    }

    #[test]
    fn f_profile_derivative_matches_fd() {
        for (a, n) in [(0.0, 1), (0.5, 2), (2.0, 3), (1.0, 1)] {
            let prof = MetricProfile::new(a, n, 1.3).unwrap();
            for k in 0..50 {
                let tau = 1.3 + 0.05 + 0.2 * k as f64;
                let (_, fp) = f_profile(tau, &prof).unwrap();
                let h = 1e-5 * tau;
                let fd = (f_profile(tau + h, &prof).unwrap().0 - f_profile(tau - h, &prof).unwrap().0)
                    / (2.0 * h);
                assert!(rel(fd, fp) < 1e-7, "a={a} n={n} tau={tau}");
            }
        }
    }

    #[test]
    fn f_profile_domain_errors() {
        let prof = MetricProfile::new(1.0, 2, 1.0).unwrap();
        assert!(matches!(f_profile(1.0, &prof), Err(Error::Domain { .. })));
        assert!(matches!(f_profile(1.0005, &prof), Err(Error::Domain { .. })));
        assert!(f_profile(1.002, &prof).is_ok());
        let hk = MetricProfile::new(0.0, 2, 1.0).unwrap();
        assert!(matches!(f_profile(0.5, &hk), Err(Error::Domain { .. })));
        assert!(MetricProfile::new(-1.0, 2, 1.0).is_err());
        assert!(MetricProfile::new(1.0, 2, 0.0).is_err());
    }

    #[test]
    fn ode_residual_family_and_controls() {
        let hk = MetricProfile::new(0.0, 3, 2.0).unwrap();
        for tau in [2.5, 3.0, 10.0] {
            let (f, fp) = hk.eval(tau).unwrap();
            assert!((ode_residual(f, fp, tau, &hk) - 1.0).abs() < 1e-14);
        }
        let prof = MetricProfile::new(2.0, 2, 1.0).unwrap();
        for k in 0..50 {
            let tau = 1.01 + 0.1 * k as f64;
            let (f, fp) = prof.eval(tau).unwrap();
            assert!((ode_residual(f, fp, tau, &prof) - 1.0).abs() < 1e-9);
        }
        let constant = ConstantProfile { value: 1.0, n: 1, tau0: 1.0 };
        assert_eq!(ode_residual(1.0, 0.0, 2.0, &constant), 3.0);
        let pert = PerturbedProfile { base: prof, delta: 1e-3 };
        let (f, fp) = pert.eval(3.0).unwrap();
        assert!((ode_residual(f, fp, 3.0, &pert) - 1.0).abs() > 1e-4);
    }

    #[test]
    fn metric_at_origin() {
        for s in [c(2.0, 0.0), c(0.0, 3.0), c(1.0, 1.0)] {
            let pr = params(2, s);
            let m = metric_matrix(&ChartPoint::base(1, 2), &MetricProfile::hyperkahler(&pr), &pr).unwrap();
            let r = s.norm();
            let expected = CMatrix::from_diag(&[c(r, 0.0), c(r, 0.0), c(1.0 / r, 0.0), c(1.0 / r, 0.0)]);
            assert!(m.a.distance(&expected) <= 4.0 * f64::EPSILON * r);
        }
        let pr = params(3, ONE);
        let m = metric_matrix(&ChartPoint::base(0, 3), &MetricProfile::hyperkahler(&pr), &pr).unwrap();
        assert_eq!(m.a, CMatrix::identity(6));
    }

    #[test]
    fn metric_positive_and_unimodular() {
        let mut rng = Sampler::new(90);
        for n in 1..4 {
            let pr = params(n, c(0.3, 1.1));
            for a in [0.0, 0.5, 2.0] {
                let prof = MetricProfile::for_params(a, &pr).unwrap();
                for _ in 0..30 {
                    let p = rng.point_away_from_lagrangian(&pr, prof.exclusion() / pr.tau0);
                    let m = metric_matrix(&p, &prof, &pr).unwrap();
                    assert!(m.a.hermitian_deviation() < 1e-10 * m.a.frobenius_norm());
                    assert!(rel(m.det().unwrap(), 1.0) < 1e-9, "n={n} a={a}");
                    assert!(rel(det_a_closed_form(m.tau, &prof).unwrap(), 1.0) < 1e-12);
                    if a == 0.0 {
                        assert!(m.min_eigenvalue().unwrap() > 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_det_for_constant_profile() {
        let pr = params(1, ONE);
        let constant = ConstantProfile { value: 1.0, n: 1, tau0: 1.0 };
        assert_eq!(det_a_closed_form(2.0, &constant).unwrap(), 3.0);
        let p = ChartPoint::new(1, vec![ONE], vec![ZERO], &pr).unwrap();
        let m = metric_matrix(&p, &constant, &pr).unwrap();
        assert_eq!(m.tau, 2.0);
        assert!((m.det().unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn determinant_identities() {
        let pr = params(2, c(0.0, 2.0));
        let (lhs, rhs) = prop32_check(&ChartPoint::base(2, 2), &pr).unwrap();
        assert_eq!(lhs, 16.0);
        assert_eq!(rhs, 16.0);
        let base = prop33_check(&ChartPoint::base(2, 2), &pr).unwrap();
        assert_eq!((base.cramer, base.brute_force, base.rhs), (0.0, Some(0.0), 0.0));

        let pr1 = params(1, ONE);
        let p = ChartPoint::new(0, vec![ONE], vec![ZERO], &pr1).unwrap();
        let r = prop33_check(&p, &pr1).unwrap();
        assert_eq!(r.rhs, 4.0);
        assert!(rel(r.cramer, 4.0) < 1e-12);
        assert!(rel(r.brute_force.unwrap(), 4.0) < 1e-12);

        let mut rng = Sampler::new(3);
        for n in 1..4 {
            let pr = params(n, c(1.0, -0.2));
            for _ in 0..50 {
                let p = rng.point(&pr);
                let (l, r) = prop32_check(&p, &pr).unwrap();
                assert!(rel(l, r) < 1e-9);
                let q = prop33_check(&p, &pr).unwrap();
                assert!(rel(q.cramer, q.rhs) < 1e-8);
                if let Some(b) = q.brute_force {
                    assert!(rel(b, q.rhs) < 1e-8);
                }
                assert_eq!(q.brute_force.is_some(), n <= 2);
            }
        }
    }

    #[test]
    fn prop32_along_shrinking_z() {
        let pr = params(1, c(0.5, 0.5));
        for k in 0..20 {
            let scale = 2f64.powi(-k);
            let p = ChartPoint::new(0, vec![c(scale, -scale)], vec![c(0.3, 0.8)], &pr).unwrap();
            let (l, r) = prop32_check(&p, &pr).unwrap();
            assert!(rel(l, r) < 1e-12);
        }
    }

    #[test]
    fn ricci_form_vanishes_for_family() {
        let mut rng = Sampler::new(61);
        let pr = params(2, ONE);
        for a in [0.0, 1.0] {
            let prof = MetricProfile::for_params(a, &pr).unwrap();
            let p = rng.point_away_from_lagrangian(&pr, 0.1);
            let rho = ricci_form_fd(&p, &prof, &pr).unwrap();
            assert!(rho.max_abs() < 1e-6, "a={a}: {}", rho.max_abs());
        }
        let constant = ConstantProfile { value: 1.0, n: 2, tau0: 1.0 };
        let p = rng.point(&pr);
        assert!(ricci_form_fd(&p, &constant, &pr).unwrap().max_abs() > 1e-3);
    }

    #[test]
    fn ricci_stencil_outside_profile_domain() {
        let pr = params(1, ONE);
        let prof = MetricProfile::for_params(1.0, &pr).unwrap();
        let p = crate::moment::lagrangian_point(&[c(0.2, 0.1)], 0, &pr).unwrap();
        assert!(matches!(ricci_form_fd(&p, &prof, &pr), Err(Error::Domain { .. })));
    }
}
