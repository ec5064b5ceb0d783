//! Complex structures `I, J, K` in the basis `Σ = {∂₁, …, ∂₂ₙ, ∂̄₁, …, ∂̄₂ₙ}`
//! and the `Sp(2n, ℂ)` criterion `ᵗA S A = S` for the metric matrix.

use crate::error::Result;
use crate::fd::fd_mixed_wirtinger;
use crate::group::{ChartPoint, ModelParams};
use crate::linalg::{norm_sqr, pairing, CMatrix, I, ONE, ZERO};
use crate::metric::{metric_matrix, tau_jet, MetricProfile, Profile};
use crate::moment::tau_local;
use crate::{tol, C64};

/// `S = [0 1ₙ; −1ₙ 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticUnit {
    pub s: CMatrix,
}

impl SymplecticUnit {
    pub fn new(n: usize) -> Self {
        let s = CMatrix::from_fn(2 * n, 2 * n, |r, c| {
            if c == r + n {
                ONE
            } else if r == c + n {
                -ONE
            } else {
                ZERO
            }
        });
        Self { s }
    }

    pub fn n(&self) -> usize {
        self.s.rows() / 2
    }

    /// `S⁻¹ = −S`
    pub fn inverse(&self) -> CMatrix {
        -&self.s
    }
}

/// `(I, J, K)` as `4n x 4n` matrices acting on component columns.
#[derive(Debug, Clone, PartialEq)]
pub struct AcsTriple {
    pub i: CMatrix,
    pub j: CMatrix,
    pub k: CMatrix,
}

impl AcsTriple {
    /// `‖IJK + 1‖_F`
    pub fn quaternion_defect(&self) -> f64 {
        let ijk = &(&self.i * &self.j) * &self.k;
        plus_identity_norm(&ijk)
    }

    /// `(‖I² + 1‖_F, ‖J² + 1‖_F, ‖K² + 1‖_F)`
    pub fn square_defects(&self) -> (f64, f64, f64) {
        let sq = |m: &CMatrix| plus_identity_norm(&(m * m));
        (sq(&self.i), sq(&self.j), sq(&self.k))
    }
}

fn plus_identity_norm(m: &CMatrix) -> f64 {
    (m + &CMatrix::identity(m.rows())).frobenius_norm()
}

/// `𝕀 = i·diag(1₂ₙ, −1₂ₙ)`, `𝕁 = [0 ᵗA⁻¹S⁻¹; A⁻¹S⁻¹ 0]`,
/// `𝕂 = [0 −iSA; iSᵗA 0]`.
pub fn build_triple(a: &CMatrix) -> Result<AcsTriple> {
    let m = a.rows();
    let unit = SymplecticUnit::new(m / 2);
    let s = &unit.s;
    let s_inv = unit.inverse();
    let a_inv = a.inverse()?;
    let zero = CMatrix::zeros(m, m);
    let id = CMatrix::identity(m);

    let i = CMatrix::from_blocks(&id.scale(I), &zero, &zero, &id.scale(-I));
    let j = CMatrix::from_blocks(&zero, &(&a_inv.transpose() * &s_inv), &(&a_inv * &s_inv), &zero);
    let k = CMatrix::from_blocks(
        &zero,
        &(s * a).scale(-I),
        &(s * &a.transpose()).scale(I),
        &zero,
    );
    Ok(AcsTriple { i, j, k })
}

/// Coefficient matrices `Ω` with `ω(u, v) = ᵗu Ω v` in basis `Σ` for
/// `ω_I = (i/2) Σ g_{ij̄} dz_i ∧ dz̄_j`, `ω_J`, `ω_K`.
pub fn omega_matrices(a: &CMatrix) -> (CMatrix, CMatrix, CMatrix) {
    let m = a.rows();
    let zero = CMatrix::zeros(m, m);
    let omega_i = CMatrix::from_blocks(&zero, a, &(-&a.transpose()), &zero).scale(0.5 * I);
    let (omega_j, omega_k) = omega_constant_forms(m / 2);
    (omega_i, omega_j, omega_k)
}

/// `ω_J = ½ Σ (dz_i ∧ dz_{n+i} + dz̄_i ∧ dz̄_{n+i})` and
/// `ω_K = −(i/2) Σ (dz_i ∧ dz_{n+i} − dz̄_i ∧ dz̄_{n+i})` in basis `Σ`.
pub fn omega_constant_forms(n: usize) -> (CMatrix, CMatrix) {
    let s = SymplecticUnit::new(n).s;
    let zero = CMatrix::zeros(2 * n, 2 * n);
    let omega_j = CMatrix::from_blocks(&s, &zero, &zero, &s).scale_re(0.5);
    let omega_k = CMatrix::from_blocks(&s, &zero, &zero, &(-&s)).scale(-0.5 * I);
    (omega_j, omega_k)
}

/// `J = (ω_I^♭)⁻¹ ∘ ω_K^♭` and `K = (ω_J^♭)⁻¹ ∘ ω_I^♭`, with `ω^♭ = ᵗΩ`,
/// computed by dense inversion of the form matrices.
pub fn triple_from_forms(a: &CMatrix) -> Result<AcsTriple> {
    let (omega_i, omega_j, omega_k) = omega_matrices(a);
    let m = a.rows();
    let id = CMatrix::identity(m);
    let zero = CMatrix::zeros(m, m);
    let i = CMatrix::from_blocks(&id.scale(I), &zero, &zero, &id.scale(-I));
    let j = &omega_i.transpose().inverse()? * &omega_k.transpose();
    let k = &omega_j.transpose().inverse()? * &omega_i.transpose();
    Ok(AcsTriple { i, j, k })
}

/// `ᵗA S A − S`.
pub fn symplectic_defect(a: &CMatrix) -> CMatrix {
    let s = SymplecticUnit::new(a.rows() / 2).s;
    &(&(&a.transpose() * &s) * a) - &s
}

/// Dense and closed-form evaluations of `ᵗA S A − S`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockwiseOracle {
    pub direct: CMatrix,
    pub blockwise: CMatrix,
    /// `‖ᵗA'' S A''‖_F` for the rank-one part `A'' = b b*`.
    pub rank_one_term: f64,
}

impl BlockwiseOracle {
    pub fn discrepancy(&self) -> f64 {
        self.direct.distance(&self.blockwise)
    }
}

/// Assembles `ᵗASA − S = c²·ᵗA'SA' + cc₁·(ᵗA'SA'' + ᵗA''SA') − S` from the
/// explicit `n x n` blocks of `ᵗA'SA'` and `ᵗA'SA''`, next to the dense product.
pub fn blockwise_oracle<P: Profile + ?Sized>(
    p: &ChartPoint,
    profile: &P,
    params: &ModelParams,
) -> Result<BlockwiseOracle> {
    let n = params.n;
    let metric = metric_matrix(p, profile, params)?;
    let direct = symplectic_defect(&metric.a);

    let jet = tau_jet(p, params);
    let rank_one = jet.grad_outer();
    let rank_one_term = (&(&rank_one.transpose() * &SymplecticUnit::new(n).s) * &rank_one).frobenius_norm();

    let z = &p.z;
    let xi = &p.xi;
    let zb: Vec<C64> = z.iter().map(C64::conj).collect();
    let xib: Vec<C64> = xi.iter().map(C64::conj).collect();
    let o = CMatrix::outer;
    let id = CMatrix::identity(n);

    let s = params.s;
    let sb = s.conj();
    let psi1 = norm_sqr(z) + 1.0;
    let nxi = norm_sqr(xi);
    let xz = pairing(xi, z);
    let sxz = s - xz;
    let psi2 = nxi + sxz.norm_sqr();
    let cr = |x: f64| C64::new(x, 0.0);

    // ᵗA'SA'
    let p11 = (&o(z, &xib) - &o(&xib, z)).scale(sxz * xz.conj() - nxi);
    let p12 = &(&(&(&id.scale_re(psi1 * psi2) - &o(&xib, &zb).scale(psi1 * sxz))
        + &o(z, &zb).scale(sb * sxz))
        + &o(&xib, xi).scale_re(psi1))
        - &o(z, xi).scale(sb);
    let p21 = -&p12.transpose();
    let p22 = CMatrix::zeros(n, n);

    // ᵗA'SA''
    let e = cr(psi2 + nxi) - sxz * xz.conj();
    let q11 = &(&(&o(&xib, &xib).scale(-sxz * psi1 * psi1 * e) - &o(z, z).scale(sb * psi2 * psi2))
        + &o(&xib, z).scale(psi1 * psi2 * e))
        + &o(z, &xib).scale(sb * sxz * psi1 * psi2);
    let q12 = (&(&(&o(&xib, xi).scale(psi1 * e) + &o(z, &zb).scale(sb * sxz * psi2))
        - &o(z, xi).scale(sb * psi2))
        - &o(&xib, &zb).scale(sxz * psi1 * e))
        .scale_re(psi1);
    let q21 = (&(&(&o(xi, &xib).scale(-sxz * psi1) - &o(&zb, z).scale(sxz * psi2))
        + &o(xi, z).scale_re(psi2))
        + &o(&zb, &xib).scale(sxz * sxz * psi1))
        .scale(sb * psi1);
    let q22 = (&(&(&o(xi, xi) + &o(&zb, &zb).scale(sxz * sxz)) - &o(&zb, xi).scale(sxz))
        - &o(xi, &zb).scale(sxz))
        .scale(sb * psi1 * psi1);

    let c2 = metric.f * metric.f;
    let cc1 = metric.f * metric.fprime;
    let assemble = |pb: &CMatrix, qa: &CMatrix, qb: &CMatrix, unit: f64| {
        // c²P + cc₁(Q − ᵗQ) − S, block by block
        let mut m = &pb.scale_re(c2) + &(qa - &qb.transpose()).scale_re(cc1);
        for d in 0..n {
            m[(d, d)] -= unit;
        }
        m
    };
    let b11 = assemble(&p11, &q11, &q11, 0.0);
    let b12 = assemble(&p12, &q12, &q21, 1.0);
    let b21 = assemble(&p21, &q21, &q12, -1.0);
    let b22 = assemble(&p22, &q22, &q22, 0.0);
    let blockwise = CMatrix::from_blocks(&b11, &b12, &b21, &b22);
    Ok(BlockwiseOracle { direct, blockwise, rank_one_term })
}

/// Gram matrix of `g` in basis `Σ`: `[0 ½A; ½ᵗA 0]`.
pub fn gram_matrix(a: &CMatrix) -> CMatrix {
    let m = a.rows();
    let zero = CMatrix::zeros(m, m);
    CMatrix::from_blocks(&zero, &a.scale_re(0.5), &a.transpose().scale_re(0.5), &zero)
}

/// Outcome of one invariance check `ᵗM G M = G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckStatus {
    Passed(f64),
    Failed(f64),
    /// Precondition `ᵗASA = S` not met; the value is the defect norm.
    Skipped(f64),
}

impl CheckStatus {
    fn from_defect(defect: f64, threshold: f64) -> Self {
        if defect < threshold {
            Self::Passed(defect)
        } else {
            Self::Failed(defect)
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Self::Passed(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Passed(_) => "pass",
            Self::Failed(_) => "fail",
            Self::Skipped(_) => "skipped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiticityReport {
    pub i: CheckStatus,
    pub j: CheckStatus,
    pub k: CheckStatus,
    pub symplectic_defect: f64,
}

/// `g(Mv, Mw) = g(v, w)` for `M ∈ {I, J, K}`. The `J` and `K` checks need
/// the quaternion relations and are skipped when `‖ᵗASA − S‖_F` exceeds the
/// symplectic tolerance.
pub fn hermiticity_check(a: &CMatrix, triple: &AcsTriple) -> HermiticityReport {
    let g = gram_matrix(a);
    let invariance = |m: &CMatrix| (&(&m.transpose() * &g) * m).distance(&g);
    let defect = symplectic_defect(a).frobenius_norm();
    let i = CheckStatus::from_defect(invariance(&triple.i), tol::HERMITICITY);
    let (j, k) = if defect < tol::SYMPLECTIC_DEFECT {
        (
            CheckStatus::from_defect(invariance(&triple.j), tol::HERMITICITY),
            CheckStatus::from_defect(invariance(&triple.k), tol::HERMITICITY),
        )
    } else {
        (CheckStatus::Skipped(defect), CheckStatus::Skipped(defect))
    };
    HermiticityReport { i, j, k, symplectic_defect: defect }
}

/// `(g_{ij̄}, 2 ∂_i∂̄_j √τ)`, the second by mixed finite differences.
pub fn kahler_potential_check(p: &ChartPoint, params: &ModelParams) -> Result<(CMatrix, CMatrix)> {
    let analytic = metric_matrix(p, &MetricProfile::hyperkahler(params), params)?.a;
    let alpha = p.alpha;
    let potential = |w: &[C64]| Ok(tau_local(&ChartPoint::from_coords(alpha, w), params).sqrt());
    let fd = fd_mixed_wirtinger(potential, &p.coords(), tol::FD_STEP_SECOND)?.scale_re(2.0);
    Ok((analytic, fd))
}

/// Seed of the sampled point at which the non-hyperkähler members of the
/// family are shown to leave `Sp(2n, ℂ)`.
pub const WITNESS_SEED: u64 = 20240917;

/// The witness point for `params`: the first point drawn with
/// [`WITNESS_SEED`] whose `τ` lies in `[1.1 τ₀, 2 τ₀]`. The defect of the
/// `a > 0` metrics decays as `τ → ∞`, so the witness is taken near the
/// Lagrangian locus.
pub fn witness_point(params: &ModelParams) -> ChartPoint {
    let mut rng = crate::sampling::Sampler::new(WITNESS_SEED);
    loop {
        let p = rng.point(params);
        let r = (tau_local(&p, params) - params.tau0) / params.tau0;
        if (0.1..=1.0).contains(&r) {
            return p;
        }
    }
}
