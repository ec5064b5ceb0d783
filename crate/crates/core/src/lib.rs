//! Explicit hyperkähler metric on twisted cotangent bundles of `CPⁿ`.
//!
//! The bundle is covered by `n + 1` charts with holomorphic coordinates
//! `(z, ξ) ∈ ℂⁿ × (ℂⁿ)*`. On each chart the crate evaluates
//!
//! * the `SU(n+1)`-invariant function `τ = (‖z‖² + 1)(‖ξ‖² + |s − ξz|²)`
//!   and its first and mixed second Wirtinger derivatives,
//! * the Kähler metric `g_{ij̄} = f(τ) τ_{ij̄} + f'(τ) τ_i τ_j̄` for the
//!   Ricci-flat family `f(τ; a)`,
//! * the complex structures `I, J, K` built from the metric and the
//!   holomorphic symplectic form `Σ dz_i ∧ dξ_i`,
//!
//! together with the group machinery (chart representatives, Gauss
//! factorization, transitions, the `SL(n+1, ℂ)` action) and the moment maps
//! that tie the charts to the coadjoint orbit. The [`harness`] module runs
//! every identity as a seeded numerical check and produces a report.

pub mod error;
pub mod fd;
pub mod group;
pub mod harness;
pub mod hyperkahler;
pub mod linalg;
pub mod metric;
pub mod moment;
pub mod sampling;
pub mod tol;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use group::{
    character_pairing, gauss_factor, group_action, random_su, sigma, transition, u_lower, u_upper,
    ChartPoint, GaussFactors, GroupElement, LeviElement, ModelParams,
};
pub use harness::{run_suite, CheckId, SuiteConfig, VerificationReport};
pub use hyperkahler::{
    blockwise_oracle, build_triple, hermiticity_check, kahler_potential_check,
    omega_constant_forms, symplectic_defect, AcsTriple, SymplecticUnit,
};
pub use linalg::{hermitian_min_eigenvalue, rank2_det, rank2_inverse, CMatrix, Lambda2x2};
pub use metric::{
    det_a_closed_form, f_profile, metric_matrix, ode_residual, prop32_check, prop33_check,
    ricci_form_fd, tau_jet, ConstantProfile, MetricMatrix, MetricProfile, PerturbedProfile,
    Profile, TauJet,
};
pub use moment::{
    lagrangian_point, lambda_vee, mu_minus, mu_plus, tau_global, tau_local, LieAlgebraElement,
};

/// Shorthand for `C64::new(re, im)`.
pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
