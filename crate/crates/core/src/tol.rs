//! Numerical thresholds shared by the library, the verification suite and
//! the acceptance tests. Every comparison in the crate pulls its threshold
//! from here.

/// Absolute part of the matrix equality test (Frobenius norm).
pub const MATRIX_ABS: f64 = 1e-10;
/// Relative part of the matrix equality test (Frobenius norm).
pub const MATRIX_REL: f64 = 1e-8;

/// `|det| < SINGULAR_REL * ||M||_F^dim` is treated as singular.
pub const SINGULAR_REL: f64 = 1e-12;

/// Hermiticity deviation accepted by the eigenvalue routine.
pub const HERMITIAN: f64 = 1e-10;

/// Gauss pivots below this raise instead of producing noisy coordinates.
pub const PIVOT: f64 = 1e-10;

/// Upper-right block norm accepted for an element of the parabolic subalgebra.
pub const PARABOLIC: f64 = 1e-12;

/// Traceless check for Lie algebra elements.
pub const TRACE: f64 = 1e-12;

/// Relative size of the excluded band around the Lagrangian locus when a > 0.
pub const LAGRANGIAN_EXCLUSION: f64 = 1e-3;

/// Central-difference step for first derivatives (scaled by max(1, |x|)).
pub const FD_STEP_FIRST: f64 = 1e-5;
/// Step for mixed second derivatives.
pub const FD_STEP_SECOND: f64 = 1e-4;
/// Step for the five-point stencils used on chart transitions.
pub const FD_STEP_PATH: f64 = 1e-4;
/// Step for the Ricci form. `log det A` vanishes identically for the family,
/// so the stencil only sees roundoff divided by `h²` and a wider step wins.
pub const FD_STEP_RICCI: f64 = 1e-2;

// Acceptance thresholds.

pub const DET_UNIT_REL: f64 = 1e-9;
pub const ODE_RESIDUAL: f64 = 1e-9;
pub const ODE_NEGATIVE_MIN: f64 = 1e-4;
pub const PROP32_REL: f64 = 1e-9;
pub const PROP33_REL: f64 = 1e-8;
pub const SYMPLECTIC_DEFECT: f64 = 1e-9;
pub const DEFECT_NEGATIVE_MIN: f64 = 1e-3;
pub const QUATERNION: f64 = 1e-10;
pub const HERMITICITY: f64 = 1e-9;
pub const TAU_COHERENCE: f64 = 1e-10;
pub const TAU_INVARIANCE: f64 = 1e-9;
pub const TRANSITION_ROUNDTRIP: f64 = 1e-9;
pub const GLUING: f64 = 1e-5;
pub const MOMENT: f64 = 1e-9;
pub const KAHLER_POTENTIAL_REL: f64 = 1e-5;
pub const LEMMA: f64 = 1e-10;
pub const GAUSS_ROUNDTRIP: f64 = 1e-10;
pub const GRAD_FD_REL: f64 = 1e-6;
pub const HESS_FD_REL: f64 = 1e-5;
pub const RICCI_FD: f64 = 1e-6;
