//! Projected polynomial retractions on the unitary group, the Grassmannian
//! and the Stiefel manifold.
//!
//! The exponential map on these manifolds is approximated by projecting a
//! matrix polynomial back onto the manifold with the polar decomposition (or
//! QR on the Grassmannian). Bessel polynomials give order `2n+1` accuracy for
//! the cost of `n` matrix products and one projection.
//!
//! ```
//! use polyretract::{retract_unitary, expm_skew, random_skew_hermitian, Manifold, Matrix, RetractionSpec};
//!
//! let omega: Matrix = random_skew_hermitian(8, 1).unwrap();
//! let spec = RetractionSpec::new(Manifold::Unitary, 2);
//! let approx = retract_unitary(&omega, 0.01, &spec).unwrap();
//! let exact = expm_skew(&omega.scale(0.01)).unwrap();
//! assert!(approx.distance(&exact) < 1e-12);
//! ```
//!
//! Kernels are generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod convergence;
pub mod decomp;
pub mod error;
pub mod funcs;
pub mod matrix;
pub mod means;
pub mod polar;
pub mod polynomials;
pub mod random;
pub mod retract;
pub mod scalar;

pub use convergence::{observed_order, ConvergenceSeries, Level, ERROR_FLOOR};
pub use decomp::{eigh, orth_completion, thin_qr, thin_svd, EigenDecompositionHermitian, ThinQr, ThinSvd};
pub use error::{Error, Result};
pub use funcs::{expm_skew, invsqrtm_hpd, logm_unitary, powm_unitary, SkewExponential};
pub use matrix::ComplexMatrix;
pub use means::{
    arithmetic_mean, geometric_mean, interpolate_polar, supercloseness_experiment, GeometricMean, SuperclosenessReport,
    SuperclosenessSetup, Weights,
};
pub use polar::{
    polar_factor, polar_newton, polar_newton_rect, polar_newton_schulz, polar_svd, qr_projector, symmetry_gap,
    GapDiagnostic, IterationConfig, IterativePolar, PolarFactors, PolarMethod,
};
pub use polynomials::{
    alpha_beta_coeffs, bessel_coeffs, eval_noncommutative, gamma_delta, theta_apply, BesselCoeffs, Letter,
    NoncommutativePoly, RationalPoly,
};
pub use random::{
    random_gaussian, random_grassmann_tangent, random_skew_hermitian, random_stiefel_point, random_stiefel_tangent,
    random_unitary,
};
pub use retract::{
    check_tangent, dist_grassmann, dist_unitary, exp_grassmann_exact, exp_stiefel_exact, retract, retract_grassmann,
    retract_stiefel, retract_unitary, GrassmannGeodesic, Manifold, Projector, RetractionSpec, StiefelGeodesic,
    TangentReport, TangentVector,
};
pub use scalar::Real;

pub type Matrix = ComplexMatrix<f64>;
pub type Matrix32 = ComplexMatrix<f32>;
pub type Complex64 = num_complex::Complex<f64>;
pub type Rational = num_rational::BigRational;
