//! Projectors onto matrices with orthonormal columns.
//!
//! [`polar_svd`] is the reference polar factor. The three fixed-point
//! iterations ([`polar_newton`], [`polar_newton_rect`],
//! [`polar_newton_schulz`]) use only products and inverses and are checked
//! against it. [`qr_projector`] spans the same column space at lower cost.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decomp::{eigh, thin_qr, thin_svd};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Polar decomposition `A = U H`.
#[derive(Debug, Clone)]
pub struct PolarFactors<T> {
    /// `m × p` with orthonormal columns.
    pub u: ComplexMatrix<T>,
    /// `p × p` Hermitian positive definite.
    pub h: ComplexMatrix<T>,
}

/// Stopping policy for fixed-point loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig<T> {
    /// Relative step tolerance `‖X_{k+1} − X_k‖ ≤ tol · ‖X_{k+1}‖`.
    pub tol: T,
    pub max_iters: usize,
}

impl<T: Real> Default for IterationConfig<T> {
    fn default() -> Self {
        Self { tol: T::iteration_tol(), max_iters: 100 }
    }
}

impl<T: Real> IterationConfig<T> {
    pub fn new(tol: T, max_iters: usize) -> Result<Self> {
        let cfg = Self { tol, max_iters };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > T::zero()) || self.max_iters == 0 {
            return Err(Error::Domain(format!(
                "iteration config needs tol > 0 and max_iters >= 1 (got tol = {}, max_iters = {})",
                self.tol, self.max_iters
            )));
        }
        Ok(())
    }
}

/// Result of an iterative polar solve.
#[derive(Debug, Clone)]
pub struct IterativePolar<T> {
    pub u: ComplexMatrix<T>,
    pub iterations: usize,
    /// Relative step `‖X_{k+1} − X_k‖ / ‖X_{k+1}‖` at exit.
    pub last_step: T,
    /// `‖U* U − I‖_F` at exit.
    pub orthogonality_residual: T,
}

/// Which algorithm evaluates the polar factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolarMethod {
    #[default]
    Svd,
    /// `X ← ½(X + X^{-*})`; square input only.
    Newton,
    /// `X ← 2X(I + X*X)^{-1}`.
    NewtonRect,
    /// `X ← ½X(3I − X*X)` after scaling by `1/‖A‖_F`.
    NewtonSchulz,
}

impl PolarMethod {
    pub const ALL: [PolarMethod; 4] = [Self::Svd, Self::Newton, Self::NewtonRect, Self::NewtonSchulz];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Svd => "svd",
            Self::Newton => "newton",
            Self::NewtonRect => "newton-rect",
            Self::NewtonSchulz => "newton-schulz",
        }
    }
}

impl fmt::Display for PolarMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolarMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown polar method '{s}'")))
    }
}

fn require_tall<T: Real>(a: &ComplexMatrix<T>, op: &str) -> Result<()> {
    let (m, p) = a.shape();
    if m < p || p == 0 {
        return Err(Error::Dimension(format!("{op} requires m >= p >= 1, got {m}x{p}")));
    }
    Ok(())
}

/// Polar factors from the thin SVD: `U = W V*`, `H = V Σ V*`.
pub fn polar_svd<T: Real>(a: &ComplexMatrix<T>) -> Result<PolarFactors<T>> {
    require_tall(a, "polar_svd")?;
    let svd = thin_svd(a)?;
    let ratio = svd.rank_ratio();
    if !(ratio > T::factorization_tol()) {
        return Err(Error::Rank { ratio: ratio.to_f64_lossy() });
    }
    let u = svd.u.matmul(&svd.v.adjoint());
    let p = svd.s.len();
    let vs = ComplexMatrix::from_fn(p, p, |i, j| svd.v[(i, j)] * svd.s[j]);
    let h = vs.matmul(&svd.v.adjoint()).sym_part()?;
    Ok(PolarFactors { u, h })
}

fn iterate<T: Real>(
    a: ComplexMatrix<T>,
    cfg: &IterationConfig<T>,
    mut step_fn: impl FnMut(&ComplexMatrix<T>) -> Result<ComplexMatrix<T>>,
) -> Result<IterativePolar<T>> {
    cfg.validate()?;
    let p = a.cols();
    let mut x = a;
    let mut last_step = T::infinity();
    for k in 1..=cfg.max_iters {
        let next = step_fn(&x)?;
        if !next.is_finite() {
            return Err(Error::Singular);
        }
        let nrm = next.frobenius_norm();
        last_step = next.distance(&x) / nrm;
        x = next;
        if last_step <= cfg.tol {
            let residual = x.orthonormality_defect();
            if residual > T::structure_tol() * T::lit(p as f64) {
                // converged to a partial isometry: the input had lost rank
                return Err(Error::Rank { ratio: 0.0 });
            }
            return Ok(IterativePolar { u: x, iterations: k, last_step, orthogonality_residual: residual });
        }
    }
    Err(Error::NonConvergence { iterations: cfg.max_iters, residual: last_step.to_f64_lossy() })
}

/// Newton iteration `X_{k+1} = ½(X_k + X_k^{-*})` for square nonsingular `A`.
pub fn polar_newton<T: Real>(a: &ComplexMatrix<T>, cfg: &IterationConfig<T>) -> Result<IterativePolar<T>> {
    a.require_square("polar_newton")?;
    require_tall(a, "polar_newton")?;
    let half = T::lit(0.5);
    iterate(a.clone(), cfg, |x| {
        let inv_adj = x.inverse()?.adjoint();
        Ok((x + &inv_adj).scale(half))
    })
}

/// Rectangular Newton variant `X_{k+1} = 2 X_k (I + X_k* X_k)^{-1}`.
pub fn polar_newton_rect<T: Real>(a: &ComplexMatrix<T>, cfg: &IterationConfig<T>) -> Result<IterativePolar<T>> {
    require_tall(a, "polar_newton_rect")?;
    let two = T::lit(2.0);
    iterate(a.clone(), cfg, |x| {
        let mut g = x.adjoint_mul(x);
        g.add_diagonal(T::one());
        Ok(x.matmul(&g.inverse()?).scale(two))
    })
}

/// Inverse-free Newton–Schulz iteration `X_{k+1} = ½ X_k (3I − X_k* X_k)`.
///
/// The input is first scaled by `1/‖A‖_F`, which puts every singular value
/// in `(0, 1]` and inside the `(0, √3)` convergence region.
pub fn polar_newton_schulz<T: Real>(a: &ComplexMatrix<T>, cfg: &IterationConfig<T>) -> Result<IterativePolar<T>> {
    require_tall(a, "polar_newton_schulz")?;
    let nrm = a.frobenius_norm();
    if nrm == T::zero() {
        return Err(Error::Rank { ratio: 0.0 });
    }
    let half = T::lit(0.5);
    let three = T::lit(3.0);
    iterate(a.scale(T::one() / nrm), cfg, |x| {
        let mut g = -x.adjoint_mul(x);
        g.add_diagonal(three);
        Ok(x.matmul(&g).scale(half))
    })
}

/// Polar factor `P(A)` by the chosen method.
pub fn polar_factor<T: Real>(
    a: &ComplexMatrix<T>,
    method: PolarMethod,
    cfg: &IterationConfig<T>,
) -> Result<ComplexMatrix<T>> {
    match method {
        PolarMethod::Svd => polar_svd(a).map(|f| f.u),
        PolarMethod::Newton => polar_newton(a, cfg).map(|r| r.u),
        PolarMethod::NewtonRect => polar_newton_rect(a, cfg).map(|r| r.u),
        PolarMethod::NewtonSchulz => polar_newton_schulz(a, cfg).map(|r| r.u),
    }
}

/// `Q` factor of the thin QR decomposition (positive diagonal gauge).
pub fn qr_projector<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    require_tall(a, "qr_projector")?;
    Ok(thin_qr(a)?.q)
}

/// Two-sided bound on `‖P(A) − Ũ‖_F` from the symmetry defect of `Ũ*A`
/// and the component of `A` outside `range(Ũ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapDiagnostic<T> {
    pub lower: T,
    pub upper: T,
    pub actual: T,
}

impl<T: Real> GapDiagnostic<T> {
    /// `lower ≤ actual ≤ upper` up to `slack`.
    pub fn holds(&self, slack: T) -> bool {
        self.lower <= self.actual + slack && self.actual <= self.upper + slack
    }
}

/// Evaluates both sides of the polar perturbation sandwich
///
/// ```text
/// max{2‖skew(Ũ*A)‖, ‖(I−ŨŨ*)A‖} / (2σ₁(A))
///     ≤ ‖P(A) − Ũ‖ ≤
/// 2(‖skew(Ũ*A)‖ + ‖(I−ŨŨ*)A‖) / (σ_p(A) + λ_p(sym(Ũ*A)))
/// ```
///
/// for orthonormal `Ũ` with `‖A − Ũ‖_F < 1`.
pub fn symmetry_gap<T: Real>(a: &ComplexMatrix<T>, u_tilde: &ComplexMatrix<T>) -> Result<GapDiagnostic<T>> {
    require_tall(a, "symmetry_gap")?;
    if a.shape() != u_tilde.shape() {
        return Err(Error::Dimension("symmetry_gap: A and U~ must have equal shapes".into()));
    }
    let defect = u_tilde.orthonormality_defect();
    if defect > T::structure_tol() * T::lit(a.cols() as f64) {
        return Err(Error::Domain(format!("U~ does not have orthonormal columns (defect {defect:e})")));
    }
    let dist = a.distance(u_tilde);
    if !(dist < T::one()) {
        return Err(Error::Domain(format!("symmetry_gap requires ||A - U~|| < 1, got {dist}")));
    }
    let svd = thin_svd(a)?;
    let ratio = svd.rank_ratio();
    if !(ratio > T::factorization_tol()) {
        return Err(Error::Domain(format!("symmetry_gap requires full-rank A (ratio {ratio:e})")));
    }
    let sigma_1 = svd.s[0];
    let sigma_p = *svd.s.last().expect("p >= 1");

    let m = u_tilde.adjoint_mul(a);
    let skew_norm = m.skew_part()?.frobenius_norm();
    let outside = (a - &u_tilde.matmul(&m)).frobenius_norm();
    let lambda_p = eigh(&m.sym_part()?)?.values[0];

    let two = T::lit(2.0);
    let lower = (two * skew_norm).max(outside) / (two * sigma_1);
    let upper = two * (skew_norm + outside) / (sigma_p + lambda_p);
    let u = svd.u.matmul(&svd.v.adjoint());
    let actual = u.distance(u_tilde);
    Ok(GapDiagnostic { lower, upper, actual })
}

/// Builds `(A*A)^{-1/2}`-based polar factor `A (A*A)^{-1/2}`; used as an
/// independent route in tests.
pub fn polar_via_gram<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    require_tall(a, "polar_via_gram")?;
    let g = a.adjoint_mul(a).sym_part()?;
    Ok(a.matmul(&crate::funcs::invsqrtm_hpd(&g)?))
}
