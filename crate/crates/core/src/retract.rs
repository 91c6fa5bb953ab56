//! Projected-polynomial retractions on the unitary group, the Grassmannian
//! and the Stiefel manifold, with the exact geodesics they approximate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decomp::{orth_completion, thin_svd, ThinSvd};
use crate::error::{Error, Result};
use crate::funcs::{logm_unitary, require_unitary, SkewExponential};
use crate::matrix::ComplexMatrix;
use crate::polar::{polar_factor, qr_projector, IterationConfig, PolarMethod};
use crate::polynomials::{
    alpha_beta_coeffs, eval_noncommutative, gamma_delta, poly_apply, rational_to_real, theta_apply, MAX_BESSEL_ORDER,
    STIEFEL_ORDERS,
};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Manifold {
    Unitary,
    Grassmann,
    Stiefel,
}

impl Manifold {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Unitary => "unitary",
            Self::Grassmann => "grassmann",
            Self::Stiefel => "stiefel",
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Manifold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unitary" => Ok(Self::Unitary),
            "grassmann" => Ok(Self::Grassmann),
            "stiefel" => Ok(Self::Stiefel),
            _ => Err(Error::Domain(format!("unknown manifold '{s}'"))),
        }
    }
}

/// Map from the pre-projection matrix back to the manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projector {
    #[default]
    Polar,
    /// Thin-QR `Q` factor; only meaningful on the Grassmannian.
    Qr,
}

impl Projector {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Polar => "polar",
            Self::Qr => "qr",
        }
    }
}

impl fmt::Display for Projector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Projector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polar" => Ok(Self::Polar),
            "qr" => Ok(Self::Qr),
            _ => Err(Error::Domain(format!("unknown projector '{s}'"))),
        }
    }
}

fn tangent_tol<T: Real>(direction: &ComplexMatrix<T>) -> T {
    T::structure_tol() * direction.frobenius_norm().max(T::one())
}

fn base_tol<T: Real>(p: usize) -> T {
    T::structure_tol() * T::lit(p.max(1) as f64)
}

/// A base point together with a tangent direction.
///
/// On the unitary group the base is the identity and the direction is the
/// skew-Hermitian `Ω`; other base points follow by left multiplication.
#[derive(Debug, Clone)]
pub struct TangentVector<T> {
    manifold: Manifold,
    base: ComplexMatrix<T>,
    direction: ComplexMatrix<T>,
}

impl<T: Real> TangentVector<T> {
    pub fn unitary(omega: ComplexMatrix<T>) -> Result<Self> {
        omega.require_square("unitary tangent")?;
        let tv = Self::new_unchecked(Manifold::Unitary, ComplexMatrix::identity(omega.rows()), omega);
        tv.validated()
    }

    pub fn grassmann(y: ComplexMatrix<T>, h: ComplexMatrix<T>) -> Result<Self> {
        Self::new_unchecked(Manifold::Grassmann, y, h).validated()
    }

    pub fn stiefel(y: ComplexMatrix<T>, h: ComplexMatrix<T>) -> Result<Self> {
        Self::new_unchecked(Manifold::Stiefel, y, h).validated()
    }

    /// Skips validation; [`check_tangent`] reports what is violated.
    pub fn new_unchecked(manifold: Manifold, base: ComplexMatrix<T>, direction: ComplexMatrix<T>) -> Self {
        Self { manifold, base, direction }
    }

    fn validated(self) -> Result<Self> {
        let (m, p) = self.base.shape();
        if self.base.shape() != self.direction.shape() || m < p || p == 0 {
            return Err(Error::Dimension(format!(
                "tangent vector needs base and direction of equal m x p shape with m >= p >= 1, got {:?} and {:?}",
                self.base.shape(),
                self.direction.shape()
            )));
        }
        if !self.direction.is_finite() {
            return Err(Error::Domain("tangent direction has non-finite entries".into()));
        }
        let report = check_tangent(&self);
        if report.base_defect > base_tol::<T>(p) {
            return Err(Error::Structure { what: "orthonormal base point", defect: report.base_defect.to_f64_lossy() });
        }
        if let Some((what, defect)) = report.worst_violation() {
            return Err(Error::Structure { what, defect: defect.to_f64_lossy() });
        }
        Ok(self)
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn base(&self) -> &ComplexMatrix<T> {
        &self.base
    }

    pub fn direction(&self) -> &ComplexMatrix<T> {
        &self.direction
    }

    /// The same point and direction with `H` multiplied by `s`.
    pub fn scaled(&self, s: T) -> Self {
        Self::new_unchecked(self.manifold, self.base.clone(), self.direction.scale(s))
    }
}

/// Norms of the tangent-space defects of a [`TangentVector`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentReport<T> {
    pub manifold: Manifold,
    /// `‖Y*Y − I‖_F`.
    pub base_defect: T,
    /// `‖Y*H‖_F`; Grassmann requires it to vanish.
    pub normal_component: T,
    /// `‖sym(Y*H)‖_F`; Stiefel requires it to vanish.
    pub symmetric_component: T,
    /// `‖skew(Ω) − Ω‖_F` for the unitary direction.
    pub skew_defect: T,
    pub tolerance: T,
    pub passed: bool,
}

impl<T: Real> TangentReport<T> {
    fn worst_violation(&self) -> Option<(&'static str, T)> {
        if self.passed {
            return None;
        }
        Some(match self.manifold {
            Manifold::Unitary => ("skew-Hermitian direction", self.skew_defect),
            Manifold::Grassmann => ("Grassmann tangent (Y*H = 0)", self.normal_component),
            Manifold::Stiefel => ("Stiefel tangent (Y*H skew-Hermitian)", self.symmetric_component),
        })
    }
}

/// Diagnostics only: never fails, shape mismatches report infinite defects.
pub fn check_tangent<T: Real>(tv: &TangentVector<T>) -> TangentReport<T> {
    let (y, h) = (&tv.base, &tv.direction);
    let tolerance = tangent_tol(h);
    let inf = T::infinity();
    let mut report = TangentReport {
        manifold: tv.manifold,
        base_defect: y.orthonormality_defect(),
        normal_component: inf,
        symmetric_component: inf,
        skew_defect: inf,
        tolerance,
        passed: false,
    };
    if h.is_square() {
        report.skew_defect = h.skew_defect() * T::lit(0.5);
    }
    if y.rows() == h.rows() {
        let yh = y.adjoint_mul(h);
        report.normal_component = yh.frobenius_norm();
        if yh.is_square() {
            // ‖sym(A)‖ = ½‖A + A*‖
            report.symmetric_component = yh.skew_defect() * T::lit(0.5);
        }
    }
    let base_ok = report.base_defect <= base_tol::<T>(y.cols());
    report.passed = base_ok
        && y.shape() == h.shape()
        && match tv.manifold {
            Manifold::Unitary => report.skew_defect <= tolerance,
            Manifold::Grassmann => report.normal_component <= tolerance,
            Manifold::Stiefel => report.symmetric_component <= tolerance,
        };
    report
}

/// Which retraction to apply and how to project.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetractionSpec<T> {
    pub manifold: Manifold,
    pub order_n: usize,
    pub projector: Projector,
    pub polar_method: PolarMethod,
    /// Stopping rule for the iterative polar methods.
    pub iteration: IterationConfig<T>,
}

impl<T: Real> RetractionSpec<T> {
    /// Polar projector via SVD with default iteration settings.
    pub fn new(manifold: Manifold, order_n: usize) -> Self {
        Self {
            manifold,
            order_n,
            projector: Projector::Polar,
            polar_method: PolarMethod::Svd,
            iteration: IterationConfig::default(),
        }
    }

    pub fn with_projector(mut self, projector: Projector) -> Self {
        self.projector = projector;
        self
    }

    pub fn with_polar_method(mut self, method: PolarMethod) -> Self {
        self.polar_method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.iteration.validate()?;
        if self.projector == Projector::Qr && self.manifold != Manifold::Grassmann {
            return Err(Error::Domain(format!(
                "the QR projector is only valid on the Grassmannian, not the {} manifold",
                self.manifold
            )));
        }
        match self.manifold {
            Manifold::Stiefel if !STIEFEL_ORDERS.contains(&self.order_n) => Err(Error::UnsupportedOrder(self.order_n)),
            _ if self.order_n > MAX_BESSEL_ORDER => Err(Error::UnsupportedOrder(self.order_n)),
            _ => Ok(()),
        }
    }

    fn expect(&self, manifold: Manifold) -> Result<()> {
        if self.manifold != manifold {
            return Err(Error::Domain(format!(
                "retraction spec is for the {} manifold, called on {manifold}",
                self.manifold
            )));
        }
        self.validate()
    }
}

fn step_guard(e: Error) -> Error {
    match e {
        Error::Rank { .. } | Error::Singular => Error::StepTooLarge,
        other => other,
    }
}

fn project<T: Real>(a: &ComplexMatrix<T>, spec: &RetractionSpec<T>) -> Result<ComplexMatrix<T>> {
    let u = match spec.projector {
        Projector::Polar => polar_factor(a, spec.polar_method, &spec.iteration),
        Projector::Qr => qr_projector(a),
    };
    u.map_err(step_guard)
}

fn require_manifold<T>(tv: &TangentVector<T>, manifold: Manifold) -> Result<()> {
    if tv.manifold != manifold {
        return Err(Error::Domain(format!("expected a {manifold} tangent vector, got {}", tv.manifold)));
    }
    Ok(())
}

/// `P(Θ_n(tΩ))`, which agrees with `e^{tΩ}` to `O(t^{2n+1})`.
pub fn retract_unitary<T: Real>(omega: &ComplexMatrix<T>, t: T, spec: &RetractionSpec<T>) -> Result<ComplexMatrix<T>> {
    spec.expect(Manifold::Unitary)?;
    let tv = TangentVector::unitary(omega.clone())?;
    let a = theta_apply(spec.order_n, &tv.direction.scale(t))?;
    project(&a, spec)
}

/// `Y α_n(t²H*H) + tH β_n(t²H*H)` before projection. Everything beyond the
/// `m × p` inputs is `p × p`.
pub fn grassmann_argument<T: Real>(tv: &TangentVector<T>, t: T, n: usize) -> Result<ComplexMatrix<T>> {
    let (alpha, beta) = alpha_beta_coeffs(n)?;
    let (y, h) = (&tv.base, &tv.direction);
    let x = h.adjoint_mul(h).scale(t * t);
    let alpha: Vec<T> = alpha.iter().map(rational_to_real).collect();
    let beta: Vec<T> = beta.iter().map(rational_to_real).collect();
    let mut a = y.matmul(&poly_apply(&alpha, &x)?);
    if !beta.is_empty() {
        a += &h.matmul(&poly_apply(&beta, &x)?).scale(t);
    }
    Ok(a)
}

/// Grassmann retraction of order `2n+1` with either projector.
pub fn retract_grassmann<T: Real>(tv: &TangentVector<T>, t: T, spec: &RetractionSpec<T>) -> Result<ComplexMatrix<T>> {
    spec.expect(Manifold::Grassmann)?;
    require_manifold(tv, Manifold::Grassmann)?;
    project(&grassmann_argument(tv, t, spec.order_n)?, spec)
}

/// `Y γ_n(t²H*H, tY*H) + tH δ_n(t²H*H, tY*H)` before projection.
pub fn stiefel_argument<T: Real>(tv: &TangentVector<T>, t: T, n: usize) -> Result<ComplexMatrix<T>> {
    let (gamma, delta) = gamma_delta(n)?;
    let (y, h) = (&tv.base, &tv.direction);
    let x = h.adjoint_mul(h).scale(t * t);
    let w = y.adjoint_mul(h).scale(t);
    let mut a = y.matmul(&eval_noncommutative(&gamma, &x, &w)?);
    a += &h.matmul(&eval_noncommutative(&delta, &x, &w)?).scale(t);
    Ok(a)
}

/// Stiefel retraction; order `n+1` in general and `2n+1` when `Y*H = 0`
/// or `m = p`.
pub fn retract_stiefel<T: Real>(tv: &TangentVector<T>, t: T, spec: &RetractionSpec<T>) -> Result<ComplexMatrix<T>> {
    spec.expect(Manifold::Stiefel)?;
    require_manifold(tv, Manifold::Stiefel)?;
    project(&stiefel_argument(tv, t, spec.order_n)?, spec)
}

/// Dispatches on `spec.manifold`. Unitary retractions use the direction as `Ω`.
pub fn retract<T: Real>(tv: &TangentVector<T>, t: T, spec: &RetractionSpec<T>) -> Result<ComplexMatrix<T>> {
    match spec.manifold {
        Manifold::Unitary => {
            require_manifold(tv, Manifold::Unitary)?;
            retract_unitary(&tv.direction, t, spec)
        }
        Manifold::Grassmann => retract_grassmann(tv, t, spec),
        Manifold::Stiefel => retract_stiefel(tv, t, spec),
    }
}

/// Grassmann geodesic `t ↦ Y V cos(tΣ) V* + U sin(tΣ) V*` where `H = U Σ V*`.
#[derive(Debug, Clone)]
pub struct GrassmannGeodesic<T> {
    yv: ComplexMatrix<T>,
    svd: ThinSvd<T>,
}

impl<T: Real> GrassmannGeodesic<T> {
    pub fn new(tv: &TangentVector<T>) -> Result<Self> {
        require_manifold(tv, Manifold::Grassmann)?;
        let svd = thin_svd(&tv.direction)?;
        Ok(Self { yv: tv.base.matmul(&svd.v), svd })
    }

    pub fn at(&self, t: T) -> ComplexMatrix<T> {
        let (m, p) = self.yv.shape();
        let (cos, sin): (Vec<T>, Vec<T>) = self.svd.s.iter().map(|&s| ((t * s).cos(), (t * s).sin())).unzip();
        let u = &self.svd.u;
        let mixed = ComplexMatrix::from_fn(m, p, |i, j| self.yv[(i, j)] * cos[j] + u[(i, j)] * sin[j]);
        mixed.matmul(&self.svd.v.adjoint())
    }
}

pub fn exp_grassmann_exact<T: Real>(tv: &TangentVector<T>, t: T) -> Result<ComplexMatrix<T>> {
    Ok(GrassmannGeodesic::new(tv)?.at(t))
}

/// Stiefel geodesic for the canonical metric,
/// `t ↦ [Y Y⊥] exp(t [Ω −K*; K 0]) [I; 0]` with `Ω = Y*H`, `K = Y⊥*H`.
///
/// Builds an `m × m` eigendecomposition once; each `at` is then two products.
#[derive(Debug, Clone)]
pub struct StiefelGeodesic<T> {
    frame: ComplexMatrix<T>,
    exp: SkewExponential<T>,
    p: usize,
}

impl<T: Real> StiefelGeodesic<T> {
    pub fn new(tv: &TangentVector<T>) -> Result<Self> {
        require_manifold(tv, Manifold::Stiefel)?;
        let (y, h) = (&tv.base, &tv.direction);
        let (m, p) = y.shape();
        let y_perp = orth_completion(y)?;
        let omega = y.adjoint_mul(h).skew_part()?;
        let k = y_perp.adjoint_mul(h);
        let mut z = ComplexMatrix::zeros(m, m);
        z.set_block(0, 0, &omega);
        z.set_block(p, 0, &k);
        z.set_block(0, p, &-k.adjoint());
        Ok(Self { frame: y.hstack(&y_perp), exp: SkewExponential::new(&z)?, p })
    }

    pub fn at(&self, t: T) -> ComplexMatrix<T> {
        self.frame.matmul(&self.exp.leading_columns(t, self.p))
    }
}

pub fn exp_stiefel_exact<T: Real>(tv: &TangentVector<T>, t: T) -> Result<ComplexMatrix<T>> {
    Ok(StiefelGeodesic::new(tv)?.at(t))
}

/// `‖log(U*V)‖_F / √2`.
pub fn dist_unitary<T: Real>(u: &ComplexMatrix<T>, v: &ComplexMatrix<T>) -> Result<T> {
    require_unitary(u)?;
    require_unitary(v)?;
    if u.shape() != v.shape() {
        return Err(Error::Dimension("dist_unitary needs equal shapes".into()));
    }
    Ok(logm_unitary(&u.adjoint_mul(v))?.frobenius_norm() / T::SQRT_2())
}

/// `min ‖X V − Y W‖_F` over unitary `V`, `W`.
///
/// Evaluated at the optimal pair from the SVD `X*Y = A S B*` as
/// `‖X A − Y B‖_F`, which keeps full relative accuracy for nearby subspaces
/// where `sqrt(2p − 2 Σ σ_i)` cancels.
pub fn dist_grassmann<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> Result<T> {
    if x.shape() != y.shape() || x.rows() < x.cols() || x.cols() == 0 {
        return Err(Error::Dimension(format!(
            "dist_grassmann needs equal m x p shapes with m >= p >= 1, got {:?} and {:?}",
            x.shape(),
            y.shape()
        )));
    }
    let p = x.cols();
    for z in [x, y] {
        let defect = z.orthonormality_defect();
        if defect > base_tol::<T>(p) {
            return Err(Error::Structure { what: "orthonormal columns", defect: defect.to_f64_lossy() });
        }
    }
    let svd = thin_svd(&x.adjoint_mul(y))?;
    Ok(x.matmul(&svd.u).distance(&y.matmul(&svd.v)))
}

/// `Θ_n(tZ)[I; 0]` with `Z = [0 −K*; K 0]`, formed as the full `m × m`
/// polynomial. Reference for the block-column identities in tests.
pub fn theta_block_column<T: Real>(k: &ComplexMatrix<T>, t: T, n: usize) -> Result<ComplexMatrix<T>> {
    let (q, p) = k.shape();
    let m = p + q;
    let mut z = ComplexMatrix::zeros(m, m);
    z.set_block(p, 0, k);
    z.set_block(0, p, &-k.adjoint());
    Ok(theta_apply(n, &z.scale(t))?.columns(0, p))
}
