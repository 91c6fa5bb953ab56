//! Matrix functions of skew-Hermitian, unitary and HPD matrices, all routed
//! through a Hermitian eigendecomposition.

use num_complex::Complex;

use crate::decomp::{eigh, EigenDecompositionHermitian};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Angular distance from -1 below which the principal logarithm is refused.
const BRANCH_CUT_TOL: f64 = 1e-6;

fn require_skew<T: Real>(omega: &ComplexMatrix<T>) -> Result<()> {
    omega.require_square("skew-Hermitian input")?;
    // ‖skew(Ω) − Ω‖ = ‖sym(Ω)‖ = ½‖Ω + Ω*‖
    let defect = omega.skew_defect() * T::lit(0.5);
    if defect > T::structure_tol() * omega.frobenius_norm().max(T::one()) {
        return Err(Error::Structure { what: "skew-Hermitian input", defect: defect.to_f64_lossy() });
    }
    Ok(())
}

fn unitary_tol<T: Real>() -> T {
    T::structure_tol() * T::lit(100.0)
}

pub(crate) fn require_unitary<T: Real>(u: &ComplexMatrix<T>) -> Result<()> {
    u.require_square("unitary input")?;
    let defect = u.orthonormality_defect();
    if defect > unitary_tol::<T>() {
        return Err(Error::Structure { what: "unitary input", defect: defect.to_f64_lossy() });
    }
    Ok(())
}

/// `e^{tΩ}` for a fixed skew-Hermitian `Ω` and any number of step sizes.
///
/// Holds the eigendecomposition `−iΩ = V Λ V*`, so `e^{tΩ} = V e^{itΛ} V*`
/// costs one product per evaluation.
#[derive(Debug, Clone)]
pub struct SkewExponential<T> {
    eig: EigenDecompositionHermitian<T>,
}

impl<T: Real> SkewExponential<T> {
    pub fn new(omega: &ComplexMatrix<T>) -> Result<Self> {
        require_skew(omega)?;
        let h = omega.scale_complex(Complex::new(T::zero(), -T::one()));
        Ok(Self { eig: eigh(&h)? })
    }

    pub fn dim(&self) -> usize {
        self.eig.values.len()
    }

    /// Largest eigenvalue modulus of `Ω` (its spectral radius).
    pub fn spectral_radius(&self) -> T {
        self.eig.values.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    pub fn at(&self, t: T) -> ComplexMatrix<T> {
        self.eig.apply_fn(|lam| Complex::from_polar(T::one(), t * lam))
    }

    /// First `p` columns of `e^{tΩ}` without forming the full product.
    pub fn leading_columns(&self, t: T, p: usize) -> ComplexMatrix<T> {
        let n = self.dim();
        let v = &self.eig.vectors;
        let scaled =
            ComplexMatrix::from_fn(n, n, |i, j| v[(i, j)] * Complex::from_polar(T::one(), t * self.eig.values[j]));
        let vh_lead = ComplexMatrix::from_fn(n, p, |i, j| v[(j, i)].conj());
        scaled.matmul(&vh_lead)
    }
}

/// Exponential of a skew-Hermitian matrix; the result is unitary.
pub fn expm_skew<T: Real>(omega: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    Ok(SkewExponential::new(omega)?.at(T::one()))
}

/// Principal logarithm of a unitary matrix.
///
/// Eigenvectors come from the Hermitian Cayley transform
/// `C = i(I − U)(I + U)^{-1}`, which maps the unit circle minus `-1`
/// injectively onto the real line; the eigen-angles are then read off as
/// Rayleigh quotients of `U` itself.
pub fn logm_unitary<T: Real>(u: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    require_unitary(u)?;
    let n = u.rows();
    let mut i_plus = u.clone();
    i_plus.add_diagonal(T::one());
    let inv = i_plus.inverse().map_err(|_| Error::BranchCut { distance: 0.0 })?;
    let mut i_minus = -u;
    i_minus.add_diagonal(T::one());
    let cayley = i_minus.matmul(&inv).scale_complex(Complex::i()).sym_part()?;
    if !cayley.is_finite() {
        return Err(Error::BranchCut { distance: 0.0 });
    }
    let eig = eigh(&cayley)?;
    let v = &eig.vectors;
    let uv = u.matmul(v);
    let mut angles = Vec::with_capacity(n);
    for j in 0..n {
        let rq: Complex<T> = (0..n).map(|i| v[(i, j)].conj() * uv[(i, j)]).sum();
        let theta = rq.arg();
        let distance = T::PI() - theta.abs();
        if distance < T::lit(BRANCH_CUT_TOL) {
            return Err(Error::BranchCut { distance: distance.to_f64_lossy() });
        }
        angles.push(theta);
    }
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| v[(i, j)] * Complex::new(T::zero(), angles[j]));
    scaled.matmul(&v.adjoint()).skew_part()
}

/// `U^s = e^{s log U}` for unitary `U`, along the principal branch.
pub fn powm_unitary<T: Real>(u: &ComplexMatrix<T>, s: T) -> Result<ComplexMatrix<T>> {
    expm_skew(&logm_unitary(u)?.scale(s))
}

/// `C^{-1/2}` for Hermitian positive-definite `C`.
pub fn invsqrtm_hpd<T: Real>(c: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    c.require_square("invsqrtm_hpd")?;
    let eig = eigh(c)?;
    let lmax = eig.values.last().copied().unwrap_or_else(T::one);
    let lmin = eig.values.first().copied().unwrap_or_else(T::one);
    if !(lmin > T::factorization_tol() * lmax) || !(lmin > T::zero()) {
        return Err(Error::Definiteness { lambda_min: lmin.to_f64_lossy() });
    }
    Ok(eig.apply_fn(|x| Complex::new(T::one() / x.sqrt(), T::zero())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    type M = ComplexMatrix<f64>;

    fn skew_sample(n: usize, scale: f64) -> M {
        let a = M::from_fn(n, n, |i, j| {
            let x = ((i * 7 + j * 13) % 11) as f64 - 5.0;
            let y = ((i * 3 + j * 5) % 7) as f64 - 3.0;
            Complex::new(x, y)
        });
        let s = a.skew_part().unwrap();
        s.scale(scale / s.frobenius_norm())
    }

    #[test]
    fn expm_of_zero_is_identity() {
        assert!(expm_skew(&M::zeros(3, 3)).unwrap().distance(&M::identity(3)) < 1e-15);
    }

    #[test]
    fn expm_rotation_closed_form() {
        let th = FRAC_PI_2;
        let omega = M::from_real_rows(&[&[0.0, -th], &[th, 0.0]]).unwrap();
        let expected = M::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        assert!(expm_skew(&omega).unwrap().distance(&expected) < 1e-15);
    }

    #[test]
    fn expm_inverse_identity() {
        let omega = skew_sample(8, 3.0);
        let prod = expm_skew(&omega).unwrap().matmul(&expm_skew(&-&omega).unwrap());
        assert!(prod.distance(&M::identity(8)) <= 1e-11);
    }

    #[test]
    fn expm_rejects_non_skew() {
        assert!(matches!(expm_skew(&M::identity(2)), Err(Error::Structure { .. })));
        assert!(matches!(expm_skew(&M::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn leading_columns_match_full_exponential() {
        let omega = skew_sample(6, 2.0);
        let e = SkewExponential::new(&omega).unwrap();
        assert!(e.leading_columns(0.7, 2).distance(&e.at(0.7).columns(0, 2)) < 1e-14);
    }

    #[test]
    fn logm_examples() {
        assert!(logm_unitary(&M::identity(3)).unwrap().frobenius_norm() < 1e-15);
        let th = 0.3;
        let u = M::from_diagonal(&[Complex::from_polar(1.0, th), Complex::new(1.0, 0.0)]);
        let expected = M::from_diagonal(&[Complex::new(0.0, th), Complex::new(0.0, 0.0)]);
        assert!(logm_unitary(&u).unwrap().distance(&expected) < 1e-15);
    }

    #[test]
    fn logm_round_trip() {
        let omega = skew_sample(7, 2.0);
        let back = logm_unitary(&expm_skew(&omega).unwrap()).unwrap();
        assert!(back.distance(&omega) < 1e-10);
        assert!(back.skew_defect() < 1e-14);
    }

    #[test]
    fn logm_branch_cut() {
        let u = M::from_real_diagonal(&[-1.0, 1.0]);
        assert!(matches!(logm_unitary(&u), Err(Error::BranchCut { .. })));
        let near = M::from_diagonal(&[Complex::from_polar(1.0, std::f64::consts::PI - 1e-8), Complex::new(1.0, 0.0)]);
        assert!(matches!(logm_unitary(&near), Err(Error::BranchCut { .. })));
    }

    #[test]
    fn invsqrtm_examples() {
        assert!(invsqrtm_hpd(&M::identity(3)).unwrap().distance(&M::identity(3)) < 1e-15);
        let r = invsqrtm_hpd(&M::from_real_diagonal(&[4.0, 9.0])).unwrap();
        assert!(r.distance(&M::from_real_diagonal(&[0.5, 1.0 / 3.0])) < 1e-15);
        assert!(matches!(invsqrtm_hpd(&M::from_real_diagonal(&[1.0, -1.0])), Err(Error::Definiteness { .. })));
    }

    #[test]
    fn invsqrtm_inverse_square() {
        let a = skew_sample(5, 1.0);
        let mut c = a.adjoint_mul(&a);
        c.add_diagonal(0.5);
        let r = invsqrtm_hpd(&c).unwrap();
        assert!(r.matmul(&c).matmul(&r).distance(&M::identity(5)) < 1e-12);
    }
}
