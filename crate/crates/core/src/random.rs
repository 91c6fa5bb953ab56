//! Seeded generators for the test and benchmark inputs.
//!
//! Every generator owns a fresh `ChaCha8Rng` seeded from its `seed`
//! argument, so outputs are reproducible across platforms and runs. Complex
//! entries have independent standard-normal real and imaginary parts.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::decomp::thin_qr;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

fn gaussian<T: Real>(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(T::lit(re), T::lit(im))
    })
}

fn normalized<T: Real>(a: ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = a.frobenius_norm();
    a.scale(T::one() / n)
}

/// Seeded complex Gaussian matrix (unnormalized).
pub fn random_gaussian<T: Real>(rows: usize, cols: usize, seed: u64) -> ComplexMatrix<T> {
    gaussian(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Unit-Frobenius-norm skew-Hermitian matrix.
pub fn random_skew_hermitian<T: Real>(m: usize, seed: u64) -> Result<ComplexMatrix<T>> {
    if m == 0 {
        return Err(Error::Dimension("random_skew_hermitian requires m >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = gaussian::<T>(m, m, &mut rng).skew_part()?;
    let s = normalized(s);
    // rescaling can break exact skewness only on the diagonal real parts,
    // which skew_part already zeroed; re-apply to make Ω* = −Ω bitwise.
    s.skew_part()
}

/// Seeded random Haar-like unitary matrix (Q factor of a Gaussian matrix).
pub fn random_unitary<T: Real>(m: usize, seed: u64) -> Result<ComplexMatrix<T>> {
    random_stiefel_point(m, m, seed)
}

/// Seeded `m × p` matrix with orthonormal columns.
pub fn random_stiefel_point<T: Real>(m: usize, p: usize, seed: u64) -> Result<ComplexMatrix<T>> {
    if m < p || p == 0 {
        return Err(Error::Dimension(format!("random_stiefel_point requires m >= p >= 1, got {m}x{p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(thin_qr(&gaussian::<T>(m, p, &mut rng))?.q)
}

/// `(I − Y Y*) G`, applied twice so the residual `Y* H` sits at roundoff.
fn project_out<T: Real>(y: &ComplexMatrix<T>, g: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let mut h = g.clone();
    for _ in 0..2 {
        let c = y.adjoint_mul(&h);
        h -= &y.matmul(&c);
    }
    h
}

/// Unit-norm Grassmann tangent `H = Y⊥ K` at `Y` (so `Y* H = 0`).
///
/// Drawn as the projection of a Gaussian `m × p` matrix onto the orthogonal
/// complement of `range(Y)`, which has the same law as `Y⊥ K` with Gaussian
/// `K` and avoids forming `Y⊥`.
pub fn random_grassmann_tangent<T: Real>(y: &ComplexMatrix<T>, seed: u64) -> Result<ComplexMatrix<T>> {
    let (m, p) = y.shape();
    if m == p {
        return Err(Error::Degenerate("Grassmann tangent space is trivial when m = p"));
    }
    let defect = y.orthonormality_defect();
    if defect > T::structure_tol() * T::lit(p.max(1) as f64) {
        return Err(Error::Structure { what: "orthonormal columns", defect: defect.to_f64_lossy() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian::<T>(m, p, &mut rng);
    Ok(normalized(project_out(y, &g)))
}

/// Unit-norm Stiefel tangent `H = YΩ + Y⊥K`; `Ω = 0` when `grassmann_only`.
pub fn random_stiefel_tangent<T: Real>(
    y: &ComplexMatrix<T>,
    seed: u64,
    grassmann_only: bool,
) -> Result<ComplexMatrix<T>> {
    let (m, p) = y.shape();
    let defect = y.orthonormality_defect();
    if defect > T::structure_tol() * T::lit(p.max(1) as f64) {
        return Err(Error::Structure { what: "orthonormal columns", defect: defect.to_f64_lossy() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = gaussian::<T>(p, p, &mut rng).skew_part()?;
    let g = gaussian::<T>(m, p, &mut rng);
    let normal = if m > p { project_out(y, &g) } else { ComplexMatrix::zeros(m, p) };
    let h = if grassmann_only { normal } else { y.matmul(&omega) + normal };
    let nrm = h.frobenius_norm();
    if nrm == T::zero() {
        return Err(Error::Degenerate("Stiefel tangent is zero (m = p with grassmann_only)"));
    }
    Ok(h.scale(T::one() / nrm))
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn skew_generator_contract() {
        let a: M = random_skew_hermitian(6, 42).unwrap();
        assert_eq!(a, random_skew_hermitian(6, 42).unwrap());
        assert_eq!(a.adjoint(), -&a);
        assert!((a.frobenius_norm() - 1.0).abs() < 1e-14);
        assert_ne!(a, random_skew_hermitian(6, 43).unwrap());
    }

    #[test]
    fn stiefel_point_contract() {
        let y: M = random_stiefel_point(10, 4, 1).unwrap();
        assert!(y.orthonormality_defect() < 1e-12);
        assert_eq!(y, random_stiefel_point(10, 4, 1).unwrap());
        let z: M = random_stiefel_point(10, 4, 2).unwrap();
        assert!(y.distance(&z) > 0.1);
        assert!(matches!(random_stiefel_point::<f64>(3, 4, 0), Err(Error::Dimension(_))));
    }

    #[test]
    fn grassmann_tangent_contract() {
        let y: M = random_stiefel_point(12, 3, 5).unwrap();
        let h = random_grassmann_tangent(&y, 9).unwrap();
        assert!(y.adjoint_mul(&h).frobenius_norm() < 1e-12);
        assert!((h.frobenius_norm() - 1.0).abs() < 1e-14);
        assert_eq!(h, random_grassmann_tangent(&y, 9).unwrap());
        let sq: M = random_unitary(3, 1).unwrap();
        assert!(matches!(random_grassmann_tangent(&sq, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn stiefel_tangent_contract() {
        let y: M = random_stiefel_point(12, 3, 5).unwrap();
        let h = random_stiefel_tangent(&y, 4, false).unwrap();
        let yh = y.adjoint_mul(&h);
        assert!(yh.sym_part().unwrap().frobenius_norm() < 1e-12);
        assert!(yh.frobenius_norm() > 1e-3);
        assert_eq!(h, random_stiefel_tangent(&y, 4, false).unwrap());
        let g = random_stiefel_tangent(&y, 4, true).unwrap();
        assert!(y.adjoint_mul(&g).frobenius_norm() < 1e-12);
    }
}
