//! Hermitian eigendecomposition, thin SVD and thin QR.
//!
//! Both spectral routines are Jacobi methods: cyclic two-sided rotations for
//! Hermitian matrices and one-sided (Hestenes) rotations for the SVD. They
//! are slower than tridiagonal/bidiagonal QR at large sizes but deliver
//! orthogonality and reconstruction at the unit-roundoff level, which the
//! convergence studies depend on.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// `A = V diag(values) V*` with ascending real eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenDecompositionHermitian<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> EigenDecompositionHermitian<T> {
    /// `V diag(f(λ)) V*`.
    pub fn apply_fn(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.values.len();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| self.vectors[(i, j)] * f(self.values[j]));
        scaled.matmul(&self.vectors.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.apply_fn(|x| Complex::new(x, T::zero()))
    }
}

/// Thin singular value decomposition `A = U diag(S) V*`.
#[derive(Debug, Clone)]
pub struct ThinSvd<T> {
    /// `m × p`, orthonormal columns.
    pub u: ComplexMatrix<T>,
    /// Descending, nonnegative.
    pub s: Vec<T>,
    /// `p × p` unitary.
    pub v: ComplexMatrix<T>,
}

impl<T: Real> ThinSvd<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let us = ComplexMatrix::from_fn(self.u.rows(), self.u.cols(), |i, j| self.u[(i, j)] * self.s[j]);
        us.matmul(&self.v.adjoint())
    }

    /// `σ_p / σ_1`, zero for the zero matrix.
    pub fn rank_ratio(&self) -> T {
        match (self.s.first(), self.s.last()) {
            (Some(&hi), Some(&lo)) if hi > T::zero() => lo / hi,
            _ => T::zero(),
        }
    }
}

/// Thin QR `A = Q R` with `R` upper triangular and real positive diagonal.
#[derive(Debug, Clone)]
pub struct ThinQr<T> {
    pub q: ComplexMatrix<T>,
    pub r: ComplexMatrix<T>,
}

fn phase<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = z.norm();
    if r > T::zero() {
        z / r
    } else {
        Complex::one()
    }
}

/// Jacobi rotation `G = [[c, s], [-s·conj(ph), c·conj(ph)]]` that diagonalizes
/// `[[app, apq], [conj(apq), aqq]]` via `G* B G`. Returns `(g_pp, g_pq, g_qp, g_qq, t)`.
#[inline]
fn jacobi_rotation<T: Real>(app: T, aqq: T, apq: Complex<T>) -> (Complex<T>, Complex<T>, Complex<T>, Complex<T>, T) {
    let mag = apq.norm();
    let ph = apq / mag;
    let theta = (aqq - app) / (mag + mag);
    let t = if theta.abs() > T::lit(1e150) {
        T::one() / (theta + theta)
    } else {
        let denom = theta.abs() + (theta * theta + T::one()).sqrt();
        if theta < T::zero() {
            -T::one() / denom
        } else {
            T::one() / denom
        }
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let cph = ph.conj();
    (Complex::new(c, T::zero()), Complex::new(s, T::zero()), cph * (-s), cph * c, t)
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The input is symmetrized first; it must be Hermitian to within the
/// structure tolerance relative to `max(1, ‖A‖_F)`.
pub fn eigh<T: Real>(a: &ComplexMatrix<T>) -> Result<EigenDecompositionHermitian<T>> {
    a.require_square("eigh")?;
    if !a.is_finite() {
        return Err(Error::Structure { what: "finite entries", defect: f64::INFINITY });
    }
    let norm = a.frobenius_norm();
    let defect = a.hermitian_defect();
    if defect > T::structure_tol() * norm.max(T::one()) {
        return Err(Error::Structure { what: "Hermitian input", defect: defect.to_f64_lossy() });
    }
    let n = a.rows();
    let mut w = a.sym_part()?;
    for i in 0..n {
        w[(i, i)].im = T::zero();
    }
    let mut v = ComplexMatrix::identity(n);
    let target = T::epsilon() * norm;

    let mut converged = n <= 1 || norm == T::zero();
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence { iterations: sweeps, residual: off_diagonal_norm(&w).to_f64_lossy() });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[(p, q)];
                if apq.norm() <= T::min_positive_value() {
                    continue;
                }
                let app = w[(p, p)].re;
                let aqq = w[(q, q)].re;
                let (gpp, gpq, gqp, gqq, t) = jacobi_rotation(app, aqq, apq);
                // columns: W <- W G
                for k in 0..n {
                    let wkp = w[(k, p)];
                    let wkq = w[(k, q)];
                    w[(k, p)] = wkp * gpp + wkq * gqp;
                    w[(k, q)] = wkp * gpq + wkq * gqq;
                }
                // rows: W <- G* W
                for k in 0..n {
                    let wpk = w[(p, k)];
                    let wqk = w[(q, k)];
                    w[(p, k)] = gpp.conj() * wpk + gqp.conj() * wqk;
                    w[(q, k)] = gpq.conj() * wpk + gqq.conj() * wqk;
                }
                let mag = apq.norm();
                w[(p, q)] = Complex::zero();
                w[(q, p)] = Complex::zero();
                w[(p, p)] = Complex::new(app - t * mag, T::zero());
                w[(q, q)] = Complex::new(aqq + t * mag, T::zero());
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
        converged = off_diagonal_norm(&w) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].re.partial_cmp(&w[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| w[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecompositionHermitian { values, vectors })
}

fn off_diagonal_norm<T: Real>(w: &ComplexMatrix<T>) -> T {
    let n = w.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += w[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|x| x.norm_sqr()).sum()
}

fn to_columns<T: Real>(a: &ComplexMatrix<T>) -> Vec<Vec<Complex<T>>> {
    (0..a.cols()).map(|j| (0..a.rows()).map(|i| a[(i, j)]).collect()).collect()
}

fn from_columns<T: Real>(rows: usize, cols: &[Vec<Complex<T>>]) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Thin SVD of an `m × p` matrix with `m ≥ p` by one-sided Jacobi.
pub fn thin_svd<T: Real>(a: &ComplexMatrix<T>) -> Result<ThinSvd<T>> {
    let (m, p) = a.shape();
    if m < p {
        return Err(Error::Dimension(format!("thin_svd requires m >= p, got {m}x{p}")));
    }
    if !a.is_finite() {
        return Err(Error::Structure { what: "finite entries", defect: f64::INFINITY });
    }
    let mut u = to_columns(a);
    let mut v = to_columns(&ComplexMatrix::<T>::identity(p));
    let eps = T::epsilon();

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for i in 0..p {
            for j in (i + 1)..p {
                let alpha = norm_sqr(&u[i]);
                let beta = norm_sqr(&u[j]);
                let gamma = dot(&u[i], &u[j]);
                let g = gamma.norm();
                if g <= T::min_positive_value() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (gii, gij, gji, gjj, _) = jacobi_rotation(alpha, beta, gamma);
                rotate_pair(&mut u, i, j, gii, gij, gji, gjj);
                rotate_pair(&mut v, i, j, gii, gij, gji, gjj);
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence { iterations: sweeps, residual: f64::NAN });
        }
    }

    let norms: Vec<T> = u.iter().map(|c| norm_sqr(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite singular values"));
    let s: Vec<T> = order.iter().map(|&i| norms[i]).collect();
    let smax = s.first().copied().unwrap_or_else(T::zero);
    let negligible = smax * eps * eps;

    let mut ucols: Vec<Vec<Complex<T>>> = Vec::with_capacity(p);
    let mut missing = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        if s[k] > negligible && s[k] > T::zero() {
            let inv = T::one() / s[k];
            ucols.push(u[i].iter().map(|&x| x * inv).collect());
        } else {
            ucols.push(vec![Complex::zero(); m]);
            missing.push(k);
        }
    }
    if !missing.is_empty() {
        complete_columns(&mut ucols, &missing, m);
    }
    let vcols: Vec<Vec<Complex<T>>> = order.iter().map(|&i| v[i].clone()).collect();
    Ok(ThinSvd { u: from_columns(m, &ucols), s, v: from_columns(p, &vcols) })
}

fn rotate_pair<T: Real>(
    cols: &mut [Vec<Complex<T>>],
    i: usize,
    j: usize,
    gii: Complex<T>,
    gij: Complex<T>,
    gji: Complex<T>,
    gjj: Complex<T>,
) {
    let (left, right) = cols.split_at_mut(j);
    let ci = &mut left[i];
    let cj = &mut right[0];
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * gii + b * gji;
        *y = a * gij + b * gjj;
    }
}

/// Fills the zero columns listed in `missing` with unit vectors orthogonal
/// to every other column (modified Gram-Schmidt, applied twice).
fn complete_columns<T: Real>(cols: &mut [Vec<Complex<T>>], missing: &[usize], m: usize) {
    let mut candidate = 0;
    for &k in missing {
        loop {
            assert!(candidate < m, "orthonormal completion ran out of candidates");
            let mut e = vec![Complex::zero(); m];
            e[candidate] = Complex::one();
            candidate += 1;
            for _ in 0..2 {
                for (idx, c) in cols.iter().enumerate() {
                    if idx == k || norm_sqr(c) == T::zero() {
                        continue;
                    }
                    let d = dot(c, &e);
                    for (x, &y) in e.iter_mut().zip(c) {
                        *x -= y * d;
                    }
                }
            }
            let nrm = norm_sqr(&e).sqrt();
            if nrm > T::lit(0.5) {
                cols[k] = e.into_iter().map(|x| x / nrm).collect();
                break;
            }
        }
    }
}

/// Householder reflectors of an `m × p` matrix together with the raw `R`.
struct Householder<T> {
    vs: Vec<Vec<Complex<T>>>,
    r: ComplexMatrix<T>,
}

impl<T: Real> Householder<T> {
    fn factor(a: &ComplexMatrix<T>) -> Self {
        let p = a.cols();
        let mut w = to_columns(a);
        let mut vs = Vec::with_capacity(p);
        for k in 0..p {
            let x = &w[k][k..];
            let normx = norm_sqr(x).sqrt();
            let mut v: Vec<Complex<T>> = x.to_vec();
            if normx > T::zero() {
                let alpha = -phase(x[0]) * normx;
                v[0] -= alpha;
            }
            let vv = norm_sqr(&v);
            if vv > T::zero() {
                let two_over = T::lit(2.0) / vv;
                for col in w.iter_mut().skip(k) {
                    let d = dot(&v, &col[k..]) * two_over;
                    for (c, &vi) in col[k..].iter_mut().zip(&v) {
                        *c -= vi * d;
                    }
                }
            }
            vs.push(v);
        }
        let r = ComplexMatrix::from_fn(p, p, |i, j| if i <= j { w[j][i] } else { Complex::zero() });
        Householder { vs, r }
    }

    /// Applies `H_1 ⋯ H_p` to the columns of `e` (in place).
    fn apply_q(&self, e: &mut [Vec<Complex<T>>]) {
        for (k, v) in self.vs.iter().enumerate().rev() {
            let vv = norm_sqr(v);
            if vv == T::zero() {
                continue;
            }
            let two_over = T::lit(2.0) / vv;
            for col in e.iter_mut() {
                let d = dot(v, &col[k..]) * two_over;
                for (c, &vi) in col[k..].iter_mut().zip(v) {
                    *c -= vi * d;
                }
            }
        }
    }
}

/// Thin QR with the positive-real-diagonal gauge on `R`.
///
/// Rank is judged from the diagonal of `R`: the factorization fails when
/// `min |r_kk| ≤ tol · max |r_kk|`.
pub fn thin_qr<T: Real>(a: &ComplexMatrix<T>) -> Result<ThinQr<T>> {
    let (m, p) = a.shape();
    if m < p {
        return Err(Error::Dimension(format!("thin_qr requires m >= p, got {m}x{p}")));
    }
    let hh = Householder::factor(a);
    let diag: Vec<T> = (0..p).map(|k| hh.r[(k, k)].norm()).collect();
    let dmax = diag.iter().copied().fold(T::zero(), T::max);
    let dmin = diag.iter().copied().fold(T::infinity(), T::min);
    if p > 0 && !(dmin > T::factorization_tol() * dmax) {
        let ratio = if dmax > T::zero() { dmin / dmax } else { T::zero() };
        return Err(Error::Rank { ratio: ratio.to_f64_lossy() });
    }
    let mut qcols = to_columns(&ComplexMatrix::<T>::eye(m, p));
    hh.apply_q(&mut qcols);
    let mut r = hh.r;
    for k in 0..p {
        let d = phase(r[(k, k)]);
        for x in qcols[k].iter_mut() {
            *x *= d;
        }
        for j in k..p {
            r[(k, j)] *= d.conj();
        }
        r[(k, k)] = Complex::new(r[(k, k)].re, T::zero());
    }
    Ok(ThinQr { q: from_columns(m, &qcols), r })
}

/// Columns completing `y` (orthonormal `m × p`) to a unitary `[y | y⊥]`.
pub fn orth_completion<T: Real>(y: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let (m, p) = y.shape();
    if m < p {
        return Err(Error::Dimension(format!("orth_completion requires m >= p, got {m}x{p}")));
    }
    let defect = y.orthonormality_defect();
    if defect > T::structure_tol() * T::lit(p.max(1) as f64) {
        return Err(Error::Structure { what: "orthonormal columns", defect: defect.to_f64_lossy() });
    }
    if m == p {
        return Ok(ComplexMatrix::zeros(m, 0));
    }
    let hh = Householder::factor(y);
    let mut cols = to_columns(&ComplexMatrix::<T>::eye(m, m).columns(p, m - p));
    hh.apply_q(&mut cols);
    Ok(from_columns(m, &cols))
}
