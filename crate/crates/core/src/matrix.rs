//! Dense complex matrix carrier.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense complex matrix stored in row-major order.
///
/// Zero-sized dimensions are allowed so that empty blocks (for example the
/// orthogonal complement of a square unitary matrix) can be represented.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::eye(n, n)
    }

    /// Rectangular identity: ones on the main diagonal.
    pub fn eye(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k / cols.max(1), col: k % cols.max(1) });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows of complex entries.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_row_major(r, c, rows.iter().flatten().copied().collect())
    }

    /// Builds a matrix with real entries given as `f64` rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let nested: Vec<Vec<Complex<T>>> =
            rows.iter().map(|row| row.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect()).collect();
        Self::from_rows(&nested)
    }

    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    /// `self + s * other`, shapes must agree.
    pub fn add_scaled(&self, other: &Self, s: T) -> Self {
        assert_eq!(self.shape(), other.shape(), "add_scaled shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b * s).collect(),
        }
    }

    /// Adds `s` to every diagonal entry in place.
    pub fn add_diagonal(&mut self, s: T) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)].re += s;
        }
    }

    pub fn frobenius_norm(&self) -> T {
        // Scaled accumulation: entries up to ~1e150 stay finite.
        let amax = self.max_abs();
        if amax == T::zero() {
            return T::zero();
        }
        let s: T = self.data.iter().map(|z| (*z / amax).norm_sqr()).sum();
        amax * s.sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Copy of the block with rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn columns(&self, c0: usize, nc: usize) -> Self {
        self.block(0, c0, self.rows, nc)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, other);
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut out = Self::zeros(self.rows + other.rows, self.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, 0, other);
        out
    }

    /// Matrix product; panics on inner-dimension mismatch.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul: {}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Self::zeros(self.rows, rhs.cols);
        let n = rhs.cols;
        for i in 0..self.rows {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self^* · rhs` without materializing the adjoint.
    pub fn adjoint_mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "adjoint_mul row mismatch");
        let mut out = Self::zeros(self.cols, rhs.cols);
        let n = rhs.cols;
        for k in 0..self.rows {
            let lhs_row = &self.data[k * self.cols..(k + 1) * self.cols];
            let rhs_row = &rhs.data[k * n..(k + 1) * n];
            for (i, a) in lhs_row.iter().enumerate() {
                let a = a.conj();
                if a.is_zero() {
                    continue;
                }
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Inverse by Gaussian elimination with partial pivoting.
    ///
    /// Fails with [`Error::Singular`] when a pivot falls below
    /// `n · eps · max|a_ij|`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("inverse of non-square {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let threshold = T::epsilon() * T::lit(n.max(1) as f64) * self.max_abs();
        for k in 0..n {
            let (piv, pmax) =
                (k..n)
                    .map(|i| (i, a[(i, k)].norm()))
                    .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmax > threshold) {
                return Err(Error::Singular);
            }
            if piv != k {
                a.swap_rows(piv, k);
                inv.swap_rows(piv, k);
            }
            let d = a[(k, k)].inv();
            for j in 0..n {
                a[(k, j)] *= d;
                inv[(k, j)] *= d;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[(i, k)];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let akj = a[(k, j)];
                    let ikj = inv[(k, j)];
                    a[(i, j)] -= f * akj;
                    inv[(i, j)] -= f * ikj;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn sym_part(&self) -> Result<Self> {
        self.require_square("sym_part")?;
        let half = T::lit(0.5);
        Ok(Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half))
    }

    /// Skew-Hermitian part `(A - A*)/2`.
    pub fn skew_part(&self) -> Result<Self> {
        self.require_square("skew_part")?;
        let half = T::lit(0.5);
        Ok(Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] - self[(j, i)].conj()) * half))
    }

    pub(crate) fn require_square(&self, op: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!("{op} requires a square matrix, got {}x{}", self.rows, self.cols)))
        }
    }

    /// `‖A* A − I‖_F`, the orthonormal-columns defect.
    pub fn orthonormality_defect(&self) -> T {
        let mut g = self.adjoint_mul(self);
        g.add_diagonal(-T::one());
        g.frobenius_norm()
    }

    /// `‖A − A*‖_F`.
    pub fn hermitian_defect(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `‖A + A*‖_F`.
    pub fn skew_defect(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self[(i, j)] + self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> T {
        (self - other).frobenius_norm()
    }

    /// Converts every entry to another scalar type.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<T: Real> $trait<&ComplexMatrix<T>> for &ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;
            fn $method(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
                assert_eq!(self.shape(), rhs.shape(), concat!(stringify!($method), " shape mismatch"));
                ComplexMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a $op b).collect(),
                }
            }
        }
        impl<T: Real> $trait<ComplexMatrix<T>> for ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;
            fn $method(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Real> $trait<&ComplexMatrix<T>> for ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;
            fn $method(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
                (&self).$method(rhs)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl<T: Real> AddAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn add_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!(self.shape(), rhs.shape(), "add_assign shape mismatch");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl<T: Real> SubAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn sub_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!(self.shape(), rhs.shape(), "sub_assign shape mismatch");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl<T: Real> Mul<&ComplexMatrix<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Mul<ComplexMatrix<T>> for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.matmul(&rhs)
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> Neg for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        -&self
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = &self.data[i * self.cols + j];
                write!(f, "({:?}, {:?})  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn frobenius_norm_examples() {
        assert_eq!(M::zeros(3, 3).frobenius_norm(), 0.0);
        assert_eq!(M::identity(4).frobenius_norm(), 2.0);
        let a = M::from_real_rows(&[&[3.0, 4.0]]).unwrap();
        assert!((a.frobenius_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn sym_and_skew_examples() {
        let a = M::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(a.sym_part().unwrap(), M::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap());
        assert_eq!(a.skew_part().unwrap(), M::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap());
        assert!(matches!(M::zeros(2, 3).sym_part(), Err(Error::Dimension(_))));
        assert!(matches!(M::zeros(2, 3).skew_part(), Err(Error::Dimension(_))));
    }

    #[test]
    fn hermitian_and_skew_fixed_points() {
        let h = M::from_rows(&[vec![c(1.0, 0.0), c(2.0, 1.0)], vec![c(2.0, -1.0), c(-3.0, 0.0)]]).unwrap();
        assert_eq!(h.sym_part().unwrap(), h);
        assert_eq!(h.skew_part().unwrap().frobenius_norm(), 0.0);
        let s = M::from_rows(&[vec![c(0.0, 1.0), c(2.0, 1.0)], vec![c(-2.0, 1.0), c(0.0, -3.0)]]).unwrap();
        assert_eq!(s.skew_part().unwrap(), s);
        assert_eq!(s.sym_part().unwrap().frobenius_norm(), 0.0);
    }

    #[test]
    fn rejects_non_finite_and_bad_length() {
        assert!(matches!(
            M::from_row_major(1, 2, vec![c(0.0, 0.0), c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(M::from_row_major(2, 2, vec![c(0.0, 0.0)]), Err(Error::Dimension(_))));
    }

    #[test]
    fn inverse_round_trip_and_singular() {
        let a = M::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, -1.0), c(3.0, 0.5)]]).unwrap();
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).distance(&M::identity(2)) < 1e-14);
        let s = M::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn adjoint_mul_matches_explicit_product() {
        let a = M::from_fn(4, 3, |i, j| c(i as f64 - j as f64, (i * j) as f64 * 0.5));
        let b = M::from_fn(4, 2, |i, j| c((i + j) as f64, 1.0 - i as f64));
        assert_eq!(a.adjoint_mul(&b), a.adjoint().matmul(&b));
    }

    #[test]
    fn stacking_and_blocks() {
        let a = M::from_fn(2, 2, |i, j| c((i * 2 + j) as f64, 0.0));
        let b = M::identity(2);
        let h = a.hstack(&b);
        assert_eq!(h.shape(), (2, 4));
        assert_eq!(h.columns(2, 2), b);
        let v = a.vstack(&b);
        assert_eq!(v.block(2, 0, 2, 2), b);
        assert_eq!(M::zeros(3, 0).shape(), (3, 0));
    }
}
