//! Coefficients of the projected polynomials, kept as exact rationals.
//!
//! `Θ_n` is the degree-`n` Bessel polynomial normalized to `Θ_n(0) = 1`.
//! Its even and odd parts give the Grassmann pair `α_n`, `β_n`; the Stiefel
//! pair `γ_n`, `δ_n` lives in two non-commuting variables. Floating point
//! enters only when a polynomial is evaluated at a matrix.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Largest supported Bessel order.
pub const MAX_BESSEL_ORDER: usize = 12;

/// Orders for which `γ_n`, `δ_n` are known.
pub const STIEFEL_ORDERS: [usize; 3] = [1, 2, 3];

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Lossy conversion of an exact coefficient to the working precision.
pub fn rational_to_real<T: Real>(r: &BigRational) -> T {
    let v =
        r.to_f64().unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN));
    T::lit(v)
}

/// Univariate polynomial with exact rational coefficients, lowest degree first.
///
/// Trailing zeros are trimmed, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn var() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(BigRational::one()), |acc, _| acc.mul(self))
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| acc.mul(inner).add(&Self::constant(c.clone())))
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * z + c)
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{k}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Coefficients `a_0..a_n` of `Θ_n(z) = Σ a_k z^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BesselCoeffs {
    n: usize,
    a: Vec<BigRational>,
}

impl BesselCoeffs {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.a
    }

    pub fn to_real<T: Real>(&self) -> Vec<T> {
        self.a.iter().map(rational_to_real).collect()
    }

    pub fn poly(&self) -> RationalPoly {
        RationalPoly::new(self.a.clone())
    }
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_BESSEL_ORDER {
        return Err(Error::Domain(format!("polynomial order {n} outside the supported range 0..={MAX_BESSEL_ORDER}")));
    }
    Ok(())
}

/// `a_k = C(n,k) (2n−k)! / (2n)! · 2^k`.
pub fn bessel_coeffs(n: usize) -> Result<BesselCoeffs> {
    check_order(n)?;
    let denom = factorial(2 * n);
    let a = (0..=n)
        .map(|k| {
            let num = binomial(n, k) * factorial(2 * n - k) * (BigInt::one() << k);
            BigRational::new(num, denom.clone())
        })
        .collect();
    Ok(BesselCoeffs { n, a })
}

/// Horner evaluation of a real-coefficient polynomial at a square matrix.
/// Empty `coeffs` is the zero polynomial.
pub fn poly_apply<T: Real>(coeffs: &[T], x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    x.require_square("polynomial argument")?;
    let m = x.rows();
    let mut acc = ComplexMatrix::zeros(m, m);
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if k + 1 < coeffs.len() {
            acc = acc.matmul(x);
        }
        acc.add_diagonal(c);
    }
    Ok(acc)
}

/// `Θ_n(X)` for square `X`.
pub fn theta_apply<T: Real>(n: usize, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let coeffs = bessel_coeffs(n)?.to_real::<T>();
    poly_apply(&coeffs, x)
}

/// Coefficients of `α_n(z) = Σ a_{2j} (−z)^j` and `β_n(z) = Σ a_{2j+1} (−z)^j`.
pub fn alpha_beta_coeffs(n: usize) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let a = bessel_coeffs(n)?.a;
    let signed = |j: usize, c: &BigRational| if j.is_multiple_of(2) { c.clone() } else { -c.clone() };
    let alpha = a.iter().step_by(2).enumerate().map(|(j, c)| signed(j, c)).collect();
    let beta = a.iter().skip(1).step_by(2).enumerate().map(|(j, c)| signed(j, c)).collect();
    Ok((alpha, beta))
}

/// Letters of the two-variable alphabet; matrices substitute in word order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

/// Polynomial in non-commuting `x`, `y` with exact coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NoncommutativePoly {
    terms: BTreeMap<Vec<Letter>, BigRational>,
}

impl NoncommutativePoly {
    /// Collects like words and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (BigRational, Vec<Letter>)>) -> Self {
        let mut map: BTreeMap<Vec<Letter>, BigRational> = BTreeMap::new();
        for (c, w) in terms {
            *map.entry(w).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map }
    }

    pub fn one() -> Self {
        Self::from_terms([(BigRational::one(), vec![])])
    }

    /// Terms in word order (shortlex is not implied).
    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &[Letter])> {
        self.terms.iter().map(|(w, c)| (c, w.as_slice()))
    }

    pub fn coeff(&self, word: &[Letter]) -> BigRational {
        self.terms.get(word).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// Substitutes commuting univariate polynomials for `x` and `y`.
    pub fn specialize(&self, x: &RationalPoly, y: &RationalPoly) -> RationalPoly {
        self.terms.iter().fold(RationalPoly::zero(), |acc, (w, c)| {
            let term = w.iter().fold(RationalPoly::constant(c.clone()), |t, l| match l {
                Letter::X => t.mul(x),
                Letter::Y => t.mul(y),
            });
            acc.add(&term)
        })
    }
}

impl fmt::Debug for NoncommutativePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: String = w
                    .iter()
                    .map(|l| match l {
                        Letter::X => 'x',
                        Letter::Y => 'y',
                    })
                    .collect();
                let sign = if c.is_negative() { "-" } else { "+" };
                format!("{sign} ({}){word}", c.abs())
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// `γ_n`, `δ_n` for the Stiefel retraction, `n ∈ {1, 2, 3}`.
///
/// The mixed cubic term of `γ_3` is the word `xy`, which evaluates to
/// `(t²H*H)(tY*H)`.
pub fn gamma_delta(n: usize) -> Result<(NoncommutativePoly, NoncommutativePoly)> {
    use Letter::{X, Y};
    let one = || (rat(1, 1), vec![]);
    let pair = match n {
        1 => (vec![one()], vec![one()]),
        2 => (vec![one(), (rat(-1, 3), vec![X]), (rat(-1, 2), vec![Y, Y])], vec![one(), (rat(1, 2), vec![Y])]),
        3 => (
            vec![
                one(),
                (rat(-2, 5), vec![X]),
                (rat(-1, 2), vec![Y, Y]),
                (rat(-1, 6), vec![Y, Y, Y]),
                (rat(-1, 6), vec![X, Y]),
            ],
            vec![one(), (rat(-1, 15), vec![X]), (rat(1, 2), vec![Y])],
        ),
        _ => return Err(Error::UnsupportedOrder(n)),
    };
    Ok((NoncommutativePoly::from_terms(pair.0), NoncommutativePoly::from_terms(pair.1)))
}

/// Evaluates `p(X, Y)` with matrix products taken in word order.
pub fn eval_noncommutative<T: Real>(
    p: &NoncommutativePoly,
    x: &ComplexMatrix<T>,
    y: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    x.require_square("eval_noncommutative X")?;
    if x.shape() != y.shape() {
        return Err(Error::Dimension(format!(
            "eval_noncommutative needs X and Y of equal square shape, got {:?} and {:?}",
            x.shape(),
            y.shape()
        )));
    }
    let m = x.rows();
    let mut acc = ComplexMatrix::zeros(m, m);
    for (c, word) in p.terms() {
        let c: T = rational_to_real(c);
        match word.split_first() {
            None => acc.add_diagonal(c),
            Some((first, rest)) => {
                let pick = |l: &Letter| if *l == Letter::X { x } else { y };
                let prod = rest.iter().fold(pick(first).clone(), |m, l| m.matmul(pick(l)));
                acc = acc.add_scaled(&prod, c);
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    type M = ComplexMatrix<f64>;

    fn rats(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter().map(|&(a, b)| rat(a, b)).collect()
    }

    #[test]
    fn printed_bessel_tables() {
        assert_eq!(bessel_coeffs(0).unwrap().coeffs(), rats(&[(1, 1)]).as_slice());
        assert_eq!(bessel_coeffs(1).unwrap().coeffs(), rats(&[(1, 1), (1, 1)]).as_slice());
        assert_eq!(bessel_coeffs(2).unwrap().coeffs(), rats(&[(1, 1), (1, 1), (1, 3)]).as_slice());
        assert_eq!(bessel_coeffs(3).unwrap().coeffs(), rats(&[(1, 1), (1, 1), (2, 5), (1, 15)]).as_slice());
        assert_eq!(bessel_coeffs(4).unwrap().coeffs(), rats(&[(1, 1), (1, 1), (3, 7), (2, 21), (1, 105)]).as_slice());
        assert!(matches!(bessel_coeffs(13), Err(Error::Domain(_))));
    }

    #[test]
    fn first_two_coefficients_are_one() {
        for n in 1..=MAX_BESSEL_ORDER {
            let a = bessel_coeffs(n).unwrap();
            assert!(a.coeffs()[0].is_one() && a.coeffs()[1].is_one());
        }
    }

    #[test]
    fn theta_examples() {
        assert!(theta_apply(3, &M::zeros(4, 4)).unwrap().distance(&M::identity(4)) < 1e-16);
        let two = M::from_real_rows(&[&[2.0]]).unwrap();
        assert!((theta_apply(1, &two).unwrap()[(0, 0)].re - 3.0).abs() < 1e-15);
        let i = M::from_diagonal(&[Complex::new(0.0, 1.0)]);
        let v = theta_apply(2, &i).unwrap()[(0, 0)];
        assert!((v - Complex::new(2.0 / 3.0, 1.0)).norm() < 1e-15);
        assert!(matches!(theta_apply(2, &M::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn theta_apply_matches_power_sum() {
        let x = M::from_fn(3, 3, |i, j| Complex::new(0.1 * (i as f64 - j as f64), 0.05 * (i + j) as f64));
        let a = bessel_coeffs(4).unwrap().to_real::<f64>();
        let mut expected = M::zeros(3, 3);
        let mut pw = M::identity(3);
        for c in a {
            expected = expected.add_scaled(&pw, c);
            pw = pw.matmul(&x);
        }
        assert!(theta_apply(4, &x).unwrap().distance(&expected) < 1e-15);
    }

    #[test]
    fn alpha_beta_examples() {
        let (a, b) = alpha_beta_coeffs(2).unwrap();
        assert_eq!(a, rats(&[(1, 1), (-1, 3)]));
        assert_eq!(b, rats(&[(1, 1)]));
        let (a, b) = alpha_beta_coeffs(3).unwrap();
        assert_eq!(a, rats(&[(1, 1), (-2, 5)]));
        assert_eq!(b, rats(&[(1, 1), (-1, 15)]));
        let (a, b) = alpha_beta_coeffs(0).unwrap();
        assert_eq!(a, rats(&[(1, 1)]));
        assert!(b.is_empty());
        for n in 0..=MAX_BESSEL_ORDER {
            let (a, b) = alpha_beta_coeffs(n).unwrap();
            assert_eq!(a.len(), n / 2 + 1);
            assert_eq!(b.len(), if n == 0 { 0 } else { (n - 1) / 2 + 1 });
        }
    }

    #[test]
    fn parity_split_reassembles_theta() {
        let z = RationalPoly::var();
        let minus_z2 = z.mul(&z).mul(&RationalPoly::constant(rat(-1, 1)));
        for n in 0..=MAX_BESSEL_ORDER {
            let (a, b) = alpha_beta_coeffs(n).unwrap();
            let lhs = RationalPoly::new(a).compose(&minus_z2).add(&z.mul(&RationalPoly::new(b).compose(&minus_z2)));
            assert_eq!(lhs, bessel_coeffs(n).unwrap().poly(), "n = {n}");
        }
    }

    #[test]
    fn second_coefficient_defect() {
        for n in 2..=8 {
            let a2 = bessel_coeffs(n).unwrap().coeffs()[2].clone();
            assert_eq!(a2, rat(n as i64 - 1, 2 * n as i64 - 1));
            assert_ne!(a2, rat(1, 2));
        }
    }

    #[test]
    fn odd_moment_sums_vanish() {
        // Σ_{k ≤ min(l,n)} 2(−1)^{k+1} a_k / (l−k)! = 0 for odd l ≤ 2n−1
        for n in 1..=8 {
            let a = bessel_coeffs(n).unwrap();
            for l in (1..2 * n).step_by(2) {
                let sum = (0..=l.min(n)).fold(BigRational::zero(), |acc, k| {
                    let sign = if k % 2 == 0 { -2 } else { 2 };
                    acc + rat(sign, 1) * a.coeffs()[k].clone() / BigRational::from_integer(factorial(l - k))
                });
                assert!(sum.is_zero(), "n = {n}, l = {l}");
            }
        }
    }

    #[test]
    fn gamma_delta_printed_forms() {
        use Letter::{X, Y};
        let (g, d) = gamma_delta(1).unwrap();
        assert_eq!(g, NoncommutativePoly::one());
        assert_eq!(d, NoncommutativePoly::one());
        let (g, d) = gamma_delta(3).unwrap();
        assert_eq!(g.coeff(&[X]), rat(-2, 5));
        assert_eq!(g.coeff(&[Y, Y]), rat(-1, 2));
        assert_eq!(g.coeff(&[Y, Y, Y]), rat(-1, 6));
        assert_eq!(g.coeff(&[X, Y]), rat(-1, 6));
        assert!(g.coeff(&[Y, X]).is_zero());
        assert_eq!(d.coeff(&[X]), rat(-1, 15));
        assert_eq!(d.coeff(&[Y]), rat(1, 2));
        assert_eq!(g.degree(), Some(3));
        assert!(matches!(gamma_delta(0), Err(Error::UnsupportedOrder(0))));
        assert!(matches!(gamma_delta(4), Err(Error::UnsupportedOrder(4))));
    }

    #[test]
    fn gamma_delta_conditions() {
        let z = RationalPoly::var();
        let zero = RationalPoly::zero();
        let minus_z2 = z.mul(&z).mul(&RationalPoly::constant(rat(-1, 1)));
        for n in STIEFEL_ORDERS {
            let (g, d) = gamma_delta(n).unwrap();
            let (a, b) = alpha_beta_coeffs(n).unwrap();
            assert_eq!(g.specialize(&z, &zero), RationalPoly::new(a), "n = {n}");
            assert_eq!(d.specialize(&z, &zero), RationalPoly::new(b), "n = {n}");
            let lhs = g.specialize(&minus_z2, &z).add(&z.mul(&d.specialize(&minus_z2, &z)));
            assert_eq!(lhs, bessel_coeffs(n).unwrap().poly(), "n = {n}");
        }
    }

    #[test]
    fn like_words_merge() {
        use Letter::X;
        let p = NoncommutativePoly::from_terms([(rat(1, 2), vec![X]), (rat(1, 2), vec![X]), (rat(0, 1), vec![])]);
        assert_eq!(p.terms().count(), 1);
        assert_eq!(p.coeff(&[X]), rat(1, 1));
    }

    #[test]
    fn noncommutative_eval_respects_order() {
        use Letter::{X, Y};
        let x = M::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let y = M::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        let xy = NoncommutativePoly::from_terms([(rat(1, 1), vec![X, Y])]);
        let v = eval_noncommutative(&xy, &x, &y).unwrap();
        assert_eq!(v, x.matmul(&y));
        assert_ne!(v, y.matmul(&x));

        assert_eq!(eval_noncommutative(&NoncommutativePoly::one(), &x, &y).unwrap(), M::identity(2));

        let (g2, _) = gamma_delta(2).unwrap();
        let mut expected = M::identity(2).add_scaled(&x, -1.0 / 3.0);
        expected = expected.add_scaled(&y.matmul(&y), -0.5);
        assert!(eval_noncommutative(&g2, &x, &y).unwrap().distance(&expected) < 1e-16);

        assert!(matches!(eval_noncommutative(&g2, &x, &M::zeros(3, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn poly_apply_empty_is_zero() {
        let x = M::identity(2);
        assert_eq!(poly_apply::<f64>(&[], &x).unwrap(), M::zeros(2, 2));
    }
}
