//! Weighted means of unitary matrices.
//!
//! The arithmetic mean `P(Σ w_i U_i)` costs one polar decomposition. The
//! geometric (Karcher) mean solves `Σ w_i log(G* U_i) = 0`. For data
//! clustered within `O(t)` the two agree to `O(t³)`.

use crate::convergence::ConvergenceSeries;
use crate::error::{Error, Result};
use crate::funcs::{expm_skew, logm_unitary, require_unitary, SkewExponential};
use crate::matrix::ComplexMatrix;
use crate::polar::{polar_svd, IterationConfig};
use crate::random::random_skew_hermitian;
use crate::retract::dist_unitary;
use crate::scalar::Real;

/// Weights summing to one. Negative entries are accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights<T> {
    w: Vec<T>,
}

impl<T: Real> Weights<T> {
    pub fn new(w: Vec<T>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Domain("weights must be nonempty".into()));
        }
        if w.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("weights must be finite".into()));
        }
        let sum: T = w.iter().copied().sum();
        let tol = T::lit(1e-14).max(T::epsilon() * T::lit(4.0 * w.len() as f64));
        if (sum - T::one()).abs() > tol {
            return Err(Error::Domain(format!("weights must sum to 1, got {sum}")));
        }
        Ok(Self { w })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("weights must be nonempty".into()));
        }
        Ok(Self { w: vec![T::one() / T::lit(n as f64); n] })
    }

    pub fn as_slice(&self) -> &[T] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

fn check_data<T: Real>(us: &[ComplexMatrix<T>], w: &Weights<T>) -> Result<()> {
    if us.len() != w.len() {
        return Err(Error::Dimension(format!("{} matrices but {} weights", us.len(), w.len())));
    }
    let shape = us[0].shape();
    if us.iter().any(|u| u.shape() != shape) {
        return Err(Error::Dimension("all matrices in a mean must share a shape".into()));
    }
    us.iter().try_for_each(require_unitary)
}

/// `A(U_1, …, U_n; w) = P(Σ w_i U_i)`.
pub fn arithmetic_mean<T: Real>(us: &[ComplexMatrix<T>], w: &Weights<T>) -> Result<ComplexMatrix<T>> {
    check_data(us, w)?;
    let m = us[0].rows();
    let sum = us.iter().zip(w.as_slice()).fold(ComplexMatrix::zeros(m, m), |acc, (u, &wi)| acc.add_scaled(u, wi));
    match polar_svd(&sum) {
        Ok(f) => Ok(f.u),
        Err(Error::Rank { .. }) => Err(Error::AntipodalData),
        Err(e) => Err(e),
    }
}

/// Karcher mean with its stationarity certificate.
#[derive(Debug, Clone)]
pub struct GeometricMean<T> {
    pub g: ComplexMatrix<T>,
    /// Fixed-point steps taken after the arithmetic-mean start.
    pub iterations: usize,
    /// `‖Σ w_i log(G* U_i)‖_F` at `g`.
    pub residual: T,
}

fn karcher_residual<T: Real>(
    g: &ComplexMatrix<T>,
    us: &[ComplexMatrix<T>],
    w: &Weights<T>,
) -> Result<ComplexMatrix<T>> {
    let m = g.rows();
    us.iter()
        .zip(w.as_slice())
        .try_fold(ComplexMatrix::zeros(m, m), |acc, (u, &wi)| Ok(acc.add_scaled(&logm_unitary(&g.adjoint_mul(u))?, wi)))
}

/// Largest pairwise distance for which [`geometric_mean`] accepts data.
pub fn cluster_radius<T: Real>() -> T {
    T::FRAC_PI_4()
}

/// Geometric mean by the fixed-point iteration `G ← G e^{Σ w_i log(G* U_i)}`
/// started from the arithmetic mean.
pub fn geometric_mean<T: Real>(
    us: &[ComplexMatrix<T>],
    w: &Weights<T>,
    cfg: &IterationConfig<T>,
) -> Result<GeometricMean<T>> {
    cfg.validate()?;
    check_data(us, w)?;
    for (i, a) in us.iter().enumerate() {
        for b in &us[i + 1..] {
            let d = dist_unitary(a, b)?;
            if d > cluster_radius() {
                return Err(Error::Domain(format!("geometric_mean needs pairwise distances <= pi/4, found {d}")));
            }
        }
    }
    let mut g = arithmetic_mean(us, w)?;
    for k in 0..=cfg.max_iters {
        let s = karcher_residual(&g, us, w)?;
        let residual = s.frobenius_norm();
        if residual <= cfg.tol {
            return Ok(GeometricMean { g, iterations: k, residual });
        }
        if k == cfg.max_iters {
            return Err(Error::NonConvergence { iterations: k, residual: residual.to_f64_lossy() });
        }
        g = g.matmul(&expm_skew(&s)?);
    }
    unreachable!("loop returns on its last iteration")
}

/// `P((1−s) U_1 + s U_2)`, an `O(t³)` approximation of the geodesic
/// `U_1 e^{stΩ}` when `U_2 = U_1 e^{tΩ}`.
pub fn interpolate_polar<T: Real>(u1: &ComplexMatrix<T>, u2: &ComplexMatrix<T>, s: T) -> Result<ComplexMatrix<T>> {
    if !(s >= T::zero() && s <= T::one()) {
        return Err(Error::Domain(format!("interpolation parameter must lie in [0, 1], got {s}")));
    }
    require_unitary(u1)?;
    require_unitary(u2)?;
    if u1.shape() != u2.shape() {
        return Err(Error::Dimension("interpolate_polar needs equal shapes".into()));
    }
    let a = u1.scale(T::one() - s).add_scaled(u2, s);
    match polar_svd(&a) {
        Ok(f) => Ok(f.u),
        Err(Error::Rank { .. }) => Err(Error::Singular),
        Err(e) => Err(e),
    }
}

/// Inputs of the arithmetic/geometric mean comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperclosenessSetup {
    pub m: usize,
    pub weights: Vec<f64>,
    /// Multiplies the unit-norm generators `Ω_i`.
    pub scale: f64,
    pub seed: u64,
    pub t0: f64,
    pub levels: usize,
}

/// Per-level `‖A − G‖_F` and the certificate of each geometric mean.
#[derive(Debug, Clone)]
pub struct SuperclosenessReport {
    pub series: ConvergenceSeries,
    pub residuals: Vec<f64>,
    pub iterations: Vec<usize>,
}

/// Compares `A(U_1(t), …)` and `G(U_1(t), …)` for `U_i(t) = e^{t·scale·Ω_i}`.
///
/// `Ω_i` is drawn with seed `seed + i`.
pub fn supercloseness_experiment(
    setup: &SuperclosenessSetup,
    cfg: &IterationConfig<f64>,
) -> Result<SuperclosenessReport> {
    let w = Weights::new(setup.weights.clone())?;
    if setup.levels < 2 || !(setup.t0 > 0.0) || !(setup.scale > 0.0) {
        return Err(Error::Domain("supercloseness needs levels >= 2, t0 > 0 and scale > 0".into()));
    }
    let gens = (0..w.len())
        .map(|i| {
            let omega = random_skew_hermitian::<f64>(setup.m, setup.seed.wrapping_add(i as u64))?;
            SkewExponential::new(&omega.scale(setup.scale))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut errors = Vec::with_capacity(setup.levels);
    let mut residuals = Vec::with_capacity(setup.levels);
    let mut iterations = Vec::with_capacity(setup.levels);
    for t in crate::convergence::dyadic_steps(setup.t0, setup.levels) {
        let us: Vec<_> = gens.iter().map(|e| e.at(t)).collect();
        let a = arithmetic_mean(&us, &w)?;
        let g = geometric_mean(&us, &w, cfg)?;
        errors.push(Some(a.distance(&g.g)));
        residuals.push(g.residual);
        iterations.push(g.iterations);
    }
    Ok(SuperclosenessReport { series: ConvergenceSeries::from_errors(setup.t0, &errors), residuals, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::powm_unitary;
    use crate::random::random_unitary;

    type M = ComplexMatrix<f64>;

    fn near(u: &M, seed: u64, t: f64) -> M {
        let omega: M = random_skew_hermitian(u.rows(), seed).unwrap();
        u.matmul(&expm_skew(&omega.scale(t)).unwrap())
    }

    #[test]
    fn weights_contract() {
        assert!(Weights::new(vec![0.5, 0.3, 0.2]).is_ok());
        assert!(Weights::new(vec![1.5, -0.5]).is_ok());
        assert!(Weights::new(vec![0.5, 0.4]).is_err());
        assert!(Weights::<f64>::new(vec![]).is_err());
        let u = Weights::<f64>::uniform(4).unwrap();
        assert_eq!(u.as_slice(), &[0.25; 4]);
    }

    #[test]
    fn arithmetic_mean_examples() {
        let u: M = random_unitary(4, 1).unwrap();
        let w = Weights::new(vec![0.3, 0.7]).unwrap();
        assert!(arithmetic_mean(&[u.clone(), u.clone()], &w).unwrap().distance(&u) < 1e-13);

        let v = near(&u, 2, 0.5);
        let w10 = Weights::new(vec![1.0, 0.0]).unwrap();
        assert!(arithmetic_mean(&[u.clone(), v.clone()], &w10).unwrap().distance(&u) < 1e-13);

        let half = Weights::uniform(2).unwrap();
        let mid = u.matmul(&powm_unitary(&u.adjoint_mul(&v), 0.5).unwrap());
        assert!(arithmetic_mean(&[u.clone(), v], &half).unwrap().distance(&mid) < 1e-12);
    }

    #[test]
    fn antipodal_data_rejected() {
        let i = M::identity(2);
        let w = Weights::uniform(2).unwrap();
        assert_eq!(arithmetic_mean(&[i.clone(), -&i], &w).unwrap_err(), Error::AntipodalData);
    }

    #[test]
    fn geometric_mean_examples() {
        let u: M = random_unitary(5, 3).unwrap();
        let cfg = IterationConfig::default();
        let w = Weights::uniform(3).unwrap();
        let g = geometric_mean(&[u.clone(), u.clone(), u.clone()], &w, &cfg).unwrap();
        assert_eq!(g.iterations, 0);
        assert!(g.g.distance(&u) < 1e-13);

        let v = near(&u, 4, 0.3);
        let half = Weights::uniform(2).unwrap();
        let g = geometric_mean(&[u.clone(), v.clone()], &half, &cfg).unwrap();
        assert!(g.residual <= cfg.tol);
        assert!(g.g.distance(&arithmetic_mean(&[u.clone(), v], &half).unwrap()) < 1e-9);

        let w = Weights::new(vec![0.5, 0.3, 0.2]).unwrap();
        let data = [near(&u, 5, 0.2), near(&u, 6, 0.2), near(&u, 7, 0.2)];
        let g = geometric_mean(&data, &w, &cfg).unwrap();
        assert!(g.residual <= cfg.tol);
        assert!(karcher_residual(&g.g, &data, &w).unwrap().frobenius_norm() <= 1e-12);
    }

    #[test]
    fn geometric_mean_rejects_spread_data() {
        let u = M::identity(3);
        let v = near(&u, 1, 3.0);
        let w = Weights::uniform(2).unwrap();
        assert!(matches!(geometric_mean(&[u, v], &w, &IterationConfig::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn interpolation_examples() {
        let u: M = random_unitary(4, 8).unwrap();
        let v = near(&u, 9, 0.4);
        assert!(interpolate_polar(&u, &v, 0.0).unwrap().distance(&u) < 1e-13);
        assert!(interpolate_polar(&u, &v, 1.0).unwrap().distance(&v) < 1e-13);
        let mid = u.matmul(&powm_unitary(&u.adjoint_mul(&v), 0.5).unwrap());
        assert!(interpolate_polar(&u, &v, 0.5).unwrap().distance(&mid) < 1e-10);
        assert!(interpolate_polar(&u, &v, 1.5).is_err());
        let i = M::identity(2);
        assert_eq!(interpolate_polar(&i, &-&i, 0.5).unwrap_err(), Error::Singular);
    }

    #[test]
    fn supercloseness_trivial_cases() {
        let cfg = IterationConfig::default();
        let mut setup = SuperclosenessSetup { m: 6, weights: vec![1.0], scale: 10.0, seed: 3, t0: 0.01, levels: 3 };
        let r = supercloseness_experiment(&setup, &cfg).unwrap();
        assert!(r.series.errors().iter().all(|e| e.unwrap() < 1e-14));

        setup.weights = vec![0.5, 0.5];
        let r = supercloseness_experiment(&setup, &cfg).unwrap();
        assert!(r.series.errors().iter().all(|e| e.unwrap() <= 1e-9));
    }
}
