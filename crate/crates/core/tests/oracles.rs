//! Cross-checks of the exact oracles against routes that share no code with them.

use polyretract::{
    dist_grassmann, dist_unitary, eigh, exp_grassmann_exact, exp_stiefel_exact, expm_skew, observed_order,
    random_gaussian, random_grassmann_tangent, random_skew_hermitian, random_stiefel_point, random_stiefel_tangent,
    retract_unitary, thin_qr, thin_svd, Manifold, Matrix, Matrix32, RetractionSpec, TangentVector,
};

/// Scaling and squaring with a 30-term Taylor series.
fn expm_taylor(a: &Matrix) -> Matrix {
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let x = a.scale(0.5f64.powi(squarings));
    let mut term = Matrix::identity(a.rows());
    let mut sum = term.clone();
    for k in 1..30 {
        term = term.matmul(&x).scale(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

#[test]
fn skew_exponential_matches_taylor() {
    for (m, r, seed) in [(3, 0.5, 1), (8, 2.0, 2), (16, 6.0, 3)] {
        let omega = random_skew_hermitian::<f64>(m, seed).unwrap().scale(r);
        assert!(expm_skew(&omega).unwrap().distance(&expm_taylor(&omega)) < 1e-12, "m = {m}");
    }
}

#[test]
fn stiefel_geodesic_matches_taylor_block_exponential() {
    let (m, p) = (9, 3);
    let y: Matrix = random_stiefel_point(m, p, 4).unwrap();
    let h = random_stiefel_tangent(&y, 5, false).unwrap().scale(2.0);
    let tv = TangentVector::stiefel(y.clone(), h.clone()).unwrap();

    // Y⊥ from a QR of [Y G]; the geodesic does not depend on the choice of Y⊥
    let g: Matrix = random_gaussian(m, m - p, 6);
    let q = thin_qr(&y.hstack(&g)).unwrap().q;
    let frame = y.hstack(&q.columns(p, m - p));
    let omega = y.adjoint_mul(&h);
    let k = frame.columns(p, m - p).adjoint_mul(&h);
    let mut z = Matrix::zeros(m, m);
    z.set_block(0, 0, &omega);
    z.set_block(p, 0, &k);
    z.set_block(0, p, &-k.adjoint());
    for t in [0.1, 0.7] {
        let expected = frame.matmul(&expm_taylor(&z.scale(t)).columns(0, p));
        assert!(exp_stiefel_exact(&tv, t).unwrap().distance(&expected) < 1e-11);
    }
}

#[test]
fn stiefel_geodesic_has_velocity_h() {
    let y: Matrix = random_stiefel_point(12, 4, 7).unwrap();
    let h = random_stiefel_tangent(&y, 8, false).unwrap();
    let tv = TangentVector::stiefel(y, h.clone()).unwrap();
    let dt = 1e-4;
    let fwd = exp_stiefel_exact(&tv, dt).unwrap();
    let bwd = exp_stiefel_exact(&tv, -dt).unwrap();
    let velocity = (&fwd - &bwd).scale(0.5 / dt);
    assert!(velocity.distance(&h) < 1e-7);
}

#[test]
fn grassmann_geodesic_moves_principal_angles_linearly() {
    // the Procrustes distance to Exp_Y(tH) is the chord sqrt(Σ (2 sin(tσ_i/2))²)
    let y: Matrix = random_stiefel_point(15, 4, 9).unwrap();
    let h = random_grassmann_tangent(&y, 10).unwrap().scale(1.5);
    let sigma = thin_svd(&h).unwrap().s;
    let tv = TangentVector::grassmann(y.clone(), h).unwrap();
    for t in [1e-6, 0.01, 0.3, 0.9] {
        let chord: f64 = sigma.iter().map(|s| (2.0 * (t * s / 2.0).sin()).powi(2)).sum::<f64>().sqrt();
        let d = dist_grassmann(&y, &exp_grassmann_exact(&tv, t).unwrap()).unwrap();
        assert!((d - chord).abs() <= 1e-13 + 1e-12 * chord, "t = {t}: {d} vs {chord}");
    }
}

#[test]
fn unitary_distance_along_a_one_parameter_group() {
    let omega = random_skew_hermitian::<f64>(6, 11).unwrap();
    let i = Matrix::identity(6);
    for t in [0.1, 0.5, 1.0] {
        let d = dist_unitary(&i, &expm_skew(&omega.scale(t)).unwrap()).unwrap();
        assert!((d - t / 2f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn unitary_retraction_order_against_taylor_oracle() {
    let omega = random_skew_hermitian::<f64>(10, 12).unwrap().scale(30.0);
    for n in 1..=3 {
        let spec = RetractionSpec::new(Manifold::Unitary, n);
        let errors: Vec<f64> = (0..3)
            .map(|k| {
                let t = 0.02 * 0.5f64.powi(k);
                retract_unitary(&omega, t, &spec).unwrap().distance(&expm_taylor(&omega.scale(t)))
            })
            .collect();
        let orders = observed_order(&errors).unwrap();
        let want = 2.0 * n as f64 + 1.0;
        assert!(orders.iter().all(|o| (o - want).abs() < 0.3), "n = {n}: {orders:?}");
    }
}

#[test]
fn factorizations_reconstruct() {
    let a: Matrix = random_gaussian(11, 5, 13);
    let svd = thin_svd(&a).unwrap();
    assert!(svd.reconstruct().distance(&a) < 1e-12 * a.frobenius_norm());
    assert!(svd.u.orthonormality_defect() < 1e-12);
    assert!(svd.s.windows(2).all(|w| w[0] >= w[1]));

    let qr = thin_qr(&a).unwrap();
    assert!(qr.q.matmul(&qr.r).distance(&a) < 1e-12 * a.frobenius_norm());
    for i in 0..5 {
        assert!(qr.r[(i, i)].re > 0.0 && qr.r[(i, i)].im == 0.0);
        for j in 0..i {
            assert_eq!(qr.r[(i, j)], num_complex::Complex::new(0.0, 0.0));
        }
    }

    let b: Matrix = random_gaussian(7, 7, 14);
    let herm = b.sym_part().unwrap();
    let eig = eigh(&herm).unwrap();
    assert!(eig.reconstruct().distance(&herm) < 1e-12 * herm.frobenius_norm());
    assert!(eig.vectors.orthonormality_defect() < 1e-12);
}

#[test]
fn single_precision_matches_double() {
    let omega64 = random_skew_hermitian::<f64>(8, 15).unwrap().scale(5.0);
    let omega32: Matrix32 = omega64.cast();
    let spec32 = RetractionSpec::<f32>::new(Manifold::Unitary, 2);
    let spec64 = RetractionSpec::<f64>::new(Manifold::Unitary, 2);
    let r32 = retract_unitary(&omega32, 0.05, &spec32).unwrap();
    let r64 = retract_unitary(&omega64, 0.05, &spec64).unwrap();
    assert!(r32.cast::<f64>().distance(&r64) < 1e-5);
    assert!(r32.orthonormality_defect() < 1e-5);
}
