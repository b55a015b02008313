mod common;

use common::*;
use exrot::hermite::{hermite_1d, hermite_vector};
use exrot::roughness::{
    derivative_coefficients, exrot_coefficients, gaussian_moment_integral, gaussian_vector_moment_integral,
    hermite_cross_integral_1d, radial_hermite_expectation, t_table,
};
use exrot::tensor::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn explicit_hermite_matches_recurrence() {
    for n in 0..=10 {
        for &z in &[-3.1, -0.4, 0.0, 0.7, 2.5] {
            let a = he(n, z);
            assert!((hermite_1d(n, z) - a).abs() <= 1e-12 * a.abs().max(1.0), "n={n} z={z}");
        }
    }
}

#[test]
fn fornberg_weights_reproduce_second_difference() {
    let w = fd_weights(2, 1);
    assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] + 2.0).abs() < 1e-14 && (w[2] - 1.0).abs() < 1e-14);
}

#[test]
fn moment_integrals_match_quadrature() {
    for n in 0..=8 {
        for &a in &[0.5, 1.0, 2.0, 3.7] {
            let exact = gaussian_moment_integral(n, a).unwrap();
            let q = moment_quadrature(n, a);
            if n % 2 == 1 {
                assert!(exact == 0.0 && q.abs() < 1e-12);
            } else {
                assert!(rel_err(exact, q) < 1e-10, "n={n} a={a}: {exact} vs {q}");
            }
        }
    }
}

#[test]
fn t_table_matches_quadrature() {
    for &sigma in &[0.3, 1.0, 2.2] {
        let t = t_table(sigma).unwrap();
        let q = [
            cross_integral_quadrature(2, 2, sigma),
            cross_integral_quadrature(5, 5, sigma),
            cross_integral_quadrature(6, 6, sigma),
            2.0 * cross_integral_quadrature(2, 5, sigma),
            2.0 * cross_integral_quadrature(5, 6, sigma),
            2.0 * cross_integral_quadrature(2, 6, sigma),
        ];
        for (i, (a, b)) in t.iter().zip(&q).enumerate() {
            if *a == 0.0 {
                assert!(b.abs() < 1e-10 * t[0], "T{} should vanish: {b}", i + 1);
            } else {
                assert!(rel_err(*a, *b) < 1e-8, "T{} at σ={sigma}: {a} vs {b}", i + 1);
            }
        }
    }
}

#[test]
fn cross_integrals_all_orders() {
    for m in 0..=7 {
        for n in 0..=7 {
            let exact = hermite_cross_integral_1d(m, n, 1.3).unwrap();
            let q = cross_integral_quadrature(m, n, 1.3);
            assert!((exact - q).abs() < 1e-9 * exact.abs().max(1e-3), "({m},{n}): {exact} vs {q}");
        }
    }
}

#[test]
fn planar_moments_match_quadrature() {
    for n in (0..=6).step_by(2) {
        let exact = gaussian_vector_moment_integral(n, 2).unwrap();
        assert!(rel_err(exact, planar_vector_moment(n)) < 1e-8, "n={n}");
    }
    assert_eq!(gaussian_vector_moment_integral(5, 2).unwrap(), 0.0);
}

#[test]
fn planar_brackets_match_quadrature() {
    for (a, b) in [(2, 2), (2, 6), (5, 5), (6, 6), (3, 3), (3, 7)] {
        let exact = radial_hermite_expectation(a, b, 2).unwrap();
        let q = planar_bracket(a, b);
        assert!(rel_err(exact, q) < 1e-7, "({a},{b}): {exact} vs {q}");
    }
}

#[test]
fn univariate_rationals() {
    let c = exrot_coefficients(1).unwrap();
    assert!((c.c3 - 315.0 / 288.0).abs() < 1e-12);
    assert!((c.c4_sq - 3465.0 / 9216.0).abs() < 1e-12);
    assert!((c.c4 - 35.0 / 48.0).abs() < 1e-12);
    let g = derivative_coefficients(1).unwrap();
    assert!((g.leading - 1.875).abs() < 1e-12);
    assert!((g.c3 - 10395.0 / 2304.0).abs() < 1e-12);
    assert!((g.c4_sq - 135135.0 / 73728.0).abs() < 1e-12);
    assert!((g.c4 - 2.0 * 945.0 / 768.0).abs() < 1e-12);
}

#[test]
fn bivariate_coefficients_from_planar_quadrature() {
    let b1 = planar_bracket(2, 2);
    let c = exrot_coefficients(2).unwrap();
    assert!((c.c3 - planar_bracket(5, 5) / (36.0 * b1)).abs() < 1e-9);
    assert!((c.c4_sq - planar_bracket(6, 6) / (576.0 * b1)).abs() < 1e-9);
    assert!((c.c4 - 2.0 * planar_bracket(2, 6) / (24.0 * b1)).abs() < 1e-9);
    assert_eq!((c.c3, c.c4_sq, c.c4), (1.25, 0.390625, 0.25));
    let g = derivative_coefficients(2).unwrap();
    assert!((g.leading - planar_bracket(3, 3)).abs() < 1e-9);
    assert!((g.c3 - planar_bracket(6, 6) / 36.0).abs() < 1e-9);
    assert!((g.c4_sq - planar_bracket(7, 7) / 576.0).abs() < 1e-9);
    assert!((g.c4 - 2.0 * planar_bracket(3, 7) / 24.0).abs() < 1e-9);
}

#[test]
fn hermite_vectors_satisfy_rodrigues() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let covs = [DenseMatrix::identity(2), DenseMatrix::from_rows(&[vec![1.5, 0.4], vec![0.4, 0.8]]).unwrap()];
    for cov in &covs {
        for _ in 0..5 {
            let x = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
            for n in 0..=5 {
                let h = hermite_vector(n, &x, cov).unwrap();
                let fd = rodrigues_hermite_2d(n, &x, cov, 0.05);
                let scale = fd.iter().fold(1e-3f64, |a, v| a.max(v.abs()));
                for (a, b) in h.values.as_slice().iter().zip(&fd) {
                    assert!((a - b).abs() < 1e-4 * scale, "n={n} x={x:?}: {a} vs {b}");
                }
            }
        }
    }
}
