//! Oracles shared by the integration tests and the acceptance runner. None of
//! them go through the closed forms they are used to check.

#![allow(dead_code)]

use std::f64::consts::PI;

use exrot::hermite::gaussian_pdf_nd;
use exrot::quadrature::{integrate, integrate_2d, integrate_with_breaks};
use exrot::tensor::{delta2, kron_power, DenseMatrix};

/// Probabilists' Hermite polynomial from the explicit sum.
pub fn he(n: usize, z: f64) -> f64 {
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    (0..=n / 2)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact(n) / (fact(m) * fact(n - 2 * m) * 2f64.powi(m as i32)) * z.powi((n - 2 * m) as i32)
        })
        .sum()
}

/// Fornberg weights for the `k`-th derivative at 0 on nodes `-m..=m`.
pub fn fd_weights(k: usize, m: usize) -> Vec<f64> {
    let nodes: Vec<f64> = (0..=2 * m).map(|j| j as f64 - m as f64).collect();
    let np = nodes.len();
    let mut c = vec![vec![0.0; k + 1]; np];
    c[0][0] = 1.0;
    let (mut c1, mut c4) = (1.0, nodes[0]);
    for i in 1..np {
        let mn = i.min(k);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for s in (1..=mn).rev() {
                    c[i][s] = c1 * (s as f64 * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for s in (1..=mn).rev() {
                c[j][s] = (c4 * c[j][s] - s as f64 * c[j][s - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|r| r[k]).collect()
}

/// Mixed partial `∂^{k1+k2} f / ∂x^{k1} ∂y^{k2}` by a product stencil.
pub fn mixed_partial_2d<F: Fn(f64, f64) -> f64>(f: F, x: f64, y: f64, k1: usize, k2: usize, h: f64) -> f64 {
    let stencil = |k: usize| if k == 0 { (vec![1.0], 0) } else { (fd_weights(k, k / 2 + 3), k / 2 + 3) };
    let (w1, m1) = stencil(k1);
    let (w2, m2) = stencil(k2);
    let mut acc = 0.0;
    for (a, wa) in w1.iter().enumerate() {
        for (b, wb) in w2.iter().enumerate() {
            let dx = (a as f64 - m1 as f64) * h;
            let dy = (b as f64 - m2 as f64) * h;
            acc += wa * wb * f(x + dx, y + dy);
        }
    }
    acc / h.powi((k1 + k2) as i32)
}

/// `(-1)^n C^{⊗n} D^{⊗n} φ_C(x) / φ_C(x)` in two dimensions by finite differences.
pub fn rodrigues_hermite_2d(n: usize, x: &[f64], cov: &DenseMatrix, h: f64) -> Vec<f64> {
    let pdf = |a: f64, b: f64| gaussian_pdf_nd(&[a, b], cov).unwrap();
    let len = 2usize.pow(n as u32);
    let deriv: Vec<f64> = (0..len)
        .map(|offset| {
            let ones = (0..n).filter(|k| (offset >> (n - 1 - k)) & 1 == 1).count();
            mixed_partial_2d(pdf, x[0], x[1], n - ones, ones, h)
        })
        .collect();
    let cn = kron_power(cov, n);
    let dv = DenseMatrix::column(deriv);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let phi = pdf(x[0], x[1]);
    cn.matmul(&dv).unwrap().as_slice().iter().map(|v| sign * v / phi).collect()
}

/// `∫ φ_σ(x)² (He_m(x/σ)/σ^m)(He_n(x/σ)/σ^n) dx` by quadrature.
pub fn cross_integral_quadrature(m: usize, n: usize, sigma: f64) -> f64 {
    let f = |x: f64| {
        let z = x / sigma;
        let g = (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt());
        g * g * he(m, z) * he(n, z) / sigma.powi((m + n) as i32)
    };
    integrate(f, -14.0 * sigma, 14.0 * sigma, 1e-15, 1e-13).unwrap().value
}

/// `∫ x^n e^{-a x²} dx` by quadrature.
pub fn moment_quadrature(n: usize, a: f64) -> f64 {
    let s = 1.0 / a.sqrt();
    let breaks = [-12.0 * s, -4.0 * s, -2.0 * s, -s, 0.0, s, 2.0 * s, 4.0 * s, 12.0 * s];
    integrate_with_breaks(|x| x.powi(n as i32) * (-a * x * x).exp(), &breaks, 1e-15, 1e-13).unwrap().value
}

/// `E[He_a(|x|) He_b(|x|)]`, `x ~ N(0, I/2)` in the plane, by Cartesian quadrature.
pub fn planar_bracket(a: usize, b: usize) -> f64 {
    integrate_2d(
        |x, y| {
            let r = (x * x + y * y).sqrt();
            he(a, r) * he(b, r) * (-(x * x + y * y)).exp() / PI
        },
        (-9.0, 9.0),
        (-9.0, 9.0),
        1e-12,
        1e-11,
    )
    .unwrap()
    .value
}

/// `E[x^{⊗n}' vec(I)^{⊗n/2}]`, `x ~ N(0, I/2)` in the plane, by Cartesian quadrature.
pub fn planar_vector_moment(n: usize) -> f64 {
    let contraction = kron_power(&delta2(2), n / 2);
    integrate_2d(
        |x, y| {
            let v = kron_power(&DenseMatrix::column(vec![x, y]), n);
            v.dot(&contraction).unwrap() * (-(x * x + y * y)).exp() / PI
        },
        (-9.0, 9.0),
        (-9.0, 9.0),
        1e-12,
        1e-11,
    )
    .unwrap()
    .value
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
