//! Roughness functionals under a fourth-order Gram-Charlier truncation.
//!
//! Every multivariate bracket reduces to a radial expectation: with
//! `x ~ N(0, I/2)` in `d` dimensions and `r = |x|`, the integrals of products
//! of Hermite vectors contracted against `vec(I)` equal `E[H_a(r) H_b(r)]`
//! with the scalar polynomials, using `E r^{2m} = Π_{j<m} (d + 2j) / 2^m`.
//! For `d = 1` this is the ordinary Gaussian expectation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::hermite_coefficients;
use crate::quadrature;
use crate::stats::{CumulantVectors, Cumulants1D};
use crate::tensor::{delta2, kron, kron_power};

/// Largest dimension handled by the multivariate rules.
pub const MAX_DIM: usize = 4;

/// Largest moment order accepted by [`gaussian_vector_moment_integral`].
pub const MAX_MOMENT_ORDER: usize = 16;

/// Correction factors at or below this are reported as degenerate.
pub const DEGENERATE_C: f64 = 1e-6;

/// `n!!` with `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// `∫ x^n exp(-a x²) dx` over the real line.
pub fn gaussian_moment_integral(n: usize, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("a = {a} must be positive")));
    }
    if n % 2 == 1 {
        return Ok(0.0);
    }
    Ok(double_factorial(n as i64 - 1) / (2.0 * a).powf(n as f64 / 2.0) * (PI / a).sqrt())
}

/// `(d + n - 2)(d + n - 4) .. d / 2^{n/2}` for even `n`, zero for odd `n`.
///
/// This is the coefficient of `(π/|C⁻¹|)^{d/2}` in the Gaussian integral of
/// `x^{⊗n}` once every pair of factors is traced with `vec(I)`, i.e.
/// `E |x|^n` for `x ~ N(0, I/2)`.
pub fn gaussian_vector_moment_integral(n: usize, d: usize) -> Result<f64> {
    if n > MAX_MOMENT_ORDER || d == 0 || d > MAX_DIM {
        return Err(Error::Unsupported(format!("moment order {n} in dimension {d}")));
    }
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let half = n / 2;
    let prod: f64 = (0..half).map(|j| (d + 2 * j) as f64).product();
    Ok(prod / 2f64.powi(half as i32))
}

/// `E[H_a(r) H_b(r)]` with `r` the radius of `N(0, I/2)` in `d` dimensions.
pub fn radial_hermite_expectation(a: usize, b: usize, d: usize) -> Result<f64> {
    let pa = hermite_coefficients(a);
    let pb = hermite_coefficients(b);
    let mut total = 0.0;
    for (i, ca) in pa.iter().enumerate() {
        for (j, cb) in pb.iter().enumerate() {
            if *ca != 0.0 && *cb != 0.0 {
                total += ca * cb * gaussian_vector_moment_integral(i + j, d)?;
            }
        }
    }
    Ok(total)
}

/// Same expectation computed by quadrature against the radial density
/// `2 r^{d-1} e^{-r²} / Γ(d/2)`.
pub fn radial_hermite_quadrature(a: usize, b: usize, d: usize) -> Result<f64> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Unsupported(format!("dimension {d}")));
    }
    let norm = 2.0 / statrs::function::gamma::gamma(d as f64 / 2.0);
    let pa = hermite_coefficients(a);
    let pb = hermite_coefficients(b);
    let poly = |c: &[f64], r: f64| c.iter().rev().fold(0.0, |acc, k| acc * r + k);
    let r = quadrature::integrate(
        |r| norm * r.powi(d as i32 - 1) * (-r * r).exp() * poly(&pa, r) * poly(&pb, r),
        0.0,
        14.0,
        1e-13,
        1e-13,
    )?;
    Ok(r.value)
}

/// `∫ G²(x) (H_m(z)/σ^m)(H_n(z)/σ^n) dx` for `G = N(0, σ²)`, `z = x/σ`.
pub fn hermite_cross_integral_1d(m: usize, n: usize, sigma: f64) -> Result<f64> {
    if m > 7 || n > 7 {
        return Err(Error::Unsupported(format!("Hermite orders ({m}, {n})")));
    }
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma = {sigma} must be positive")));
    }
    let e = radial_hermite_expectation(m, n, 1)?;
    Ok(e / (2.0 * PI.sqrt() * sigma.powi((m + n + 1) as i32)))
}

/// `[T1, .., T6]`: squared terms for `(2,2)`, `(5,5)`, `(6,6)` and doubled
/// cross terms for `(2,5)`, `(5,6)`, `(2,6)`.
pub fn t_table(sigma: f64) -> Result<[f64; 6]> {
    let f = |m, n| hermite_cross_integral_1d(m, n, sigma);
    Ok([f(2, 2)?, f(5, 5)?, f(6, 6)?, 2.0 * f(2, 5)?, 2.0 * f(5, 6)?, 2.0 * f(2, 6)?])
}

/// Coefficients of a correction factor
/// `C = leading + c3·S3 + c4_sq·S4 + c4·S4'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectionCoefficients {
    pub d: usize,
    pub leading: f64,
    pub c3: f64,
    pub c4_sq: f64,
    pub c4: f64,
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Unsupported(format!("dimension {d}, supported 1..={MAX_DIM}")));
    }
    Ok(())
}

/// Density rule coefficients, normalized so that `leading = 1`.
pub fn exrot_coefficients(d: usize) -> Result<CorrectionCoefficients> {
    check_dim(d)?;
    let e = |a, b| radial_hermite_expectation(a, b, d);
    let base = e(2, 2)?;
    Ok(CorrectionCoefficients {
        d,
        leading: 1.0,
        c3: e(5, 5)? / (36.0 * base),
        c4_sq: e(6, 6)? / (576.0 * base),
        c4: 2.0 * e(2, 6)? / (24.0 * base),
    })
}

/// Gradient rule coefficients; `leading = E[H_3²]`.
pub fn derivative_coefficients(d: usize) -> Result<CorrectionCoefficients> {
    check_dim(d)?;
    let e = |a, b| radial_hermite_expectation(a, b, d);
    Ok(CorrectionCoefficients {
        d,
        leading: e(3, 3)?,
        c3: e(6, 6)? / 36.0,
        c4_sq: e(7, 7)? / 576.0,
        c4: 2.0 * e(3, 7)? / 24.0,
    })
}

/// `c3^{⊗2}' δ₂^{⊗3}`.
pub fn skewness_contraction(cv: &CumulantVectors) -> Result<f64> {
    kron(&cv.c3, &cv.c3).dot(&kron_power(&delta2(cv.d), 3))
}

/// `c4^{⊗2}' δ₂^{⊗4}`.
pub fn kurtosis_square_contraction(cv: &CumulantVectors) -> Result<f64> {
    kron(&cv.c4, &cv.c4).dot(&kron_power(&delta2(cv.d), 4))
}

/// `c4' δ₂^{⊗2}`.
pub fn kurtosis_contraction(cv: &CumulantVectors) -> Result<f64> {
    cv.c4.dot(&kron_power(&delta2(cv.d), 2))
}

/// Additive pieces of a correction factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoughnessTerms {
    pub leading: f64,
    pub k3_term: f64,
    pub k4_sq_term: f64,
    pub k4_cross_term: f64,
}

/// A roughness approximation `value = gaussian_base × c_factor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoughnessReport {
    pub value: f64,
    pub c_factor: f64,
    pub gaussian_base: f64,
    pub terms: RoughnessTerms,
    pub degenerate: bool,
}

fn assemble(coef: &CorrectionCoefficients, s3: f64, s4: f64, s4x: f64, gaussian_base: f64) -> RoughnessReport {
    let terms = RoughnessTerms {
        leading: coef.leading,
        k3_term: coef.c3 * s3,
        k4_sq_term: coef.c4_sq * s4,
        k4_cross_term: coef.c4 * s4x,
    };
    let c = terms.leading + terms.k3_term + terms.k4_sq_term + terms.k4_cross_term;
    RoughnessReport { value: gaussian_base * c, c_factor: c, gaussian_base, terms, degenerate: !(c > DEGENERATE_C) }
}

/// `R(f'')` for a univariate density from its first four cumulants.
pub fn roughness_exrot_1d(c: &Cumulants1D) -> Result<RoughnessReport> {
    let coef = exrot_coefficients(1)?;
    let (g3, g4) = (c.skewness(), c.excess_kurtosis());
    let base = 3.0 / (8.0 * PI.sqrt() * c.sigma.powi(5));
    Ok(assemble(&coef, g3 * g3, g4 * g4, g4, base))
}

/// Normal-reference `R(f'')` of whitened data in `d` dimensions.
pub fn gaussian_roughness_nd(d: usize) -> f64 {
    (d as f64 + 2.0) / (2f64.powi(d as i32 + 2) * PI.powf(d as f64 / 2.0))
}

/// `R(f'')` for whitened data from its cumulant vectors.
pub fn roughness_exrot_nd(cv: &CumulantVectors) -> Result<RoughnessReport> {
    let coef = exrot_coefficients(cv.d)?;
    Ok(assemble(
        &coef,
        skewness_contraction(cv)?,
        kurtosis_square_contraction(cv)?,
        kurtosis_contraction(cv)?,
        gaussian_roughness_nd(cv.d),
    ))
}

/// `R(f''')` for a univariate density.
pub fn roughness_derivative_1d(c: &Cumulants1D) -> Result<RoughnessReport> {
    let coef = derivative_coefficients(1)?;
    let (g3, g4) = (c.skewness(), c.excess_kurtosis());
    let base = 1.0 / (2.0 * PI.sqrt() * c.sigma.powi(7));
    Ok(assemble(&coef, g3 * g3, g4 * g4, g4, base))
}

/// Gradient-rule roughness for whitened data.
pub fn roughness_derivative_nd(cv: &CumulantVectors) -> Result<RoughnessReport> {
    let coef = derivative_coefficients(cv.d)?;
    let base = 1.0 / (2f64.powi(cv.d as i32) * PI.powf(cv.d as f64 / 2.0));
    Ok(assemble(&coef, skewness_contraction(cv)?, kurtosis_square_contraction(cv)?, kurtosis_contraction(cv)?, base))
}

/// Marginal `R(f'')` of whitened axis `i`, computed from its own third and
/// fourth cumulants on the `d`-dimensional normal-reference scale.
pub fn marginal_roughness(cv: &CumulantVectors) -> Result<Vec<f64>> {
    check_dim(cv.d)?;
    let coef = exrot_coefficients(1)?;
    let base = gaussian_roughness_nd(cv.d);
    let d = cv.d;
    Ok((0..d)
        .map(|i| {
            let g3 = cv.c3.as_slice()[i * (d * d + d + 1)];
            let g4 = cv.c4.as_slice()[i * (d * d * d + d * d + d + 1)];
            let c = assemble(&coef, g3 * g3, g4 * g4, g4, base);
            if c.degenerate {
                base
            } else {
                c.value
            }
        })
        .collect())
}

/// One row of the exported constants table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub d: usize,
    pub coefficient_name: String,
    pub value: f64,
    pub oracle_residual: f64,
}

/// Brackets and correction coefficients for `d = 1..=max_d`, each paired
/// with its distance from a radial quadrature of the same expectation.
pub fn constants_table(max_d: usize) -> Result<Vec<ConstantEntry>> {
    check_dim(max_d)?;
    let mut out = Vec::new();
    for d in 1..=max_d {
        let q = |a, b| radial_hermite_quadrature(a, b, d);
        let brackets = [
            ("bracket.h2h2", 2, 2),
            ("bracket.h5h5", 5, 5),
            ("bracket.h6h6", 6, 6),
            ("bracket.h2h6", 2, 6),
            ("bracket.h3h3", 3, 3),
            ("bracket.h7h7", 7, 7),
            ("bracket.h3h7", 3, 7),
        ];
        for (name, a, b) in brackets {
            let v = radial_hermite_expectation(a, b, d)?;
            out.push(ConstantEntry {
                d,
                coefficient_name: name.into(),
                value: v,
                oracle_residual: (v - q(a, b)?).abs(),
            });
        }
        let (b1, b2, b3, b6) = (q(2, 2)?, q(5, 5)?, q(6, 6)?, q(2, 6)?);
        let (e1, e2, e3, e6) = (q(3, 3)?, q(6, 6)?, q(7, 7)?, q(3, 7)?);
        let ex = exrot_coefficients(d)?;
        let de = derivative_coefficients(d)?;
        let rows = [
            ("exrot.c3", ex.c3, b2 / (36.0 * b1)),
            ("exrot.c4_sq", ex.c4_sq, b3 / (576.0 * b1)),
            ("exrot.c4", ex.c4, 2.0 * b6 / (24.0 * b1)),
            ("exrot_deriv.leading", de.leading, e1),
            ("exrot_deriv.c3", de.c3, e2 / 36.0),
            ("exrot_deriv.c4_sq", de.c4_sq, e3 / 576.0),
            ("exrot_deriv.c4", de.c4, 2.0 * e6 / 24.0),
        ];
        for (name, v, oracle) in rows {
            out.push(ConstantEntry { d, coefficient_name: name.into(), value: v, oracle_residual: (v - oracle).abs() });
        }
    }
    Ok(out)
}
