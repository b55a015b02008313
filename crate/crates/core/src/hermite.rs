//! Hermite polynomials, Gaussian derivatives and Gram-Charlier series.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::stats::{CumulantVectors, Cumulants1D};
use crate::tensor::{commutation_apply, kron, kron_power, DenseMatrix, IndexPermutation};

/// Highest order accepted by [`hermite_vector`].
pub const MAX_VECTOR_ORDER: usize = 8;

/// Probabilists' Hermite polynomial `H_n(z)`.
pub fn hermite_1d(n: usize, z: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, z);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = z * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Monomial coefficients of `H_n`, lowest degree first.
pub fn hermite_coefficients(n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Normal density with mean `mu` and standard deviation `sigma`.
pub fn gaussian_pdf_1d(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

/// `d^n/dx^n G(x; mu, sigma) = (-1)^n sigma^-n H_n(z) G`, `z = (x - mu)/sigma`.
pub fn gaussian_derivative_1d(n: usize, x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * hermite_1d(n, z) * gaussian_pdf_1d(x, mu, sigma) / sigma.powi(n as i32)
}

/// Kronecker-stacked Hermite polynomial of order `n` in `d` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteVector {
    pub order: usize,
    pub d: usize,
    pub values: DenseMatrix,
}

fn check_covariance(x: &[f64], cov: &DenseMatrix) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    let d = x.len();
    if d == 0 || cov.rows() != d || cov.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "point of dimension {d} with a {}x{} covariance",
            cov.rows(),
            cov.cols()
        )));
    }
    let scale = cov.max_abs().max(f64::MIN_POSITIVE);
    for i in 0..d {
        for j in 0..i {
            if (cov.get(i, j) - cov.get(j, i)).abs() > 1e-12 * scale {
                return Err(Error::NotPositiveDefinite);
            }
        }
    }
    cov.to_dmatrix().cholesky().ok_or(Error::NotPositiveDefinite)
}

fn is_identity(cov: &DenseMatrix) -> bool {
    cov == &DenseMatrix::identity(cov.rows())
}

/// `H_n(x)` for covariance `cov`, defined by `H_n G = (-1)^n (C D)^{⊗n} G`.
pub fn hermite_vector(n: usize, x: &[f64], cov: &DenseMatrix) -> Result<HermiteVector> {
    if n > MAX_VECTOR_ORDER {
        return Err(Error::Unsupported(format!("Hermite vector of order {n}")));
    }
    check_covariance(x, cov)?;
    let values = if is_identity(cov) { hermite_identity(n, x) } else { hermite_general(n, x, cov)? };
    Ok(HermiteVector { order: n, d: x.len(), values: DenseMatrix::column(values) })
}

/// Index form of the recursion for `C = I`:
/// `H[i1..in] = H[i1..i(n-1)] x[in] - Σ_j [ij = in] H[i1..in without j, n]`.
fn hermite_identity(n: usize, x: &[f64]) -> Vec<f64> {
    let d = x.len();
    let mut prev: Vec<f64> = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur: Vec<f64> = x.to_vec();
    for m in 2..=n {
        let len = d.pow(m as u32);
        let mut next = vec![0.0; len];
        let mut idx = vec![0usize; m];
        for (offset, slot) in next.iter_mut().enumerate() {
            let last = idx[m - 1];
            let head = offset / d;
            let mut v = cur[head] * x[last];
            for j in 0..m - 1 {
                if idx[j] == last {
                    let rest = idx[..m - 1]
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .fold(0usize, |acc, (_, &i)| acc * d + i);
                    v -= prev[rest];
                }
            }
            *slot = v;
            for k in (0..m).rev() {
                idx[k] += 1;
                if idx[k] < d {
                    break;
                }
                idx[k] = 0;
            }
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Kronecker form: `H_n = H_{n-1} ⊗ x - Σ_j K_j (vec C ⊗ H_{n-2})`, where
/// `K_j` moves the first factor of `vec C` to slot `j` and the second to
/// the last slot.
fn hermite_general(n: usize, x: &[f64], cov: &DenseMatrix) -> Result<Vec<f64>> {
    let d = x.len();
    let xv = DenseMatrix::column(x.to_vec());
    let vc = DenseMatrix::column(cov.as_slice().to_vec());
    let mut prev = DenseMatrix::scalar(1.0);
    if n == 0 {
        return Ok(prev.into_vec());
    }
    let mut cur = xv.clone();
    for m in 2..=n {
        let mut next = kron(&cur, &xv);
        let stacked = kron(&vc, &prev);
        for j in 0..m - 1 {
            let mut mapping = Vec::with_capacity(m);
            mapping.push(j);
            mapping.push(m - 1);
            mapping.extend((0..m - 1).filter(|&p| p != j));
            let p = IndexPermutation::new(vec![d; m], mapping)?;
            next = next.sub(&commutation_apply(&p, &stacked)?)?;
        }
        prev = cur;
        cur = next;
    }
    Ok(cur.into_vec())
}

/// Zero-mean normal density `|C|^{-1/2} (2π)^{-d/2} exp(-x'C⁻¹x / 2)`.
pub fn gaussian_pdf_nd(x: &[f64], cov: &DenseMatrix) -> Result<f64> {
    let chol = check_covariance(x, cov)?;
    let d = x.len();
    let z = chol.solve(&nalgebra::DVector::from_column_slice(x));
    let quad: f64 = x.iter().zip(z.iter()).map(|(a, b)| a * b).sum();
    let log_det: f64 = chol.l().diagonal().iter().map(|v| 2.0 * v.ln()).sum();
    Ok((-0.5 * quad - 0.5 * log_det - 0.5 * d as f64 * (2.0 * PI).ln()).exp())
}

/// Coefficients `α(0..6)` of the generalized Gram-Charlier series.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCoefficients {
    pub d: usize,
    pub alpha: Vec<DenseMatrix>,
}

/// Builds `α(k)` from the cumulant differences `δ(1..6)`.
pub fn alpha_coefficients(deltas: &[DenseMatrix]) -> Result<AlphaCoefficients> {
    if deltas.len() != 6 {
        return Err(Error::DimensionMismatch(format!("expected 6 deltas, got {}", deltas.len())));
    }
    let d = deltas[0].len();
    for (k, delta) in deltas.iter().enumerate() {
        if Some(delta.len()) != d.checked_pow(k as u32 + 1) || d == 0 {
            return Err(Error::DimensionMismatch(format!(
                "δ({}) has length {}, expected {d}^{}",
                k + 1,
                delta.len(),
                k + 1
            )));
        }
    }
    let t = |k: usize| &deltas[k - 1];
    let p1 = |n: usize| kron_power(t(1), n);
    let terms = |list: &[(f64, DenseMatrix)]| -> DenseMatrix {
        let mut acc = list[0].1.scale(list[0].0);
        for (c, v) in &list[1..] {
            acc = acc.add(&v.scale(*c)).expect("terms share one length");
        }
        acc
    };

    let a0 = DenseMatrix::scalar(1.0);
    let a1 = t(1).clone();
    let a2 = terms(&[(1.0, t(2).clone()), (1.0, p1(2))]);
    let a3 = terms(&[(1.0, t(3).clone()), (3.0, kron(t(2), t(1))), (1.0, p1(3))]);
    let a4 = terms(&[
        (1.0, t(4).clone()),
        (4.0, kron(t(3), t(1))),
        (3.0, kron_power(t(2), 2)),
        (6.0, kron(t(2), &p1(2))),
        (1.0, p1(4)),
    ]);
    let a5 = terms(&[
        (1.0, t(5).clone()),
        (5.0, kron(t(4), t(1))),
        (10.0, kron(t(3), t(2))),
        (10.0, kron(t(3), &p1(2))),
        (15.0, kron(&kron_power(t(2), 2), t(1))),
        (10.0, kron(t(2), &p1(3))),
        (1.0, p1(5)),
    ]);
    let a6 = terms(&[
        (1.0, t(6).clone()),
        (6.0, kron(t(5), t(1))),
        (15.0, kron(t(4), t(2))),
        (15.0, kron(t(4), &p1(2))),
        (10.0, kron_power(t(3), 2)),
        (60.0, kron(&kron(t(3), t(2)), t(1))),
        (20.0, kron(t(3), &p1(3))),
        (15.0, kron_power(t(2), 3)),
        (45.0, kron(&kron_power(t(2), 2), &p1(2))),
        (15.0, kron(t(2), &p1(4))),
        (1.0, p1(6)),
    ]);
    Ok(AlphaCoefficients { d, alpha: vec![a0, a1, a2, a3, a4, a5, a6] })
}

/// Gram-Charlier A series about a Gaussian with matched mean and covariance.
///
/// The density is evaluated in standardized coordinates `z = (x - center)/scale`
/// and divided by `scale^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct GcaSeries {
    d: usize,
    center: Vec<f64>,
    scale: f64,
    alpha: AlphaCoefficients,
}

impl GcaSeries {
    /// Standardized cumulants `c3..c6`; missing orders are taken as zero.
    pub fn new(
        center: Vec<f64>,
        scale: f64,
        c3: DenseMatrix,
        c4: DenseMatrix,
        c5: Option<DenseMatrix>,
        c6: Option<DenseMatrix>,
    ) -> Result<Self> {
        let d = center.len();
        if !(scale > 0.0) {
            return Err(Error::InvalidArgument(format!("scale {scale} is not positive")));
        }
        let zeros = |k: u32| DenseMatrix::column(vec![0.0; d.pow(k)]);
        let deltas = [zeros(1), zeros(2), c3, c4, c5.unwrap_or_else(|| zeros(5)), c6.unwrap_or_else(|| zeros(6))];
        let alpha = alpha_coefficients(&deltas)?;
        if alpha.d != d {
            return Err(Error::DimensionMismatch("cumulants and center disagree on d".into()));
        }
        Ok(Self { d, center, scale, alpha })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> &AlphaCoefficients {
        &self.alpha
    }
}

impl From<&Cumulants1D> for GcaSeries {
    fn from(c: &Cumulants1D) -> Self {
        let s = c.sigma;
        GcaSeries::new(
            vec![c.mean],
            s,
            DenseMatrix::scalar(c.k3 / s.powi(3)),
            DenseMatrix::scalar(c.k4 / s.powi(4)),
            None,
            None,
        )
        .expect("scalar cumulants are well formed")
    }
}

impl From<&CumulantVectors> for GcaSeries {
    fn from(cv: &CumulantVectors) -> Self {
        GcaSeries::new(vec![0.0; cv.d], 1.0, cv.c3.clone(), cv.c4.clone(), None, None)
            .expect("cumulant vectors are well formed")
    }
}

/// Truncated series `G(z) Σ_{k≤max_order} α(k)'H_k(z)/k!`.
pub fn gca_density(x: &[f64], series: &GcaSeries, max_order: usize) -> Result<f64> {
    if max_order > 6 {
        return Err(Error::Unsupported(format!("series order {max_order}")));
    }
    if x.len() != series.d {
        return Err(Error::DimensionMismatch(format!(
            "point of dimension {} for a {}-variate series",
            x.len(),
            series.d
        )));
    }
    let z: Vec<f64> = x.iter().zip(&series.center).map(|(v, c)| (v - c) / series.scale).collect();
    let mut sum = 1.0;
    let mut factorial = 1.0;
    for k in 1..=max_order {
        factorial *= k as f64;
        let a = &series.alpha.alpha[k];
        if a.max_abs() == 0.0 {
            continue;
        }
        let h = DenseMatrix::column(hermite_identity(k, &z));
        sum += a.dot(&h)? / factorial;
    }
    let g = gaussian_pdf_nd(&z, &DenseMatrix::identity(series.d))?;
    Ok(g * sum / series.scale.powi(series.d as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_values() {
        assert_eq!(hermite_1d(2, 0.0), -1.0);
        assert_eq!(hermite_1d(3, 0.0), 0.0);
        assert_eq!(hermite_1d(5, 1.0), 6.0);
        assert_eq!(hermite_1d(0, 3.0), 1.0);
        assert_eq!(hermite_1d(1, 3.0), 3.0);
    }

    #[test]
    fn coefficients_match_recurrence() {
        assert_eq!(hermite_coefficients(3), vec![0.0, -3.0, 0.0, 1.0]);
        assert_eq!(hermite_coefficients(4), vec![3.0, 0.0, -6.0, 0.0, 1.0]);
        for n in 0..=8 {
            let c = hermite_coefficients(n);
            for &z in &[-1.7f64, 0.3, 2.2] {
                let v: f64 = c.iter().enumerate().map(|(i, a)| a * z.powi(i as i32)).sum();
                assert!((v - hermite_1d(n, z)).abs() < 1e-10 * (1.0 + v.abs()));
            }
        }
    }

    #[test]
    fn gaussian_derivative_values() {
        let g0 = 1.0 / (2.0 * PI).sqrt();
        assert_eq!(gaussian_derivative_1d(0, 0.4, 0.1, 2.0), gaussian_pdf_1d(0.4, 0.1, 2.0));
        assert_eq!(gaussian_derivative_1d(1, 0.0, 0.0, 1.0), 0.0);
        assert!((gaussian_derivative_1d(2, 0.0, 0.0, 1.0) + g0).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (mu, s) = (0.3, 0.7);
        let e = 1e-4;
        for n in 1..=3 {
            for &x in &[-0.8, 0.2, 1.1] {
                let fd = (gaussian_derivative_1d(n - 1, x + e, mu, s) - gaussian_derivative_1d(n - 1, x - e, mu, s))
                    / (2.0 * e);
                let exact = gaussian_derivative_1d(n, x, mu, s);
                assert!((fd - exact).abs() < 1e-6 * (1.0 + exact.abs()));
            }
        }
    }

    #[test]
    fn vector_first_orders() {
        let i2 = DenseMatrix::identity(2);
        let h1 = hermite_vector(1, &[0.3, -1.2], &i2).unwrap();
        assert_eq!(h1.values.as_slice(), &[0.3, -1.2]);
        let h2 = hermite_vector(2, &[0.0, 0.0], &i2).unwrap();
        assert_eq!(h2.values.as_slice(), &[-1.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn vector_collapses_to_scalar() {
        let one = DenseMatrix::identity(1);
        for n in 0..=8 {
            for &z in &[-2.1, -0.4, 0.0, 0.9, 1.7] {
                let v = hermite_vector(n, &[z], &one).unwrap().values.as_slice()[0];
                assert!((v - hermite_1d(n, z)).abs() <= 1e-12 * (1.0 + v.abs()));
            }
        }
    }

    #[test]
    fn identity_path_matches_general_path() {
        let x = [0.4, -1.1, 0.7];
        for n in 0..=6 {
            let fast = hermite_identity(n, &x);
            let slow = hermite_general(n, &x, &DenseMatrix::identity(3)).unwrap();
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn general_covariance_second_order() {
        let c = DenseMatrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let x = [0.3, -0.6];
        let h2 = hermite_vector(2, &x, &c).unwrap();
        let expect = [0.09 - 2.0, -0.18 - 0.5, -0.18 - 0.5, 0.36 - 1.0];
        for (a, b) in h2.values.as_slice().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_covariance() {
        let bad = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(hermite_vector(2, &[0.0, 0.0], &bad), Err(Error::NotPositiveDefinite)));
        let asym = DenseMatrix::from_rows(&[vec![1.0, 0.1], vec![0.0, 1.0]]).unwrap();
        assert!(gaussian_pdf_nd(&[0.0, 0.0], &asym).is_err());
        assert!(hermite_vector(9, &[0.0], &DenseMatrix::identity(1)).is_err());
    }

    #[test]
    fn normal_pdf_values() {
        let g1 = gaussian_pdf_nd(&[0.0], &DenseMatrix::identity(1)).unwrap();
        assert!((g1 - 0.398_942_280_401_432_7).abs() < 1e-15);
        let g2 = gaussian_pdf_nd(&[0.0, 0.0], &DenseMatrix::identity(2)).unwrap();
        assert!((g2 - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let c = DenseMatrix::from_rows(&[vec![4.0]]).unwrap();
        let g = gaussian_pdf_nd(&[1.0], &c).unwrap();
        assert!((g - gaussian_pdf_1d(1.0, 0.0, 2.0)).abs() < 1e-15);
    }

    fn zero_deltas(d: usize) -> Vec<DenseMatrix> {
        (1..=6).map(|k| DenseMatrix::column(vec![0.0; d.pow(k)])).collect()
    }

    #[test]
    fn alpha_of_zero_deltas() {
        let a = alpha_coefficients(&zero_deltas(2)).unwrap();
        assert_eq!(a.alpha[0].as_slice(), &[1.0]);
        for k in 1..=6 {
            assert_eq!(a.alpha[k].len(), 2usize.pow(k as u32));
            assert_eq!(a.alpha[k].max_abs(), 0.0);
        }
    }

    #[test]
    fn alpha_with_unit_mean_shift() {
        let mut deltas = zero_deltas(1);
        deltas[0] = DenseMatrix::scalar(1.0);
        let a = alpha_coefficients(&deltas).unwrap();
        for k in 0..=6 {
            assert_eq!(a.alpha[k].as_slice(), &[1.0]);
        }
    }

    #[test]
    fn alpha_of_unit_deltas_are_bell_numbers() {
        let deltas: Vec<DenseMatrix> = (0..6).map(|_| DenseMatrix::scalar(1.0)).collect();
        let a = alpha_coefficients(&deltas).unwrap();
        let bell = [1.0, 1.0, 2.0, 5.0, 15.0, 52.0, 203.0];
        assert_eq!(a.alpha.len(), bell.len());
        for (alpha, b) in a.alpha.iter().zip(bell) {
            assert_eq!(alpha.as_slice(), &[b]);
        }
    }

    #[test]
    fn alpha_matched_gaussian_reference() {
        let mut deltas = zero_deltas(2);
        deltas[2] = DenseMatrix::column((0..8).map(|i| i as f64 * 0.1).collect());
        deltas[3] = DenseMatrix::column((0..16).map(|i| 1.0 - i as f64 * 0.05).collect());
        deltas[5] = DenseMatrix::column((0..64).map(|i| (i % 5) as f64).collect());
        let a = alpha_coefficients(&deltas).unwrap();
        assert_eq!(a.alpha[3], deltas[2]);
        assert_eq!(a.alpha[4], deltas[3]);
        let expect = deltas[5].add(&kron_power(&deltas[2], 2).scale(10.0)).unwrap();
        assert_eq!(a.alpha[6], expect);
    }

    #[test]
    fn alpha_length_check() {
        let mut deltas = zero_deltas(2);
        deltas[3] = DenseMatrix::column(vec![0.0; 5]);
        assert!(alpha_coefficients(&deltas).is_err());
        assert!(alpha_coefficients(&deltas[..4]).is_err());
    }

    #[test]
    fn gca_with_zero_cumulants_is_gaussian() {
        let c = Cumulants1D { n: 10, mean: 0.5, sigma: 2.0, k3: 0.0, k4: 0.0 };
        let s = GcaSeries::from(&c);
        for &x in &[-1.0, 0.5, 3.0] {
            let v = gca_density(&[x], &s, 4).unwrap();
            assert!((v - gaussian_pdf_1d(x, 0.5, 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn gca_odd_term_vanishes_at_center() {
        let c = Cumulants1D { n: 10, mean: 0.0, sigma: 1.0, k3: 0.5, k4: 0.0 };
        let v = gca_density(&[0.0], &GcaSeries::from(&c), 4).unwrap();
        assert!((v - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert!(gca_density(&[0.0], &GcaSeries::from(&c), 7).is_err());
    }
}
