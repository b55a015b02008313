//! Sample moments, cumulants and whitening.
//!
//! All estimators are plug-in: central moments use divisor `n`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::mixture::SampleSet;
use crate::tensor::{commutation_apply, kron, symmetrize, DenseMatrix, IndexPermutation};

/// Tolerance on mean and covariance accepted as "whitened".
pub const WHITENED_TOLERANCE: f64 = 1e-2;

/// Location, scale and third/fourth cumulants of one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cumulants1D {
    pub n: usize,
    pub mean: f64,
    pub sigma: f64,
    pub k3: f64,
    pub k4: f64,
}

impl Cumulants1D {
    /// Skewness `k3 / σ³`.
    pub fn skewness(&self) -> f64 {
        self.k3 / self.sigma.powi(3)
    }

    /// Excess kurtosis `k4 / σ⁴`.
    pub fn excess_kurtosis(&self) -> f64 {
        self.k4 / self.sigma.powi(4)
    }
}

/// Plug-in cumulants of a univariate sample.
pub fn cumulants_1d(data: &[f64]) -> Result<Cumulants1D> {
    let n = data.len();
    if n < 4 {
        return Err(Error::DegenerateSample(format!("{n} values, at least 4 needed")));
    }
    let nf = n as f64;
    let mean = data.iter().sum::<f64>() / nf;
    let (mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0);
    for &x in data {
        let d = x - mean;
        let d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    let (m2, m3, m4) = (s2 / nf, s3 / nf, s4 / nf);
    let sigma = m2.sqrt();
    let spread = data.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if !(sigma > 1e-14 * spread) || !sigma.is_finite() {
        return Err(Error::DegenerateSample("zero variance".into()));
    }
    Ok(Cumulants1D { n, mean, sigma, k3: m3, k4: m4 - 3.0 * m2 * m2 })
}

fn column_means(data: &SampleSet) -> Vec<f64> {
    let d = data.dim();
    let mut mean = vec![0.0; d];
    for row in data.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    let n = data.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    mean
}

/// Sample average of `x^{⊗k}`, optionally after centering.
pub fn moment_vector(data: &SampleSet, k: usize, centered: bool) -> Result<DenseMatrix> {
    if k > 4 {
        return Err(Error::Unsupported(format!("moment vectors of order {k}")));
    }
    if data.len() < k.max(1) {
        return Err(Error::DegenerateSample(format!("{} rows for order {k}", data.len())));
    }
    let d = data.dim();
    let center = if centered { column_means(data) } else { vec![0.0; d] };
    let len = d.pow(k as u32);
    let mut acc = vec![0.0; len];
    let mut power = vec![0.0; len];
    let mut scratch = vec![0.0; len];
    let mut x = vec![0.0; d];
    for row in data.rows() {
        for ((xi, r), c) in x.iter_mut().zip(row).zip(&center) {
            *xi = r - c;
        }
        power[0] = 1.0;
        let mut cur = 1;
        for _ in 0..k {
            for i in 0..cur {
                for j in 0..d {
                    scratch[i * d + j] = power[i] * x[j];
                }
            }
            cur *= d;
            power[..cur].copy_from_slice(&scratch[..cur]);
        }
        for (a, p) in acc.iter_mut().zip(&power) {
            *a += p;
        }
    }
    let n = data.len() as f64;
    Ok(DenseMatrix::column(acc.into_iter().map(|a| a / n).collect()))
}

/// Second moment and third/fourth cumulant vectors of whitened data.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantVectors {
    pub d: usize,
    pub m2: DenseMatrix,
    pub c3: DenseMatrix,
    pub c4: DenseMatrix,
}

impl CumulantVectors {
    /// Whitens `data` and estimates its cumulant vectors.
    pub fn from_sample(data: &SampleSet) -> Result<(Self, WhitenTransform)> {
        let (white, transform) = whiten(data)?;
        Ok((cumulant_vectors(&white)?, transform))
    }

    /// Cumulant vectors of a single standardized variable.
    pub fn from_scalar(k3: f64, k4: f64) -> Self {
        Self { d: 1, m2: DenseMatrix::scalar(1.0), c3: DenseMatrix::scalar(k3), c4: DenseMatrix::scalar(k4) }
    }
}

/// The three pairings `(12)(34)`, `(13)(24)`, `(14)(23)` of `m2 ⊗ m2`.
fn pairings(m2: &DenseMatrix, d: usize) -> Result<DenseMatrix> {
    let base = kron(m2, m2);
    let mut total = base.clone();
    for mapping in [vec![0, 2, 1, 3], vec![0, 3, 1, 2]] {
        let p = IndexPermutation::new(vec![d; 4], mapping)?;
        total = total.add(&commutation_apply(&p, &base)?)?;
    }
    Ok(total)
}

/// `c3 = m3` and `c4 = m4 - pairings(m2)`, both symmetrized.
pub fn cumulant_vectors(data: &SampleSet) -> Result<CumulantVectors> {
    let d = data.dim();
    let mean = column_means(data);
    let m2 = moment_vector(data, 2, true)?;
    let dev_mean = mean.iter().fold(0.0f64, |a, m| a.max(m.abs()));
    let dev_cov = m2.sub(&crate::tensor::delta2(d))?.max_abs();
    if dev_mean > WHITENED_TOLERANCE || dev_cov > WHITENED_TOLERANCE {
        return Err(Error::NotWhitened(format!("mean deviates by {dev_mean:.3e}, covariance by {dev_cov:.3e}")));
    }
    let m3 = moment_vector(data, 3, true)?;
    let m4 = moment_vector(data, 4, true)?;
    let c3 = symmetrize(&m3, d, 3)?;
    let c4 = symmetrize(&m4.sub(&pairings(&m2, d)?)?, d, 4)?;
    Ok(CumulantVectors { d, m2, c3, c4 })
}

/// Affine map `z = W (x - center)` with `W = Cov^{-1/2}` (symmetric root).
#[derive(Debug, Clone, PartialEq)]
pub struct WhitenTransform {
    pub center: Vec<f64>,
    pub forward: DenseMatrix,
    pub inverse: DenseMatrix,
}

impl WhitenTransform {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.forward.get(i, j) * (x[j] - self.center[j])).sum()).collect()
    }

    pub fn invert(&self, z: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| self.center[i] + (0..d).map(|j| self.inverse.get(i, j) * z[j]).sum::<f64>()).collect()
    }

    /// `|det W|`; a density in whitened space times this is the density of `x`.
    pub fn jacobian(&self) -> f64 {
        self.forward.to_dmatrix().determinant().abs()
    }

    /// Square-root bandwidth matrix `h W⁻¹` for data in original units.
    pub fn bandwidth_matrix(&self, h: f64) -> DenseMatrix {
        self.inverse.scale(h)
    }
}

/// Zero-mean, identity-covariance version of `data`.
pub fn whiten(data: &SampleSet) -> Result<(SampleSet, WhitenTransform)> {
    let d = data.dim();
    if data.len() < 2 {
        return Err(Error::DegenerateSample("whitening needs at least two rows".into()));
    }
    let center = column_means(data);
    let m2 = moment_vector(data, 2, true)?;
    let cov = DMatrix::from_column_slice(d, d, m2.as_slice());
    let eig = SymmetricEigen::new(cov);
    let max = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if eig.eigenvalues.iter().any(|&v| !(v > 1e-12 * max)) || max == 0.0 {
        return Err(Error::DegenerateSample("covariance is singular".into()));
    }
    let v = &eig.eigenvectors;
    let root = |p: f64| {
        let diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.powf(p)));
        DenseMatrix::from_dmatrix(&(v * diag * v.transpose()))
    };
    let transform = WhitenTransform { center, forward: root(-0.5), inverse: root(0.5) };
    let mut out = Vec::with_capacity(data.values().len());
    for row in data.rows() {
        out.extend(transform.apply(row));
    }
    let mut white = SampleSet::from_row_major(d, out)?;
    if let Some(seed) = data.seed() {
        white = white.with_seed(seed);
    }
    Ok((white, transform))
}
