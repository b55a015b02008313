//! Gaussian kernel density and density-derivative estimators.
//!
//! On a uniform grid each sample's contribution is generated by the ratio
//! recurrence `K(u + s) = K(u) · exp(-u s - s²/2)`, walking outwards from the
//! nearest grid node until the kernel drops below `exp(-CUTOFF²/2)`. Arbitrary
//! point sets use a sorted-sample window of the same half-width.

use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::hermite::hermite_1d;
use crate::mixture::SampleSet;
use crate::tensor::DenseMatrix;

/// Kernel support half-width in bandwidths; the neglected mass per sample is
/// below `1e-18`.
pub const CUTOFF: f64 = 9.0;

/// Default number of univariate grid points.
pub const DEFAULT_GRID_POINTS: usize = 4096;

/// Default number of grid points per axis in two dimensions.
pub const DEFAULT_GRID_POINTS_2D: usize = 128;

/// Univariate evaluation points.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Uniform { start: f64, step: f64, len: usize },
    Points(Vec<f64>),
}

impl Grid {
    /// `len` equispaced points from `a` to `b` inclusive.
    pub fn uniform(a: f64, b: f64, len: usize) -> Result<Self> {
        if len < 2 || !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("cannot span [{a}, {b}] with {len} points")));
        }
        Ok(Grid::Uniform { start: a, step: (b - a) / (len - 1) as f64, len })
    }

    /// Strictly increasing, finite points.
    pub fn points(v: Vec<f64>) -> Result<Self> {
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("grid points must be finite and increasing".into()));
        }
        Ok(Grid::Points(v))
    }

    /// The default span `[min - 5h, max + 5h]` with 4096 points.
    pub fn default_for(samples: &[f64], h: f64) -> Result<Self> {
        let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::uniform(lo - 5.0 * h, hi + 5.0 * h, DEFAULT_GRID_POINTS)
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::Uniform { len, .. } => *len,
            Grid::Points(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> f64 {
        match self {
            Grid::Uniform { start, step, .. } => start + i as f64 * step,
            Grid::Points(v) => v[i],
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }
}

/// Estimated density (or derivative) values on a univariate grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub h: f64,
    pub n: usize,
    pub order: usize,
}

impl DensityEstimate {
    /// Trapezoid rule over the grid.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.values)
    }

    /// Two-column `point,value` CSV.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["point", "value"])?;
        for (x, v) in self.grid.iter().zip(&self.values) {
            out.write_record([x.to_string(), v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Trapezoid rule for tabulated `y(x)`.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(a, b)| 0.5 * (a[1] - a[0]) * (b[0] + b[1])).sum()
}

fn check(samples: &[f64], h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("bandwidth {h} must be positive")));
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    Ok(())
}

/// Gaussian KDE `(1/(n h)) Σ φ((x - x_i)/h)` on `grid`.
pub fn kde_1d(samples: &[f64], h: f64, grid: &Grid) -> Result<DensityEstimate> {
    kde_derivative_1d(samples, h, 0, grid)
}

/// `r`-th derivative estimate `(1/n) Σ K_h^{(r)}(x - x_i)` for `r ≤ 2`.
pub fn kde_derivative_1d(samples: &[f64], h: f64, r: usize, grid: &Grid) -> Result<DensityEstimate> {
    check(samples, h)?;
    if r > 2 {
        return Err(Error::Unsupported(format!("derivative order {r}")));
    }
    let mut values = match grid {
        Grid::Uniform { start, step, len } => uniform_sum(samples, h, r, *start, *step, *len),
        Grid::Points(p) => windowed_sum(samples, h, r, p),
    };
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let scale = sign / (samples.len() as f64 * h.powi(r as i32 + 1) * (2.0 * PI).sqrt());
    values.iter_mut().for_each(|v| *v *= scale);
    Ok(DensityEstimate { grid: grid.to_vec(), values, h, n: samples.len(), order: r })
}

fn uniform_sum(samples: &[f64], h: f64, r: usize, start: f64, step: f64, len: usize) -> Vec<f64> {
    let mut acc = vec![0.0; len];
    let s = step / h;
    let q = (-s * s).exp();
    let floor = (-0.5 * CUTOFF * CUTOFF).exp();
    let last = (len - 1) as f64;
    for &x in samples {
        let pos = ((x - start) / step).round().clamp(0.0, last);
        let j0 = pos as usize;
        let u0 = (start + pos * step - x) / h;
        if u0.abs() > CUTOFF + s {
            // sample lies outside the grid by more than the kernel support
            continue;
        }
        let k0 = (-0.5 * u0 * u0).exp();
        acc[j0] += k0 * hermite_1d(r, u0);

        let (mut k, mut ratio) = (k0, (-u0 * s - 0.5 * s * s).exp());
        for (step_no, a) in acc[j0 + 1..].iter_mut().enumerate() {
            k *= ratio;
            ratio *= q;
            let u = u0 + (step_no + 1) as f64 * s;
            if k < floor && u > 0.0 {
                break;
            }
            *a += k * hermite_1d(r, u);
        }
        let (mut k, mut ratio) = (k0, (u0 * s - 0.5 * s * s).exp());
        for (step_no, a) in acc[..j0].iter_mut().rev().enumerate() {
            k *= ratio;
            ratio *= q;
            let u = u0 - (step_no + 1) as f64 * s;
            if k < floor && u < 0.0 {
                break;
            }
            *a += k * hermite_1d(r, u);
        }
    }
    acc
}

fn windowed_sum(samples: &[f64], h: f64, r: usize, points: &[f64]) -> Vec<f64> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let reach = CUTOFF * h;
    points
        .iter()
        .map(|&x| {
            let lo = sorted.partition_point(|&v| v < x - reach);
            let hi = sorted.partition_point(|&v| v <= x + reach);
            sorted[lo..hi]
                .iter()
                .map(|&xi| {
                    let u = (x - xi) / h;
                    (-0.5 * u * u).exp() * hermite_1d(r, u)
                })
                .sum()
        })
        .collect()
}

/// Full `O(n·m)` summation without truncation, used as a reference.
pub fn kde_direct(samples: &[f64], h: f64, r: usize, points: &[f64]) -> Result<Vec<f64>> {
    check(samples, h)?;
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let scale = sign / (samples.len() as f64 * h.powi(r as i32 + 1) * (2.0 * PI).sqrt());
    Ok(points
        .iter()
        .map(|&x| {
            scale
                * samples
                    .iter()
                    .map(|&xi| {
                        let u = (x - xi) / h;
                        (-0.5 * u * u).exp() * hermite_1d(r, u)
                    })
                    .sum::<f64>()
        })
        .collect())
}

/// Estimated density at `d`-dimensional points.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimateNd {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub h: Vec<f64>,
    pub n: usize,
}

fn check_nd(samples: &SampleSet, h: &[f64]) -> Result<()> {
    if h.len() != samples.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} bandwidths for {}-dimensional samples",
            h.len(),
            samples.dim()
        )));
    }
    if h.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(format!("bandwidths {h:?} must be positive")));
    }
    Ok(())
}

/// Product-kernel estimate `(1/n) Σ Π_j φ((x_j - x_ij)/h_j) / h_j`.
pub fn kde_nd(samples: &SampleSet, h: &[f64], points: &[Vec<f64>]) -> Result<DensityEstimateNd> {
    check_nd(samples, h)?;
    let d = samples.dim();
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::DimensionMismatch("evaluation point of wrong dimension".into()));
    }
    let norm = 1.0 / (samples.len() as f64 * h.iter().product::<f64>() * (2.0 * PI).powf(d as f64 / 2.0));
    let values = points
        .iter()
        .map(|p| {
            let mut total = 0.0;
            'rows: for row in samples.rows() {
                let mut q = 0.0;
                for j in 0..d {
                    let u = (p[j] - row[j]) / h[j];
                    if u.abs() > CUTOFF {
                        continue 'rows;
                    }
                    q += u * u;
                }
                total += (-0.5 * q).exp();
            }
            total * norm
        })
        .collect();
    Ok(DensityEstimateNd { points: points.to_vec(), values, h: h.to_vec(), n: samples.len() })
}

/// Cartesian product of per-axis coordinates, last axis fastest.
pub fn tensor_grid(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Per-axis spans `[min - 5h, max + 5h]`, `per_axis` points each.
pub fn default_axes(samples: &SampleSet, h: &[f64], per_axis: usize) -> Result<Vec<Vec<f64>>> {
    check_nd(samples, h)?;
    (0..samples.dim())
        .map(|j| {
            let col = samples.column(j);
            Grid::default_for(&col, h[j]).and_then(|g| match g {
                Grid::Uniform { start, .. } => {
                    let end = g.get(g.len() - 1);
                    Ok(Grid::uniform(start, end, per_axis)?.to_vec())
                }
                Grid::Points(v) => Ok(v),
            })
        })
        .collect()
}

/// Estimate with a full square-root bandwidth matrix `B`, i.e. kernel
/// covariance `B Bᵀ`: `(1/n) Σ φ_d(B⁻¹(x - x_i)) / |det B|`.
pub fn kde_nd_matrix(samples: &SampleSet, b: &DenseMatrix, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let d = samples.dim();
    if b.rows() != d || b.cols() != d {
        return Err(Error::DimensionMismatch("bandwidth matrix must be d x d".into()));
    }
    let lu = b.to_dmatrix().lu();
    let det = lu.determinant().abs();
    if !(det > 0.0) {
        return Err(Error::InvalidArgument("bandwidth matrix is singular".into()));
    }
    let inv = lu.try_inverse().ok_or_else(|| Error::InvalidArgument("singular bandwidth".into()))?;
    let norm = 1.0 / (samples.len() as f64 * det * (2.0 * PI).powf(d as f64 / 2.0));
    let mut diff = vec![0.0; d];
    points
        .iter()
        .map(|p| {
            if p.len() != d {
                return Err(Error::DimensionMismatch("evaluation point of wrong dimension".into()));
            }
            let mut total = 0.0;
            for row in samples.rows() {
                for j in 0..d {
                    diff[j] = p[j] - row[j];
                }
                let mut q = 0.0;
                for i in 0..d {
                    let z: f64 = (0..d).map(|j| inv[(i, j)] * diff[j]).sum();
                    q += z * z;
                }
                if q < 2.0 * CUTOFF * CUTOFF {
                    total += (-0.5 * q).exp();
                }
            }
            Ok(total * norm)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bump() {
        let g = Grid::points(vec![0.0]).unwrap();
        let e = kde_1d(&[0.0], 1.0, &g).unwrap();
        assert!((e.values[0] - 0.398_942_280_401_432_7).abs() < 1e-15);
    }

    #[test]
    fn uniform_matches_direct() {
        let samples: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64 / 25.0 - 2.0).collect();
        let grid = Grid::uniform(-5.0, 5.0, 501).unwrap();
        for r in 0..=2 {
            let fast = kde_derivative_1d(&samples, 0.3, r, &grid).unwrap();
            let slow = kde_direct(&samples, 0.3, r, &grid.to_vec()).unwrap();
            let scale = slow.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            for (a, b) in fast.values.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-12 * scale, "r={r}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn points_match_uniform() {
        let samples = [0.1, -0.4, 0.9, 2.0, -1.3];
        let grid = Grid::uniform(-3.0, 3.0, 61).unwrap();
        let a = kde_1d(&samples, 0.5, &grid).unwrap();
        let b = kde_1d(&samples, 0.5, &Grid::points(grid.to_vec()).unwrap()).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn sample_outside_grid() {
        let grid = Grid::uniform(0.0, 1.0, 11).unwrap();
        let e = kde_1d(&[100.0, 0.5], 0.1, &grid).unwrap();
        assert!(e.values.iter().all(|v| v.is_finite()));
        let f = kde_direct(&[100.0, 0.5], 0.1, 0, &grid.to_vec()).unwrap();
        for (a, b) in e.values.iter().zip(&f) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn normalization() {
        let samples = [0.0, 1.0, 1.5, 3.0];
        let grid = Grid::default_for(&samples, 0.4).unwrap();
        let e = kde_1d(&samples, 0.4, &grid).unwrap();
        assert!((e.integral() - 1.0).abs() < 1e-6);
        assert!(e.values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn first_derivative_is_antisymmetric() {
        let samples = [-1.0, -0.2, 0.2, 1.0];
        let g = Grid::points(vec![0.0]).unwrap();
        let e = kde_derivative_1d(&samples, 0.5, 1, &g).unwrap();
        assert!(e.values[0].abs() < 1e-16);
        assert!(kde_derivative_1d(&samples, 0.5, 3, &g).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Grid::points(vec![0.0]).unwrap();
        assert!(kde_1d(&[0.0], 0.0, &g).is_err());
        assert!(kde_1d(&[], 1.0, &g).is_err());
        assert!(Grid::points(vec![1.0, 0.0]).is_err());
        assert!(Grid::uniform(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn product_kernel_origin() {
        let s = SampleSet::from_rows(&[vec![0.0, 0.0]]).unwrap();
        let e = kde_nd(&s, &[1.0, 1.0], &[vec![0.0, 0.0]]).unwrap();
        assert!((e.values[0] - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(kde_nd(&s, &[1.0, 0.0], &[vec![0.0, 0.0]]).is_err());
        assert!(kde_nd(&s, &[1.0], &[vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn product_of_marginals_for_one_sample() {
        let s = SampleSet::from_rows(&[vec![0.3, -0.7]]).unwrap();
        let h = [0.4, 0.9];
        let p = vec![0.1, 0.2];
        let joint = kde_nd(&s, &h, std::slice::from_ref(&p)).unwrap().values[0];
        let gx = kde_1d(&[0.3], 0.4, &Grid::points(vec![0.1]).unwrap()).unwrap().values[0];
        let gy = kde_1d(&[-0.7], 0.9, &Grid::points(vec![0.2]).unwrap()).unwrap().values[0];
        assert!((joint - gx * gy).abs() < 1e-15);
    }

    #[test]
    fn matrix_bandwidth_reduces_to_diagonal() {
        let s = SampleSet::from_rows(&[vec![0.3, -0.7], vec![1.0, 0.5]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![0.4, 0.0], vec![0.0, 0.9]]).unwrap();
        let pts = vec![vec![0.1, 0.2], vec![0.8, 0.0]];
        let m = kde_nd_matrix(&s, &b, &pts).unwrap();
        let d = kde_nd(&s, &[0.4, 0.9], &pts).unwrap();
        for (a, c) in m.iter().zip(&d.values) {
            assert!((a - c).abs() < 1e-15);
        }
    }

    #[test]
    fn tensor_grid_order() {
        let g = tensor_grid(&[vec![0.0, 1.0], vec![5.0, 6.0, 7.0]]);
        assert_eq!(g.len(), 6);
        assert_eq!(g[1], vec![0.0, 6.0]);
        assert_eq!(g[3], vec![1.0, 5.0]);
    }

    #[test]
    fn csv_output() {
        let e = DensityEstimate { grid: vec![0.0, 0.5], values: vec![0.25, 0.125], h: 1.0, n: 3, order: 0 };
        let mut buf = Vec::new();
        e.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "point,value\n0,0.25\n0.5,0.125\n");
    }
}
