//! The Marron-Wand normal mixtures and seeded sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::hermite::gaussian_derivative_1d;
use crate::quadrature;

/// Generator used for every draw in the crate.
pub type SampleRng = ChaCha8Rng;

/// Identifier of [`SampleRng`] and of the seeding scheme, recorded in reports.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.9/seed_from_u64+stream";

/// Generator for `seed`, positioned on an independent `stream`.
pub fn rng_for(seed: u64, stream: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One normal component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    #[serde(rename = "w")]
    pub weight: f64,
    #[serde(rename = "mu")]
    pub mean: f64,
    #[serde(rename = "sigma")]
    pub scale: f64,
}

/// Finite mixture of univariate normals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalMixture {
    components: Vec<Component>,
}

impl NormalMixture {
    /// Validates weights (sum to one within 1e-12) and scales (positive).
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("mixture needs at least one component".into()));
        }
        for c in &components {
            if !(c.scale > 0.0 && c.scale.is_finite()) {
                return Err(Error::InvalidArgument(format!("scale {} is not positive", c.scale)));
            }
            if !(c.weight >= 0.0 && c.mean.is_finite()) {
                return Err(Error::InvalidArgument(format!("bad component {c:?}")));
            }
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("weights sum to {total}")));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn mean(&self) -> f64 {
        self.components.iter().map(|c| c.weight * c.mean).sum()
    }

    /// Central moment of order `k ≤ 4`.
    pub fn central_moment(&self, k: u32) -> f64 {
        let m = self.mean();
        self.components
            .iter()
            .map(|c| {
                let d = c.mean - m;
                let s2 = c.scale * c.scale;
                let v = match k {
                    0 => 1.0,
                    1 => d,
                    2 => d * d + s2,
                    3 => d.powi(3) + 3.0 * d * s2,
                    4 => d.powi(4) + 6.0 * d * d * s2 + 3.0 * s2 * s2,
                    _ => panic!("central moments are provided up to order 4"),
                };
                c.weight * v
            })
            .sum()
    }

    pub fn sd(&self) -> f64 {
        self.central_moment(2).sqrt()
    }

    /// Third and fourth cumulants.
    pub fn cumulants(&self) -> (f64, f64) {
        let m2 = self.central_moment(2);
        (self.central_moment(3), self.central_moment(4) - 3.0 * m2 * m2)
    }

    /// `[min μ, max μ]` and `max σ` over the components.
    pub fn extent(&self) -> (f64, f64, f64) {
        let lo = self.components.iter().map(|c| c.mean).fold(f64::INFINITY, f64::min);
        let hi = self.components.iter().map(|c| c.mean).fold(f64::NEG_INFINITY, f64::max);
        let s = self.components.iter().map(|c| c.scale).fold(0.0, f64::max);
        (lo, hi, s)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * 0.5 * erfc(-(x - c.mean) / (c.scale * std::f64::consts::SQRT_2)))
            .sum()
    }

    /// Mass outside `[a, b]`.
    pub fn tail_mass(&self, a: f64, b: f64) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let k = c.scale * std::f64::consts::SQRT_2;
                c.weight * 0.5 * (erfc((c.mean - a) / k) + erfc((b - c.mean) / k))
            })
            .sum()
    }
}

/// Catalogue entry as exported to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub id: u32,
    pub name: String,
    pub components: Vec<Component>,
}

const NAMES: [&str; 15] = [
    "Gaussian",
    "Skewed Unimodal",
    "Strongly Skewed",
    "Kurtotic Unimodal",
    "Outlier",
    "Bimodal",
    "Separated Bimodal",
    "Skewed Bimodal",
    "Trimodal",
    "Claw",
    "Double Claw",
    "Asymmetric Claw",
    "Asymmetric Double Claw",
    "Smooth Comb",
    "Discrete Comb",
];

/// Name of density `id`.
pub fn marron_wand_name(id: u32) -> Result<&'static str> {
    match id {
        1..=15 => Ok(NAMES[id as usize - 1]),
        _ => Err(Error::UnknownDensity(id)),
    }
}

fn comp(weight: f64, mean: f64, scale: f64) -> Component {
    Component { weight, mean, scale }
}

/// Marron-Wand density `id` in `1..=15`.
pub fn marron_wand(id: u32) -> Result<NormalMixture> {
    let c = match id {
        1 => vec![comp(1.0, 0.0, 1.0)],
        2 => vec![comp(0.2, 0.0, 1.0), comp(0.2, 0.5, 2.0 / 3.0), comp(0.6, 13.0 / 12.0, 5.0 / 9.0)],
        3 => (0..8)
            .map(|l| {
                let r = (2.0f64 / 3.0).powi(l);
                comp(0.125, 3.0 * (r - 1.0), r)
            })
            .collect(),
        4 => vec![comp(2.0 / 3.0, 0.0, 1.0), comp(1.0 / 3.0, 0.0, 0.1)],
        5 => vec![comp(0.1, 0.0, 1.0), comp(0.9, 0.0, 0.1)],
        6 => vec![comp(0.5, -1.0, 2.0 / 3.0), comp(0.5, 1.0, 2.0 / 3.0)],
        7 => vec![comp(0.5, -1.5, 0.5), comp(0.5, 1.5, 0.5)],
        8 => vec![comp(0.75, 0.0, 1.0), comp(0.25, 1.5, 1.0 / 3.0)],
        9 => vec![comp(0.45, -1.2, 0.6), comp(0.45, 1.2, 0.6), comp(0.1, 0.0, 0.25)],
        10 => std::iter::once(comp(0.5, 0.0, 1.0))
            .chain((0..5).map(|l| comp(0.1, f64::from(l) / 2.0 - 1.0, 0.1)))
            .collect(),
        11 => vec![comp(0.49, -1.0, 2.0 / 3.0), comp(0.49, 1.0, 2.0 / 3.0)]
            .into_iter()
            .chain((0..7).map(|l| comp(1.0 / 350.0, (f64::from(l) - 3.0) / 2.0, 0.01)))
            .collect(),
        12 => std::iter::once(comp(0.5, 0.0, 1.0))
            .chain((-2..=2).map(|l| {
                let p = 2.0f64.powi(-l);
                comp(2.0 * p / 31.0, f64::from(l) + 0.5, p / 10.0)
            }))
            .collect(),
        13 => vec![comp(0.46, -1.0, 2.0 / 3.0), comp(0.46, 1.0, 2.0 / 3.0)]
            .into_iter()
            .chain((1..=3).map(|l| comp(1.0 / 300.0, -f64::from(l) / 2.0, 0.01)))
            .chain((1..=3).map(|l| comp(7.0 / 300.0, f64::from(l) / 2.0, 0.07)))
            .collect(),
        14 => (0..6)
            .map(|l| {
                let half = 0.5f64.powi(l);
                comp(2.0f64.powi(5 - l) / 63.0, (65.0 - 96.0 * half) / 21.0, (32.0 / 63.0) * half)
            })
            .collect(),
        15 => (0..3)
            .map(|l| comp(2.0 / 7.0, (12.0 * f64::from(l) - 15.0) / 7.0, 2.0 / 7.0))
            .chain((8..=10).map(|l| comp(1.0 / 21.0, 2.0 * f64::from(l) / 7.0, 1.0 / 21.0)))
            .collect(),
        _ => return Err(Error::UnknownDensity(id)),
    };
    NormalMixture::new(c)
}

/// All fifteen densities with their names.
pub fn catalogue() -> Vec<CatalogueEntry> {
    (1..=15)
        .map(|id| CatalogueEntry {
            id,
            name: NAMES[id as usize - 1].to_string(),
            components: marron_wand(id).expect("catalogue ids are valid").components,
        })
        .collect()
}

pub fn mixture_pdf(m: &NormalMixture, x: f64) -> f64 {
    mixture_derivative(m, x, 0)
}

/// `order`-th derivative of the mixture density.
pub fn mixture_derivative(m: &NormalMixture, x: f64, order: usize) -> f64 {
    m.components.iter().map(|c| c.weight * gaussian_derivative_1d(order, x, c.mean, c.scale)).sum()
}

/// `R(f^(order))` by adaptive quadrature over `[μmin − 10σmax, μmax + 10σmax]`.
pub fn mixture_true_roughness(m: &NormalMixture, order: usize) -> Result<f64> {
    if !(2..=3).contains(&order) {
        return Err(Error::Unsupported(format!("roughness of derivative order {order}")));
    }
    let (lo, hi, s) = m.extent();
    let mut breaks: Vec<f64> = vec![lo - 10.0 * s, hi + 10.0 * s];
    for c in &m.components {
        breaks.extend([-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0].map(|k| c.mean + k * c.scale));
    }
    breaks.sort_by(f64::total_cmp);
    let r = quadrature::integrate_with_breaks(|x| mixture_derivative(m, x, order).powi(2), &breaks, 1e-10, 1e-10)?;
    Ok(r.value)
}

/// Samples of one or more variables, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    dim: usize,
    data: Vec<f64>,
    seed: Option<u64>,
}

impl SampleSet {
    pub fn univariate(values: Vec<f64>) -> Result<Self> {
        Self::from_row_major(1, values)
    }

    /// `data.len()` must be a positive multiple of `dim`.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch(format!("{} values do not form rows of width {dim}", data.len())));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("sample contains non-finite values".into()));
        }
        Ok(Self { dim, data, seed: None })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_row_major(dim, rows.concat())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Flat row-major storage; for `dim == 1` this is the list of values.
    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    /// Values of variable `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }
}

/// Draws `n` values from `m` using `rng`.
pub fn mixture_sample_with<R: Rng + ?Sized>(m: &NormalMixture, n: usize, rng: &mut R) -> Vec<f64> {
    let mut cumulative = Vec::with_capacity(m.components.len());
    let mut acc = 0.0;
    for c in &m.components {
        acc += c.weight;
        cumulative.push(acc);
    }
    let last = m.components.len() - 1;
    (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * acc;
            let k = cumulative.partition_point(|&w| w <= u).min(last);
            let z: f64 = rng.sample(StandardNormal);
            let c = &m.components[k];
            c.mean + c.scale * z
        })
        .collect()
}

/// Draws `n` values from `m` with a generator seeded by `seed`.
pub fn mixture_sample(m: &NormalMixture, n: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample size must be >= 1".into()));
    }
    let mut rng = rng_for(seed, 0);
    Ok(SampleSet::univariate(mixture_sample_with(m, n, &mut rng))?.with_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn standard_normal_entry() {
        let m = marron_wand(1).unwrap();
        assert_eq!(m.components(), &[comp(1.0, 0.0, 1.0)]);
        assert!((mixture_pdf(&m, 0.0) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn catalogue_is_valid() {
        assert_eq!(catalogue().len(), 15);
        for id in 1..=15 {
            let m = marron_wand(id).unwrap();
            let s: f64 = m.components().iter().map(|c| c.weight).sum();
            assert!((s - 1.0).abs() < 1e-12, "density {id}");
        }
        assert!(matches!(marron_wand(16), Err(Error::UnknownDensity(16))));
        assert!(marron_wand(0).is_err());
    }

    #[test]
    fn component_counts() {
        let counts: Vec<usize> = (1..=15).map(|i| marron_wand(i).unwrap().components().len()).collect();
        assert_eq!(counts, vec![1, 3, 8, 2, 2, 2, 2, 2, 3, 6, 9, 6, 8, 6, 6]);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(NormalMixture::new(vec![comp(0.5, 0.0, 1.0)]).is_err());
        assert!(NormalMixture::new(vec![comp(1.0, 0.0, 0.0)]).is_err());
        assert!(NormalMixture::new(vec![]).is_err());
    }

    #[test]
    fn derivative_values() {
        let m = marron_wand(1).unwrap();
        assert_eq!(mixture_derivative(&m, 0.7, 0), mixture_pdf(&m, 0.7));
        assert!(mixture_derivative(&m, 0.0, 1).abs() < 1e-16);
        assert!((mixture_derivative(&m, 0.0, 2) + 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        let bimodal = marron_wand(6).unwrap();
        assert!(mixture_derivative(&bimodal, 0.0, 1).abs() < 1e-15);
    }

    #[test]
    fn gaussian_roughness() {
        let m = marron_wand(1).unwrap();
        let r = mixture_true_roughness(&m, 2).unwrap();
        assert!((r - 3.0 / (8.0 * PI.sqrt())).abs() < 1e-10);
        let s = 0.5;
        let narrow = NormalMixture::new(vec![comp(1.0, 0.0, s)]).unwrap();
        let rs = mixture_true_roughness(&narrow, 2).unwrap();
        assert!((rs / r - s.powi(-5)).abs() / s.powi(-5) < 1e-9);
        assert!(mixture_true_roughness(&m, 4).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = marron_wand(2).unwrap();
        let a = mixture_sample(&m, 1000, 11).unwrap();
        let b = mixture_sample(&m, 1000, 11).unwrap();
        let c = mixture_sample(&m, 1000, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values(), c.values());
        assert_eq!(a.seed(), Some(11));
    }

    #[test]
    fn streams_differ() {
        let mut a = rng_for(5, 1);
        let mut b = rng_for(5, 2);
        assert_ne!(a.random::<u64>(), b.random::<u64>());
    }

    #[test]
    fn tail_mass_and_cdf() {
        let m = marron_wand(1).unwrap();
        assert!((m.cdf(0.0) - 0.5).abs() < 1e-15);
        let t = m.tail_mass(-1.959_963_984_540_054, 1.959_963_984_540_054);
        assert!((t - 0.05).abs() < 1e-10, "{t}");
    }

    #[test]
    fn sample_set_shapes() {
        let s = SampleSet::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        assert_eq!((s.len(), s.dim()), (3, 2));
        assert_eq!(s.row(1), &[3.0, 4.0]);
        assert_eq!(s.column(1), vec![2.0, 4.0, 6.0]);
        assert!(SampleSet::from_row_major(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(SampleSet::univariate(vec![f64::NAN]).is_err());
        assert!(SampleSet::univariate(vec![]).is_err());
    }
}
