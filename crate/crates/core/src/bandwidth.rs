//! Bandwidth selectors for the Gaussian kernel.
//!
//! The corrected rules scale the normal-reference bandwidth by
//! `C^{-1/(d+4)}` (density) or `(C/C₀)^{-1/(d+6)}` (gradient), so zero third
//! and fourth cumulants reproduce the reference rule exactly.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roughness::{
    derivative_coefficients, roughness_derivative_1d, roughness_derivative_nd, roughness_exrot_1d, roughness_exrot_nd,
    RoughnessReport, DEGENERATE_C,
};
use crate::stats::{cumulants_1d, CumulantVectors, Cumulants1D};

/// Kernel constants entering the AMISE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub name: &'static str,
    pub mu2: f64,
}

impl KernelSpec {
    pub fn gaussian() -> Self {
        Self { name: "gaussian", mu2: 1.0 }
    }

    /// `R(K) = 2^{-d} π^{-d/2}`.
    pub fn roughness(&self, d: usize) -> f64 {
        1.0 / (2f64.powi(d as i32) * PI.powf(d as f64 / 2.0))
    }

    /// `tr R(∇K) = (d/2) R(K)`; `1/(4√π)` for `d = 1`.
    pub fn deriv_roughness(&self, d: usize) -> f64 {
        0.5 * d as f64 * self.roughness(d)
    }
}

/// Which selector produced a bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Rot,
    Exrot,
    ExrotDeriv,
}

impl Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::Rot => "rot",
            Rule::Exrot => "exrot",
            Rule::ExrotDeriv => "exrot_deriv",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rot" => Ok(Rule::Rot),
            "exrot" => Ok(Rule::Exrot),
            "exrot_deriv" | "exrot-deriv" => Ok(Rule::ExrotDeriv),
            other => Err(Error::InvalidArgument(format!("unknown rule {other:?}"))),
        }
    }
}

/// A scalar bandwidth or one per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bandwidth {
    Scalar(f64),
    PerAxis(Vec<f64>),
}

/// Outcome of a bandwidth rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthResult {
    pub rule: Rule,
    pub h: Bandwidth,
    pub c_factor: f64,
    pub fallback_used: bool,
    pub d: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roughness: Option<RoughnessReport>,
}

impl BandwidthResult {
    /// The scalar bandwidth, or `det(H)^{1/d}` for a per-axis result.
    pub fn h(&self) -> f64 {
        match &self.h {
            Bandwidth::Scalar(h) => *h,
            Bandwidth::PerAxis(v) => (v.iter().map(|h| h.ln()).sum::<f64>() / v.len() as f64).exp(),
        }
    }

    /// Per-axis bandwidths, replicating a scalar `d` times.
    pub fn axes(&self) -> Vec<f64> {
        match &self.h {
            Bandwidth::Scalar(h) => vec![*h; self.d],
            Bandwidth::PerAxis(v) => v.clone(),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sample size {n} below 2")));
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma = {sigma} must be positive")));
    }
    Ok(())
}

/// `(R(K) / (μ₂² R n))^{1/(d+4)}`.
pub fn h_amise(kernel: &KernelSpec, roughness: f64, n: usize, d: usize) -> Result<f64> {
    check_n(n)?;
    if !(roughness > 0.0 && roughness.is_finite()) {
        return Err(Error::InvalidArgument(format!("roughness {roughness} must be positive")));
    }
    let r = kernel.roughness(d) / (kernel.mu2 * kernel.mu2 * roughness * n as f64);
    Ok(r.powf(1.0 / (d as f64 + 4.0)))
}

/// Univariate AMISE `R(K)/(n h) + μ₂² h⁴ R(f'')/4`, minimised by [`h_amise`].
pub fn amise_1d(kernel: &KernelSpec, roughness: f64, n: usize, h: f64) -> f64 {
    kernel.roughness(1) / (n as f64 * h) + 0.25 * kernel.mu2 * kernel.mu2 * h.powi(4) * roughness
}

/// `(4/3)^{1/5}`, the univariate normal-reference constant.
pub fn rot_constant() -> f64 {
    (4.0f64 / 3.0).powf(0.2)
}

fn scalar(rule: Rule, h: f64, c_factor: f64, fallback_used: bool, d: usize, n: usize) -> BandwidthResult {
    BandwidthResult { rule, h: Bandwidth::Scalar(h), c_factor, fallback_used, d, n, roughness: None }
}

/// `(4/3)^{1/5} σ n^{-1/5}`.
pub fn h_rot_1d(sigma: f64, n: usize) -> Result<BandwidthResult> {
    check_n(n)?;
    check_sigma(sigma)?;
    Ok(scalar(Rule::Rot, rot_constant() * sigma * (n as f64).powf(-0.2), 1.0, false, 1, n))
}

fn corrected(report: &RoughnessReport) -> (f64, bool) {
    if report.c_factor > DEGENERATE_C {
        (report.c_factor, false)
    } else {
        (1.0, true)
    }
}

/// `h_rot · C^{-1/5}` with `C` from the univariate roughness correction.
pub fn h_exrot_1d(c: &Cumulants1D) -> Result<BandwidthResult> {
    let base = h_rot_1d(c.sigma, c.n)?;
    let report = roughness_exrot_1d(c)?;
    let (cf, fallback) = corrected(&report);
    let mut out = scalar(Rule::Exrot, base.h() * cf.powf(-0.2), cf, fallback, 1, c.n);
    out.roughness = Some(report);
    Ok(out)
}

/// `(4 / ((2 + d) n))^{1/(4+d)} σ`.
pub fn h_rot_nd(sigma: f64, n: usize, d: usize) -> Result<BandwidthResult> {
    check_n(n)?;
    check_sigma(sigma)?;
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let df = d as f64;
    let h = (4.0 / ((2.0 + df) * n as f64)).powf(1.0 / (4.0 + df)) * sigma;
    Ok(scalar(Rule::Rot, h, 1.0, false, d, n))
}

/// Scalar bandwidth for `H = h I` in whitened coordinates.
pub fn h_exrot_nd(cv: &CumulantVectors, n: usize) -> Result<BandwidthResult> {
    let base = h_rot_nd(1.0, n, cv.d)?;
    let report = roughness_exrot_nd(cv)?;
    let (cf, fallback) = corrected(&report);
    let h = base.h() * cf.powf(-1.0 / (cv.d as f64 + 4.0));
    let mut out = scalar(Rule::Exrot, h, cf, fallback, cv.d, n);
    out.roughness = Some(report);
    Ok(out)
}

/// Diagonal bandwidth `h_i = (R(K) / (μ₂² R_i n))^{1/(d+4)}`.
pub fn h_exrot_per_axis(cv: &CumulantVectors, per_axis_roughness: &[f64], n: usize) -> Result<BandwidthResult> {
    if per_axis_roughness.len() != cv.d {
        return Err(Error::DimensionMismatch(format!(
            "{} roughness values for d = {}",
            per_axis_roughness.len(),
            cv.d
        )));
    }
    let kernel = KernelSpec::gaussian();
    let h = per_axis_roughness.iter().map(|&r| h_amise(&kernel, r, n, cv.d)).collect::<Result<Vec<_>>>()?;
    let report = roughness_exrot_nd(cv)?;
    Ok(BandwidthResult {
        rule: Rule::Exrot,
        h: Bandwidth::PerAxis(h),
        c_factor: report.c_factor,
        fallback_used: false,
        d: cv.d,
        n,
        roughness: Some(report),
    })
}

/// Normal-reference bandwidth for the first-derivative estimator:
/// `σ (4 / ((d + 4) n))^{1/(d+6)}`.
pub fn h_rot_deriv_nd(sigma: f64, n: usize, d: usize) -> Result<BandwidthResult> {
    check_n(n)?;
    check_sigma(sigma)?;
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let df = d as f64;
    let h = sigma * (4.0 / ((df + 4.0) * n as f64)).powf(1.0 / (df + 6.0));
    Ok(scalar(Rule::Rot, h, 1.0, false, d, n))
}

fn deriv_from(base: BandwidthResult, report: RoughnessReport, d: usize, n: usize) -> Result<BandwidthResult> {
    let c0 = derivative_coefficients(d)?.leading;
    let (cf, fallback) = if report.c_factor > DEGENERATE_C { (report.c_factor, false) } else { (c0, true) };
    let h = base.h() * (cf / c0).powf(-1.0 / (d as f64 + 6.0));
    let mut out = scalar(Rule::ExrotDeriv, h, cf, fallback, d, n);
    out.roughness = Some(report);
    Ok(out)
}

/// First-derivative bandwidth `σ (1.5 / (C n))^{1/7}` for univariate data.
pub fn h_exrot_deriv_1d(c: &Cumulants1D) -> Result<BandwidthResult> {
    let base = h_rot_deriv_nd(c.sigma, c.n, 1)?;
    deriv_from(base, roughness_derivative_1d(c)?, 1, c.n)
}

/// Gradient bandwidth for whitened data.
pub fn h_exrot_deriv_nd(cv: &CumulantVectors, n: usize) -> Result<BandwidthResult> {
    let base = h_rot_deriv_nd(1.0, n, cv.d)?;
    deriv_from(base, roughness_derivative_nd(cv)?, cv.d, n)
}

/// Applies `rule` to a univariate sample.
pub fn select_1d(rule: Rule, data: &[f64]) -> Result<BandwidthResult> {
    let c = cumulants_1d(data)?;
    match rule {
        Rule::Rot => h_rot_1d(c.sigma, c.n),
        Rule::Exrot => h_exrot_1d(&c),
        Rule::ExrotDeriv => h_exrot_deriv_1d(&c),
    }
}
