//! Monte-Carlo comparison of bandwidth rules on the normal-mixture catalogue.
//!
//! Every trial draws one sample from a stream keyed by `(density, n, trial)`,
//! so rows do not depend on scheduling. Both rules see the same sample.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandwidth::{h_exrot_1d, h_rot_1d, Rule};
use crate::error::{Error, Result};
use crate::kde::{kde_1d, trapezoid, DensityEstimate, Grid};
use crate::mixture::{marron_wand, mixture_pdf, mixture_sample_with, rng_for, NormalMixture};
use crate::stats::cumulants_1d;

/// Largest tail mass the evaluation grid may leave out.
pub const COVERAGE_TOLERANCE: f64 = 1e-6;

/// Truth grids extend this many component scales past the outer means.
pub const GRID_REACH: f64 = 8.0;

/// Settings shared by the cross-density and sample-size experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub density_ids: Vec<u32>,
    pub n_samples: Vec<usize>,
    pub n_trials: usize,
    pub seed: u64,
    pub rules: Vec<Rule>,
    pub grid_points: usize,
    pub output_path: PathBuf,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    pub record_timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            density_ids: (1..=15).collect(),
            n_samples: vec![10_000],
            n_trials: 20,
            seed: 1,
            rules: vec![Rule::Rot, Rule::Exrot],
            grid_points: 4096,
            output_path: PathBuf::from("results"),
            workers: 0,
            record_timing: false,
        }
    }
}

impl ExperimentConfig {
    /// 50000 samples and 100 trials per density.
    pub fn full_replication() -> Self {
        Self { n_samples: vec![50_000], n_trials: 100, ..Self::default() }
    }

    /// Density 1 over eight sample sizes with 50 trials.
    pub fn size_sweep_default() -> Self {
        Self {
            density_ids: vec![1],
            n_samples: vec![100, 200, 500, 1000, 2000, 5000, 10_000, 20_000],
            n_trials: 50,
            ..Self::default()
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let cfg: Self = serde_json::from_reader(File::open(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.n_trials == 0 {
            return bad("n_trials must be at least 1".into());
        }
        if self.density_ids.is_empty() {
            return bad("no densities selected".into());
        }
        if let Some(&id) = self.density_ids.iter().find(|&&id| !(1..=15).contains(&id)) {
            return Err(Error::UnknownDensity(id));
        }
        if self.n_samples.is_empty() || self.n_samples.iter().any(|&n| n < 4) {
            return bad(format!("sample sizes {:?} must be at least 4", self.n_samples));
        }
        if self.grid_points < 256 {
            return bad(format!("grid_points {} below 256", self.grid_points));
        }
        if self.rules.is_empty() {
            return bad("no rules selected".into());
        }
        if self.rules.contains(&Rule::ExrotDeriv) {
            return Err(Error::Unsupported("density experiments compare rot and exrot only".into()));
        }
        Ok(())
    }
}

/// One (density, n, trial, rule) measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub density_id: u32,
    pub n: usize,
    pub trial: usize,
    pub rule: Rule,
    pub h: f64,
    pub imse: f64,
    pub elapsed_seconds: f64,
}

/// Uniform grid spanning `GRID_REACH` scales past the extreme component means.
pub fn truth_grid(m: &NormalMixture, points: usize) -> Result<Grid> {
    let (lo, hi, s) = m.extent();
    Grid::uniform(lo - GRID_REACH * s, hi + GRID_REACH * s, points)
}

fn coverage(est: &DensityEstimate, truth: &NormalMixture) -> Result<()> {
    let (a, b) = match (est.grid.first(), est.grid.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::InvalidArgument("empty estimate".into())),
    };
    let tail = truth.tail_mass(a, b);
    if tail > COVERAGE_TOLERANCE {
        return Err(Error::GridCoverage(tail));
    }
    Ok(())
}

/// Trapezoid integral of `(f̂ - f)²` over the estimate's grid.
pub fn imse(est: &DensityEstimate, truth: &NormalMixture) -> Result<f64> {
    coverage(est, truth)?;
    let sq: Vec<f64> = est.grid.iter().zip(&est.values).map(|(&x, &v)| (v - mixture_pdf(truth, x)).powi(2)).collect();
    Ok(trapezoid(&est.grid, &sq))
}

fn imse_against(est: &DensityEstimate, truth: &[f64]) -> f64 {
    let sq: Vec<f64> = est.values.iter().zip(truth).map(|(v, f)| (v - f).powi(2)).collect();
    trapezoid(&est.grid, &sq)
}

/// Exact MISE of the Gaussian-kernel estimate of a standard normal density.
pub fn gaussian_mise(h: f64, n: usize) -> f64 {
    let n = n as f64;
    let h2 = h * h;
    (1.0 / (n * h) + (1.0 - 1.0 / n) / (1.0 + h2).sqrt() - 2f64.powf(1.5) / (2.0 + h2).sqrt() + 1.0) / (2.0 * PI.sqrt())
}

/// RNG stream for one trial.
pub fn trial_stream(density_id: u32, n: usize, trial: usize) -> u64 {
    (u64::from(density_id) << 56) ^ ((n as u64) << 24) ^ trial as u64
}

struct Truth {
    id: u32,
    mixture: NormalMixture,
    grid: Grid,
    values: Vec<f64>,
}

fn run_trial(cfg: &ExperimentConfig, truth: &Truth, n: usize, trial: usize) -> Result<Vec<TrialRow>> {
    let mut rng = rng_for(cfg.seed, trial_stream(truth.id, n, trial));
    let sample = mixture_sample_with(&truth.mixture, n, &mut rng);
    let cum = cumulants_1d(&sample)?;
    cfg.rules
        .iter()
        .map(|&rule| {
            let start = Instant::now();
            let h = match rule {
                Rule::Rot => h_rot_1d(cum.sigma, cum.n)?,
                Rule::Exrot => h_exrot_1d(&cum)?,
                Rule::ExrotDeriv => unreachable!("rejected by validate"),
            }
            .h();
            let est = kde_1d(&sample, h, &truth.grid)?;
            let elapsed = start.elapsed().as_secs_f64();
            Ok(TrialRow {
                density_id: truth.id,
                n,
                trial,
                rule,
                h,
                imse: imse_against(&est, &truth.values),
                elapsed_seconds: if cfg.record_timing { elapsed } else { 0.0 },
            })
        })
        .collect()
}

fn run(cfg: &ExperimentConfig) -> Result<Vec<TrialRow>> {
    cfg.validate()?;
    let truths = cfg
        .density_ids
        .iter()
        .map(|&id| {
            let mixture = marron_wand(id)?;
            let grid = truth_grid(&mixture, cfg.grid_points)?;
            let tail = mixture.tail_mass(grid.get(0), grid.get(grid.len() - 1));
            if tail > COVERAGE_TOLERANCE {
                return Err(Error::GridCoverage(tail));
            }
            let values = grid.to_vec().iter().map(|&x| mixture_pdf(&mixture, x)).collect();
            Ok(Truth { id, mixture, grid, values })
        })
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(&Truth, usize, usize)> = truths
        .iter()
        .flat_map(|t| cfg.n_samples.iter().flat_map(move |&n| (0..cfg.n_trials).map(move |k| (t, n, k))))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let nested: Vec<Vec<TrialRow>> =
        pool.install(|| jobs.par_iter().map(|&(t, n, k)| run_trial(cfg, t, n, k)).collect::<Result<_>>())?;
    let mut rows: Vec<TrialRow> = nested.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.density_id, r.n, r.trial, r.rule));
    Ok(rows)
}

/// Every density in the config at each sample size, both rules per draw.
pub fn run_cross_density(cfg: &ExperimentConfig) -> Result<Vec<TrialRow>> {
    run(cfg)
}

/// Like [`run_cross_density`] but requires at least two sample sizes.
pub fn run_size_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialRow>> {
    if cfg.n_samples.len() < 2 {
        return Err(Error::InvalidArgument("a size sweep needs at least two sample sizes".into()));
    }
    run(cfg)
}

/// Per-(density, n, rule) means over trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub density_id: u32,
    pub n: usize,
    pub rule: Rule,
    pub trials: usize,
    pub mean_h: f64,
    pub mean_imse: f64,
    pub sd_imse: f64,
    pub mean_elapsed_seconds: f64,
}

pub fn aggregate(rows: &[TrialRow]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(u32, usize, Rule), Vec<&TrialRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.density_id, r.n, r.rule)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((density_id, n, rule), g)| {
            let k = g.len() as f64;
            let mean = |f: fn(&TrialRow) -> f64| g.iter().map(|r| f(r)).sum::<f64>() / k;
            let mean_imse = mean(|r| r.imse);
            let var =
                if g.len() > 1 { g.iter().map(|r| (r.imse - mean_imse).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
            AggregateRow {
                density_id,
                n,
                rule,
                trials: g.len(),
                mean_h: mean(|r| r.h),
                mean_imse,
                sd_imse: var.sqrt(),
                mean_elapsed_seconds: mean(|r| r.elapsed_seconds),
            }
        })
        .collect()
}

/// A point of the log-log convergence plot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotPoint {
    pub density_id: u32,
    pub rule: Rule,
    pub n: usize,
    pub log10_n: f64,
    pub mean_imse: f64,
    pub log10_imse: f64,
}

pub fn plot_points(agg: &[AggregateRow]) -> Vec<PlotPoint> {
    let mut pts: Vec<PlotPoint> = agg
        .iter()
        .map(|a| PlotPoint {
            density_id: a.density_id,
            rule: a.rule,
            n: a.n,
            log10_n: (a.n as f64).log10(),
            mean_imse: a.mean_imse,
            log10_imse: a.mean_imse.log10(),
        })
        .collect();
    pts.sort_by_key(|p| (p.density_id, p.rule, p.n));
    pts
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidArgument("need at least two paired points".into()));
    }
    if x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument("log-log fit needs positive values".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all x values coincide".into()));
    }
    Ok(sxy / sxx)
}

/// Slope of mean IMSE against n for one density and rule.
pub fn imse_slope(agg: &[AggregateRow], density_id: u32, rule: Rule) -> Result<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) =
        agg.iter().filter(|a| a.density_id == density_id && a.rule == rule).map(|a| (a.n as f64, a.mean_imse)).unzip();
    loglog_slope(&x, &y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

/// Paths written by [`emit_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReportFiles {
    pub trials: PathBuf,
    pub aggregate: PathBuf,
    pub plot: PathBuf,
}

/// Serializes records as CSV with a header row.
pub fn write_csv<T: Serialize, W: Write>(records: &[T], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

fn write_records<T: Serialize>(records: &[T], format: ReportFormat, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        ReportFormat::Csv => write_csv(records, &mut w)?,
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut w, records)?;
            w.write_all(b"\n")?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `<stem>_trials`, `<stem>_aggregate` and `<stem>_plot` into `dir`.
pub fn emit_report(rows: &[TrialRow], format: ReportFormat, dir: &Path, stem: &str) -> Result<ReportFiles> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("no rows to report".into()));
    }
    fs::create_dir_all(dir)?;
    let ext = format.extension();
    let files = ReportFiles {
        trials: dir.join(format!("{stem}_trials.{ext}")),
        aggregate: dir.join(format!("{stem}_aggregate.{ext}")),
        plot: dir.join(format!("{stem}_plot.{ext}")),
    };
    let agg = aggregate(rows);
    write_records(rows, format, &files.trials)?;
    write_records(&agg, format, &files.aggregate)?;
    write_records(&plot_points(&agg), format, &files.plot)?;
    Ok(files)
}
