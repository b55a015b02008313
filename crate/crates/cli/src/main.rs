use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use exrot::bandwidth::{select_1d, Rule};
use exrot::bench::{
    emit_report, run_cross_density, run_size_sweep, truth_grid, ExperimentConfig, ReportFiles, ReportFormat,
};
use exrot::kde::kde_derivative_1d;
use exrot::mixture::{catalogue, marron_wand, mixture_sample};
use exrot::roughness::constants_table;

#[derive(Parser)]
#[command(name = "exrot", version, about = "Rule-of-thumb KDE bandwidths and the normal-mixture benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the fifteen test densities as JSON.
    Catalogue,
    /// Select a bandwidth for a seeded sample and print it as JSON.
    Bandwidth(SampleArgs),
    /// Write a density (or derivative) estimate as point,value CSV.
    Estimate {
        #[command(flatten)]
        sample: SampleArgs,
        /// Derivative order, 0 to 2.
        #[arg(long, default_value_t = 0)]
        order: usize,
        #[arg(long, default_value_t = 4096)]
        grid_points: usize,
        /// Output file; defaults to a name under the output directory.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, env = "EXROT_OUTPUT_DIR")]
        output_dir: Option<PathBuf>,
    },
    /// Compare the rules on every selected density.
    CrossDensity(ExperimentArgs),
    /// Compare the rules across sample sizes.
    SizeSweep(ExperimentArgs),
    /// Print the correction coefficients and their quadrature residuals.
    Constants {
        #[arg(long, default_value_t = 2)]
        max_d: usize,
    },
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    density: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "exrot")]
    rule: Rule,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Use 50000 samples and 100 trials.
    #[arg(long)]
    full: bool,
    #[arg(long, value_delimiter = ',')]
    densities: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    rules: Option<Vec<Rule>>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Record wall-clock time per row.
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
    #[arg(long, env = "EXROT_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
}

impl ExperimentArgs {
    fn resolve(&self, base: ExperimentConfig) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                ExperimentConfig::from_json_file(path).with_context(|| format!("reading config {}", path.display()))?
            }
            None if self.full => ExperimentConfig::full_replication(),
            None => base,
        };
        if self.full {
            let full = ExperimentConfig::full_replication();
            cfg.n_samples = full.n_samples;
            cfg.n_trials = full.n_trials;
        }
        if let Some(v) = &self.densities {
            cfg.density_ids = v.clone();
        }
        if let Some(v) = &self.n {
            cfg.n_samples = v.clone();
        }
        if let Some(v) = self.trials {
            cfg.n_trials = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.rules {
            cfg.rules = v.clone();
        }
        if let Some(v) = self.grid_points {
            cfg.grid_points = v;
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        if let Some(v) = &self.output_dir {
            cfg.output_path = v.clone();
        }
        cfg.record_timing |= self.timing;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Prints a line, treating a closed pipe as success.
fn out(line: &str) -> Result<()> {
    match writeln!(io::stdout().lock(), "{line}") {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn print_files(files: &ReportFiles) -> Result<()> {
    for p in [&files.trials, &files.aggregate, &files.plot] {
        out(&p.display().to_string())?;
    }
    Ok(())
}

fn estimate(
    s: &SampleArgs,
    order: usize,
    grid_points: usize,
    output: Option<PathBuf>,
    output_dir: Option<PathBuf>,
) -> Result<()> {
    let m = marron_wand(s.density)?;
    let sample = mixture_sample(&m, s.n, s.seed)?;
    let h = select_1d(s.rule, sample.values())?.h();
    let est = kde_derivative_1d(sample.values(), h, order, &truth_grid(&m, grid_points)?)?;
    let path = output.unwrap_or_else(|| {
        output_dir
            .unwrap_or_else(|| PathBuf::from("results"))
            .join(format!("estimate_d{}_n{}_{}_r{order}.csv", s.density, s.n, s.rule))
    });
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    est.write_csv(fs::File::create(&path)?)?;
    eprintln!("h = {h}");
    out(&path.display().to_string())
}

fn experiment(args: &ExperimentArgs, sweep: bool) -> Result<()> {
    let cfg = if sweep {
        args.resolve(ExperimentConfig::size_sweep_default())?
    } else {
        args.resolve(ExperimentConfig::default())?
    };
    let (rows, stem) =
        if sweep { (run_size_sweep(&cfg)?, "size_sweep") } else { (run_cross_density(&cfg)?, "cross_density") };
    print_files(&emit_report(&rows, args.format, Path::new(&cfg.output_path), stem)?)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Catalogue => out(&serde_json::to_string_pretty(&catalogue())?)?,
        Command::Bandwidth(s) => {
            let m = marron_wand(s.density)?;
            let sample = mixture_sample(&m, s.n, s.seed)?;
            out(&serde_json::to_string_pretty(&select_1d(s.rule, sample.values())?)?)?;
        }
        Command::Estimate { sample, order, grid_points, output, output_dir } => {
            estimate(&sample, order, grid_points, output, output_dir)?
        }
        Command::CrossDensity(a) => experiment(&a, false)?,
        Command::SizeSweep(a) => experiment(&a, true)?,
        Command::Constants { max_d } => {
            if max_d == 0 {
                bail!("--max-d must be at least 1");
            }
            out(&serde_json::to_string_pretty(&constants_table(max_d)?)?)?;
        }
    }
    Ok(())
}
