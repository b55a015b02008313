//! IMSE against sample size on the standard normal, with log-log slopes.

use exrot::bandwidth::Rule;
use exrot::bench::{aggregate, imse_slope, run_size_sweep, ExperimentConfig};

fn main() -> exrot::Result<()> {
    let cfg = ExperimentConfig {
        n_samples: vec![100, 300, 1000, 3000, 10_000],
        n_trials: 10,
        ..ExperimentConfig::size_sweep_default()
    };
    let agg = aggregate(&run_size_sweep(&cfg)?);
    for a in &agg {
        println!("n = {:>6} {:<6} mean h {:.4}  mean IMSE {:.4e}", a.n, a.rule, a.mean_h, a.mean_imse);
    }
    for rule in [Rule::Rot, Rule::Exrot] {
        println!("{rule} slope {:.3}", imse_slope(&agg, 1, rule)?);
    }
    Ok(())
}
