//! Lists the normal-mixture test densities with their cumulants and exact
//! roughness, then draws a seeded sample from one of them.

use exrot::mixture::{catalogue, marron_wand, mixture_sample, mixture_true_roughness};
use exrot::stats::cumulants_1d;

fn main() -> exrot::Result<()> {
    println!("{:>3} {:<28} {:>4} {:>9} {:>9} {:>12}", "id", "name", "k", "skew", "kurt", "R(f'')");
    for entry in catalogue() {
        let m = marron_wand(entry.id)?;
        let (k3, k4) = m.cumulants();
        let s = m.sd();
        println!(
            "{:>3} {:<28} {:>4} {:>9.4} {:>9.4} {:>12.4}",
            entry.id,
            entry.name,
            entry.components.len(),
            k3 / s.powi(3),
            k4 / s.powi(4),
            mixture_true_roughness(&m, 2)?
        );
    }

    let sample = mixture_sample(&marron_wand(3)?, 10_000, 42)?;
    let c = cumulants_1d(sample.values())?;
    println!("\nstrongly skewed, n=10000: skewness {:.3}, excess kurtosis {:.3}", c.skewness(), c.excess_kurtosis());
    Ok(())
}
