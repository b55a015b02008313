//! Estimates a bimodal density and writes the curve as CSV to stdout.

use exrot::bandwidth::h_exrot_1d;
use exrot::bench::{imse, truth_grid};
use exrot::kde::kde_1d;
use exrot::mixture::{marron_wand, mixture_sample};
use exrot::stats::cumulants_1d;

fn main() -> exrot::Result<()> {
    let m = marron_wand(6)?;
    let sample = mixture_sample(&m, 5_000, 3)?;
    let h = h_exrot_1d(&cumulants_1d(sample.values())?)?.h();
    let est = kde_1d(sample.values(), h, &truth_grid(&m, 512)?)?;
    eprintln!("h = {h:.4}, mass = {:.6}, ISE = {:.3e}", est.integral(), imse(&est, &m)?);
    est.write_csv(std::io::stdout().lock())
}
