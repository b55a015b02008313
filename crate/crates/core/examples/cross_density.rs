//! Compares ROT and ExROT on every catalogue density.
//!
//! `cargo run --release --example cross_density -- [n] [trials]`

use exrot::bandwidth::Rule;
use exrot::bench::{aggregate, run_cross_density, ExperimentConfig};
use exrot::mixture::marron_wand_name;

fn main() -> exrot::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(2000);
    let trials = args.next().unwrap_or(5);
    let cfg = ExperimentConfig { n_samples: vec![n], n_trials: trials, ..Default::default() };
    let agg = aggregate(&run_cross_density(&cfg)?);

    println!("{:>3} {:<28} {:>9} {:>9} {:>12} {:>12}", "id", "density", "h_rot", "h_exrot", "imse_rot", "imse_exrot");
    for pair in agg.chunks(2) {
        let (rot, ex) = (&pair[0], &pair[1]);
        assert_eq!((rot.rule, ex.rule), (Rule::Rot, Rule::Exrot));
        let mark = if ex.mean_imse < rot.mean_imse { "*" } else { "" };
        println!(
            "{:>3} {:<28} {:>9.5} {:>9.5} {:>12.4e} {:>12.4e} {mark}",
            rot.density_id,
            marron_wand_name(rot.density_id)?,
            rot.mean_h,
            ex.mean_h,
            rot.mean_imse,
            ex.mean_imse
        );
    }
    Ok(())
}
