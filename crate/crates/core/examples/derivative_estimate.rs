//! First-derivative estimation with the gradient bandwidth.

use exrot::bandwidth::{h_exrot_1d, h_exrot_deriv_1d};
use exrot::kde::{kde_derivative_1d, trapezoid, Grid};
use exrot::mixture::{marron_wand, mixture_derivative, mixture_sample};
use exrot::stats::cumulants_1d;

fn main() -> exrot::Result<()> {
    let m = marron_wand(2)?;
    let sample = mixture_sample(&m, 20_000, 5)?;
    let c = cumulants_1d(sample.values())?;
    let grid = Grid::uniform(-4.0, 4.0, 801)?;
    let truth: Vec<f64> = grid.to_vec().iter().map(|&x| mixture_derivative(&m, x, 1)).collect();
    for (label, h) in [("density rule", h_exrot_1d(&c)?.h()), ("gradient rule", h_exrot_deriv_1d(&c)?.h())] {
        let est = kde_derivative_1d(sample.values(), h, 1, &grid)?;
        let sq: Vec<f64> = est.values.iter().zip(&truth).map(|(a, b)| (a - b).powi(2)).collect();
        println!("{label:<14} h = {h:.4}  ISE of f' = {:.4e}", trapezoid(&est.grid, &sq));
    }
    Ok(())
}
