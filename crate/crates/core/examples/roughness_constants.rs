//! Prints the correction coefficients with their quadrature residuals.

use exrot::roughness::{constants_table, exrot_coefficients, t_table};

fn main() -> exrot::Result<()> {
    for e in constants_table(2)? {
        println!("d={} {:<24} {:>16.10} residual {:.1e}", e.d, e.coefficient_name, e.value, e.oracle_residual);
    }
    let c = exrot_coefficients(1)?;
    println!("\nunivariate: c3 = {} (315/288), c4² = {} (3465/9216), c4 = {} (35/48)", c.c3, c.c4_sq, c.c4);
    println!("T-table at σ=1: {:?}", t_table(1.0)?);
    Ok(())
}
