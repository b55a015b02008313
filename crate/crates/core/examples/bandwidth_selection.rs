//! ROT, ExROT and the gradient rule on a skewed sample.

use exrot::bandwidth::{h_amise, h_exrot_1d, h_exrot_deriv_1d, h_rot_1d, KernelSpec};
use exrot::mixture::{marron_wand, mixture_sample, mixture_true_roughness};
use exrot::stats::cumulants_1d;

fn main() -> exrot::Result<()> {
    let n = 10_000;
    for id in [1, 2, 3, 4] {
        let m = marron_wand(id)?;
        let sample = mixture_sample(&m, n, 11)?;
        let c = cumulants_1d(sample.values())?;
        let rot = h_rot_1d(c.sigma, n)?;
        let ex = h_exrot_1d(&c)?;
        let grad = h_exrot_deriv_1d(&c)?;
        let oracle = h_amise(&KernelSpec::gaussian(), mixture_true_roughness(&m, 2)?, n, 1)?;
        println!(
            "density {id:>2}: rot {:.5}  exrot {:.5} (C = {:.3}{})  gradient {:.5}  AMISE-optimal {:.5}",
            rot.h(),
            ex.h(),
            ex.c_factor,
            if ex.fallback_used { ", fallback" } else { "" },
            grad.h(),
            oracle
        );
    }
    Ok(())
}
