//! Kernel density estimation with Gram-Charlier corrected rule-of-thumb
//! bandwidths.
//!
//! The crate is organised bottom-up:
//!
//! * [`tensor`]: Kronecker algebra, vec operators and commutation permutations.
//! * [`quadrature`]: adaptive Gauss-Kronrod integration used as an oracle.
//! * [`mixture`]: the fifteen Marron-Wand normal mixtures and seeded sampling.
//! * [`stats`]: sample cumulants, moment vectors and whitening.
//! * [`hermite`]: scalar and vector Hermite polynomials, Gram-Charlier series.
//! * [`roughness`]: closed-form Gaussian integrals and roughness functionals.
//! * [`bandwidth`]: ROT, ExROT and AMISE bandwidth rules.
//! * [`kde`]: Gaussian kernel density estimators on grids.
//! * [`bench`]: the simulation harness and report writers.
//!
//! ```
//! use exrot::{bandwidth, mixture, stats};
//!
//! let m = mixture::marron_wand(2).unwrap();
//! let sample = mixture::mixture_sample(&m, 5_000, 7).unwrap();
//! let cum = stats::cumulants_1d(sample.values()).unwrap();
//! let h = bandwidth::h_exrot_1d(&cum).unwrap();
//! assert!(h.h() < bandwidth::h_rot_1d(cum.sigma, cum.n).unwrap().h());
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod bandwidth;
pub mod bench;
pub mod error;
pub mod hermite;
pub mod kde;
pub mod mixture;
pub mod quadrature;
pub mod roughness;
pub mod stats;
pub mod tensor;

pub use error::{Error, Result};
