//! Exact toric stability thresholds and a floating-point Moser–Trudinger
//! laboratory.
//!
//! The crate has two halves. The exact half works over arbitrary-precision
//! rationals: lattice polytopes and fans, toric varieties with R-divisors,
//! stability thresholds (delta, alpha, nef threshold, beta, slope), and a
//! perturbation explorer that certifies two-sided delta bounds under small
//! divisor perturbations. The numerical half discretizes Moser-Trudinger
//! type functionals on products of projective lines in logarithmic
//! coordinates and probes their coercivity with concentrating potentials.

pub mod cone_explorer;
pub mod error;
pub mod geometry;
pub mod mt;
pub mod rational;
pub mod report;
pub mod sampling;
pub mod suite;
pub mod thresholds;
pub mod toric;
pub mod varieties;

pub use error::{Error, Result};
pub use rational::Rat;
pub use toric::{ToricRDivisor, ToricVariety};
