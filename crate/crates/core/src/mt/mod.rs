//! Floating-point laboratory for Monge–Ampère energy functionals on toric
//! manifolds, in logarithmic coordinates on the open orbit.
//!
//! Everything elsewhere in the crate is exact rational arithmetic; this
//! module is deliberately numeric. It discretizes potentials on products of
//! projective lines, evaluates the Aubin–Mabuchi-type functionals E, I, J,
//! the Ding and Mabuchi functionals, and probes Moser–Trudinger quotients
//! along degenerating families. Discrete structure is chosen so that the
//! key inequalities (Ding sandwich, I–J comparison, Jensen/entropy bound)
//! hold exactly at the discrete level rather than only up to mesh error.

pub mod functionals;
pub mod grid;
pub mod potential;
pub mod probe;

pub use functionals::{
    cocycle_residual, ding_inequality_check, entropy, epsilon_zero_analytic, functional_d,
    functional_e, functional_i, functional_j, functional_l, functional_m, ij_sandwich_check,
    j_comparison_check, ma_density, mt_quotient, FunctionalContext,
};
pub use grid::LogGrid;
pub use potential::{build_values, concentration_potential, random_admissible, ToricPotential};
pub use probe::{concentration_probe, probe_csv, ProbeRow};
