//! Seeded random generators shared by the property suites and the CLI.
//!
//! Everything here is deterministic given the caller's RNG, so suites can be
//! replayed from a single `u64` seed. Coefficients are kept small (denominators
//! at most 4) so exact arithmetic stays fast even inside long rejection loops.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::vector::RatVector;
use crate::rational::{rat, Rat};
use crate::toric::{ToricRDivisor, ToricVariety};

/// Attempt cap for rejection sampling before giving up with an error.
const MAX_ATTEMPTS: usize = 10_000;

/// Uniform rational in `[lo, hi]` with denominator in `1..=4`.
pub fn random_rat(rng: &mut impl Rng, lo: i64, hi: i64) -> Rat {
    let d = rng.gen_range(1..=4i64);
    let num = rng.gen_range(lo * d..=hi * d);
    rat(num, d)
}

/// Uniform positive rational in `(0, 10]` with denominator in `1..=8`.
///
/// Used as a scaling factor λ; never zero, so λ·L stays in the same ray of the
/// divisor cone.
pub fn random_lambda(rng: &mut impl Rng) -> Rat {
    let d = rng.gen_range(1..=8i64);
    let num = rng.gen_range(1..=10 * d);
    rat(num, d)
}

/// Random big divisor with coefficients in `[-2, 4]`, by rejection.
pub fn random_big_divisor(
    rng: &mut impl Rng,
    variety: &Arc<ToricVariety>,
) -> Result<ToricRDivisor> {
    for _ in 0..MAX_ATTEMPTS {
        let coeffs: Vec<Rat> =
            (0..variety.rays().len()).map(|_| random_rat(rng, -2, 4)).collect();
        let divisor = variety.divisor(coeffs)?;
        if divisor.is_big()? {
            return Ok(divisor);
        }
    }
    Err(Error::Invalid("no big divisor found within the attempt budget".into()))
}

/// Random ample divisor with coefficients in `[-2, 4]`, by rejection.
pub fn random_ample_divisor(
    rng: &mut impl Rng,
    variety: &Arc<ToricVariety>,
) -> Result<ToricRDivisor> {
    for _ in 0..MAX_ATTEMPTS {
        let coeffs: Vec<Rat> =
            (0..variety.rays().len()).map(|_| random_rat(rng, -2, 4)).collect();
        let divisor = variety.divisor(coeffs)?;
        if divisor.is_ample() {
            return Ok(divisor);
        }
    }
    Err(Error::Invalid("no ample divisor found within the attempt budget".into()))
}

/// Random nonzero primitive integer vector with `‖·‖∞ ≤ bound`.
pub fn random_primitive_vector(rng: &mut impl Rng, dim: usize, bound: i64) -> RatVector {
    loop {
        let coords: Vec<i64> = (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect();
        if coords.iter().any(|&c| c != 0) {
            return RatVector::from_ints(&coords).primitive();
        }
    }
}

/// Random direction divisor: integer coefficients in `[-bound, bound]`, not
/// all zero.
pub fn random_direction(
    rng: &mut impl Rng,
    variety: &Arc<ToricVariety>,
    bound: i64,
) -> ToricRDivisor {
    loop {
        let coeffs: Vec<i64> =
            (0..variety.rays().len()).map(|_| rng.gen_range(-bound..=bound)).collect();
        if coeffs.iter().any(|&c| c != 0) {
            return variety.divisor_ints(&coeffs);
        }
    }
}
