//! Exact rational scalar used by the whole lattice/toric side of the crate.
//!
//! Everything upstream of the floating-point functional lab is computed over
//! arbitrary-precision rationals so that thresholds, witnesses and report
//! fields are exact values, not approximations.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rat = BigRational;

/// `n/d` as a [`Rat`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Rat`].
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or `"-p/q"` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let bad = |_| Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(bad)?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let n: BigInt = p.trim().parse().map_err(bad)?;
            let d: BigInt = q.trim().parse().map_err(bad)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Formats a reduced rational as `"p"` or `"p/q"`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64` (convenience only; never fed back into exact computations).
pub fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Out-of-range magnitudes collapse to signed infinity.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Scientific notation with 12 significant digits, e.g. `8.57142857143e-1`.
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// `r^k` for small non-negative exponents.
pub fn rat_pow(r: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}
