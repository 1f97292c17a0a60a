//! Dense rational vectors for the low-dimensional polyhedral kernel.

use std::fmt;
use std::ops::Index;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::rational::Rat;

/// A vector with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVector(Vec<Rat>);

impl RatVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RatVector(coords.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero(dim: usize) -> Self {
        RatVector(vec![Rat::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rat) -> RatVector {
        RatVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> RatVector {
        RatVector(self.0.iter().map(|a| -a).collect())
    }

    /// True when every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.denom().is_one())
    }

    /// The primitive integer vector spanning the same ray (direction kept).
    ///
    /// Scales by the common denominator, then divides by the gcd of the
    /// numerators. Panics on the zero vector, which spans no ray.
    pub fn primitive(&self) -> RatVector {
        assert!(!self.is_zero(), "zero vector has no primitive representative");
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let gcd = ints
            .iter()
            .fold(BigInt::zero(), |acc, v| acc.gcd(v));
        RatVector(ints.into_iter().map(|v| Rat::from_integer(v / &gcd)).collect())
    }

    /// True when the coordinates are integral with gcd one.
    pub fn is_primitive(&self) -> bool {
        if self.is_zero() || !self.is_integral() {
            return false;
        }
        let gcd = self
            .0
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        gcd.is_one()
    }

    /// Max-norm as a rational (used by brute-force enumeration bounds).
    pub fn max_abs(&self) -> Rat {
        self.0
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

impl Index<usize> for RatVector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", crate::rational::fmt_rat(c))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn primitive_clears_denominators_and_common_factors() {
        let v = RatVector::new(vec![rat(1, 2), rat(-3, 4)]);
        assert_eq!(v.primitive(), RatVector::from_ints(&[2, -3]));
        let w = RatVector::from_ints(&[4, -6]);
        assert_eq!(w.primitive(), RatVector::from_ints(&[2, -3]));
        assert!(w.primitive().is_primitive());
        assert!(!w.is_primitive());
    }

    #[test]
    fn dot_and_arithmetic() {
        let a = RatVector::from_ints(&[1, 2]);
        let b = RatVector::from_ints(&[3, -1]);
        assert_eq!(a.dot(&b), rat(1, 1));
        assert_eq!(a.add(&b), RatVector::from_ints(&[4, 1]));
        assert_eq!(a.sub(&b), RatVector::from_ints(&[-2, 3]));
        assert_eq!(a.scale(&rat(3, 2)), RatVector::new(vec![rat(3, 2), rat(3, 1)]));
    }
}
