//! Smooth complete toric varieties and torus-invariant R-divisors.
//!
//! A variety is presented by its fan; a divisor by one rational coefficient
//! per ray (the divisor Σ a_i D_i). Everything downstream — volumes,
//! positivity, thresholds — reduces to exact polyhedral computations on the
//! section polytope {x : ⟨x, v_i⟩ ≥ −a_i} and on per-cone Cartier data.

use std::sync::Arc;

use num::{One, Signed};

use crate::error::{Error, Result};
use crate::geometry::linalg::solve;
use crate::geometry::polytope::{
    enumerate_vertices, HPolytope, Halfspace, VPolytope,
};
use crate::geometry::vector::RatVector;
use crate::geometry::Fan;
use crate::rational::{rat_i, Rat};

/// A smooth complete projective toric variety, validated on construction:
/// every maximal cone is spanned by a lattice basis (smoothness), walls pair
/// up (completeness), and some divisor is ample (projectivity) — the
/// anticanonical one by default, or a caller-supplied witness.
#[derive(Debug, Clone)]
pub struct ToricVariety {
    fan: Arc<Fan>,
}

/// Per-cone Cartier data of the divisor with the given coefficients: the
/// unique m_σ with ⟨m_σ, v_i⟩ = −a_i on the rays of σ. Requires a smooth
/// (hence simplicial, unimodular) fan.
pub(crate) fn cartier_data(fan: &Fan, coeffs: &[Rat]) -> Vec<RatVector> {
    fan.maximal_cones()
        .iter()
        .map(|cone| {
            let rows: Vec<RatVector> = cone.iter().map(|&i| fan.ray(i).clone()).collect();
            let rhs: Vec<Rat> = cone.iter().map(|&i| -&coeffs[i]).collect();
            let m = solve(&rows, &rhs)
                .expect("smooth cone rays form a basis, so Cartier data is unique");
            RatVector::new(m)
        })
        .collect()
}

/// The toric positivity criterion: with m_σ the Cartier data, the divisor is
/// nef iff ⟨m_σ, v_j⟩ ≥ −a_j for every maximal cone σ and every ray j, and
/// ample iff the inequality is strict whenever j ∉ σ.
fn cartier_positive(fan: &Fan, coeffs: &[Rat], strict: bool) -> bool {
    let data = cartier_data(fan, coeffs);
    fan.maximal_cones().iter().zip(&data).all(|(cone, m)| {
        fan.rays().iter().enumerate().all(|(j, v)| {
            let lhs = m.dot(v);
            let rhs = -&coeffs[j];
            if strict && !cone.contains(&j) {
                lhs > rhs
            } else {
                lhs >= rhs
            }
        })
    })
}

impl ToricVariety {
    /// Validates the fan as a smooth complete projective toric variety,
    /// using the anticanonical divisor as the ampleness witness (suits the
    /// Fano families this crate targets).
    pub fn new(fan: Fan) -> Result<Self> {
        let ones = vec![Rat::one(); fan.rays().len()];
        Self::with_ample_witness(fan, &ones)
    }

    /// Same validation, but certifies projectivity with the given divisor
    /// coefficients instead of the anticanonical ones.
    pub fn with_ample_witness(fan: Fan, witness: &[Rat]) -> Result<Self> {
        let n = fan.dim();
        for cone in fan.maximal_cones() {
            if cone.len() != n {
                return Err(Error::NotSmooth(format!(
                    "maximal cone with {} rays in dimension {n}",
                    cone.len()
                )));
            }
            let rows: Vec<RatVector> = cone.iter().map(|&i| fan.ray(i).clone()).collect();
            let d = crate::geometry::linalg::det(&rows);
            if d.abs() != Rat::one() {
                return Err(Error::NotSmooth(format!(
                    "cone generators have determinant {d}, not a lattice basis"
                )));
            }
        }
        fan.check_wall_complete()?;
        if witness.len() != fan.rays().len() {
            return Err(Error::Invalid(format!(
                "{} witness coefficients for {} rays",
                witness.len(),
                fan.rays().len()
            )));
        }
        if !cartier_positive(&fan, witness, true) {
            return Err(Error::NotProjective);
        }
        Ok(ToricVariety { fan: Arc::new(fan) })
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn rays(&self) -> &[RatVector] {
        self.fan.rays()
    }

    /// The anticanonical divisor −K = Σ D_i (all coefficients 1).
    pub fn anticanonical(self: &Arc<Self>) -> ToricRDivisor {
        let coeffs = vec![Rat::one(); self.rays().len()];
        ToricRDivisor::new(self.clone(), coeffs).expect("coefficient count matches by construction")
    }

    /// The divisor with the given coefficients, one per ray in ray order.
    pub fn divisor(self: &Arc<Self>, coeffs: Vec<Rat>) -> Result<ToricRDivisor> {
        ToricRDivisor::new(self.clone(), coeffs)
    }

    /// Convenience for integer coefficients.
    pub fn divisor_ints(self: &Arc<Self>, coeffs: &[i64]) -> ToricRDivisor {
        ToricRDivisor::new(self.clone(), coeffs.iter().map(|&c| rat_i(c)).collect())
            .expect("coefficient count matches")
    }
}

/// A torus-invariant R-divisor Σ a_i D_i with rational coefficients.
#[derive(Debug, Clone)]
pub struct ToricRDivisor {
    variety: Arc<ToricVariety>,
    coeffs: Vec<Rat>,
}

impl ToricRDivisor {
    pub fn new(variety: Arc<ToricVariety>, coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.len() != variety.rays().len() {
            return Err(Error::Invalid(format!(
                "{} coefficients for {} rays",
                coeffs.len(),
                variety.rays().len()
            )));
        }
        Ok(ToricRDivisor { variety, coeffs })
    }

    pub fn variety(&self) -> &Arc<ToricVariety> {
        &self.variety
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// The divisor λ·D.
    pub fn scale(&self, lambda: &Rat) -> ToricRDivisor {
        ToricRDivisor {
            variety: self.variety.clone(),
            coeffs: self.coeffs.iter().map(|a| a * lambda).collect(),
        }
    }

    /// The divisor D + λ·E (E on the same variety).
    pub fn add_scaled(&self, other: &ToricRDivisor, lambda: &Rat) -> ToricRDivisor {
        debug_assert!(Arc::ptr_eq(&self.variety, &other.variety));
        ToricRDivisor {
            variety: self.variety.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + &(b * lambda))
                .collect(),
        }
    }

    /// The section polytope {x : ⟨x, v_i⟩ ≥ −a_i}.
    pub fn section_polytope(&self) -> HPolytope {
        let halfspaces = self
            .variety
            .rays()
            .iter()
            .zip(&self.coeffs)
            .map(|(v, a)| Halfspace::new(v.clone(), -a))
            .collect();
        HPolytope::new(self.variety.dim(), halfspaces)
            .expect("rays are nonzero and dimensions agree")
    }

    /// Vertices of the section polytope (always bounded: the rays of a
    /// complete fan positively span, so the recession cone is trivial).
    pub fn section_vertices(&self) -> Result<VPolytope> {
        enumerate_vertices(&self.section_polytope())
    }

    /// vol(D) = n! × Euclidean volume of the section polytope; equals the
    /// top self-intersection number for nef divisors.
    pub fn vol(&self) -> Result<Rat> {
        let vertices = self.section_vertices()?;
        let mut factorial = Rat::one();
        for k in 2..=self.variety.dim() as i64 {
            factorial *= rat_i(k);
        }
        Ok(crate::geometry::polytope::volume(&vertices)? * factorial)
    }

    /// Bigness: positive volume.
    pub fn is_big(&self) -> Result<bool> {
        Ok(self.vol()?.is_positive())
    }

    pub fn is_nef(&self) -> bool {
        cartier_positive(self.variety.fan(), &self.coeffs, false)
    }

    pub fn is_ample(&self) -> bool {
        cartier_positive(self.variety.fan(), &self.coeffs, true)
    }

    /// The nef threshold s(ξ) = sup{s : −K − sξ nef} for ample ξ.
    ///
    /// Each Cartier inequality for −K − sξ is affine in s with strictly
    /// negative slope (that is exactly ampleness of ξ), so the supremum is
    /// the smallest critical value, an exact rational. It may be ≤ 0 when
    /// −K itself is not nef.
    pub fn nef_threshold(&self) -> Result<Rat> {
        if !self.is_ample() {
            return Err(Error::NotAmple);
        }
        let fan = self.variety.fan();
        let ones = vec![Rat::one(); fan.rays().len()];
        let anti = cartier_data(fan, &ones);
        let xi_rhs: Vec<Rat> = self.coeffs.iter().map(|c| c.clone()).collect();
        let mut bound: Option<Rat> = None;
        for (ci, cone) in fan.maximal_cones().iter().enumerate() {
            let rows: Vec<RatVector> = cone.iter().map(|&i| fan.ray(i).clone()).collect();
            let rhs: Vec<Rat> = cone.iter().map(|&i| xi_rhs[i].clone()).collect();
            let t = RatVector::new(solve(&rows, &rhs).expect("smooth cone basis"));
            for (j, v) in fan.rays().iter().enumerate() {
                if cone.contains(&j) {
                    continue;
                }
                let p = anti[ci].dot(v) + Rat::one();
                let q = t.dot(v) - &self.coeffs[j];
                debug_assert!(q.is_negative(), "ampleness forces negative slope");
                let critical = p / -q;
                if bound.as_ref().map_or(true, |b| critical < *b) {
                    bound = Some(critical);
                }
            }
        }
        bound.ok_or_else(|| Error::Invalid("fan has a single maximal cone".into()))
    }

    /// The slope μ(ξ) = (−K·ξ^{n−1}) / ξⁿ for ample ξ with −K nef.
    ///
    /// vol(ξ + t·(−K)) is the polynomial Σ C(n,k)·tᵏ·((−K)ᵏ·ξ^{n−k}) as long
    /// as the sums stay nef, so sampling t = 0..n determines it and the
    /// linear coefficient is n·(−K·ξ^{n−1}). An extra sample at t = n+1
    /// certifies polynomiality; a mismatch means some sum left the nef cone
    /// and the interpolation is meaningless.
    pub fn slope(&self) -> Result<Rat> {
        if !self.is_ample() {
            return Err(Error::NotAmple);
        }
        let n = self.variety.dim();
        let anti = self.variety.anticanonical();
        let sample = |t: i64| -> Result<Rat> { self.add_scaled(&anti, &rat_i(t)).vol() };
        let values: Vec<Rat> = (0..=n as i64).map(sample).collect::<Result<_>>()?;
        // Solve the Vandermonde system for the coefficients of the
        // interpolating polynomial of degree ≤ n.
        let rows: Vec<RatVector> = (0..=n as i64)
            .map(|t| {
                RatVector::new(
                    (0..=n as u32).map(|k| rat_pow_int(t, k)).collect(),
                )
            })
            .collect();
        let coeffs = solve(&rows, &values).expect("Vandermonde nodes are distinct");
        let check_t = (n + 1) as i64;
        let predicted: Rat = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * &rat_pow_int(check_t, k as u32))
            .sum();
        if predicted != sample(check_t)? {
            return Err(Error::SlopeUndefined(format!(
                "vol(ξ + t·(−K)) is not polynomial through t = {check_t}; −K is not nef"
            )));
        }
        let intersection = &coeffs[1] / rat_i(n as i64);
        Ok(intersection / &coeffs[0])
    }
}

fn rat_pow_int(base: i64, exp: u32) -> Rat {
    rat_i(base.pow(exp))
}
