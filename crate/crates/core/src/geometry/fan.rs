//! Complete rational polyhedral fans.
//!
//! A fan stores primitive integer ray generators plus maximal cones as index
//! sets, and caches a facet (halfspace) representation per cone so that
//! point location is a sign check. Constructors validate what is cheap and
//! local (primitivity, distinctness, full dimension); completeness is the
//! caller's contract and is certified either by the wall-pairing check (for
//! simplicial fans) or statistically by sampling.
//!
//! Cones must be pointed. The constructors in this crate only ever build
//! pointed cones (unimodular cones of smooth varieties, vertex normal cones
//! of full-dimensional polytopes, and intersections thereof), so this is not
//! re-verified.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::linalg::{for_each_subset, kernel_dir, rank};
use crate::geometry::polytope::{facets_with_incidence, Halfspace, VPolytope};
use crate::geometry::vector::RatVector;
use crate::rational::Rat;

#[derive(Debug, Clone)]
pub struct Fan {
    dim: usize,
    rays: Vec<RatVector>,
    cones: Vec<Vec<usize>>,
    hreps: Vec<Vec<Halfspace>>,
}

/// Facet halfspaces of the full-dimensional pointed cone spanned by `rays`.
///
/// Every facet of a finitely generated full-dimensional cone contains n-1
/// linearly independent generators, so scanning kernel directions of
/// (n-1)-subsets and keeping the one-sided ones is exhaustive.
fn cone_facets(rays: &[&RatVector], dim: usize) -> Vec<Halfspace> {
    let mut facets: Vec<Halfspace> = Vec::new();
    for_each_subset(rays.len(), dim.saturating_sub(1), &mut |idx| {
        let sub: Vec<&RatVector> = idx.iter().map(|&i| rays[i]).collect();
        let Some(d) = kernel_dir(&sub, dim) else { return };
        let mut pos = false;
        let mut neg = false;
        for r in rays {
            let s = d.dot(r);
            if s.is_positive() {
                pos = true;
            } else if s.is_negative() {
                neg = true;
            }
            if pos && neg {
                return;
            }
        }
        let normal = if neg { d.neg().primitive() } else { d.primitive() };
        if facets.iter().all(|h| h.normal != normal) {
            facets.push(Halfspace::new(normal, Rat::zero()));
        }
    });
    facets
}

impl Fan {
    /// Builds a fan from primitive integer rays and maximal cones given as
    /// ray index sets. Cone indices are kept in the given order; rays too.
    pub fn new(dim: usize, rays: Vec<RatVector>, cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFan("ambient dimension must be positive".into()));
        }
        for r in &rays {
            if r.dim() != dim {
                return Err(Error::Dimension { expected: dim, got: r.dim() });
            }
            if r.is_zero() {
                return Err(Error::InvalidFan("zero ray generator".into()));
            }
            if !r.is_integral() || !r.is_primitive() {
                return Err(Error::InvalidFan(format!("ray {r} is not a primitive integer vector")));
            }
        }
        for (i, r) in rays.iter().enumerate() {
            if rays[..i].contains(r) {
                return Err(Error::InvalidFan(format!("duplicate ray {r}")));
            }
        }
        if cones.is_empty() {
            return Err(Error::InvalidFan("fan has no maximal cones".into()));
        }
        for i in 0..rays.len() {
            if !cones.iter().any(|c| c.contains(&i)) {
                return Err(Error::InvalidFan(format!(
                    "ray {} is not used by any maximal cone",
                    rays[i]
                )));
            }
        }
        let mut hreps = Vec::with_capacity(cones.len());
        for cone in &cones {
            let mut seen = Vec::new();
            for &i in cone {
                if i >= rays.len() {
                    return Err(Error::InvalidFan(format!("cone references missing ray {i}")));
                }
                if seen.contains(&i) {
                    return Err(Error::InvalidFan(format!("cone repeats ray {i}")));
                }
                seen.push(i);
            }
            let gens: Vec<&RatVector> = cone.iter().map(|&i| &rays[i]).collect();
            if rank(&gens, dim) != dim {
                return Err(Error::InvalidFan(
                    "maximal cone is not full-dimensional".into(),
                ));
            }
            hreps.push(cone_facets(&gens, dim));
        }
        Ok(Fan { dim, rays, cones, hreps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[RatVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &RatVector {
        &self.rays[i]
    }

    pub fn maximal_cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone_rays(&self, cone: usize) -> impl Iterator<Item = &RatVector> {
        self.cones[cone].iter().map(move |&i| &self.rays[i])
    }

    /// Whether the given maximal cone contains `w`.
    pub fn cone_contains(&self, cone: usize, w: &RatVector) -> bool {
        self.hreps[cone].iter().all(|h| !h.normal.dot(w).is_negative())
    }

    /// Index of the first maximal cone containing `w`; fails only when the
    /// stored cones do not cover `w` (an incomplete fan).
    pub fn locate(&self, w: &RatVector) -> Result<usize> {
        (0..self.cones.len())
            .find(|&c| self.cone_contains(c, w))
            .ok_or(Error::NotInFan)
    }

    /// Number of maximal cones containing `w` (1 for generic directions of a
    /// complete fan).
    pub fn containment_count(&self, w: &RatVector) -> usize {
        (0..self.cones.len()).filter(|&c| self.cone_contains(c, w)).count()
    }

    /// A vector in the relative interior of the given maximal cone: the sum
    /// of its ray generators.
    pub fn interior_point(&self, cone: usize) -> RatVector {
        let mut p = RatVector::zero(self.dim);
        for r in self.cone_rays(cone) {
            p = p.add(r);
        }
        p
    }

    /// The fan with every ray negated (same combinatorics).
    pub fn reflect(&self) -> Fan {
        Fan::new(
            self.dim,
            self.rays.iter().map(RatVector::neg).collect(),
            self.cones.clone(),
        )
        .expect("reflection preserves fan validity")
    }

    /// Exact completeness certificate for simplicial fans (every maximal
    /// cone spanned by exactly `dim` rays): every wall, identified by the
    /// (dim-1)-subsets of each cone's rays, must be shared by exactly two
    /// maximal cones. A pure full-dimensional simplicial complex of cones
    /// whose boundary walls all pair up has no free boundary, and the
    /// support of a fan is a closed cone, so the support must be all of
    /// R^n.
    pub fn check_wall_complete(&self) -> Result<()> {
        let mut walls: Vec<(Vec<usize>, usize)> = Vec::new();
        for cone in &self.cones {
            if cone.len() != self.dim {
                return Err(Error::InvalidFan(
                    "wall pairing check requires a simplicial fan".into(),
                ));
            }
            for drop in 0..cone.len() {
                let mut key: Vec<usize> =
                    cone.iter().enumerate().filter(|(k, _)| *k != drop).map(|(_, &i)| i).collect();
                key.sort_unstable();
                match walls.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, count)) => *count += 1,
                    None => walls.push((key, 1)),
                }
            }
        }
        for (key, count) in &walls {
            if *count != 2 {
                let rays: Vec<String> = key.iter().map(|&i| self.rays[i].to_string()).collect();
                return Err(Error::NotComplete(format!(
                    "wall {{{}}} lies on {count} maximal cone(s), expected 2",
                    rays.join(", ")
                )));
            }
        }
        Ok(())
    }
}

/// The normal fan of a full-dimensional polytope, with the convention that
/// maximal cones are the linearity domains of `w -> min_{x in p} <x, w>`:
/// the cone attached to a vertex is spanned by the inner normals of its
/// incident facets. Rays are the inner facet normals, in facet enumeration
/// order; cones follow vertex order.
pub fn normal_fan(p: &VPolytope) -> Result<Fan> {
    let n = p.dim;
    if p.vertices.len() < n + 1 || p.affine_dim() < n {
        return Err(Error::DegeneratePolytope);
    }
    let facets = facets_with_incidence(p)?;
    let rays: Vec<RatVector> = facets.iter().map(|(h, _)| h.normal.primitive()).collect();
    let cones: Vec<Vec<usize>> = (0..p.vertices.len())
        .map(|v| {
            facets
                .iter()
                .enumerate()
                .filter(|(_, (_, inc))| inc.contains(&v))
                .map(|(f, _)| f)
                .collect()
        })
        .collect();
    Fan::new(n, rays, cones)
}

/// The common refinement of two complete fans: maximal cones are the
/// full-dimensional pairwise intersections, and rays are the union of their
/// extreme rays, in order of first appearance.
///
/// Each intersection is handled through its combined halfspace
/// representation. An extreme ray of a pointed cone has n-1 linearly
/// independent active constraints, so kernel directions of (n-1)-subsets of
/// the combined normals, filtered by feasibility, enumerate all of them; the
/// intersection is full-dimensional exactly when its extreme rays span R^n.
pub fn common_refinement(f: &Fan, g: &Fan) -> Result<Fan> {
    if f.dim != g.dim {
        return Err(Error::Dimension { expected: f.dim, got: g.dim });
    }
    let n = f.dim;
    let mut rays: Vec<RatVector> = Vec::new();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for sigma in 0..f.cones.len() {
        for tau in 0..g.cones.len() {
            let combined: Vec<&Halfspace> =
                f.hreps[sigma].iter().chain(g.hreps[tau].iter()).collect();
            let normals: Vec<&RatVector> = combined.iter().map(|h| &h.normal).collect();
            let mut extreme: Vec<RatVector> = Vec::new();
            for_each_subset(normals.len(), n.saturating_sub(1), &mut |idx| {
                let sub: Vec<&RatVector> = idx.iter().map(|&i| normals[i]).collect();
                let Some(d) = kernel_dir(&sub, n) else { return };
                for cand in [d.primitive(), d.neg().primitive()] {
                    if !extreme.contains(&cand)
                        && normals.iter().all(|nv| !nv.dot(&cand).is_negative())
                    {
                        extreme.push(cand);
                    }
                }
            });
            let refs: Vec<&RatVector> = extreme.iter().collect();
            if rank(&refs, n) != n {
                continue;
            }
            let mut cone: Vec<usize> = extreme
                .into_iter()
                .map(|r| match rays.iter().position(|x| *x == r) {
                    Some(i) => i,
                    None => {
                        rays.push(r);
                        rays.len() - 1
                    }
                })
                .collect();
            cone.sort_unstable();
            if !cones.contains(&cone) {
                cones.push(cone);
            }
        }
    }
    Fan::new(n, rays, cones)
}
