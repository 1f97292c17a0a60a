//! Exact convex polytopes in dimension <= 4.
//!
//! Polytopes arrive as halfspace intersections (section polytopes of
//! divisors) or as vertex lists (test fixtures, facet recursion). At the
//! scale of this crate (a handful of constraints, dimension at most four)
//! exhaustive basic-solution enumeration is exact, allocation-light, and
//! immune to the degeneracies that trip incremental methods, so both
//! conversion directions enumerate small subsets and solve square rational
//! systems.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::linalg::{det, for_each_subset, kernel_dir, kernel_vector, rank, solve};
use crate::geometry::vector::RatVector;
use crate::rational::{rat_i, Rat};

/// The halfspace `{ x : <x, normal> >= offset }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: RatVector,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: RatVector, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &RatVector) -> bool {
        self.normal.dot(x) >= self.offset
    }

    pub fn on_boundary(&self, x: &RatVector) -> bool {
        self.normal.dot(x) == self.offset
    }
}

/// Intersection of finitely many halfspaces.
#[derive(Debug, Clone)]
pub struct HPolytope {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
}

impl HPolytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        for h in &halfspaces {
            if h.normal.dim() != dim {
                return Err(Error::Dimension { expected: dim, got: h.normal.dim() });
            }
            if h.normal.is_zero() {
                return Err(Error::Invalid("halfspace with zero normal".into()));
            }
        }
        Ok(HPolytope { dim, halfspaces })
    }

    pub fn contains(&self, x: &RatVector) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// With one additional constraint appended (used by sweep slicing).
    pub fn with_halfspace(&self, h: Halfspace) -> HPolytope {
        let mut halfspaces = self.halfspaces.clone();
        halfspaces.push(h);
        HPolytope { dim: self.dim, halfspaces }
    }
}

/// Convex hull of finitely many points, stored by its vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    pub dim: usize,
    pub vertices: Vec<RatVector>,
}

impl VPolytope {
    pub fn new(dim: usize, vertices: Vec<RatVector>) -> Result<Self> {
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::Dimension { expected: dim, got: v.dim() });
            }
        }
        Ok(VPolytope { dim, vertices })
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension of the vertex set (0 for a point, -1 encoded as 0 for empty).
    pub fn affine_dim(&self) -> usize {
        if self.vertices.len() <= 1 {
            return 0;
        }
        let diffs: Vec<RatVector> =
            self.vertices[1..].iter().map(|v| v.sub(&self.vertices[0])).collect();
        let refs: Vec<&RatVector> = diffs.iter().collect();
        rank(&refs, self.dim)
    }
}

/// A direction along which the halfspace intersection is unbounded, if any.
///
/// The recession cone `{ d : <n_i, d> >= 0 }` is nontrivial iff either the
/// normals fail to span (a whole line recedes) or some pointed extreme ray is
/// feasible; extreme rays have n-1 linearly independent active constraints,
/// so scanning kernel directions of all (n-1)-subsets is exhaustive.
pub fn recession_direction(p: &HPolytope) -> Option<RatVector> {
    let n = p.dim;
    let normals: Vec<&RatVector> = p.halfspaces.iter().map(|h| &h.normal).collect();
    if rank(&normals, n) < n {
        // The recession cone contains the whole kernel line of the normal
        // matrix, which is nontrivial exactly when the normals fail to span.
        return kernel_vector(&normals, n);
    }
    let mut found: Option<RatVector> = None;
    for_each_subset(normals.len(), n.saturating_sub(1), &mut |idx| {
        if found.is_some() {
            return;
        }
        let sub: Vec<&RatVector> = idx.iter().map(|&i| normals[i]).collect();
        if let Some(d) = kernel_dir(&sub, n) {
            if normals.iter().all(|nv| !nv.dot(&d).is_negative()) {
                found = Some(d);
            } else {
                let nd = d.neg();
                if normals.iter().all(|nv| !nv.dot(&nd).is_negative()) {
                    found = Some(nd);
                }
            }
        }
    });
    found
}

/// All vertices of a bounded halfspace intersection.
///
/// Errors with [`Error::UnboundedPolytope`] when the recession cone is
/// nontrivial; returns an empty vertex set iff the constraints are
/// infeasible. Vertices are exactly the feasible points with n linearly
/// independent active constraints, so enumerating invertible n-subsets is
/// complete even for degenerate (non-simple) polytopes.
pub fn enumerate_vertices(p: &HPolytope) -> Result<VPolytope> {
    if let Some(d) = recession_direction(p) {
        return Err(Error::UnboundedPolytope(format!("{d}")));
    }
    let n = p.dim;
    let m = p.halfspaces.len();
    let mut vertices: Vec<RatVector> = Vec::new();
    for_each_subset(m, n, &mut |idx| {
        let rows: Vec<RatVector> =
            idx.iter().map(|&i| p.halfspaces[i].normal.clone()).collect();
        let rhs: Vec<Rat> = idx.iter().map(|&i| p.halfspaces[i].offset.clone()).collect();
        if let Some(x) = solve(&rows, &rhs) {
            let x = RatVector::new(x);
            if p.contains(&x) && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
    });
    vertices.sort();
    VPolytope::new(n, vertices)
}

/// Facet-defining halfspaces of a full-dimensional vertex polytope, each
/// paired with the (sorted) indices of its incident vertices.
///
/// Every facet hyperplane is spanned by n affinely independent vertices, so
/// scanning n-subsets and keeping the one-sided hyperplanes is complete. The
/// caller must ensure full dimension; lower-dimensional input would make
/// every spanning hyperplane "one-sided" from both orientations.
pub fn facets_with_incidence(p: &VPolytope) -> Result<Vec<(Halfspace, Vec<usize>)>> {
    let n = p.dim;
    if p.vertices.len() < n + 1 {
        return Err(Error::DegeneratePolytope);
    }
    let mut facets: Vec<(Halfspace, Vec<usize>)> = Vec::new();
    let mut seen: Vec<(RatVector, Rat)> = Vec::new();
    for_each_subset(p.vertices.len(), n, &mut |idx| {
        // Hyperplane <c, x> = b through the chosen vertices: (c, b) spans the
        // kernel of the rows (v_i | -1).
        let rows: Vec<RatVector> = idx
            .iter()
            .map(|&i| {
                let mut coords = p.vertices[i].coords().to_vec();
                coords.push(-rat_i(1));
                RatVector::new(coords)
            })
            .collect();
        let refs: Vec<&RatVector> = rows.iter().collect();
        let Some(cb) = kernel_dir(&refs, n + 1) else { return };
        let c = RatVector::new(cb.coords()[..n].to_vec());
        if c.is_zero() {
            return;
        }
        let b = cb.coords()[n].clone();
        let mut pos = false;
        let mut neg = false;
        for v in &p.vertices {
            let s = c.dot(v) - &b;
            if s.is_positive() {
                pos = true;
            } else if s.is_negative() {
                neg = true;
            }
            if pos && neg {
                return;
            }
        }
        let (c, b) = if neg { (c.neg(), -b) } else { (c, b) };
        // Primitive joint normalization of (c, b) so duplicates collide.
        let mut joint = c.coords().to_vec();
        joint.push(b);
        let joint = RatVector::new(joint).primitive();
        let c = RatVector::new(joint.coords()[..n].to_vec());
        let b = joint.coords()[n].clone();
        if seen.iter().any(|(sc, sb)| *sc == c && *sb == b) {
            return;
        }
        let incident: Vec<usize> = p
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| c.dot(v) == b)
            .map(|(i, _)| i)
            .collect();
        seen.push((c.clone(), b.clone()));
        facets.push((Halfspace::new(c, b), incident));
    });
    Ok(facets)
}

/// Halfspace representation of a full-dimensional vertex polytope.
pub fn facet_halfspaces(p: &VPolytope) -> Result<HPolytope> {
    let facets = facets_with_incidence(p)?;
    HPolytope::new(p.dim, facets.into_iter().map(|(h, _)| h).collect())
}

fn cross2(a: &RatVector, b: &RatVector) -> Rat {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Counterclockwise order of planar points around an interior center.
fn angular_order(points: &[RatVector], center: &RatVector) -> Vec<usize> {
    let dirs: Vec<RatVector> = points.iter().map(|p| p.sub(center)).collect();
    let half = |d: &RatVector| -> u8 {
        // 0 for angle in [0, pi), 1 for [pi, 2pi).
        if d[1].is_positive() || (d[1].is_zero() && d[0].is_positive()) {
            0
        } else {
            1
        }
    };
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        half(&dirs[a])
            .cmp(&half(&dirs[b]))
            .then_with(|| Rat::zero().cmp(&cross2(&dirs[a], &dirs[b])))
    });
    idx
}

/// Triangulates a full-dimensional point configuration in R^dim (all points
/// extreme), returning simplices as index lists into `points`.
fn triangulate_points(points: &[RatVector], dim: usize) -> Result<Vec<Vec<usize>>> {
    debug_assert!(points.len() >= dim + 1);
    if points.len() == dim + 1 {
        return Ok(vec![(0..points.len()).collect()]);
    }
    match dim {
        1 => {
            let min = (0..points.len()).min_by_key(|&i| &points[i][0]).unwrap();
            let max = (0..points.len()).max_by_key(|&i| &points[i][0]).unwrap();
            Ok(vec![vec![min, max]])
        }
        2 => {
            let inv = rat_i(points.len() as i64);
            let mut center = RatVector::zero(2);
            for p in points {
                center = center.add(p);
            }
            center = center.scale(&(rat_i(1) / inv));
            let order = angular_order(points, &center);
            let mut tris = Vec::new();
            for k in 1..order.len() - 1 {
                tris.push(vec![order[0], order[k], order[k + 1]]);
            }
            Ok(tris)
        }
        _ => {
            let vp = VPolytope::new(dim, points.to_vec())?;
            let facets = facets_with_incidence(&vp)?;
            let apex = 0usize;
            let mut simplices = Vec::new();
            for (h, incident) in facets {
                if incident.contains(&apex) {
                    continue;
                }
                // Project the facet into R^{dim-1} by dropping a coordinate
                // in which its normal is nonzero; this is injective and
                // affine on the facet hyperplane.
                let drop = (0..dim).find(|&j| !h.normal[j].is_zero()).unwrap();
                let projected: Vec<RatVector> = incident
                    .iter()
                    .map(|&i| {
                        let coords: Vec<Rat> = points[i]
                            .coords()
                            .iter()
                            .enumerate()
                            .filter(|(j, _)| *j != drop)
                            .map(|(_, c)| c.clone())
                            .collect();
                        RatVector::new(coords)
                    })
                    .collect();
                for local in triangulate_points(&projected, dim - 1)? {
                    let mut simplex = vec![apex];
                    simplex.extend(local.into_iter().map(|l| incident[l]));
                    simplices.push(simplex);
                }
            }
            Ok(simplices)
        }
    }
}

fn simplex_volume(points: &[RatVector], simplex: &[usize], dim: usize) -> Rat {
    let base = &points[simplex[0]];
    let rows: Vec<RatVector> = simplex[1..].iter().map(|&i| points[i].sub(base)).collect();
    let mut factorial = rat_i(1);
    for k in 2..=dim as i64 {
        factorial *= rat_i(k);
    }
    det(&rows).abs() / factorial
}

/// Euclidean volume of the convex hull of the vertex set. Zero when the hull
/// is lower-dimensional (including empty and single-point input).
pub fn volume(p: &VPolytope) -> Result<Rat> {
    if p.vertices.len() < p.dim + 1 || p.affine_dim() < p.dim {
        return Ok(Rat::zero());
    }
    let simplices = triangulate_points(&p.vertices, p.dim)?;
    Ok(simplices
        .iter()
        .map(|s| simplex_volume(&p.vertices, s, p.dim))
        .sum())
}

/// Volume centroid of a full-dimensional polytope.
pub fn barycenter(p: &VPolytope) -> Result<RatVector> {
    if p.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    if p.vertices.len() < p.dim + 1 || p.affine_dim() < p.dim {
        return Err(Error::DegeneratePolytope);
    }
    let simplices = triangulate_points(&p.vertices, p.dim)?;
    let mut total = Rat::zero();
    let mut weighted = RatVector::zero(p.dim);
    let frac = rat_i(1) / rat_i((p.dim + 1) as i64);
    for s in &simplices {
        let vol = simplex_volume(&p.vertices, s, p.dim);
        let mut centroid = RatVector::zero(p.dim);
        for &i in s {
            centroid = centroid.add(&p.vertices[i]);
        }
        centroid = centroid.scale(&frac);
        weighted = weighted.add(&centroid.scale(&vol));
        total += vol;
    }
    Ok(weighted.scale(&(rat_i(1) / total)))
}

/// `(min, max)` of `<x, w>` over the vertex set.
pub fn support_extrema(p: &VPolytope, w: &RatVector) -> Result<(Rat, Rat)> {
    if p.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let mut values = p.vertices.iter().map(|v| v.dot(w));
    let first = values.next().unwrap();
    let (mut lo, mut hi) = (first.clone(), first);
    for v in values {
        if v < lo {
            lo = v.clone();
        }
        if v > hi {
            hi = v;
        }
    }
    Ok((lo, hi))
}
