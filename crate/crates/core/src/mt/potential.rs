//! Torus-invariant Kähler potentials on a log-coordinate grid.
//!
//! A potential is a vector of node values u with sup-normalization
//! max u = 0; it is admissible when the finite-difference Hessian of g + u
//! is positive semidefinite (to tolerance) at every interior node, which is
//! the discrete counterpart of ω_u ≥ 0.

use rand::Rng;

use crate::error::{Error, Result};
use crate::mt::grid::{softplus, LogGrid};

/// Eigenvalue tolerance for the positive-semidefiniteness check.
pub(crate) const ADMISSIBILITY_TOL: f64 = 1e-8;

/// Symmetric finite-difference Hessian at an interior node; `yy` and `xy`
/// are zero in dimension one.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Hess {
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
}

/// Finite-difference Hessian of the node values at an interior node.
///
/// Diagonal entries use the centered second difference. The mixed entry
/// uses the forward-forward stencil: among the short stencils it is the one
/// whose polarized determinant telescopes over the interior, so the
/// discrete Monge–Ampère mass Σ det·hⁿ is conserved exactly up to boundary
/// flux.
pub(crate) fn hess_at(vals: &[f64], grid: &LogGrid, flat: usize) -> Hess {
    let h2 = grid.h() * grid.h();
    match grid.dim() {
        1 => {
            let xx = (vals[flat + 1] - 2.0 * vals[flat] + vals[flat - 1]) / h2;
            Hess {
                xx,
                yy: 0.0,
                xy: 0.0,
            }
        }
        _ => {
            let n = grid.nodes_per_axis();
            let (i, j) = (flat / n, flat % n);
            let at = |a: usize, b: usize| vals[a * n + b];
            let xx = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / h2;
            let yy = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / h2;
            let xy = (at(i + 1, j + 1) - at(i + 1, j) - at(i, j + 1) + at(i, j)) / h2;
            Hess { xx, yy, xy }
        }
    }
}

/// Smallest eigenvalue of the Hessian (the entry itself in dimension one).
pub(crate) fn min_eigenvalue(h: &Hess, dim: usize) -> f64 {
    if dim == 1 {
        h.xx
    } else {
        let half_tr = 0.5 * (h.xx + h.yy);
        let radius = (0.25 * (h.xx - h.yy).powi(2) + h.xy * h.xy).sqrt();
        half_tr - radius
    }
}

fn check_admissible(grid: &LogGrid, values: &[f64]) -> Result<()> {
    if values.len() != grid.total_nodes() {
        return Err(Error::Invalid(format!(
            "{} potential values for {} grid nodes",
            values.len(),
            grid.total_nodes()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("potential values"));
    }
    let combined: Vec<f64> = grid
        .background()
        .iter()
        .zip(values)
        .map(|(g, u)| g + u)
        .collect();
    let mut worst: Option<(usize, f64)> = None;
    grid.for_each_interior(|flat| {
        let lambda = min_eigenvalue(&hess_at(&combined, grid, flat), grid.dim());
        if lambda < -ADMISSIBILITY_TOL && worst.map_or(true, |(_, w)| lambda < w) {
            worst = Some((flat, lambda));
        }
    });
    if let Some((flat, lambda)) = worst {
        return Err(Error::NotAdmissible(format!(
            "Hessian eigenvalue {lambda:.3e} at node {flat}"
        )));
    }
    Ok(())
}

/// A sup-normalized admissible potential: node values with max 0 and
/// ω_u ≥ 0 in the finite-difference sense.
#[derive(Debug, Clone)]
pub struct ToricPotential {
    values: Vec<f64>,
}

impl ToricPotential {
    /// Sup-normalizes the values (subtracting their maximum) and checks
    /// admissibility.
    pub fn new(grid: &LogGrid, mut values: Vec<f64>) -> Result<Self> {
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::NonFinite("potential values"));
        }
        for v in &mut values {
            *v -= max;
        }
        check_admissible(grid, &values)?;
        Ok(ToricPotential { values })
    }

    /// Checks admissibility but skips sup-normalization; evaluation of the
    /// energy functionals is well defined either way, and translation
    /// identities are stated on un-normalized potentials.
    pub fn new_unnormalized(grid: &LogGrid, values: Vec<f64>) -> Result<Self> {
        check_admissible(grid, &values)?;
        Ok(ToricPotential { values })
    }

    /// The zero potential.
    pub fn zero(grid: &LogGrid) -> Self {
        ToricPotential {
            values: vec![0.0; grid.total_nodes()],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// λ·u; admissible for λ ∈ [0, 1] because the Hessian condition is
    /// preserved under convex combination with the zero potential.
    pub fn scaled(&self, grid: &LogGrid, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Invalid(format!(
                "scaling factor {lambda} outside [0, 1]"
            )));
        }
        let values = self.values.iter().map(|v| v * lambda).collect();
        ToricPotential::new_unnormalized(grid, values)
    }
}

/// Evaluates `f` at the coordinates of every node, row-major.
pub fn build_values(grid: &LogGrid, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
    let nodes = grid.nodes_per_axis();
    match grid.dim() {
        1 => (0..nodes).map(|i| f(&[grid.coord(i)])).collect(),
        _ => {
            let mut vals = Vec::with_capacity(nodes * nodes);
            for i in 0..nodes {
                for j in 0..nodes {
                    vals.push(f(&[grid.coord(i), grid.coord(j)]));
                }
            }
            vals
        }
    }
}

fn mixture_values(grid: &LogGrid, taus: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    let p = grid.class_f64().to_vec();
    build_values(grid, |s| {
        let mut total = 0.0;
        for (tau, w) in taus.iter().zip(weights) {
            let translated: f64 = s
                .iter()
                .zip(&p)
                .zip(tau)
                .map(|((si, pi), ti)| pi * softplus(si - ti))
                .sum();
            total += w * translated;
        }
        let background: f64 = s.iter().zip(&p).map(|(si, pi)| pi * softplus(*si)).sum();
        total - background
    })
}

fn bump_values(grid: &LogGrid, center: &[f64], radius: f64, amplitude: f64) -> Vec<f64> {
    build_values(grid, |s| {
        let t2: f64 = s
            .iter()
            .zip(center)
            .map(|(si, mi)| ((si - mi) / radius).powi(2))
            .sum();
        if t2 < 1.0 {
            amplitude * (1.0 - t2).powi(3)
        } else {
            0.0
        }
    })
}

/// Draws a random admissible potential: a convex mixture of translated
/// copies of the background (admissible exactly) plus, half the time, a
/// small compactly supported bump whose amplitude is halved until the
/// Hessian check passes.
pub fn random_admissible(grid: &LogGrid, rng: &mut impl Rng) -> ToricPotential {
    let n = grid.dim();
    let count = rng.gen_range(1..=3usize);
    let taus: Vec<Vec<f64>> = (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let raw: Vec<f64> = (0..count).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let mixture = mixture_values(grid, &taus, &weights);

    let mut bump = if rng.gen_bool(0.5) {
        let center: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let amplitude = 0.02 * rng.gen_range(0.0..1.0);
        Some(bump_values(grid, &center, 2.0, amplitude))
    } else {
        None
    };

    loop {
        let values = match &bump {
            None => mixture.clone(),
            Some(b) => mixture.iter().zip(b).map(|(m, b)| m + b).collect(),
        };
        match ToricPotential::new(grid, values) {
            Ok(u) => return u,
            Err(_) => match &mut bump {
                None => unreachable!("translated-background mixtures are admissible"),
                Some(b) => {
                    let peak = b.iter().cloned().fold(0.0f64, |a, v| a.max(v.abs()));
                    if peak < 1e-12 {
                        bump = None;
                    } else {
                        for v in b.iter_mut() {
                            *v *= 0.5;
                        }
                    }
                }
            },
        }
    }
}

/// The concentration family u_c(s) = log((eˢ + c)/(eˢ + 1)), c ∈ (0, 1):
/// a translated background, degenerating to a point mass at s = log c as
/// c → 0. Dimension one only.
pub fn concentration_potential(grid: &LogGrid, c: f64) -> Result<ToricPotential> {
    if grid.dim() != 1 {
        return Err(Error::Invalid(
            "concentration family is one-dimensional".to_string(),
        ));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Invalid(format!(
            "concentration parameter {c} outside (0, 1)"
        )));
    }
    let ln_c = c.ln();
    let values = build_values(grid, |s| ln_c + softplus(s[0] - ln_c) - softplus(s[0]));
    ToricPotential::new(grid, values)
}
