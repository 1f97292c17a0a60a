//! Uniform grids in logarithmic coordinates for torus-invariant potentials.
//!
//! A Kähler class Σ p_i ω_FS,i on (ℙ¹)ⁿ restricts to torus-invariant data
//! determined by the convex background potential g(s) = Σ p_i·log(1+e^{s_i})
//! on ℝⁿ; all integrals over the variety become integrals against
//! det D²g ds over ℝⁿ, truncated here to the box [−S_max, S_max]ⁿ. The
//! total class mass is V = Π p_i, of which the box must carry all but a
//! 10⁻⁶ relative tail.

use crate::error::{Error, Result};
use crate::rational::{rat_f64, Rat};
use num::Signed;

/// Numerically stable log(1 + eˣ).
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Numerically stable logistic function eˣ/(1+eˣ).
pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// A uniform tensor grid on [−S_max, S_max]ⁿ, n ∈ {1, 2}, carrying the
/// background potential of the class p.
#[derive(Debug, Clone)]
pub struct LogGrid {
    n: usize,
    nodes: usize,
    s_max: f64,
    h: f64,
    p: Vec<Rat>,
    p_f: Vec<f64>,
    /// Background potential g at every node, row-major.
    g_vals: Vec<f64>,
}

impl LogGrid {
    /// Builds a grid, validating the discretization contract: n ∈ {1, 2},
    /// at least 64 nodes per axis, S_max ≥ 10, positive class
    /// coefficients, and analytic background mass on the box at least
    /// (1 − 10⁻⁶)·V.
    pub fn new(n: usize, nodes: usize, s_max: f64, p: Vec<Rat>) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::InvalidGrid(format!(
                "dimension {n} not supported (must be 1 or 2)"
            )));
        }
        if nodes < 64 {
            return Err(Error::InvalidGrid(format!(
                "{nodes} nodes per axis (need at least 64)"
            )));
        }
        if !s_max.is_finite() || s_max < 10.0 {
            return Err(Error::InvalidGrid(format!(
                "box half-width {s_max} (need at least 10)"
            )));
        }
        if p.len() != n {
            return Err(Error::InvalidGrid(format!(
                "{} class coefficients for dimension {n}",
                p.len()
            )));
        }
        if p.iter().any(|c| !c.is_positive()) {
            return Err(Error::InvalidGrid(
                "class coefficients must be positive".to_string(),
            ));
        }
        // Per axis the analytic box mass is p_i·(σ(S) − σ(−S)); the tail is
        // 2σ(−S) relative to p_i.
        let axis_fraction = 1.0 - 2.0 * sigmoid(-s_max);
        if axis_fraction.powi(n as i32) < 1.0 - 1e-6 {
            return Err(Error::InvalidGrid(format!(
                "background tail beyond the box exceeds 1e-6 of the class \
                 mass at half-width {s_max}"
            )));
        }

        let h = 2.0 * s_max / (nodes - 1) as f64;
        let p_f: Vec<f64> = p.iter().map(rat_f64).collect();
        let coord = |i: usize| -s_max + h * i as f64;
        let g_vals = match n {
            1 => (0..nodes).map(|i| p_f[0] * softplus(coord(i))).collect(),
            _ => {
                let mut vals = Vec::with_capacity(nodes * nodes);
                for i in 0..nodes {
                    let gx = p_f[0] * softplus(coord(i));
                    for j in 0..nodes {
                        vals.push(gx + p_f[1] * softplus(coord(j)));
                    }
                }
                vals
            }
        };
        Ok(LogGrid {
            n,
            nodes,
            s_max,
            h,
            p,
            p_f,
            g_vals,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.nodes
    }

    pub fn total_nodes(&self) -> usize {
        self.nodes.pow(self.n as u32)
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    /// Mesh width.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Exact class coefficients.
    pub fn class(&self) -> &[Rat] {
        &self.p
    }

    pub fn class_f64(&self) -> &[f64] {
        &self.p_f
    }

    /// Total class mass V = Π p_i.
    pub fn v(&self) -> f64 {
        self.p_f.iter().product()
    }

    /// Coordinate of the i-th node along an axis.
    pub fn coord(&self, i: usize) -> f64 {
        -self.s_max + self.h * i as f64
    }

    /// Background potential values at all nodes, row-major.
    pub fn background(&self) -> &[f64] {
        &self.g_vals
    }

    /// Flat index of a node from per-axis indices.
    pub fn index(&self, idx: &[usize]) -> usize {
        match self.n {
            1 => idx[0],
            _ => idx[0] * self.nodes + idx[1],
        }
    }

    /// Calls `f` with the flat index of every interior node (all per-axis
    /// indices in 1..nodes−1), in row-major order.
    pub fn for_each_interior(&self, mut f: impl FnMut(usize)) {
        match self.n {
            1 => {
                for i in 1..self.nodes - 1 {
                    f(i);
                }
            }
            _ => {
                for i in 1..self.nodes - 1 {
                    for j in 1..self.nodes - 1 {
                        f(i * self.nodes + j);
                    }
                }
            }
        }
    }

    /// Number of interior nodes.
    pub fn interior_count(&self) -> usize {
        (self.nodes - 2).pow(self.n as u32)
    }
}
