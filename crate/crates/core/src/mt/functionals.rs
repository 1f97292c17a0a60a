//! Discrete Aubin–Mabuchi energy functionals and the inequality checks
//! built from them.
//!
//! All integrals are interior Riemann sums against finite-difference
//! Monge–Ampère densities. The normalizing volume V is always the discrete
//! background mass Σ det(Hess g)·hⁿ, so that identities which hold exactly
//! for the continuous functionals (multilinear scaling in λ, D = L − E,
//! J under background rescaling) hold exactly for the discrete ones too,
//! and the Jensen bound M ≥ D is a genuine Kullback–Leibler divergence
//! rather than an approximation.

use num::{One, Signed};

use crate::error::{Error, Result};
use crate::mt::grid::LogGrid;
use crate::mt::potential::{hess_at, Hess, ToricPotential, ADMISSIBILITY_TOL};
use crate::rational::{fmt_rat, rat, rat_f64, rat_i, rat_pow, Rat};

/// Relative tolerance on the raw Monge–Ampère mass of an admissible
/// potential; larger defects indicate a class change or a grid too small
/// for the potential's concentration scale.
pub const MASS_TOL: f64 = 1e-4;

fn det2(h: &Hess) -> f64 {
    h.xx * h.yy - h.xy * h.xy
}

/// Polarized determinant: D(A, A) = det A and
/// det(A + B) = det A + 2 D(A, B) + det B.
fn mixed2(a: &Hess, b: &Hess) -> f64 {
    0.5 * (a.xx * b.yy + b.xx * a.yy) - a.xy * b.xy
}

/// The multilinear sums behind E, I and J with respect to an arbitrary
/// background potential `base`:
///
///   p0 = Σ u·det(Hess base)·hⁿ      p1 = Σ u·D(Hess base, Hess u)·hⁿ
///   p2 = Σ u·det(Hess u)·hⁿ         v_base = Σ det(Hess base)·hⁿ
///
/// In dimension one p2 is identically zero and p1 uses the plain second
/// derivative of u.
struct Multi {
    p0: f64,
    p1: f64,
    p2: f64,
    #[allow(dead_code)]
    v_base: f64,
}

fn multilinear(grid: &LogGrid, base: &[f64], pot: &[f64]) -> Multi {
    let hn = grid.h().powi(grid.dim() as i32);
    let (mut p0, mut p1, mut p2, mut v) = (0.0, 0.0, 0.0, 0.0);
    grid.for_each_interior(|flat| {
        let u = pot[flat];
        let b = hess_at(base, grid, flat);
        let t = hess_at(pot, grid, flat);
        if grid.dim() == 1 {
            p0 += u * b.xx;
            p1 += u * t.xx;
            v += b.xx;
        } else {
            p0 += u * det2(&b);
            p1 += u * mixed2(&b, &t);
            p2 += u * det2(&t);
            v += det2(&b);
        }
    });
    Multi {
        p0: p0 * hn,
        p1: p1 * hn,
        p2: p2 * hn,
        v_base: v * hn,
    }
}

fn e_from(dim: usize, m: &Multi, v: f64) -> f64 {
    if dim == 1 {
        (m.p0 + 0.5 * m.p1) / v
    } else {
        (m.p0 + m.p1 + m.p2 / 3.0) / v
    }
}

fn i_from(dim: usize, m: &Multi, v: f64) -> f64 {
    if dim == 1 {
        -m.p1 / v
    } else {
        -(2.0 * m.p1 + m.p2) / v
    }
}

fn j_from(dim: usize, m: &Multi, v: f64) -> f64 {
    if dim == 1 {
        -0.5 * m.p1 / v
    } else {
        -(m.p1 + m.p2 / 3.0) / v
    }
}

fn density_of(grid: &LogGrid, vals: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; grid.total_nodes()];
    grid.for_each_interior(|flat| {
        let hs = hess_at(vals, grid, flat);
        w[flat] = if grid.dim() == 1 { hs.xx } else { det2(&hs) };
    });
    w
}

/// Evaluation context: a grid, its background density, and an optional
/// cohomological twist.
///
/// A twist parameter c is admitted only when (1 + c)·p_i = 2 for every
/// factor, i.e. when (1 + c) times the background class is the
/// anticanonical class; the symmetric background metric then has vanishing
/// Ricci-deviation potential, so the twisted functionals share the
/// untwisted formulas and c matters only for which coercivity thresholds
/// apply.
pub struct FunctionalContext {
    grid: LogGrid,
    twist: Option<Rat>,
    v: f64,
    w_g: Vec<f64>,
}

impl FunctionalContext {
    pub fn untwisted(grid: LogGrid) -> Self {
        let w_g = density_of(&grid, grid.background());
        let hn = grid.h().powi(grid.dim() as i32);
        let v = w_g.iter().sum::<f64>() * hn;
        FunctionalContext {
            grid,
            twist: None,
            v,
            w_g,
        }
    }

    pub fn twisted(grid: LogGrid, c: Rat) -> Result<Self> {
        if c.is_negative() {
            return Err(Error::Invalid(format!(
                "twist parameter {} is negative",
                fmt_rat(&c)
            )));
        }
        let factor = Rat::one() + &c;
        for p in grid.class() {
            if &factor * p != rat_i(2) {
                return Err(Error::TwistNotAdmitted(format!(
                    "(1 + {}) * {} != 2",
                    fmt_rat(&c),
                    fmt_rat(p)
                )));
            }
        }
        let mut ctx = FunctionalContext::untwisted(grid);
        ctx.twist = Some(c);
        Ok(ctx)
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn twist(&self) -> Option<&Rat> {
        self.twist.as_ref()
    }

    /// The discrete background mass used as the normalizer V.
    pub fn volume(&self) -> f64 {
        self.v
    }

    fn hn(&self) -> f64 {
        self.grid.h().powi(self.grid.dim() as i32)
    }

    fn check_len(&self, u: &ToricPotential) {
        assert_eq!(
            u.values().len(),
            self.grid.total_nodes(),
            "potential was built on a different grid"
        );
    }
}

/// Raw Monge–Ampère density of g + u at every node (zero on the boundary
/// ring), with tiny negative determinants clamped to zero. Fails when the
/// density is genuinely negative somewhere or when the total mass deviates
/// from V by more than `MASS_TOL` relative.
pub fn ma_density(ctx: &FunctionalContext, u: &ToricPotential) -> Result<Vec<f64>> {
    ctx.check_len(u);
    let combined: Vec<f64> = ctx
        .grid
        .background()
        .iter()
        .zip(u.values())
        .map(|(g, u)| g + u)
        .collect();
    let mut w = density_of(&ctx.grid, &combined);
    for (flat, value) in w.iter_mut().enumerate() {
        if *value < -ADMISSIBILITY_TOL {
            return Err(Error::NotAdmissible(format!(
                "Monge-Ampere density {value:.3e} at node {flat}"
            )));
        }
        if *value < 0.0 {
            *value = 0.0;
        }
    }
    let mass = w.iter().sum::<f64>() * ctx.hn();
    if (mass - ctx.v).abs() > MASS_TOL * ctx.v {
        return Err(Error::Invalid(format!(
            "Monge-Ampere mass {mass:.8e} deviates from the background mass {:.8e} \
             beyond tolerance; the potential changes class or concentrates outside the grid",
            ctx.v
        )));
    }
    Ok(w)
}

/// Monotone energy E(u) = (1/((n+1)V)) Σ_k ∫ u ω_uᵏ ωⁿ⁻ᵏ.
pub fn functional_e(ctx: &FunctionalContext, u: &ToricPotential) -> f64 {
    ctx.check_len(u);
    let m = multilinear(&ctx.grid, ctx.grid.background(), u.values());
    e_from(ctx.grid.dim(), &m, ctx.v)
}

/// I(u) = (1/V) ∫ u (ωⁿ − ω_uⁿ).
pub fn functional_i(ctx: &FunctionalContext, u: &ToricPotential) -> f64 {
    ctx.check_len(u);
    let m = multilinear(&ctx.grid, ctx.grid.background(), u.values());
    i_from(ctx.grid.dim(), &m, ctx.v)
}

/// J(u) = (1/V) ∫ u ωⁿ − E(u).
pub fn functional_j(ctx: &FunctionalContext, u: &ToricPotential) -> f64 {
    ctx.check_len(u);
    let m = multilinear(&ctx.grid, ctx.grid.background(), u.values());
    j_from(ctx.grid.dim(), &m, ctx.v)
}

/// L(u) = −log((1/V) ∫ e^{−u} ωⁿ), evaluated with a max-shift for
/// stability. The twisted background potential vanishes for admitted
/// twists, so no extra weight appears.
pub fn functional_l(ctx: &FunctionalContext, u: &ToricPotential) -> f64 {
    ctx.check_len(u);
    let min_u = u.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let shift = -min_u;
    let mut acc = 0.0;
    ctx.grid.for_each_interior(|flat| {
        acc += (-u.values()[flat] - shift).exp() * ctx.w_g[flat];
    });
    -(shift + (acc * ctx.hn() / ctx.v).ln())
}

/// Ding functional D = L − E.
pub fn functional_d(ctx: &FunctionalContext, u: &ToricPotential) -> f64 {
    functional_l(ctx, u) - functional_e(ctx, u)
}

/// Relative entropy (1/V) ∫ log(ω̃_uⁿ/ωⁿ) ω̃_uⁿ of the mass-renormalized
/// Monge–Ampère measure against the background measure. Vanishing density
/// nodes contribute zero (the x log x convention).
pub fn entropy(ctx: &FunctionalContext, u: &ToricPotential) -> Result<f64> {
    let w = ma_density(ctx, u)?;
    let mass = w.iter().sum::<f64>() * ctx.hn();
    if mass <= 0.0 {
        return Err(Error::ZeroDensity);
    }
    let scale = ctx.v / mass;
    let mut total = 0.0;
    ctx.grid.for_each_interior(|flat| {
        let wt = w[flat] * scale;
        if wt > 0.0 {
            total += wt * (wt / ctx.w_g[flat]).ln();
        }
    });
    Ok(total * ctx.hn() / ctx.v)
}

/// Mabuchi functional M = entropy − (I − J), with the top intersection in
/// I − J taken against the mass-renormalized density so that M − D is an
/// exact Kullback–Leibler divergence and M ≥ D holds to rounding error.
pub fn functional_m(ctx: &FunctionalContext, u: &ToricPotential) -> Result<f64> {
    let w = ma_density(ctx, u)?;
    let mass = w.iter().sum::<f64>() * ctx.hn();
    if mass <= 0.0 {
        return Err(Error::ZeroDensity);
    }
    let scale = ctx.v / mass;
    let (mut ent, mut top) = (0.0, 0.0);
    ctx.grid.for_each_interior(|flat| {
        let wt = w[flat] * scale;
        if wt > 0.0 {
            ent += wt * (wt / ctx.w_g[flat]).ln();
        }
        top += u.values()[flat] * wt;
    });
    ent *= ctx.hn() / ctx.v;
    top *= ctx.hn() / ctx.v;
    // I − J = E − (1/V) ∫ u ω_uⁿ.
    let i_minus_j = functional_e(ctx, u) - top;
    Ok(ent - i_minus_j)
}

/// Checks the Ding sandwich λⁿ⁺¹ J(u) ≤ J(λu) ≤ λ^((n+1)/n) J(u) for
/// λ ∈ (0, 1), to relative tolerance 1e-6.
pub fn ding_inequality_check(ctx: &FunctionalContext, u: &ToricPotential, lambda: f64) -> Result<bool> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Invalid(format!(
            "Ding comparison needs lambda in (0, 1), got {lambda}"
        )));
    }
    ctx.check_len(u);
    let dim = ctx.grid.dim();
    let j = functional_j(ctx, u);
    let scaled: Vec<f64> = u.values().iter().map(|v| v * lambda).collect();
    let m = multilinear(&ctx.grid, ctx.grid.background(), &scaled);
    let j_scaled = j_from(dim, &m, ctx.v);
    let n = dim as f64;
    let tol = 1e-6 * j.abs().max(1.0);
    Ok(lambda.powi(dim as i32 + 1) * j - tol <= j_scaled
        && j_scaled <= lambda.powf((n + 1.0) / n) * j + tol)
}

/// Checks (1/n) J ≤ I − J ≤ n J to relative tolerance 1e-6.
pub fn ij_sandwich_check(ctx: &FunctionalContext, u: &ToricPotential) -> bool {
    ctx.check_len(u);
    let m = multilinear(&ctx.grid, ctx.grid.background(), u.values());
    let dim = ctx.grid.dim();
    let i = i_from(dim, &m, ctx.v);
    let j = j_from(dim, &m, ctx.v);
    let n = dim as f64;
    let tol = 1e-6 * j.abs().max(1.0);
    j / n - tol <= i - j && i - j <= n * j + tol
}

const ANALYTIC_EPSILON_DENOM: i64 = 1_000_000;

/// Largest ε = k/10⁶ with (1 + ε + ε²)^(n²−1) ≤ (1 + ε − ε²)^(n²), the
/// range on which the J-functional comparison between ε-close background
/// metrics is valid. Equals 1 exactly in dimension one.
pub fn epsilon_zero_analytic(n: u32) -> Rat {
    assert!(n >= 1, "dimension must be positive");
    let holds = |k: i64| -> bool {
        let eps = rat(k, ANALYTIC_EPSILON_DENOM);
        let eps2 = &eps * &eps;
        let lhs = rat_i(1) + &eps + &eps2;
        let rhs = rat_i(1) + &eps - &eps2;
        rat_pow(&lhs, n * n - 1) <= rat_pow(&rhs, n * n)
    };
    if holds(ANALYTIC_EPSILON_DENOM) {
        return rat_i(1);
    }
    // The log-difference n²·log(1+ε−ε²) − (n²−1)·log(1+ε+ε²) has derivative
    // with numerator 1 + (3−4n²)ε + (1−2n²)ε² − 2ε³, strictly decreasing in
    // ε > 0, so the predicate is monotone on the grid and bisection applies.
    let mut lo = 0i64;
    let mut hi = ANALYTIC_EPSILON_DENOM;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    rat(lo, ANALYTIC_EPSILON_DENOM)
}

/// Compares J computed against the rescaled background (1 + ε(1 + r))·ω
/// with J against ω, for |r| ≤ ε ≤ ε₀(n): the rescaled value may not
/// exceed the original. Returns whether the inequality holds with an
/// absolute 1e-8 margin.
pub fn j_comparison_check(
    ctx: &FunctionalContext,
    u: &ToricPotential,
    r: &Rat,
    eps: &Rat,
) -> Result<bool> {
    ctx.check_len(u);
    let n = ctx.grid.dim() as u32;
    if eps.is_negative() || r.abs() > *eps || *eps > epsilon_zero_analytic(n) {
        return Err(Error::EpsilonTooLarge);
    }
    let c = Rat::one() + eps * &(Rat::one() + r);
    let c_f = rat_f64(&c);
    let scaled: Vec<f64> = ctx.grid.background().iter().map(|g| g * c_f).collect();
    let m = multilinear(&ctx.grid, &scaled, u.values());
    let dim = ctx.grid.dim();
    let j_scaled = j_from(dim, &m, c_f.powi(dim as i32) * ctx.v);
    let j = functional_j(ctx, u);
    Ok(j_scaled <= j + 1e-8)
}

/// Moser–Trudinger quotient Q_λ(u) = log((1/V) ∫ e^{−λu} ωⁿ) − λ J(u),
/// evaluated with a max-shift.
pub fn mt_quotient(ctx: &FunctionalContext, u: &ToricPotential, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Invalid(format!(
            "Moser-Trudinger exponent must be positive and finite, got {lambda}"
        )));
    }
    ctx.check_len(u);
    let min_u = u.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let shift = -lambda * min_u;
    let mut acc = 0.0;
    ctx.grid.for_each_interior(|flat| {
        acc += (-lambda * u.values()[flat] - shift).exp() * ctx.w_g[flat];
    });
    Ok(shift + (acc * ctx.hn() / ctx.v).ln() - lambda * functional_j(ctx, u))
}

/// Residual of the cocycle identity
/// J_ω(u) = J_ω(v) + J_{ω_v}(u − v) + (1/V) ∫ (u − v)(ωⁿ − ω_vⁿ),
/// which vanishes for the continuous functionals and telescopes to a
/// boundary flux for the discrete ones.
pub fn cocycle_residual(ctx: &FunctionalContext, u: &ToricPotential, v: &ToricPotential) -> f64 {
    ctx.check_len(u);
    ctx.check_len(v);
    let dim = ctx.grid.dim();
    let j_u = functional_j(ctx, u);
    let j_v = functional_j(ctx, v);
    let base_v: Vec<f64> = ctx
        .grid
        .background()
        .iter()
        .zip(v.values())
        .map(|(g, v)| g + v)
        .collect();
    let diff: Vec<f64> = u
        .values()
        .iter()
        .zip(v.values())
        .map(|(u, v)| u - v)
        .collect();
    let m_rel = multilinear(&ctx.grid, &base_v, &diff);
    let j_rel = j_from(dim, &m_rel, ctx.v);
    let m_bg = multilinear(&ctx.grid, ctx.grid.background(), &diff);
    let correction = (m_bg.p0 - m_rel.p0) / ctx.v;
    j_u - j_v - j_rel - correction
}
