//! Behaviour of the stability threshold along paths in the big cone.
//!
//! Three executable facts about δ are exercised here, all in exact rational
//! arithmetic:
//!
//! * **Scaling**: λ·δ(λL) = δ(L).
//! * **Comparison**: for ε below an explicit dimensional bound ε₀(n) and a
//!   perturber L_ε with both (1+ε)L − L_ε and L_ε − (1−ε)L big,
//!   δ(L + εL_ε) ≤ δ(L) ≤ δ(L − εL_ε).
//! * **Continuity**: along a segment L + γS inside the big cone, consecutive
//!   δ samples stay inside the envelope (1−ε)δ ≤ δ' ≤ (1+ε)δ for an ε
//!   reconstructed from the comparison principle at that step size.
//!
//! Sweeps along a segment emit one row per sample and serialize to CSV, with
//! rows that leave the big cone flagged rather than dropped.

use num::{One, Signed};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, fmt_sig12, rat, rat_f64, rat_i, rat_pow, Rat};
use crate::thresholds::{alpha, beta, delta, ToricValuation};
use crate::toric::ToricRDivisor;

/// Denominator of the grid on which ε₀ is bisected.
const EPSILON_ZERO_DENOM: i64 = 1_000_000;

/// Denominator of the grid on which the sweep's per-step ε is reconstructed.
const ENVELOPE_DENOM: i64 = 1024;

/// The explicit bound ε₀(n) below which the comparison principle applies:
/// the largest ε on the grid ℤ/10⁶ with
/// (1 + ε − ε²)^{n+1} ≥ (1 + ε + ε²)ⁿ.
///
/// The log-ratio of the two sides has derivative with numerator
/// 1 − (4n+1)ε − (2n+1)ε² − 2ε³, strictly decreasing for ε > 0, so the
/// inequality holds exactly on an initial segment [0, ε̄] and grid bisection
/// finds its last grid point exactly.
pub fn epsilon_zero(n: u32) -> Rat {
    assert!(n >= 1, "dimension must be at least 1");
    let holds = |k: i64| -> bool {
        let eps = rat(k, EPSILON_ZERO_DENOM);
        let eps2 = &eps * &eps;
        let minus = Rat::one() + &eps - &eps2;
        let plus = Rat::one() + &eps + &eps2;
        rat_pow(&minus, n + 1) >= rat_pow(&plus, n)
    };
    // holds(0) is equality; holds(10⁶) compares 1 against 3ⁿ and fails.
    let (mut lo, mut hi) = (0i64, EPSILON_ZERO_DENOM);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    rat(lo, EPSILON_ZERO_DENOM)
}

fn same_variety(a: &ToricRDivisor, b: &ToricRDivisor) -> Result<()> {
    if std::sync::Arc::ptr_eq(a.variety(), b.variety()) {
        Ok(())
    } else {
        Err(Error::Invalid(
            "divisors live on different varieties".to_string(),
        ))
    }
}

/// Result of one comparison-principle evaluation: the three exact thresholds
/// and whether they form the expected chain.
#[derive(Debug, Clone)]
pub struct ComparisonOutcome {
    /// δ(L + εL_ε) ≤ δ(L) ≤ δ(L − εL_ε).
    pub holds: bool,
    /// δ(L + εL_ε).
    pub delta_plus: Rat,
    /// δ(L).
    pub delta_base: Rat,
    /// δ(L − εL_ε).
    pub delta_minus: Rat,
}

/// Evaluates the comparison chain δ(L+εL_ε) ≤ δ(L) ≤ δ(L−εL_ε) exactly.
///
/// Preconditions: 0 < ε < ε₀(n), and both (1+ε)L − L_ε and L_ε − (1−ε)L
/// big; violations error with [`Error::EpsilonTooLarge`] and
/// [`Error::HypothesisViolated`] respectively.
pub fn comparison_check(
    l: &ToricRDivisor,
    l_eps: &ToricRDivisor,
    eps: &Rat,
) -> Result<ComparisonOutcome> {
    same_variety(l, l_eps)?;
    let n = l.variety().dim() as u32;
    if !eps.is_positive() || *eps >= epsilon_zero(n) {
        return Err(Error::EpsilonTooLarge);
    }
    let upper = l.scale(&(Rat::one() + eps)).add_scaled(l_eps, &-Rat::one());
    if !upper.is_big()? {
        return Err(Error::HypothesisViolated(
            "(1+eps)*L - L_eps is not big".to_string(),
        ));
    }
    let lower = l_eps.add_scaled(l, &-(Rat::one() - eps));
    if !lower.is_big()? {
        return Err(Error::HypothesisViolated(
            "L_eps - (1-eps)*L is not big".to_string(),
        ));
    }
    let (delta_base, _) = delta(l)?;
    let (delta_plus, _) = delta(&l.add_scaled(l_eps, eps))?;
    let (delta_minus, _) = delta(&l.add_scaled(l_eps, &-eps.clone()))?;
    let holds = delta_plus <= delta_base && delta_base <= delta_minus;
    Ok(ComparisonOutcome {
        holds,
        delta_plus,
        delta_base,
        delta_minus,
    })
}

/// Asserts λ·δ(λL) = δ(L) exactly for every supplied λ > 0.
pub fn scaling_check(l: &ToricRDivisor, lambdas: &[Rat]) -> Result<bool> {
    let (d, _) = delta(l)?;
    for lambda in lambdas {
        if !lambda.is_positive() {
            return Err(Error::Invalid(format!(
                "scale factor {} is not positive",
                fmt_rat(lambda)
            )));
        }
        let (d_scaled, _) = delta(&l.scale(lambda))?;
        if d_scaled * lambda != d {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A segment L + γS, γ ∈ [gamma_min, gamma_max], sampled at `steps` evenly
/// spaced points.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: ToricRDivisor,
    pub direction: ToricRDivisor,
    pub gamma_min: Rat,
    pub gamma_max: Rat,
    pub steps: usize,
}

/// Per-row annotations for sweep output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFlag {
    /// The sample left the big cone; all value columns are empty.
    NotBig,
    /// The sample is big but not ample; s and β are empty.
    NotAmple,
    /// No admissible ε ≤ ε₀ exists at this step size, so the envelope
    /// against the previous row was not checked.
    EnvelopeSkipped,
}

impl SweepFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepFlag::NotBig => "not_big",
            SweepFlag::NotAmple => "not_ample",
            SweepFlag::EnvelopeSkipped => "envelope_skipped",
        }
    }
}

/// One sample of a continuity sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub gamma: Rat,
    pub delta: Option<Rat>,
    pub delta_witness: Option<ToricValuation>,
    pub alpha: Option<Rat>,
    pub s: Option<Rat>,
    pub beta: Option<Rat>,
    pub vol: Option<Rat>,
    /// The reconstructed modulus used for the envelope check against the
    /// previous row; absent on the first row and on skipped steps.
    pub envelope_eps: Option<Rat>,
    pub flags: Vec<SweepFlag>,
}

fn compute_row(spec: &SweepSpec, gamma: &Rat) -> Result<SweepRow> {
    let l = spec.base.add_scaled(&spec.direction, gamma);
    let mut row = SweepRow {
        gamma: gamma.clone(),
        delta: None,
        delta_witness: None,
        alpha: None,
        s: None,
        beta: None,
        vol: None,
        envelope_eps: None,
        flags: Vec::new(),
    };
    if !l.is_big()? {
        row.flags.push(SweepFlag::NotBig);
        return Ok(row);
    }
    let (d, w) = delta(&l)?;
    let (a, _) = alpha(&l)?;
    row.delta = Some(d);
    row.delta_witness = Some(w);
    row.alpha = Some(a);
    row.vol = Some(l.vol()?);
    if l.is_ample() {
        row.s = Some(l.nef_threshold()?);
        row.beta = Some(beta(&l)?);
    } else {
        row.flags.push(SweepFlag::NotAmple);
    }
    Ok(row)
}

/// Smallest grid ε for which the step decomposition is admissible.
///
/// The step L → L' = L + γ_step·S factors as L' = (L + εL_ε)/(1+ε) with
/// L_ε = L + ((1+ε)γ_step/ε)·S; applying the comparison principle at L (for
/// the upper envelope bound) and at L' (for the lower one) requires the four
/// divisors εL ± cS and εL' ± cS to be big, where c = (1+ε)γ_step/ε.
/// Dividing by ε, the requirement is that L ± tS and L' ± tS are big with
/// t = (1+ε)γ_step/ε², a strictly decreasing function of ε; since the big
/// cone is convex, admissibility is therefore upward closed in ε and binary
/// search on the grid finds the smallest admissible point.
fn smallest_step_epsilon(
    l: &ToricRDivisor,
    l_next: &ToricRDivisor,
    direction: &ToricRDivisor,
    gamma_step: &Rat,
    eps_zero: &Rat,
) -> Result<Option<Rat>> {
    let admissible = |k: i64| -> Result<bool> {
        let eps = rat(k, ENVELOPE_DENOM);
        let c = (Rat::one() + &eps) * gamma_step / &eps;
        for base in [l, l_next] {
            for sign in [Rat::one(), -Rat::one()] {
                let hyp = base.scale(&eps).add_scaled(direction, &(&sign * &c));
                if !hyp.is_big()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    // Largest grid point strictly below ε₀.
    let mut k_max = (eps_zero * rat_i(ENVELOPE_DENOM)).floor().to_integer();
    if Rat::from_integer(k_max.clone()) == eps_zero * rat_i(ENVELOPE_DENOM) {
        k_max -= 1;
    }
    let k_max = match num::ToPrimitive::to_i64(&k_max) {
        Some(k) if k >= 1 => k,
        _ => return Ok(None),
    };
    if !admissible(k_max)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0i64, k_max);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if admissible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(rat(hi, ENVELOPE_DENOM)))
}

/// Samples δ, α, s, β, and vol along the segment and verifies the
/// continuity envelope between consecutive big samples.
///
/// Rows outside the big cone are flagged `not_big` and carried along; steps
/// with no admissible ε are flagged `envelope_skipped` on the later row. An
/// actual envelope violation is an error, since the comparison principle
/// guarantees the bound whenever its hypotheses hold.
pub fn continuity_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    same_variety(&spec.base, &spec.direction)?;
    if spec.steps < 2 {
        return Err(Error::Invalid(
            "a sweep needs at least 2 steps".to_string(),
        ));
    }
    if spec.gamma_min > spec.gamma_max {
        return Err(Error::Invalid("empty gamma range".to_string()));
    }
    let span = &spec.gamma_max - &spec.gamma_min;
    let gammas: Vec<Rat> = (0..spec.steps)
        .map(|k| &spec.gamma_min + &span * rat(k as i64, (spec.steps - 1) as i64))
        .collect();
    let mut rows: Vec<SweepRow> = gammas
        .par_iter()
        .map(|g| compute_row(spec, g))
        .collect::<Result<Vec<_>>>()?;

    let eps_zero = epsilon_zero(spec.base.variety().dim() as u32);
    for i in 1..rows.len() {
        if rows[i - 1].delta.is_none() || rows[i].delta.is_none() {
            continue;
        }
        let gamma_step = &rows[i].gamma - &rows[i - 1].gamma;
        let l = spec.base.add_scaled(&spec.direction, &rows[i - 1].gamma);
        let l_next = spec.base.add_scaled(&spec.direction, &rows[i].gamma);
        match smallest_step_epsilon(&l, &l_next, &spec.direction, &gamma_step, &eps_zero)? {
            None => rows[i].flags.push(SweepFlag::EnvelopeSkipped),
            Some(eps) => {
                let d_prev = rows[i - 1].delta.as_ref().unwrap();
                let d_here = rows[i].delta.as_ref().unwrap();
                let low = (Rat::one() - &eps) * d_prev;
                let high = (Rat::one() + &eps) * d_prev;
                if *d_here < low || *d_here > high {
                    return Err(Error::DiscontinuousData(format!(
                        "continuity envelope violated at gamma = {}: delta jumped from {} to {} \
                         with modulus {}",
                        fmt_rat(&rows[i].gamma),
                        fmt_rat(d_prev),
                        fmt_rat(d_here),
                        fmt_rat(&eps),
                    )));
                }
                rows[i].envelope_eps = Some(eps);
            }
        }
    }
    Ok(rows)
}

pub const SWEEP_CSV_HEADER: &str = "gamma,delta,delta_witness,alpha,s,beta,vol,flags";

fn witness_cell(w: &Option<ToricValuation>) -> String {
    match w {
        None => String::new(),
        Some(w) => w
            .vector()
            .coords()
            .iter()
            .map(fmt_rat)
            .collect::<Vec<_>>()
            .join(" "),
    }
}

fn flags_cell(flags: &[SweepFlag]) -> String {
    flags
        .iter()
        .map(|f| f.as_str())
        .collect::<Vec<_>>()
        .join(";")
}

fn sweep_csv_with(rows: &[SweepRow], cell: impl Fn(&Rat) -> String) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    let opt = |r: &Option<Rat>| r.as_ref().map(&cell).unwrap_or_default();
    for row in rows {
        let cells = [
            cell(&row.gamma),
            opt(&row.delta),
            witness_cell(&row.delta_witness),
            opt(&row.alpha),
            opt(&row.s),
            opt(&row.beta),
            opt(&row.vol),
            flags_cell(&row.flags),
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// CSV with rationals rendered as decimals with 12 significant digits.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    sweep_csv_with(rows, |r| fmt_sig12(rat_f64(r)))
}

/// CSV with rationals rendered exactly as `p/q`; same shape as
/// [`sweep_csv`], intended as its sibling artifact.
pub fn sweep_csv_exact(rows: &[SweepRow]) -> String {
    sweep_csv_with(rows, fmt_rat)
}
