//! Aggregate report for the stability thresholds of a single divisor.
//!
//! A [`ThresholdReport`] collects everything the threshold machinery can say
//! about one big divisor: the stability threshold δ with its minimizing
//! valuation, the α-invariant with its witness, the volume, and — when the
//! divisor is ample — the nef threshold s, the greatest Ricci lower bound
//! β = min(s, δ), the slope μ, and the pass/fail results of the exact
//! inequality checks.
//!
//! Reports serialize to JSON (exact rationals as `"p/q"` strings with a
//! decimal convenience field) and to a single CSV row.

use num::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, fmt_sig12, rat_f64, Rat};
use crate::thresholds::{
    alpha, beta, bishop_check, csck_criterion, delta, sandwich_check, ToricValuation,
};
use crate::toric::ToricRDivisor;

/// An exact rational together with its decimal approximation.
///
/// The exact string is authoritative; the decimal exists only for plotting
/// and eyeballing and is never used in comparisons.
#[derive(Debug, Clone, Serialize)]
pub struct RatField {
    pub exact: String,
    pub decimal: f64,
}

impl RatField {
    pub fn new(value: &Rat) -> Self {
        RatField {
            exact: fmt_rat(value),
            decimal: rat_f64(value),
        }
    }
}

/// Results of the exact inequality checks that apply to ample divisors.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityChecks {
    /// δⁿ·vol ≤ (n+1)ⁿ.
    pub bishop: bool,
    /// (n+1)/n·α ≤ δ.
    pub sandwich_lower: bool,
    /// δ ≤ (n+1)·α.
    pub sandwich_upper: bool,
    /// Sufficient criterion for a constant-scalar-curvature metric, run with
    /// the default lower bound (n+1)/n·α; absent when the slope is undefined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csck: Option<bool>,
}

/// Everything the exact machinery reports about one big divisor.
///
/// The fields `s`, `beta`, `mu`, and `checks` are present only when the
/// divisor is ample (`mu` additionally requires the slope to be defined).
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub delta: RatField,
    pub delta_witness: Vec<i64>,
    pub alpha: RatField,
    pub alpha_witness: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<RatField>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<RatField>,
    pub vol: RatField,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<RatField>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<InequalityChecks>,
    pub notes: Vec<String>,
}

fn witness_ints(w: &ToricValuation) -> Vec<i64> {
    w.vector()
        .coords()
        .iter()
        .map(|c| {
            c.to_integer()
                .to_i64()
                .expect("witness coordinates fit in i64")
        })
        .collect()
}

/// Computes the full report for a big divisor.
///
/// Errors with [`Error::NotBig`] when the divisor is not big; ample-only
/// fields are left absent for big non-ample divisors.
pub fn threshold_report(l: &ToricRDivisor) -> Result<ThresholdReport> {
    let (delta_value, delta_w) = delta(l)?;
    let (alpha_value, alpha_w) = alpha(l)?;
    let vol = l.vol()?;

    let mut report = ThresholdReport {
        delta: RatField::new(&delta_value),
        delta_witness: witness_ints(&delta_w),
        alpha: RatField::new(&alpha_value),
        alpha_witness: witness_ints(&alpha_w),
        s: None,
        beta: None,
        vol: RatField::new(&vol),
        mu: None,
        checks: None,
        notes: vec![
            "delta is minimized over torus-invariant valuations; agreement with the \
             infimum over all prime divisors over X is a standard identification \
             assumed here, not proved"
                .to_string(),
        ],
    };

    if l.is_ample() {
        report.s = Some(RatField::new(&l.nef_threshold()?));
        report.beta = Some(RatField::new(&beta(l)?));
        let mu = match l.slope() {
            Ok(mu) => Some(mu),
            Err(Error::SlopeUndefined(_)) => None,
            Err(e) => return Err(e),
        };
        report.mu = mu.as_ref().map(RatField::new);
        let (sandwich_lower, sandwich_upper) = sandwich_check(l)?;
        report.checks = Some(InequalityChecks {
            bishop: bishop_check(l)?.holds,
            sandwich_lower,
            sandwich_upper,
            csck: match mu {
                Some(_) => Some(csck_criterion(l, None)?),
                None => None,
            },
        });
    }

    Ok(report)
}

impl ThresholdReport {
    /// Pretty-printed JSON with a trailing newline; byte-deterministic for
    /// fixed input.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn csv_header() -> &'static str {
        "delta,delta_decimal,delta_witness,alpha,alpha_decimal,alpha_witness,\
         s,s_decimal,beta,beta_decimal,vol,vol_decimal,mu,mu_decimal,\
         bishop,sandwich_lower,sandwich_upper,csck"
    }

    /// One CSV data row matching [`ThresholdReport::csv_header`]; absent
    /// fields serialize as empty cells, witnesses as space-separated
    /// coordinates.
    pub fn csv_row(&self) -> String {
        fn rat_cells(field: Option<&RatField>) -> [String; 2] {
            match field {
                Some(f) => [f.exact.clone(), fmt_sig12(f.decimal)],
                None => [String::new(), String::new()],
            }
        }
        fn witness_cell(w: &[i64]) -> String {
            w.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        }
        fn bool_cell(b: Option<bool>) -> String {
            b.map(|b| b.to_string()).unwrap_or_default()
        }

        let mut cells = Vec::new();
        cells.extend(rat_cells(Some(&self.delta)));
        cells.push(witness_cell(&self.delta_witness));
        cells.extend(rat_cells(Some(&self.alpha)));
        cells.push(witness_cell(&self.alpha_witness));
        cells.extend(rat_cells(self.s.as_ref()));
        cells.extend(rat_cells(self.beta.as_ref()));
        cells.extend(rat_cells(Some(&self.vol)));
        cells.extend(rat_cells(self.mu.as_ref()));
        let checks = self.checks.as_ref();
        cells.push(bool_cell(checks.map(|c| c.bishop)));
        cells.push(bool_cell(checks.map(|c| c.sandwich_lower)));
        cells.push(bool_cell(checks.map(|c| c.sandwich_upper)));
        cells.push(bool_cell(checks.and_then(|c| c.csck)));
        cells.join(",")
    }

    /// Complete CSV document: header line plus the single data row.
    pub fn to_csv(&self) -> String {
        format!("{}\n{}\n", Self::csv_header(), self.csv_row())
    }
}
