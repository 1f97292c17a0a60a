//! Moser–Trudinger probes along the concentration family.
//!
//! For each exponent λ the probe walks the degenerating family u_c as
//! c → 0 and records the quotient Q_λ(u_c) together with J, I and the
//! entropy. Since J(u_c) grows like ½·log(1/c) while the exponential
//! integral stays comparable to a fixed translate, Q_λ grows like
//! (λ/2 − 1)·log(1/c): the fitted slope changes sign at the critical
//! exponent λ = 2, making boundedness of the quotient visible numerically.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mt::functionals::{entropy, functional_i, functional_j, mt_quotient, FunctionalContext};
use crate::mt::potential::concentration_potential;
use crate::rational::{fmt_sig12, rat_i};

/// One probe evaluation; `slope_fit` is the least-squares slope of the
/// quotient against log(1/c), repeated on every row of the same λ block.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProbeRow {
    pub lambda: f64,
    pub c: f64,
    pub quotient: f64,
    pub j: f64,
    pub i: f64,
    pub entropy: f64,
    pub slope_fit: f64,
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - x_mean) * (y - y_mean);
        den += (x - x_mean) * (x - x_mean);
    }
    num / den
}

/// Runs the concentration probe on a one-dimensional anticanonically
/// normalized grid (class p = 1). Needs at least two values of c per λ to
/// fit a slope.
pub fn concentration_probe(
    ctx: &FunctionalContext,
    lambdas: &[f64],
    c_values: &[f64],
) -> Result<Vec<ProbeRow>> {
    if ctx.grid().dim() != 1 || ctx.grid().class() != [rat_i(1)] {
        return Err(Error::Invalid(
            "concentration probe needs a one-dimensional grid with class p = 1".to_string(),
        ));
    }
    if lambdas.is_empty() || lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::Invalid(
            "probe exponents must be positive and finite".to_string(),
        ));
    }
    if c_values.len() < 2 || c_values.iter().any(|c| !(*c > 0.0 && *c < 1.0)) {
        return Err(Error::Invalid(
            "probe needs at least two concentration parameters in (0, 1)".to_string(),
        ));
    }
    let mut rows = Vec::with_capacity(lambdas.len() * c_values.len());
    for &lambda in lambdas {
        let mut block = Vec::with_capacity(c_values.len());
        let mut xs = Vec::with_capacity(c_values.len());
        let mut ys = Vec::with_capacity(c_values.len());
        for &c in c_values {
            let u = concentration_potential(ctx.grid(), c)?;
            let quotient = mt_quotient(ctx, &u, lambda)?;
            let j = functional_j(ctx, &u);
            let i = functional_i(ctx, &u);
            let ent = entropy(ctx, &u)?;
            xs.push(-c.ln());
            ys.push(quotient);
            block.push(ProbeRow {
                lambda,
                c,
                quotient,
                j,
                i,
                entropy: ent,
                slope_fit: 0.0,
            });
        }
        let slope = least_squares_slope(&xs, &ys);
        for row in &mut block {
            row.slope_fit = slope;
        }
        rows.extend(block);
    }
    Ok(rows)
}

pub const PROBE_CSV_HEADER: &str = "lambda,c,quotient,J,I,entropy,slope_fit";

pub fn probe_csv(rows: &[ProbeRow]) -> String {
    let mut out = String::from(PROBE_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_sig12(row.lambda),
            fmt_sig12(row.c),
            fmt_sig12(row.quotient),
            fmt_sig12(row.j),
            fmt_sig12(row.i),
            fmt_sig12(row.entropy),
            fmt_sig12(row.slope_fit),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mt::grid::LogGrid;
    use crate::rational::rat_i;

    fn probe_ctx() -> FunctionalContext {
        FunctionalContext::untwisted(LogGrid::new(1, 1537, 24.0, vec![rat_i(1)]).unwrap())
    }

    #[test]
    fn slope_crosses_zero_at_the_critical_exponent() {
        let ctx = probe_ctx();
        // For λ > 1 the exponential integral grows like c^(1−λ), so the
        // quotient slope against log(1/c) is λ/2 − 1; at λ = 1 itself the
        // integral grows only logarithmically and the fit is biased upward.
        let lambdas = [1.0, 1.5, 1.8, 2.5];
        let cs = [1e-3, 1e-4, 1e-5, 1e-6];
        let rows = concentration_probe(&ctx, &lambdas, &cs).unwrap();
        assert_eq!(rows.len(), 16);
        for row in rows.iter().filter(|r| r.lambda > 1.0) {
            let predicted = 0.5 * row.lambda - 1.0;
            assert!(
                (row.slope_fit - predicted).abs() < 0.1,
                "lambda {}: slope {} vs {}",
                row.lambda,
                row.slope_fit,
                predicted
            );
        }
        // Subcritical quotients shrink as c decreases; supercritical grow.
        let sub: Vec<&ProbeRow> = rows.iter().filter(|r| r.lambda == 1.0).collect();
        assert!(sub.iter().all(|r| r.slope_fit < -0.3));
        assert!(sub.last().unwrap().quotient < sub.first().unwrap().quotient);
        let sup: Vec<&ProbeRow> = rows.iter().filter(|r| r.lambda == 2.5).collect();
        assert!(sup.last().unwrap().quotient > sup.first().unwrap().quotient);
    }

    #[test]
    fn probe_validates_its_inputs() {
        let ctx = probe_ctx();
        assert!(concentration_probe(&ctx, &[], &[0.1, 0.01]).is_err());
        assert!(concentration_probe(&ctx, &[-1.0], &[0.1, 0.01]).is_err());
        assert!(concentration_probe(&ctx, &[1.0], &[0.1]).is_err());
        assert!(concentration_probe(&ctx, &[1.0], &[0.1, 1.5]).is_err());
        let wide =
            FunctionalContext::untwisted(LogGrid::new(1, 257, 18.0, vec![rat_i(2)]).unwrap());
        assert!(concentration_probe(&wide, &[1.0], &[0.1, 0.01]).is_err());
        let planar = FunctionalContext::untwisted(
            LogGrid::new(2, 65, 18.0, vec![rat_i(1), rat_i(1)]).unwrap(),
        );
        assert!(concentration_probe(&planar, &[1.0], &[0.1, 0.01]).is_err());
    }

    #[test]
    fn csv_has_seven_columns_per_row() {
        let ctx = FunctionalContext::untwisted(LogGrid::new(1, 257, 18.0, vec![rat_i(1)]).unwrap());
        let rows = concentration_probe(&ctx, &[1.5], &[0.1, 0.05]).unwrap();
        let csv = probe_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], PROBE_CSV_HEADER);
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), 7);
            assert!(line.contains('e'));
        }
    }
}
