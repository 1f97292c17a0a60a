//! Builtin varieties and the text format for user-supplied ones.
//!
//! Divisor coefficients are always given in the ray order documented here:
//!
//! | name    | rays, in coefficient order                                   |
//! |---------|--------------------------------------------------------------|
//! | `P1`    | (1), (−1)                                                    |
//! | `P2`    | (1,0), (0,1), (−1,−1)                                        |
//! | `P3`    | (1,0,0), (0,1,0), (0,0,1), (−1,−1,−1)                        |
//! | `P1xP1` | (1,0), (−1,0), (0,1), (0,−1)                                 |
//! | `dP1`   | (1,0), (0,1), (−1,−1), (1,1) — plane blown up in one fixed   |
//! |         | point; the last ray is the exceptional divisor               |

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::vector::RatVector;
use crate::geometry::Fan;
use crate::rational::{parse_rat, Rat};
use crate::toric::ToricVariety;

/// The five builtin varieties by name. Returns `None` for unknown names.
pub fn builtin(name: &str) -> Option<Arc<ToricVariety>> {
    let (dim, rays, cones): (usize, Vec<Vec<i64>>, Vec<Vec<usize>>) = match name {
        "P1" => (1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]),
        "P2" => (
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        ),
        "P3" => (
            3,
            vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![-1, -1, -1],
            ],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        ),
        "P1xP1" => (
            2,
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            vec![vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]],
        ),
        "dP1" => (
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1], vec![1, 1]],
            vec![vec![0, 3], vec![3, 1], vec![1, 2], vec![2, 0]],
        ),
        _ => return None,
    };
    let rays = rays.iter().map(|r| RatVector::from_ints(r)).collect();
    let fan = Fan::new(dim, rays, cones).expect("builtin fans are well-formed");
    Some(Arc::new(ToricVariety::new(fan).expect("builtin varieties are smooth Fano")))
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 5] = ["P1", "P2", "P3", "P1xP1", "dP1"];

/// Parses the variety text format:
///
/// ```text
/// # comment
/// dim 2
/// ray 1 0
/// ray 0 1
/// ray -1 -1
/// cone 0 1
/// cone 1 2
/// cone 2 0
/// ```
///
/// One `dim` line first, then `ray` lines with integer coordinates, then
/// `cone` lines with ray indices. Blank lines and `#` comments are ignored.
pub fn parse_variety(text: &str) -> Result<Arc<ToricVariety>> {
    let mut dim: Option<usize> = None;
    let mut rays: Vec<RatVector> = Vec::new();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().unwrap();
        let rest: Vec<&str> = parts.collect();
        let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        match keyword {
            "dim" => {
                if dim.is_some() {
                    return Err(at("repeated dim line".into()));
                }
                if rest.len() != 1 {
                    return Err(at("dim takes exactly one value".into()));
                }
                let n: usize = rest[0]
                    .parse()
                    .map_err(|_| at(format!("bad dimension {:?}", rest[0])))?;
                if n == 0 || n > 4 {
                    return Err(at(format!("dimension {n} out of supported range 1..=4")));
                }
                dim = Some(n);
            }
            "ray" => {
                let n = dim.ok_or_else(|| at("ray before dim".into()))?;
                if rest.len() != n {
                    return Err(at(format!("expected {n} coordinates, got {}", rest.len())));
                }
                let coords: Vec<Rat> = rest
                    .iter()
                    .map(|s| parse_rat(s))
                    .collect::<Result<_>>()
                    .map_err(|e| at(e.to_string()))?;
                rays.push(RatVector::new(coords));
            }
            "cone" => {
                if dim.is_none() {
                    return Err(at("cone before dim".into()));
                }
                let idx: Vec<usize> = rest
                    .iter()
                    .map(|s| s.parse().map_err(|_| at(format!("bad ray index {s:?}"))))
                    .collect::<Result<_>>()?;
                cones.push(idx);
            }
            other => return Err(at(format!("unknown keyword {other:?}"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::Parse("missing dim line".into()))?;
    let fan = Fan::new(dim, rays, cones).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Arc::new(ToricVariety::new(fan)?))
}

/// Parses comma-separated divisor coefficients ("1,1,3/2,-1") and checks the
/// count against the ray count.
pub fn parse_divisor_coeffs(text: &str, ray_count: usize) -> Result<Vec<Rat>> {
    let coeffs: Vec<Rat> = text
        .split(',')
        .map(|s| parse_rat(s.trim()))
        .collect::<Result<_>>()?;
    if coeffs.len() != ray_count {
        return Err(Error::Parse(format!(
            "{} divisor coefficients for {} rays",
            coeffs.len(),
            ray_count
        )));
    }
    Ok(coeffs)
}
