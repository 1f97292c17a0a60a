//! Small exact linear algebra over the rationals.
//!
//! Everything here targets the tiny systems (n <= 4) that arise from vertex
//! and ray enumeration, so plain fraction-full Gaussian elimination is both
//! simple and fast enough.

use num::{One, Zero};

use crate::geometry::vector::RatVector;
use crate::rational::Rat;

/// Solves the square system `rows * x = rhs`. `None` when singular.
pub fn solve(rows: &[RatVector], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.dim() == n));
    debug_assert_eq!(rhs.len(), n);
    let mut a: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.coords().to_vec();
            row.push(b.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    a[r][c] = &a[r][c] - &(&f * &a[col][c]);
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Determinant of the square matrix with the given rows.
pub fn det(rows: &[RatVector]) -> Rat {
    let n = rows.len();
    let mut a: Vec<Vec<Rat>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut result = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            a.swap(col, pivot);
            result = -result;
        }
        let p = a[col][col].clone();
        result *= &p;
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &p;
                for c in col..n {
                    a[r][c] = &a[r][c] - &(&f * &a[col][c]);
                }
            }
        }
    }
    result
}

/// Row rank of an arbitrary list of vectors in R^width.
pub fn rank(rows: &[&RatVector], width: usize) -> usize {
    let mut a: Vec<Vec<Rat>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut rank = 0;
    for col in 0..width {
        let pivot = match (rank..a.len()).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        a.swap(rank, pivot);
        let p = a[rank][col].clone();
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let f = &a[r][col] / &p;
                for c in col..width {
                    a[r][c] = &a[r][c] - &(&f * &a[rank][c]);
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// A direction spanning the kernel of the row space in R^n, provided the
/// kernel is exactly one-dimensional; `None` otherwise. The sign of the
/// returned vector is an arbitrary but deterministic choice.
pub fn kernel_dir(rows: &[&RatVector], n: usize) -> Option<RatVector> {
    let mut a: Vec<Vec<Rat>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let pivot = match (rank..a.len()).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        a.swap(rank, pivot);
        let p = a[rank][col].clone();
        for c in col..n {
            a[rank][c] = &a[rank][c] / &p;
        }
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    a[r][c] = &a[r][c] - &(&f * &a[rank][c]);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    if n - rank != 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![Rat::zero(); n];
    x[free] = Rat::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        // Pivot rows are normalized, so x[pc] = -a[row][free].
        x[pc] = -a[row][free].clone();
    }
    Some(RatVector::new(x))
}

/// Any nonzero vector in the kernel of the row space in R^n; `None` exactly
/// when the rows have full column rank.
pub fn kernel_vector(rows: &[&RatVector], n: usize) -> Option<RatVector> {
    let mut a: Vec<Vec<Rat>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let pivot = match (rank..a.len()).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        a.swap(rank, pivot);
        let p = a[rank][col].clone();
        for c in col..n {
            a[rank][c] = &a[rank][c] / &p;
        }
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    a[r][c] = &a[r][c] - &(&f * &a[rank][c]);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![Rat::zero(); n];
    x[free] = Rat::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = -a[row][free].clone();
    }
    Some(RatVector::new(x))
}

/// Inverse of the square matrix with the given rows, as rows. `None` when singular.
pub fn invert(rows: &[RatVector]) -> Option<Vec<RatVector>> {
    let n = rows.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        cols.push(solve(rows, &e)?);
    }
    // `cols[j]` is the j-th column of the inverse; transpose into rows.
    Some(
        (0..n)
            .map(|i| RatVector::new((0..n).map(|j| cols[j][i].clone()).collect()))
            .collect(),
    )
}

/// Calls `f` on every k-subset of `0..m`, in lexicographic order.
pub fn for_each_subset(m: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, m: usize, k: usize, buf: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        let remaining = k - buf.len();
        for i in start..=m.saturating_sub(remaining) {
            buf.push(i);
            rec(i + 1, m, k, buf, f);
            buf.pop();
        }
    }
    if k > m {
        return;
    }
    let mut buf = Vec::with_capacity(k);
    rec(0, m, k, &mut buf, f);
}
