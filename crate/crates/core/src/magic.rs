//! Exact counting and enumeration of k x k magic squares with magic
//! constant N (all row and column sums equal N).
//!
//! The fast counter runs a row-by-row dynamic program whose state is the
//! vector of residual column budgets; because the completion count is
//! symmetric under permuting columns, states are memoized on the sorted
//! residual vector. A plain unsorted-key DP is kept as the correctness
//! oracle for small sizes.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// k x k nonnegative matrix with all row and column sums equal to N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagicSquare {
    pub size: usize,
    pub magic_constant: u64,
    pub entries: Vec<Vec<u64>>,
}

impl MagicSquare {
    pub fn validate(&self) -> bool {
        if self.entries.len() != self.size {
            return false;
        }
        for row in &self.entries {
            if row.len() != self.size || row.iter().sum::<u64>() != self.magic_constant {
                return false;
            }
        }
        (0..self.size).all(|j| {
            self.entries.iter().map(|r| r[j]).sum::<u64>() == self.magic_constant
        })
    }

    pub fn transpose(&self) -> MagicSquare {
        let entries = (0..self.size)
            .map(|j| self.entries.iter().map(|r| r[j]).collect())
            .collect();
        MagicSquare {
            size: self.size,
            magic_constant: self.magic_constant,
            entries,
        }
    }
}

/// Exact S_k(N) via the sorted-residual DP.
pub fn count_magic_squares(k: usize, n: u64) -> BigUint {
    assert!(k >= 1);
    let mut memo = HashMap::new();
    let mut res = vec![n; k];
    res.sort_unstable();
    count_rec(k as u32, &res, n, &mut memo)
}

fn count_rec(
    rows_left: u32,
    residuals: &[u64],
    n: u64,
    memo: &mut HashMap<(u32, Vec<u64>), BigUint>,
) -> BigUint {
    if rows_left == 0 {
        // Row sums force the residuals to zero once no rows remain.
        return BigUint::one();
    }
    let key = (rows_left, residuals.to_vec());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let mut total = BigUint::zero();
    let mut row = vec![0u64; residuals.len()];
    compositions_bounded(n, residuals, 0, &mut row, &mut |row| {
        let mut child: Vec<u64> = residuals.iter().zip(row).map(|(r, c)| r - c).collect();
        child.sort_unstable();
        total += count_rec(rows_left - 1, &child, n, memo);
    });
    memo.insert(key, total.clone());
    total
}

/// Oracle variant: identical DP but memoized on the raw residual vector.
pub fn count_magic_squares_plain(k: usize, n: u64) -> BigUint {
    assert!(k >= 1);
    let mut memo = HashMap::new();
    count_plain_rec(k as u32, &vec![n; k], n, &mut memo)
}

fn count_plain_rec(
    rows_left: u32,
    residuals: &[u64],
    n: u64,
    memo: &mut HashMap<(u32, Vec<u64>), BigUint>,
) -> BigUint {
    if rows_left == 0 {
        return BigUint::one();
    }
    let key = (rows_left, residuals.to_vec());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let mut total = BigUint::zero();
    let mut row = vec![0u64; residuals.len()];
    compositions_bounded(n, residuals, 0, &mut row, &mut |row| {
        let child: Vec<u64> = residuals.iter().zip(row).map(|(r, c)| r - c).collect();
        total += count_plain_rec(rows_left - 1, &child, n, memo);
    });
    memo.insert(key, total.clone());
    total
}

/// Enumerate compositions of `target` into parts bounded by `bounds`, in
/// lexicographic order of the part vector.
fn compositions_bounded(
    target: u64,
    bounds: &[u64],
    idx: usize,
    row: &mut Vec<u64>,
    emit: &mut impl FnMut(&[u64]),
) {
    if idx == bounds.len() {
        if target == 0 {
            emit(row);
        }
        return;
    }
    // Feasibility pruning: the remaining bounds must be able to absorb target.
    let suffix: u64 = bounds[idx + 1..].iter().sum();
    let lo = target.saturating_sub(suffix);
    let hi = target.min(bounds[idx]);
    if lo > hi {
        return;
    }
    for c in lo..=hi {
        row[idx] = c;
        compositions_bounded(target - c, bounds, idx + 1, row, emit);
    }
}

/// Every magic square exactly once, lexicographic row-major order. Errors if
/// the total count exceeds `cap`.
pub fn enumerate_magic_squares(k: usize, n: u64, cap: u64) -> Result<Vec<MagicSquare>> {
    assert!(k >= 1);
    let count = count_magic_squares(k, n);
    if count > BigUint::from(cap) {
        return Err(Error::CapExceeded(format!(
            "S_{k}({n}) = {count} exceeds the enumeration cap {cap}"
        )));
    }
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    enum_rec(k, n, &mut vec![n; k], &mut rows, &mut out);
    Ok(out)
}

fn enum_rec(
    k: usize,
    n: u64,
    residuals: &mut Vec<u64>,
    rows: &mut Vec<Vec<u64>>,
    out: &mut Vec<MagicSquare>,
) {
    if rows.len() == k {
        out.push(MagicSquare {
            size: k,
            magic_constant: n,
            entries: rows.clone(),
        });
        return;
    }
    let bounds = residuals.clone();
    let mut row = vec![0u64; k];
    compositions_bounded(n, &bounds, 0, &mut row, &mut |row| {
        let saved = residuals.clone();
        for (r, c) in residuals.iter_mut().zip(row) {
            *r -= c;
        }
        rows.push(row.to_vec());
        enum_rec(k, n, residuals, rows, out);
        rows.pop();
        *residuals = saved;
    });
}

/// S_k(N) / N^{(k-1)^2}, the Ehrhart convergence diagnostic.
pub fn ehrhart_ratio(k: usize, n: u64) -> f64 {
    assert!(k >= 2 && n >= 1);
    let count = count_magic_squares(k, n)
        .to_f64()
        .expect("count out of float range");
    let exponent = ((k - 1) * (k - 1)) as i32;
    count / (n as f64).powi(exponent)
}
