use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Partial quotients `a_1, ..., a_k` of `b / q = [0; a_1, ..., a_k]` for
/// `0 < b <= q`, with `a_k >= 2` unless `b / q = 1`.
pub fn continued_fraction(b: u64, q: u64) -> Vec<u64> {
    let (mut num, mut den) = (q, b);
    let mut out = Vec::new();
    while den != 0 {
        out.push(num / den);
        (num, den) = (den, num % den);
    }
    out
}

/// Whether `b / q` has an expansion with every partial quotient at most `a`.
/// Besides the canonical form, `[..., a_k]` may be written
/// `[..., a_k - 1, 1]`, so the last quotient may reach `a + 1`.
fn bounded(b: u64, q: u64, a: u64) -> bool {
    let (mut num, mut den) = (q, b);
    while den != 0 {
        let quot = num / den;
        let rem = num % den;
        if rem == 0 {
            return quot <= a + 1;
        }
        if quot > a {
            return false;
        }
        (num, den) = (den, rem);
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZarembaRow {
    pub q: u64,
    /// Smallest `b` coprime to `q` with a bounded expansion of `b / q`.
    pub witness: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZarembaReport {
    pub a: u64,
    pub q_max: u64,
    pub rows: Vec<ZarembaRow>,
    pub achieved: Vec<u64>,
    pub exceptions: Vec<u64>,
    pub density: f64,
}

impl ZarembaReport {
    fn from_flags(a: u64, q_max: u64, rows: Vec<ZarembaRow>) -> Self {
        let (achieved, exceptions): (Vec<&ZarembaRow>, Vec<&ZarembaRow>) =
            rows.iter().partition(|r| r.witness.is_some());
        let achieved: Vec<u64> = achieved.iter().map(|r| r.q).collect();
        let exceptions = exceptions.iter().map(|r| r.q).collect();
        let density = achieved.len() as f64 / q_max as f64;
        ZarembaReport {
            a,
            q_max,
            rows,
            achieved,
            exceptions,
            density,
        }
    }
}

/// For every `q <= q_max`, searches `b` coprime to `q` for a continued
/// fraction of `b / q` with partial quotients at most `a`. `q = 1` counts as
/// achieved with `b = 1`.
pub fn zaremba_scan(a: u64, q_max: u64) -> Result<ZarembaReport> {
    if a < 1 || q_max < 1 {
        return Err(Error::invalid("the bound and the scan limit must be at least 1"));
    }
    let rows: Vec<ZarembaRow> = (1..=q_max)
        .into_par_iter()
        .map(|q| ZarembaRow {
            q,
            witness: if q == 1 {
                Some(1)
            } else {
                (1..q).find(|&b| b.gcd(&q) == 1 && bounded(b, q, a))
            },
        })
        .collect();
    Ok(ZarembaReport::from_flags(a, q_max, rows))
}

/// Independent enumeration: generates every string of partial quotients
/// bounded by `a` (the last one by `a + 1`) through the continuant
/// recursion `q_k = a_k q_{k-1} + q_{k-2}` and records the denominators.
/// Witnesses are the smallest numerators found.
pub fn zaremba_forward(a: u64, q_max: u64) -> Result<ZarembaReport> {
    if a < 1 || q_max < 1 {
        return Err(Error::invalid("the bound and the scan limit must be at least 1"));
    }
    let mut best: Vec<Option<u64>> = vec![None; q_max as usize + 1];
    best[1] = Some(1);
    // (q_{k-1}, q_{k-2}, p_{k-1}, p_{k-2}) for [0; a_1, ..., a_{k-1}].
    let mut stack: Vec<(u64, u64, u64, u64)> = vec![(1, 0, 0, 1)];
    while let Some((q1, q2, p1, p2)) = stack.pop() {
        for digit in 1..=a + 1 {
            let q = digit * q1 + q2;
            if q > q_max {
                break;
            }
            let p = digit * p1 + p2;
            let slot = &mut best[q as usize];
            if slot.is_none_or(|b| p < b) {
                *slot = Some(p);
            }
            if digit <= a {
                stack.push((q, q1, p, p1));
            }
        }
    }
    let rows = (1..=q_max)
        .map(|q| ZarembaRow {
            q,
            witness: best[q as usize],
        })
        .collect();
    Ok(ZarembaReport::from_flags(a, q_max, rows))
}
