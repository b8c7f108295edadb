use std::collections::HashSet;

use num_bigint::BigInt;
use serde::Serialize;

use super::GenSet;
use crate::error::{Error, Result};
use crate::exact::IntMatrix;

#[derive(Clone, Debug)]
pub struct BallOptions {
    /// Keep only elements with `max(|B|, |B^-1|) <= bound` in the max-entry
    /// norm. The ball itself is always explored in full.
    pub norm_bound: Option<BigInt>,
    /// Maximum number of distinct elements before giving up.
    pub cap: usize,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            norm_bound: None,
            cap: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BallReport {
    pub radius: usize,
    pub norm_bound: Option<String>,
    /// Distinct elements of word length at most `radius` passing the norm
    /// filter, in breadth-first order.
    pub elements: Vec<IntMatrix>,
    /// `counts[r]` is the number of distinct elements of length at most `r`.
    pub counts: Vec<usize>,
    /// First radius at which no new element appeared, if any.
    pub stabilized_at: Option<usize>,
}

pub fn ball_enumerate(s: &GenSet, radius: usize, opts: &BallOptions) -> Result<BallReport> {
    let id = IntMatrix::identity(s.dim());
    let inverses: Vec<&IntMatrix> = (0..s.len()).map(|i| &s.gens()[s.inverse_index(i)]).collect();
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    seen.insert(id.clone());
    let mut all = vec![(id.clone(), id)];
    let mut frontier = vec![0usize];
    let mut counts = vec![1];
    let mut stabilized_at = None;
    for r in 1..=radius {
        let mut next = Vec::new();
        for &idx in &frontier {
            for (g, ginv) in s.gens().iter().zip(&inverses) {
                let (x, xinv) = &all[idx];
                let y = g * x;
                if seen.contains(&y) {
                    continue;
                }
                if seen.len() >= opts.cap {
                    return Err(Error::CapExceeded { cap: opts.cap });
                }
                let yinv = xinv * *ginv;
                seen.insert(y.clone());
                next.push(all.len());
                all.push((y, yinv));
            }
        }
        counts.push(seen.len());
        if next.is_empty() {
            stabilized_at = Some(r);
            counts.resize(radius + 1, seen.len());
            break;
        }
        frontier = next;
    }
    let elements = all
        .into_iter()
        .filter(|(x, xinv)| match &opts.norm_bound {
            Some(b) => x.max_abs() <= *b && xinv.max_abs() <= *b,
            None => true,
        })
        .map(|(x, _)| x)
        .collect();
    Ok(BallReport {
        radius,
        norm_bound: opts.norm_bound.as_ref().map(ToString::to_string),
        elements,
        counts,
        stabilized_at,
    })
}
