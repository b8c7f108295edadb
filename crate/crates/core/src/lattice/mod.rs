//! Hyperbolic integral lattices: Cartan roots `B(v, v) = -2`, the Cartan
//! involutions they define and the minimum-distance graph joining roots
//! with `B(v, w) = -3`.
//!
//! Both the norm and the pairing are read off the bilinear form
//! `B(u, v) = u^T G v`; no factor of two is taken out.

mod graph;

pub use graph::{component_fingerprint, min_distance_graph, Fingerprint, MinDistGraph};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{signature, IntMatrix, RatMatrix};

/// Integral symmetric Gram matrix of signature `(n-1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadLattice {
    pub gram: IntMatrix,
    #[serde(skip)]
    g: Vec<i64>,
}

impl QuadLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let n = gram.dim();
        if n < 2 {
            return Err(Error::invalid("a hyperbolic lattice needs rank at least 2"));
        }
        if gram != gram.transpose() {
            return Err(Error::invalid("Gram matrix is not symmetric"));
        }
        let g = gram
            .entries()
            .iter()
            .map(|e| e.to_i64().filter(|x| x.unsigned_abs() < 1 << 20))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::invalid("Gram entries must be below 2^20 in absolute value"))?;
        let sig = signature(&RatMatrix::from_int(&gram))?;
        if (sig.positive, sig.negative, sig.zero) != (n - 1, 1, 0) {
            return Err(Error::WrongSignature {
                pos: sig.positive,
                neg: sig.negative,
                zero: sig.zero,
                expected_pos: n - 1,
            });
        }
        Ok(QuadLattice { gram, g })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        QuadLattice::new(IntMatrix::from_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    /// `B(u, v) = u^T G v`.
    pub fn pair(&self, u: &[i64], v: &[i64]) -> i64 {
        let n = self.dim();
        let mut acc = 0i128;
        for (row, &ui) in self.g.chunks_exact(n).zip(u) {
            if ui != 0 {
                let dot: i128 = row.iter().zip(v).map(|(&g, &x)| g as i128 * x as i128).sum();
                acc += ui as i128 * dot;
            }
        }
        acc as i64
    }

    pub fn norm(&self, v: &[i64]) -> i64 {
        self.pair(v, v)
    }
}

/// Integer vector with `B(v, v) = -2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CartanRoot {
    pub v: Vec<i64>,
    pub primitive: bool,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl CartanRoot {
    pub fn new(lattice: &QuadLattice, v: Vec<i64>) -> Result<Self> {
        if v.len() != lattice.dim() {
            return Err(Error::DimensionMismatch {
                expected: lattice.dim(),
                found: v.len(),
            });
        }
        let norm = lattice.norm(&v);
        if norm != -2 {
            return Err(Error::NotARoot(norm));
        }
        let primitive = v.iter().fold(0, |g, &x| gcd(g, x)) == 1;
        Ok(CartanRoot { v, primitive })
    }
}

/// Exact integer square root of a perfect square.
fn exact_sqrt(x: i128) -> Option<i128> {
    if x < 0 {
        return None;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    (r * r == x).then_some(r)
}

/// Every `v` with `max |v_i| <= height` and `B(v, v) = -2`, in
/// lexicographic order. The first `n - 1` coordinates are enumerated and
/// the last one solved from the quadratic it satisfies.
pub fn cartan_roots(lattice: &QuadLattice, height: i64) -> Result<Vec<CartanRoot>> {
    if height < 1 {
        return Err(Error::invalid("height must be at least 1"));
    }
    let n = lattice.dim();
    let g = &lattice.g;
    let last = n - 1;
    let a = g[last * n + last] as i128;
    let mut out = Vec::new();
    let mut prefix = vec![-height; last];
    loop {
        // B(v, v) = a x^2 + 2 b x + c with x the last coordinate.
        let b: i128 = (0..last).map(|i| g[i * n + last] as i128 * prefix[i] as i128).sum();
        let mut c: i128 = 2;
        for i in 0..last {
            for j in 0..last {
                c += g[i * n + j] as i128 * prefix[i] as i128 * prefix[j] as i128;
            }
        }
        let mut xs: Vec<i128> = Vec::new();
        if a == 0 {
            if b != 0 && c % (2 * b) == 0 {
                xs.push(-c / (2 * b));
            } else if b == 0 && c == 0 {
                xs.extend(-height as i128..=height as i128);
            }
        } else if let Some(s) = exact_sqrt(b * b - a * c) {
            for num in [-b - s, -b + s] {
                if num % a == 0 {
                    xs.push(num / a);
                }
            }
            xs.dedup();
        }
        xs.sort_unstable();
        for x in xs {
            if x.abs() <= height as i128 {
                let mut v = prefix.clone();
                v.push(x as i64);
                out.push(CartanRoot::new(lattice, v)?);
            }
        }
        // Next prefix in lexicographic order.
        let mut i = last;
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            if prefix[i] < height {
                prefix[i] += 1;
                for p in prefix.iter_mut().skip(i + 1) {
                    *p = -height;
                }
                break;
            }
        }
    }
}

/// `r_v(x) = x + B(x, v) v`, i.e. `I + v (G v)^T`.
pub fn cartan_involution(lattice: &QuadLattice, v: &[i64]) -> Result<IntMatrix> {
    if v.len() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim(),
            found: v.len(),
        });
    }
    let norm = lattice.norm(v);
    if norm != -2 {
        return Err(Error::NotARoot(norm));
    }
    let n = lattice.dim();
    let gv: Vec<i64> = (0..n)
        .map(|j| (0..n).map(|i| v[i] * lattice.g[i * n + j]).sum())
        .collect();
    Ok(IntMatrix::from_fn(n, |i, j| {
        BigInt::from(v[i]) * BigInt::from(gv[j]) + BigInt::from(i64::from(i == j))
    }))
}
