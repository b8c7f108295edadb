use num_traits::One;
use rustc_hash::FxHashMap;
use serde::Serialize;

use super::reduce_mod;
use crate::error::{Error, Result};
use crate::exact::fixed_form_space;
use crate::group::GenSet;

/// Which finite group the closure is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TargetGroup {
    /// `SL_n` when every generator has determinant 1 and, for `n >= 3`, the
    /// generators fix no nonzero bilinear form; otherwise unknown.
    Auto,
    SpecialLinear,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ClosureOptions {
    /// Maximum number of vertices.
    pub cap: usize,
    /// Moduli outside the squarefree range of the expansion theorem are
    /// rejected unless this is set.
    pub allow_nonsquarefree: bool,
    pub target: TargetGroup,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            cap: 2_000_000,
            allow_nonsquarefree: false,
            target: TargetGroup::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureResult {
    pub q: u64,
    pub n: usize,
    /// Order of the image of the group mod `q`; `None` after overflow.
    pub order: Option<u64>,
    /// `|SL_n(Z/q)|` when the target is special linear.
    pub target_order: Option<u128>,
    /// `None` when either order is unknown.
    pub onto: Option<bool>,
    pub index: Option<u128>,
    pub overflow: bool,
}

/// Vertex set and left-multiplication table of a congruence Cayley graph.
/// Vertex 0 is the identity; `neighbors[v * degree + s]` is the index of
/// `s * v`.
#[derive(Clone, Debug)]
pub struct CongruenceGraph {
    pub q: u64,
    pub n: usize,
    pub degree: usize,
    pub vertices: Vec<u32>,
    pub neighbors: Vec<u32>,
}

impl CongruenceGraph {
    pub fn vertex_count(&self) -> usize {
        self.neighbors.len() / self.degree
    }

    pub fn vertex(&self, v: usize) -> &[u32] {
        let nn = self.n * self.n;
        &self.vertices[v * nn..(v + 1) * nn]
    }

    /// Checks that every edge lands inside the vertex set.
    pub fn validate(&self) -> Result<()> {
        let count = self.vertex_count() as u32;
        if self.neighbors.iter().any(|&w| w >= count) {
            return Err(Error::invalid("congruence graph is not closed"));
        }
        Ok(())
    }
}

pub fn prime_factors(mut q: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut e = 0;
            while q % p == 0 {
                q /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if q > 1 {
        out.push((q, 1));
    }
    out
}

pub fn is_squarefree(q: u64) -> bool {
    prime_factors(q).iter().all(|&(_, e)| e == 1)
}

/// `|SL_n(Z/q)| = prod_{p^e || q} p^{(e-1)(n^2-1)} p^{n(n-1)/2} prod_{k=2..n} (p^k - 1)`,
/// or `None` on overflow.
pub fn sl_order(n: usize, q: u64) -> Option<u128> {
    let mut total: u128 = 1;
    for (p, e) in prime_factors(q) {
        let p = p as u128;
        let exp = (n * (n - 1) / 2) as u32 + (e - 1) * (n * n - 1) as u32;
        total = total.checked_mul(p.checked_pow(exp)?)?;
        for k in 2..=n as u32 {
            total = total.checked_mul(p.checked_pow(k)? - 1)?;
        }
    }
    Some(total)
}

fn targets_special_linear(s: &GenSet, target: TargetGroup) -> Result<bool> {
    Ok(match target {
        TargetGroup::SpecialLinear => true,
        TargetGroup::Unknown => false,
        TargetGroup::Auto => {
            let unimodular = s.gens().iter().all(|g| g.det().is_one());
            unimodular && (s.dim() <= 2 || fixed_form_space(s.gens())?.dim() == 0)
        }
    })
}

enum VertexIndex {
    Packed { bits: u32, map: FxHashMap<u128, u32> },
    Boxed(FxHashMap<Box<[u32]>, u32>),
}

impl VertexIndex {
    fn new(nn: usize, q: u64) -> Self {
        let bits = 64 - (q - 1).leading_zeros();
        if nn as u32 * bits <= 128 {
            VertexIndex::Packed {
                bits,
                map: FxHashMap::default(),
            }
        } else {
            VertexIndex::Boxed(FxHashMap::default())
        }
    }

    /// Index of `key`, inserting it as `next` if absent.
    fn get_or_insert(&mut self, key: &[u32], next: u32) -> (u32, bool) {
        match self {
            VertexIndex::Packed { bits, map } => {
                let packed = key.iter().fold(0u128, |acc, &e| (acc << *bits) | e as u128);
                match map.get(&packed) {
                    Some(&i) => (i, false),
                    None => {
                        map.insert(packed, next);
                        (next, true)
                    }
                }
            }
            VertexIndex::Boxed(map) => match map.get(key) {
                Some(&i) => (i, false),
                None => {
                    map.insert(key.into(), next);
                    (next, true)
                }
            },
        }
    }
}

/// Breadth-first closure of the reduced generators, keeping the graph.
/// Returns `None` for the graph when the vertex cap fires.
pub fn congruence_graph(s: &GenSet, q: u64, opts: &ClosureOptions) -> Result<(ClosureResult, Option<CongruenceGraph>)> {
    if q < 2 {
        return Err(Error::invalid(format!("modulus must be at least 2, got {q}")));
    }
    if !opts.allow_nonsquarefree && !is_squarefree(q) {
        return Err(Error::NotSquarefree(q));
    }
    let n = s.dim();
    let nn = n * n;
    let gens: Vec<Vec<u64>> = s
        .gens()
        .iter()
        .map(|g| reduce_mod(g, q).map(|m| m.entries().to_vec()))
        .collect::<Result<_>>()?;
    let degree = gens.len();
    let target_order = if targets_special_linear(s, opts.target)? {
        sl_order(n, q)
    } else {
        None
    };

    let mut vertices: Vec<u32> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            vertices.push(u32::from(i == j));
        }
    }
    let mut index = VertexIndex::new(nn, q);
    index.get_or_insert(&vertices[..nn], 0);
    let mut count = 1usize;
    let mut neighbors: Vec<u32> = Vec::new();
    let mut buf = vec![0u32; nn];
    let mut head = 0usize;
    let mut overflow = false;
    'bfs: while head < count {
        for g in &gens {
            let x = &vertices[head * nn..(head + 1) * nn];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0u64;
                    for k in 0..n {
                        acc = (acc + g[i * n + k] * x[k * n + j] as u64) % q;
                    }
                    buf[i * n + j] = acc as u32;
                }
            }
            let (idx, fresh) = index.get_or_insert(&buf, count as u32);
            if fresh {
                if count >= opts.cap {
                    overflow = true;
                    break 'bfs;
                }
                vertices.extend_from_slice(&buf);
                count += 1;
            }
            neighbors.push(idx);
        }
        head += 1;
    }

    if overflow {
        let result = ClosureResult {
            q,
            n,
            order: None,
            target_order,
            onto: None,
            index: None,
            overflow: true,
        };
        return Ok((result, None));
    }
    let order = count as u64;
    let (onto, idx) = match target_order {
        Some(t) => {
            debug_assert_eq!(t % order as u128, 0, "Lagrange");
            (Some(t == order as u128), Some(t / order as u128))
        }
        None => (None, None),
    };
    let result = ClosureResult {
        q,
        n,
        order: Some(order),
        target_order,
        onto,
        index: idx,
        overflow: false,
    };
    let graph = CongruenceGraph {
        q,
        n,
        degree,
        vertices,
        neighbors,
    };
    Ok((result, Some(graph)))
}

/// Order of the image of `<S>` in `GL_n(Z/q)` and whether it is all of
/// `SL_n(Z/q)`.
pub fn closure_mod(s: &GenSet, q: u64, opts: &ClosureOptions) -> Result<ClosureResult> {
    congruence_graph(s, q, opts).map(|(r, _)| r)
}
