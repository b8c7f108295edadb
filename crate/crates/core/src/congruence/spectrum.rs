use rayon::prelude::*;
use serde::Serialize;

use super::{congruence_graph, ClosureOptions, ClosureResult, CongruenceGraph};
use crate::error::{Error, Result};
use crate::group::GenSet;
use crate::spectral::{dense_symmetric_eigenvalues, lanczos, LanczosOptions, SymOp, Which};

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    /// Number of top eigenvalues reported, the trivial one included.
    pub k: usize,
    pub basis: usize,
    pub tol: f64,
    /// Matvec cap per Lanczos run; `None` means `10 sqrt(n) + 200`.
    pub max_matvecs: Option<usize>,
    pub seed: u64,
    /// Graphs up to this many vertices are also solved densely.
    pub dense_check_limit: usize,
    pub dense_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            k: 2,
            basis: 32,
            tol: 1e-10,
            max_matvecs: None,
            seed: 0x5eed,
            dense_check_limit: 5000,
            dense_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CayleySpectrum {
    pub q: u64,
    pub vertex_count: usize,
    pub degree: usize,
    /// Rayleigh quotient of the constant vector.
    pub lambda1: f64,
    /// `|A 1 - 1|` for the normalized constant vector.
    pub lambda1_residual: f64,
    /// Distinct top eigenvalues, descending, starting with the trivial one.
    pub top: Vec<f64>,
    pub lambda2: Option<f64>,
    pub lambda_min: Option<f64>,
    pub one_sided_gap: Option<f64>,
    pub two_sided_gap: Option<f64>,
    pub bipartite: bool,
    pub converged: bool,
    pub matvecs: usize,
    pub max_residual: f64,
    /// Largest deviation of `top` and `lambda_min` from the dense solver.
    pub dense_max_diff: Option<f64>,
}

/// Normalized adjacency `(Af)(x) = (1/d) sum_s f(sx)`.
struct Adjacency<'a> {
    graph: &'a CongruenceGraph,
}

impl SymOp for Adjacency<'_> {
    fn dim(&self) -> usize {
        self.graph.vertex_count()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let d = self.graph.degree;
        let inv = 1.0 / d as f64;
        y.par_iter_mut()
            .with_min_len(1 << 14)
            .zip(self.graph.neighbors.par_chunks(d))
            .for_each(|(yi, nb)| {
                *yi = nb.iter().map(|&w| x[w as usize]).sum::<f64>() * inv;
            });
    }
}

fn is_bipartite(graph: &CongruenceGraph) -> bool {
    let n = graph.vertex_count();
    let d = graph.degree;
    let mut color = vec![u8::MAX; n];
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &graph.neighbors[v * d..(v + 1) * d] {
                let w = w as usize;
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    stack.push(w);
                } else if color[w] == color[v] {
                    return false;
                }
            }
        }
    }
    true
}

/// All eigenvalues (ascending) of the normalized adjacency, solved densely.
pub fn dense_spectrum(graph: &CongruenceGraph) -> Result<Vec<f64>> {
    let n = graph.vertex_count();
    let d = graph.degree;
    let mut a = vec![0.0; n * n];
    for v in 0..n {
        for &w in &graph.neighbors[v * d..(v + 1) * d] {
            a[v * n + w as usize] += 1.0 / d as f64;
        }
    }
    dense_symmetric_eigenvalues(n, &a)
}

/// Extreme eigenvalues of a congruence Cayley graph by one restarted Lanczos
/// run on the complement of the constant vector, tracking both ends.
pub fn graph_spectrum(graph: &CongruenceGraph, opts: &SpectrumOptions) -> Result<CayleySpectrum> {
    if opts.k < 2 {
        return Err(Error::invalid("at least two eigenvalues must be requested"));
    }
    graph.validate()?;
    let n = graph.vertex_count();
    let op = Adjacency { graph };
    let c = 1.0 / (n as f64).sqrt();
    let ones = vec![c; n];
    let mut a1 = vec![0.0; n];
    op.apply(&ones, &mut a1);
    let lambda1: f64 = a1.iter().map(|x| x * c).sum();
    let lambda1_residual = a1.iter().map(|x| (x - lambda1 * c).powi(2)).sum::<f64>().sqrt();

    let lopts = LanczosOptions {
        nev: opts.k - 1,
        basis: opts.basis,
        tol: opts.tol,
        max_matvecs: opts.max_matvecs.unwrap_or(LanczosOptions::default_cap(n)),
        seed: opts.seed,
    };
    let deflate = [ones];
    let run = lanczos(&op, &deflate, Which::BothEnds, &lopts);
    let highs: Vec<f64> = run.values.iter().step_by(2).copied().collect();
    let lows: Vec<f64> = run.values.iter().skip(1).step_by(2).copied().collect();
    let mut top = vec![lambda1];
    top.extend(&highs);
    let lambda2 = highs.first().copied();
    // The constant vector is excluded from both runs, so a one-vertex graph
    // has no further eigenvalue and the smallest one is the trivial one.
    let lambda_min = lows.first().copied().or(if n == 1 { Some(lambda1) } else { None });
    let one_sided_gap = lambda2.map(|l| 1.0 - l);
    let two_sided_gap = match (lambda2, lambda_min) {
        (Some(l2), Some(lm)) => Some(1.0 - l2.abs().max(lm.abs())),
        (None, Some(lm)) if n == 1 => Some(1.0 - lm.abs()),
        _ => None,
    };
    let max_residual = run.residuals.iter().copied().fold(lambda1_residual, f64::max);

    let dense_max_diff = if n <= opts.dense_check_limit {
        let mut dense = dense_spectrum(graph)?;
        // Drop the trivial eigenvalue: the one nearest 1.
        let trivial = dense
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
            .map(|(i, _)| i);
        let mut diff = trivial.map_or(0.0, |i| (dense[i] - lambda1).abs());
        if let Some(i) = trivial {
            dense.remove(i);
        }
        // A single Krylov sequence sees each eigenvalue once, so the extreme
        // values are compared directly and the rest against the nearest
        // dense eigenvalue.
        if let (Some(l2), Some(dv)) = (lambda2, dense.last()) {
            diff = diff.max((l2 - dv).abs());
        }
        if let (Some(lm), Some(dv)) = (lambda_min, dense.first()) {
            diff = diff.max((lm - dv).abs());
        }
        for l in highs.iter().skip(1).chain(lows.iter().skip(1)) {
            let nearest = dense.iter().map(|dv| (l - dv).abs()).fold(f64::INFINITY, f64::min);
            diff = diff.max(nearest);
        }
        Some(diff)
    } else {
        None
    };

    Ok(CayleySpectrum {
        q: graph.q,
        vertex_count: n,
        degree: graph.degree,
        lambda1,
        lambda1_residual,
        top,
        lambda2,
        lambda_min,
        one_sided_gap,
        two_sided_gap,
        bipartite: is_bipartite(graph),
        converged: run.converged,
        matvecs: run.matvecs,
        max_residual,
        dense_max_diff,
    })
}

/// Closure mod `q` followed by the spectrum of its Cayley graph.
pub fn cayley_spectrum(
    s: &GenSet,
    q: u64,
    closure: &ClosureOptions,
    opts: &SpectrumOptions,
) -> Result<(ClosureResult, CayleySpectrum)> {
    let (result, graph) = congruence_graph(s, q, closure)?;
    let graph = graph.ok_or(Error::CapExceeded { cap: closure.cap })?;
    Ok((result, graph_spectrum(&graph, opts)?))
}
