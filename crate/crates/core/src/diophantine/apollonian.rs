use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

/// `2(a^2 + b^2 + c^2 + d^2) - (a + b + c + d)^2`, zero exactly on Descartes
/// quadruples.
pub fn descartes_form(x: [i64; 4]) -> i128 {
    let sq: i128 = x.iter().map(|&v| v as i128 * v as i128).sum();
    let s: i128 = x.iter().map(|&v| v as i128).sum();
    2 * sq - s * s
}

/// Replaces entry `i` by `2 (sum of the others) - x_i`, the other root of
/// the quadric in that coordinate.
pub fn swap(x: [i64; 4], i: usize) -> [i64; 4] {
    let others: i64 = x.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
    let mut y = x;
    y[i] = 2 * others - x[i];
    y
}

#[derive(Clone, Debug)]
pub struct ApollonianOptions {
    pub modulus: u64,
    /// Maximum number of circles.
    pub cap: usize,
}

impl Default for ApollonianOptions {
    fn default() -> Self {
        ApollonianOptions {
            modulus: 24,
            cap: 50_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub root: [i64; 4],
    pub bound: i64,
    /// Number of circles of curvature at most `bound`, with multiplicity.
    pub circles: usize,
    /// `(curvature, number of circles)`, sorted by curvature.
    pub curvature_counts: Vec<(i64, usize)>,
    pub modulus: u64,
    /// Residues mod `modulus` hit by some positive curvature.
    pub residues: Vec<u64>,
    /// Distinct positive curvatures at most `bound`, divided by `bound`.
    pub density: f64,
    /// Distinct positive curvatures at most `bound`, divided by the number
    /// of integers in `1..=bound` lying in a residue class in `residues`.
    pub admissible_density: f64,
}

impl CurvatureReport {
    pub fn distinct_curvatures(&self) -> Vec<i64> {
        self.curvature_counts.iter().map(|&(c, _)| c).collect()
    }
}

fn check_root(root: [i64; 4], bound: i64) -> Result<()> {
    if descartes_form(root) != 0 {
        return Err(Error::NotDescartes(root));
    }
    let max = *root.iter().max().expect("four entries");
    if bound < max {
        return Err(Error::invalid(format!(
            "bound {bound} is below the largest root curvature {max}"
        )));
    }
    Ok(())
}

fn report(root: [i64; 4], bound: i64, counts: BTreeMap<i64, usize>, modulus: u64) -> CurvatureReport {
    let circles = counts.values().sum();
    let mut residues: Vec<u64> = counts.keys().filter(|&&c| c > 0).map(|&c| c as u64 % modulus).collect();
    residues.sort_unstable();
    residues.dedup();
    let positive = counts.keys().filter(|&&c| c > 0).count();
    let admissible = (1..=bound.max(0) as u64)
        .filter(|k| residues.binary_search(&(k % modulus)).is_ok())
        .count();
    CurvatureReport {
        root,
        bound,
        circles,
        curvature_counts: counts.into_iter().collect(),
        modulus,
        residues,
        density: positive as f64 / bound.max(1) as f64,
        admissible_density: if admissible == 0 {
            0.0
        } else {
            positive as f64 / admissible as f64
        },
    }
}

/// Breadth-first walk of the tree of reduced swap words from `root`. Every
/// node adds one new circle; a branch is cut as soon as the new curvature
/// exceeds `bound`, since curvatures only grow along reduced words.
pub fn apollonian_orbit(root: [i64; 4], bound: i64, opts: &ApollonianOptions) -> Result<CurvatureReport> {
    apollonian_orbit_visit(root, bound, opts, |_| {})
}

/// [`apollonian_orbit`], calling `visit` on the root and on every quadruple
/// kept in the walk.
pub fn apollonian_orbit_visit(
    root: [i64; 4],
    bound: i64,
    opts: &ApollonianOptions,
    mut visit: impl FnMut(&[i64; 4]),
) -> Result<CurvatureReport> {
    check_root(root, bound)?;
    visit(&root);
    if opts.modulus == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &c in &root {
        *counts.entry(c).or_default() += 1;
    }
    let mut circles = 4usize;
    let mut queue: VecDeque<([i64; 4], usize)> = VecDeque::from([(root, usize::MAX)]);
    while let Some((x, last)) = queue.pop_front() {
        for i in (0..4).filter(|&i| i != last) {
            let y = swap(x, i);
            debug_assert_eq!(descartes_form(y), 0);
            if y[i] > bound {
                continue;
            }
            circles += 1;
            if circles > opts.cap {
                return Err(Error::CapExceeded { cap: opts.cap });
            }
            *counts.entry(y[i]).or_default() += 1;
            visit(&y);
            queue.push_back((y, i));
        }
    }
    Ok(report(root, bound, counts, opts.modulus))
}

/// Reference enumeration: depth-first over every quadruple whose entries
/// are at most `bound`, deduplicated as sorted tuples, visiting moves in
/// reverse order. Reports distinct curvatures only, each with count 1.
pub fn apollonian_orbit_oracle(root: [i64; 4], bound: i64, modulus: u64) -> Result<CurvatureReport> {
    check_root(root, bound)?;
    let key = |mut x: [i64; 4]| {
        x.sort_unstable();
        x
    };
    let mut seen: HashSet<[i64; 4]> = HashSet::from([key(root)]);
    let mut stack = vec![root];
    let mut curvatures: BTreeMap<i64, usize> = BTreeMap::new();
    while let Some(x) = stack.pop() {
        assert_eq!(descartes_form(x), 0);
        for &c in &x {
            curvatures.insert(c, 1);
        }
        for i in (0..4).rev() {
            let y = swap(x, i);
            if y.iter().all(|&c| c <= bound) && seen.insert(key(y)) {
                stack.push(y);
            }
        }
    }
    Ok(report(root, bound, curvatures, modulus))
}
