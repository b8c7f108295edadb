use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{cartan_roots, CartanRoot, QuadLattice};
use crate::error::{Error, Result};

/// Cartan roots up to a height, joined when `B(v, w) = -3`.
#[derive(Clone, Debug, Serialize)]
pub struct MinDistGraph {
    pub height: i64,
    pub vertices: Vec<CartanRoot>,
    /// Pairs `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Components as sorted vertex lists, ordered by their first vertex.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn min_distance_graph(lattice: &QuadLattice, height: i64, cap: usize) -> Result<MinDistGraph> {
    let vertices = cartan_roots(lattice, height)?;
    if vertices.len() > cap {
        return Err(Error::CapExceeded { cap });
    }
    let n = vertices.len();
    let mut edges = Vec::new();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if lattice.pair(&vertices[i].v, &vertices[j].v) == -3 {
                edges.push((i, j));
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        by_root.entry(r).or_default().push(v);
    }
    let mut components: Vec<Vec<usize>> = by_root.into_values().collect();
    components.sort_by_key(|c| c[0]);
    let mut component_of = vec![0; n];
    for (id, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = id;
        }
    }
    Ok(MinDistGraph {
        height,
        vertices,
        edges,
        components,
        component_of,
    })
}

impl MinDistGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }
}

/// Isomorphism invariants of a truncated component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub size: usize,
    pub edges: usize,
    /// Sorted ascending.
    pub degree_sequence: Vec<usize>,
    pub diameter: usize,
    /// `(value, count)` of `B(v, w)` over unordered pairs of distinct
    /// vertices, sorted by value.
    pub pair_values: Vec<(i64, usize)>,
}

pub fn component_fingerprint(lattice: &QuadLattice, graph: &MinDistGraph, component: usize) -> Result<Fingerprint> {
    let comp = graph
        .components
        .get(component)
        .ok_or_else(|| Error::invalid(format!("no component {component}")))?;
    let deg = graph.degrees();
    let mut degree_sequence: Vec<usize> = comp.iter().map(|&v| deg[v]).collect();
    degree_sequence.sort_unstable();
    let edges = degree_sequence.iter().sum::<usize>() / 2;

    let adj = graph.adjacency();
    let mut diameter = 0;
    let mut dist = vec![usize::MAX; graph.vertices.len()];
    for &s in comp {
        for &v in comp {
            dist[v] = usize::MAX;
        }
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            diameter = diameter.max(dist[v]);
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut census: BTreeMap<i64, usize> = BTreeMap::new();
    for (a, &i) in comp.iter().enumerate() {
        for &j in &comp[a + 1..] {
            *census
                .entry(lattice.pair(&graph.vertices[i].v, &graph.vertices[j].v))
                .or_default() += 1;
        }
    }
    Ok(Fingerprint {
        size: comp.len(),
        edges,
        degree_sequence,
        diameter,
        pair_values: census.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntMatrix;
    use crate::group::{ball_enumerate, BallOptions, GenSet};
    use crate::lattice::cartan_involution;

    fn diag221() -> QuadLattice {
        QuadLattice::from_rows(&[[2, 0, 0], [0, 2, 0], [0, 0, -2]]).unwrap()
    }

    fn unimodular_lattice() -> QuadLattice {
        // x^2 + y^2 + z^2 - w^2 scaled to an even form with roots of norm -2.
        QuadLattice::from_rows(&[[2, 1, 0, 0], [1, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, -2]]).unwrap()
    }

    #[test]
    fn height_one_of_the_diagonal_form() {
        let l = diag221();
        let g = min_distance_graph(&l, 1, 1000).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert!(g.edges.is_empty());
        assert_eq!(g.components.len(), 2);
        let a = component_fingerprint(&l, &g, 0).unwrap();
        let b = component_fingerprint(&l, &g, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree_sequence, vec![0]);
        assert_eq!(a.diameter, 0);
        assert!(component_fingerprint(&l, &g, 2).is_err());
    }

    #[test]
    fn edges_restrict_to_the_expected_gram() {
        let l = unimodular_lattice();
        let g = min_distance_graph(&l, 3, 100_000).unwrap();
        assert!(!g.edges.is_empty());
        for &(i, j) in &g.edges {
            let (v, w) = (&g.vertices[i].v, &g.vertices[j].v);
            assert_eq!([l.norm(v), l.pair(v, w), l.pair(w, v), l.norm(w)], [-2, -3, -3, -2]);
        }
        for c in 0..g.components.len() {
            let f = component_fingerprint(&l, &g, c).unwrap();
            if f.edges > 0 {
                assert!(f.pair_values.iter().any(|&(val, _)| val == -3));
            }
        }
    }

    #[test]
    fn growing_height_only_adds_and_merges() {
        let l = unimodular_lattice();
        let small = min_distance_graph(&l, 2, 100_000).unwrap();
        let big = min_distance_graph(&l, 3, 100_000).unwrap();
        let index: BTreeMap<&[i64], usize> = big
            .vertices
            .iter()
            .enumerate()
            .map(|(i, r)| (r.v.as_slice(), i))
            .collect();
        let lift: Vec<usize> = small.vertices.iter().map(|r| index[r.v.as_slice()]).collect();
        for &(i, j) in &small.edges {
            let (a, b) = (lift[i].min(lift[j]), lift[i].max(lift[j]));
            assert!(big.edges.binary_search(&(a, b)).is_ok());
        }
        for comp in &small.components {
            let target = big.component_of[lift[comp[0]]];
            assert!(comp.iter().all(|&v| big.component_of[lift[v]] == target));
        }
    }

    #[test]
    fn component_involutions_generate_isometries() {
        let l = unimodular_lattice();
        let g = min_distance_graph(&l, 2, 100_000).unwrap();
        let comp = g.components.iter().max_by_key(|c| c.len()).unwrap();
        let gens: Vec<IntMatrix> = comp
            .iter()
            .take(4)
            .map(|&v| cartan_involution(&l, &g.vertices[v].v).unwrap())
            .collect();
        let s = GenSet::from_matrices(gens).unwrap();
        let ball = ball_enumerate(&s, 4, &BallOptions::default()).unwrap();
        for m in &ball.elements {
            assert_eq!(&(&m.transpose() * &l.gram) * m, l.gram);
        }
    }
}
