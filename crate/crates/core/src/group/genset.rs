use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::IntMatrix;

/// Symmetric generating set: the inverse of every generator is present.
#[derive(Clone, Debug)]
pub struct GenSet {
    n: usize,
    gens: Vec<IntMatrix>,
    labels: Vec<String>,
    inverse_of: Vec<usize>,
}

impl GenSet {
    /// Builds the symmetric closure of the labelled matrices. Inverses that
    /// are not already present are appended with label `name^-1`; duplicates
    /// are dropped.
    pub fn new<S: Into<String>>(named: Vec<(S, IntMatrix)>) -> Result<Self> {
        let n = named
            .first()
            .map(|(_, m)| m.dim())
            .ok_or_else(|| Error::invalid("generating set is empty"))?;
        let mut gens: Vec<IntMatrix> = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<IntMatrix, usize> = HashMap::new();
        let mut push = |m: IntMatrix, label: String, gens: &mut Vec<IntMatrix>| {
            if !index.contains_key(&m) {
                index.insert(m.clone(), gens.len());
                gens.push(m);
                labels.push(label);
            }
        };
        let mut pending = Vec::new();
        for (label, m) in named {
            if m.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.dim(),
                });
            }
            let inv = m.inverse().ok_or(Error::NotUnimodular)?;
            let label = label.into();
            pending.push((format!("{label}^-1"), inv));
            push(m, label, &mut gens);
        }
        for (label, inv) in pending {
            push(inv, label, &mut gens);
        }
        let lookup: HashMap<&IntMatrix, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let inverse_of = gens
            .iter()
            .map(|g| lookup[&g.inverse().expect("generators are unimodular")])
            .collect();
        Ok(GenSet {
            n,
            gens,
            labels,
            inverse_of,
        })
    }

    /// Generators labelled `g0, g1, ...`.
    pub fn from_matrices(ms: Vec<IntMatrix>) -> Result<Self> {
        Self::new(ms.into_iter().enumerate().map(|(i, m)| (format!("g{i}"), m)).collect())
    }

    /// `S = [[0,-1],[1,0]]` and `T = [[1,1],[0,1]]`, generating `SL_2(Z)`.
    pub fn sl2_standard() -> Self {
        let s = IntMatrix::from_rows(&[[0, -1], [1, 0]]).unwrap();
        let t = IntMatrix::from_rows(&[[1, 1], [0, 1]]).unwrap();
        Self::new(vec![("S", s), ("T", t)]).unwrap()
    }

    /// `[[1,k],[0,1]]` and `[[1,0],[k,1]]`; free for `k >= 2`.
    pub fn unipotent_pair(k: i64) -> Self {
        let u = IntMatrix::from_rows(&[[1, k], [0, 1]]).unwrap();
        let l = IntMatrix::from_rows(&[[1, 0], [k, 1]]).unwrap();
        Self::new(vec![("U", u), ("L", l)]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[IntMatrix] {
        &self.gens
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse_of[i]
    }
}
