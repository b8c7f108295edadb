use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::IntMatrix;

/// Square matrix over `Z/qZ` with entries in `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModMatrix {
    q: u64,
    n: usize,
    entries: Vec<u64>,
}

impl ModMatrix {
    pub fn identity(n: usize, q: u64) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1 % q;
        }
        ModMatrix { q, n, entries }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.q)
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!((self.n, self.q), (other.n, other.q));
        let (n, q) = (self.n, self.q as u128);
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: u128 = (0..n)
                    .map(|k| self.entries[i * n + k] as u128 * other.entries[k * n + j] as u128)
                    .sum();
                entries[i * n + j] = (s % q) as u64;
            }
        }
        ModMatrix { q: self.q, n, entries }
    }

    /// Determinant modulo `q` (cofactor-free: Bareiss over the integers on
    /// the lifted entries, then reduced).
    pub fn det(&self) -> u64 {
        let lifted = IntMatrix::new(self.n, self.entries.iter().map(|&e| BigInt::from(e)).collect())
            .expect("square by construction");
        lifted.det().mod_floor(&BigInt::from(self.q)).to_u64().unwrap()
    }
}

/// Entrywise reduction `Z -> Z/qZ`.
pub fn reduce_mod(m: &IntMatrix, q: u64) -> Result<ModMatrix> {
    if q < 2 {
        return Err(Error::invalid(format!("modulus must be at least 2, got {q}")));
    }
    let bq = BigInt::from(q);
    Ok(ModMatrix {
        q,
        n: m.dim(),
        entries: m.entries().iter().map(|e| e.mod_floor(&bq).to_u64().unwrap()).collect(),
    })
}
