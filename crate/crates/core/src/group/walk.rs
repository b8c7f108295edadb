use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{classify_polynomial, GenSet, PolyVerdict};
use crate::error::{Error, Result};
use crate::exact::{charpoly, IntMatrix};

/// A word in the generators together with its evaluated product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Word {
    pub letters: Vec<usize>,
    pub matrix: IntMatrix,
}

impl Word {
    pub fn evaluate(s: &GenSet, letters: Vec<usize>) -> Word {
        let matrix = letters
            .iter()
            .fold(IntMatrix::identity(s.dim()), |acc, &i| &acc * &s.gens()[i]);
        Word { letters, matrix }
    }
}

fn walk_with(s: &GenSet, length: usize, rng: &mut ChaCha8Rng) -> Word {
    let letters = (0..length).map(|_| rng.random_range(0..s.len())).collect();
    Word::evaluate(s, letters)
}

/// `length` steps of the simple random walk: letters i.i.d. uniform over the
/// symmetric generating set.
pub fn random_walk_word(s: &GenSet, length: usize, seed: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    walk_with(s, length, &mut rng)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducibilityRow {
    pub length: usize,
    pub trials: usize,
    pub irreducible: usize,
    pub reducible: usize,
    pub undetermined: usize,
    pub irreducible_fraction: f64,
    pub reducible_fraction: f64,
    pub undetermined_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducibilityReport {
    pub seed: u64,
    pub rows: Vec<ReducibilityRow>,
}

/// Per-trial seed; independent of scheduling so parallel runs reproduce.
fn trial_seed(seed: u64, length: usize, trial: usize) -> u64 {
    let mut z =
        seed ^ (length as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (trial as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Samples `trials` random words of each length and classifies their
/// characteristic polynomials.
pub fn walk_charpoly_stats(s: &GenSet, lengths: &[usize], trials: usize, seed: u64) -> Result<ReducibilityReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let rows = lengths
        .iter()
        .map(|&length| {
            let verdicts: Vec<PolyVerdict> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, length, t));
                    let w = walk_with(s, length, &mut rng);
                    classify_polynomial(&charpoly(&w.matrix))
                })
                .collect();
            let count = |f: fn(&PolyVerdict) -> bool| verdicts.iter().filter(|v| f(v)).count();
            let irreducible = count(|v| matches!(v, PolyVerdict::Irreducible { .. }));
            let reducible = count(|v| matches!(v, PolyVerdict::Reducible(_)));
            let undetermined = trials - irreducible - reducible;
            let frac = |k: usize| k as f64 / trials as f64;
            ReducibilityRow {
                length,
                trials,
                irreducible,
                reducible,
                undetermined,
                irreducible_fraction: frac(irreducible),
                reducible_fraction: frac(reducible),
                undetermined_fraction: frac(undetermined),
            }
        })
        .collect();
    Ok(ReducibilityReport { seed, rows })
}
