use serde::Serialize;

use super::GenSet;
use crate::error::{Error, Result};
use crate::exact::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub letters: Vec<usize>,
    pub word: String,
    /// False when the first letter is the inverse of the last, i.e. the
    /// relation is a conjugate of a shorter one.
    pub cyclically_reduced: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub max_len: usize,
    pub words_examined: usize,
    /// Every freely reduced word of length `1..=max_len` evaluating to the
    /// identity, ordered by length then lexicographically. An empty list
    /// certifies that no relation of length at most `max_len` exists, and
    /// says nothing beyond that length.
    pub relations: Vec<Relation>,
}

struct Search<'a> {
    s: &'a GenSet,
    max_len: usize,
    cap: usize,
    prefixes: Vec<IntMatrix>,
    letters: Vec<usize>,
    examined: usize,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn extend(&mut self) -> Result<()> {
        let depth = self.letters.len();
        if depth == self.max_len {
            return Ok(());
        }
        for g in 0..self.s.len() {
            if let Some(&last) = self.letters.last() {
                if self.s.inverse_index(last) == g {
                    continue;
                }
            }
            self.examined += 1;
            if self.examined > self.cap {
                return Err(Error::CapExceeded { cap: self.cap });
            }
            let m = &self.prefixes[depth] * &self.s.gens()[g];
            self.letters.push(g);
            if m.is_identity() {
                self.found.push(self.letters.clone());
            }
            self.prefixes.truncate(depth + 1);
            self.prefixes.push(m);
            self.extend()?;
            self.letters.pop();
        }
        Ok(())
    }
}

/// Exhaustive depth-first enumeration of freely reduced words up to
/// `max_len`, recording every word that evaluates to the identity. `cap`
/// bounds the number of words examined.
pub fn relation_search(s: &GenSet, max_len: usize, cap: usize) -> Result<RelationReport> {
    if max_len == 0 {
        return Err(Error::invalid("max_len must be at least 1"));
    }
    let mut search = Search {
        s,
        max_len,
        cap,
        prefixes: vec![IntMatrix::identity(s.dim())],
        letters: Vec::with_capacity(max_len),
        examined: 0,
        found: Vec::new(),
    };
    search.extend()?;
    let mut found = search.found;
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let relations = found
        .into_iter()
        .map(|letters| {
            let word = letters
                .iter()
                .map(|&i| s.labels()[i].as_str())
                .collect::<Vec<_>>()
                .join(" ");
            let cyclically_reduced = letters.len() < 2 || s.inverse_index(letters[0]) != *letters.last().unwrap();
            Relation {
                letters,
                word,
                cyclically_reduced,
            }
        })
        .collect();
    Ok(RelationReport {
        max_len,
        words_examined: search.examined,
        relations,
    })
}
