//! Breadth-first enumeration of group elements by reduced words.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::projective::ProjTransform;
use crate::tol;

/// Longest word length accepted by [`enumerate_words`].
pub const MAX_WORD_LENGTH: usize = 16;

/// Default cap on the number of distinct elements kept.
pub const DEFAULT_NODE_CAP: usize = 1 << 21;

/// A group element with the first (shortest) word found for it.
#[derive(Clone, Debug, Serialize)]
pub struct WordEntry {
    pub word: String,
    pub length: usize,
    #[serde(skip)]
    pub transform: ProjTransform,
}

#[derive(Clone, Copy, Debug)]
struct Letter {
    generator: usize,
    inverse: bool,
}

fn generator_name(g: &ProjTransform, i: usize) -> String {
    match g.label() {
        Some(l) if !l.is_empty() && l != "e" => l.to_string(),
        _ => char::from(b'a' + (i % 26) as u8).to_string(),
    }
}

fn inverse_name(name: &str) -> String {
    if name.chars().all(|c| c.is_ascii_lowercase()) {
        name.to_ascii_uppercase()
    } else {
        format!("{name}^-1")
    }
}

fn bucket(g: &ProjTransform) -> Vec<i64> {
    g.matrix()
        .iter()
        .map(|v| (v / tol::WORD_HASH).round() as i64)
        .collect()
}

struct Seen {
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl Seen {
    fn contains_or_insert(&mut self, entries: &[WordEntry], g: &ProjTransform, index: usize) -> bool {
        let slot = self.buckets.entry(bucket(g)).or_default();
        if slot.iter().any(|&i| entries[i].transform.distance(g) <= tol::EQUALITY) {
            return true;
        }
        slot.push(index);
        false
    }
}

/// All elements of word length at most `max_len` in the generators.
///
/// Words are reduced: a letter is never followed by its inverse, and an
/// involutive generator is never repeated. Elements are deduplicated by
/// their normalized matrices, keeping the shortest word. The identity comes
/// first, then words by increasing length.
pub fn enumerate_words(
    generators: &[ProjTransform],
    max_len: usize,
    involutions: &[bool],
    node_cap: usize,
) -> Result<Vec<WordEntry>> {
    if max_len > MAX_WORD_LENGTH {
        return Err(Error::InvalidArgument(format!(
            "word length {max_len} exceeds the limit {MAX_WORD_LENGTH}"
        )));
    }
    let n = generators.first().map(|g| g.dim()).unwrap_or(0);
    if generators.is_empty() {
        return Ok(vec![WordEntry {
            word: "e".into(),
            length: 0,
            transform: ProjTransform::identity(2),
        }]);
    }
    if let Some(g) = generators.iter().find(|g| g.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.dim(),
        });
    }
    let is_inv = |i: usize| involutions.get(i).copied().unwrap_or(false);

    let mut letters = Vec::new();
    let mut mats = Vec::new();
    let mut names = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        let name = generator_name(g, i);
        letters.push(Letter {
            generator: i,
            inverse: false,
        });
        mats.push(g.clone().with_label(name.clone()));
        if !is_inv(i) {
            letters.push(Letter {
                generator: i,
                inverse: true,
            });
            mats.push(g.inverse()?.with_label(inverse_name(&name)));
        }
        names.push(name);
    }
    let cancels = |last: Letter, next: Letter| {
        last.generator == next.generator && (is_inv(last.generator) || last.inverse != next.inverse)
    };

    let mut entries = vec![WordEntry {
        word: "e".into(),
        length: 0,
        transform: ProjTransform::identity(n),
    }];
    let mut seen = Seen {
        buckets: HashMap::new(),
    };
    seen.contains_or_insert(&entries, &entries[0].transform.clone(), 0);
    // frontier: (entry index, last letter)
    let mut frontier: Vec<(usize, Option<usize>)> = vec![(0, None)];
    for length in 1..=max_len {
        let candidates: Vec<(ProjTransform, usize)> = frontier
            .par_iter()
            .flat_map_iter(|&(idx, last)| {
                let base = &entries[idx].transform;
                let letters = &letters;
                let mats = &mats;
                (0..letters.len()).filter_map(move |k| {
                    if let Some(l) = last {
                        if cancels(letters[l], letters[k]) {
                            return None;
                        }
                    }
                    Some((base.compose(&mats[k]), k))
                })
            })
            .collect();
        let mut next = Vec::new();
        for (g, k) in candidates {
            let index = entries.len();
            if seen.contains_or_insert(&entries, &g, index) {
                continue;
            }
            entries.push(WordEntry {
                word: g.label().unwrap_or("?").to_string(),
                length,
                transform: g,
            });
            next.push((index, Some(k)));
            if entries.len() > node_cap {
                return Err(Error::BudgetExceeded(node_cap));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(gens: &[ProjTransform], l: usize, inv: &[bool]) -> Vec<String> {
        enumerate_words(gens, l, inv, DEFAULT_NODE_CAP)
            .unwrap()
            .into_iter()
            .map(|e| e.word)
            .collect()
    }

    #[test]
    fn cyclic_group() {
        let g = ProjTransform::diagonal(&[2.0, 1.0, 0.5]).unwrap();
        assert_eq!(words(&[g], 3, &[false]), ["e", "a", "A", "aa", "AA", "aaa", "AAA"]);
    }

    #[test]
    fn coxeter_pair() {
        let r = ProjTransform::diagonal(&[-1.0, 1.0, 1.0]).unwrap();
        let s = ProjTransform::from_rows(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(words(&[r, s], 2, &[true, true]), ["e", "a", "b", "ab", "ba"]);
    }

    #[test]
    fn free_pair_counts() {
        let a = ProjTransform::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        let b = ProjTransform::from_rows(&[vec![1.0, 0.0], vec![2.0, 1.0]]).unwrap();
        assert_eq!(words(&[a.clone(), b.clone()], 2, &[false, false]).len(), 17);
        assert_eq!(words(&[a, b], 3, &[false, false]).len(), 1 + 4 + 12 + 36);
    }

    #[test]
    fn finite_group_saturates() {
        let r = ProjTransform::diagonal(&[-1.0, 1.0, 1.0]).unwrap();
        assert_eq!(words(&[r], 10, &[true]).len(), 2);
    }

    #[test]
    fn length_cap() {
        let g = ProjTransform::diagonal(&[2.0, 1.0]).unwrap();
        assert!(enumerate_words(&[g.clone()], 17, &[false], 100).is_err());
        assert!(matches!(
            enumerate_words(&[g], 10, &[false], 5),
            Err(Error::BudgetExceeded(5))
        ));
    }
}
