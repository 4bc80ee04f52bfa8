//! Permutations of `0..n` with cycle-notation parsing and display.
//!
//! A permutation is stored by its images: `images[i]` is `σ(i)`.
//! Composition follows function notation, so `a.compose(&b)` is `a ∘ b`
//! (apply `b` first).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "image array {images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `0..n` from cycles. Cycles are composed in
    /// function notation: `[[0, 1], [1, 2]]` means `(0 1)(1 2)`, so `(1 2)`
    /// is applied first.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut perm = Permutation::identity(n);
        for cycle in cycles.iter().rev() {
            let c = Permutation::cycle(n, cycle)?;
            perm = c.compose(&perm);
        }
        Ok(perm)
    }

    /// A single cycle `(a b c ...)` on `0..n`.
    pub fn cycle(n: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for (pos, &x) in cycle.iter().enumerate() {
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "cycle entry {x} out of range for {n} vertices"
                )));
            }
            if seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "cycle {cycle:?} repeats {x}"
                )));
            }
            seen[x] = true;
            images[x] = cycle[(pos + 1) % cycle.len()];
        }
        Ok(Permutation { images })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    /// Whether the permutation maps `set` onto itself.
    pub fn preserves_set(&self, set: &[usize]) -> bool {
        set.iter().all(|&x| set.contains(&self.images[x]))
    }

    /// Non-trivial cycles, each starting at its least element, ordered by
    /// that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle notation with labels shifted by `base` (0 or 1). The identity
    /// renders as `()`.
    pub fn to_cycle_string(&self, base: usize) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| (x + base).to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect()
    }

    /// Extends to `0..n` by fixing the new points.
    pub fn extend(&self, n: usize) -> Self {
        let mut images = self.images.clone();
        images.extend(self.len()..n);
        Permutation { images }
    }

    /// Every permutation of `0..n` in lexicographic order of image arrays.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string(0))
    }
}
