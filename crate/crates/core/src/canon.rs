//! Canonical labeling and automorphism groups of exchange matrices.
//!
//! Vertices are first partitioned by color refinement (weight, frozen flag,
//! then iterated multisets of incident entries). The search tree then
//! individualizes vertices of the first non-singleton cell and refines
//! again; every leaf is a vertex ordering and the canonical form is the
//! relabeled matrix whose row-major entries are lexicographically least.
//! All leaves that attain the minimum differ by automorphisms, which is how
//! [`automorphisms`] is computed.

use std::collections::BTreeMap;

use crate::matrix::ExchangeMatrix;
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub matrix: ExchangeMatrix,
    /// `m.relabel(witness) == matrix`.
    pub witness: Permutation,
}

/// Ordered partition represented as a color per vertex; colors are the
/// cell positions `0..cells`.
type Coloring = Vec<usize>;

fn recolor<K: Ord + Clone>(keys: &[K]) -> (Coloring, usize) {
    let mut distinct: Vec<K> = keys.to_vec();
    distinct.sort();
    distinct.dedup();
    let colors = keys
        .iter()
        .map(|k| distinct.binary_search(k).unwrap())
        .collect();
    (colors, distinct.len())
}

fn initial_coloring(m: &ExchangeMatrix) -> (Coloring, usize) {
    let keys: Vec<(bool, i64)> = (0..m.n()).map(|i| (m.is_frozen(i), m.weights()[i])).collect();
    recolor(&keys)
}

/// Refines to the coarsest equitable partition finer than `colors`. The
/// new order of cells only depends on label-invariant data.
fn refine(m: &ExchangeMatrix, mut colors: Coloring, mut cells: usize) -> (Coloring, usize) {
    let n = m.n();
    loop {
        let keys: Vec<(usize, Vec<(usize, i64, i64)>)> = (0..n)
            .map(|v| {
                let mut sig: Vec<(usize, i64, i64)> = (0..n)
                    .filter(|&u| u != v && (m.get(v, u) != 0 || m.get(u, v) != 0))
                    .map(|u| (colors[u], m.get(v, u), m.get(u, v)))
                    .collect();
                sig.sort_unstable();
                (colors[v], sig)
            })
            .collect();
        let (next, count) = recolor(&keys);
        if count == cells {
            return (next, count);
        }
        colors = next;
        cells = count;
    }
}

fn individualize(colors: &Coloring, v: usize) -> Coloring {
    let c = colors[v];
    colors
        .iter()
        .enumerate()
        .map(|(u, &cu)| {
            if cu > c || (cu == c && u != v) {
                cu + 1
            } else {
                cu
            }
        })
        .collect()
}

struct Search<'a> {
    m: &'a ExchangeMatrix,
    best: Option<(Vec<i64>, Vec<usize>)>,
    /// Orderings attaining `best`.
    ties: Vec<Vec<usize>>,
    keep_ties: bool,
}

impl Search<'_> {
    fn leaf_key(&self, order: &[usize]) -> Vec<i64> {
        let n = self.m.n();
        let mut key = Vec::with_capacity(n * n);
        for &i in order {
            for &j in order {
                key.push(self.m.get(i, j));
            }
        }
        key
    }

    fn visit(&mut self, colors: Coloring, cells: usize) {
        let n = self.m.n();
        if cells == n {
            let mut order = vec![0; n];
            for (v, &c) in colors.iter().enumerate() {
                order[c] = v;
            }
            let key = self.leaf_key(&order);
            match &self.best {
                Some((b, _)) if key > *b => {}
                Some((b, _)) if key == *b => {
                    if self.keep_ties {
                        self.ties.push(order);
                    }
                }
                _ => {
                    self.best = Some((key, order.clone()));
                    self.ties = vec![order];
                }
            }
            return;
        }
        // first non-singleton cell
        let mut sizes = vec![0usize; cells];
        for &c in &colors {
            sizes[c] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1).unwrap();
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        for v in members {
            let ind = individualize(&colors, v);
            let (refined, count) = refine(self.m, ind, cells + 1);
            self.visit(refined, count);
        }
    }
}

fn search(m: &ExchangeMatrix, keep_ties: bool) -> Search<'_> {
    let (colors, cells) = initial_coloring(m);
    let (colors, cells) = refine(m, colors, cells);
    let mut s = Search {
        m,
        best: None,
        ties: Vec::new(),
        keep_ties,
    };
    s.visit(colors, cells);
    s
}

fn witness_of(order: &[usize]) -> Permutation {
    // vertex order[p] moves to position p
    let mut images = vec![0; order.len()];
    for (p, &v) in order.iter().enumerate() {
        images[v] = p;
    }
    Permutation::from_images(images).expect("ordering is a bijection")
}

pub fn canonical_form(m: &ExchangeMatrix) -> CanonicalForm {
    let s = search(m, false);
    let (_, order) = s.best.expect("search visits at least one leaf");
    let witness = witness_of(&order);
    let matrix = m.relabel(&witness).expect("witness has matching size");
    CanonicalForm { matrix, witness }
}

/// All weight- and frozen-preserving permutations fixing `m`, sorted by
/// image array (the identity comes first).
pub fn automorphisms(m: &ExchangeMatrix) -> Vec<Permutation> {
    let s = search(m, true);
    let first = witness_of(&s.ties[0]);
    let first_inv = first.inverse();
    let mut out: Vec<Permutation> = s
        .ties
        .iter()
        .map(|order| first_inv.compose(&witness_of(order)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Both the canonical form and the automorphism group from one search.
pub fn canonical_form_with_automorphisms(m: &ExchangeMatrix) -> (CanonicalForm, Vec<Permutation>) {
    let s = search(m, true);
    let (_, order) = s.best.clone().expect("search visits at least one leaf");
    let witness = witness_of(&order);
    let first_inv = witness_of(&s.ties[0]).inverse();
    let mut auts: Vec<Permutation> = s
        .ties
        .iter()
        .map(|o| first_inv.compose(&witness_of(o)))
        .collect();
    auts.sort();
    auts.dedup();
    let matrix = m.relabel(&witness).expect("witness has matching size");
    (CanonicalForm { matrix, witness }, auts)
}

/// Some permutation `π` with `a.relabel(π) == b`, if the matrices are isomorphic.
pub fn isomorphism(a: &ExchangeMatrix, b: &ExchangeMatrix) -> Option<Permutation> {
    if a.n() != b.n() {
        return None;
    }
    let ca = canonical_form(a);
    let cb = canonical_form(b);
    (ca.matrix == cb.matrix).then(|| cb.witness.inverse().compose(&ca.witness))
}

/// Orbits of `points` under a permutation group given by all its elements.
/// Each orbit is sorted; orbits are ordered by their least element.
pub fn orbits(group: &[Permutation], points: &[usize]) -> Vec<Vec<usize>> {
    let mut by_min: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &p in points {
        let mut orbit: Vec<usize> = group.iter().map(|g| g.apply(p)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        by_min.entry(orbit[0]).or_insert(orbit);
    }
    by_min.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markov_and_negation_share_canonical_form() {
        let m = ExchangeMatrix::skew_symmetric(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]])
            .unwrap();
        let neg = m.mutate(0).unwrap();
        assert_eq!(canonical_form(&m).matrix, canonical_form(&neg).matrix);
        assert_eq!(automorphisms(&m).len(), 3);
    }

    #[test]
    fn a2_has_trivial_automorphisms() {
        let a2 = ExchangeMatrix::skew_symmetric(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(automorphisms(&a2), vec![Permutation::identity(2)]);
    }

    #[test]
    fn witness_relabels_to_canonical() {
        let m = ExchangeMatrix::skew_symmetric(vec![
            vec![0, 1, 0, 0],
            vec![-1, 0, 2, 0],
            vec![0, -2, 0, 1],
            vec![0, 0, -1, 0],
        ])
        .unwrap();
        let cf = canonical_form(&m);
        assert_eq!(m.relabel(&cf.witness).unwrap(), cf.matrix);
        for a in automorphisms(&m) {
            assert_eq!(m.apply_permutation(&a).unwrap(), m);
        }
    }

    #[test]
    fn empty_matrix() {
        let m = ExchangeMatrix::skew_symmetric(vec![]).unwrap();
        assert_eq!(canonical_form(&m).matrix, m);
        assert_eq!(automorphisms(&m).len(), 1);
    }

    #[test]
    fn orbit_listing() {
        let g = vec![
            Permutation::identity(4),
            Permutation::from_cycles(4, &[vec![1, 3]]).unwrap(),
        ];
        assert_eq!(orbits(&g, &[0, 1, 2, 3]), vec![vec![0], vec![1, 3], vec![2]]);
    }
}
