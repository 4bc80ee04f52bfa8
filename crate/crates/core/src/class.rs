//! Breadth-first enumeration of a mutation class up to isomorphism.
//!
//! Class `0` is the start matrix. Every other class is represented by the
//! exact labeled matrix first reached from its BFS parent, so tree edges
//! carry the identity witness and the tree path to a class is a plain
//! sequence of mutations.

use std::collections::{HashMap, VecDeque};

use serde_json::json;

use crate::canon::{canonical_form, canonical_form_with_automorphisms};
use crate::error::{Error, Result};
use crate::matrix::ExchangeMatrix;
use crate::perm::Permutation;
use crate::word::MutationWord;

pub const DEFAULT_CAP: usize = 50_000;

#[derive(Clone, Debug)]
pub struct ClassMember {
    /// Labeled representative `R_c`.
    pub matrix: ExchangeMatrix,
    /// Canonical form of `R_c`, the lookup key of the class.
    pub canonical: ExchangeMatrix,
    /// `R_c.relabel(witness) == canonical`.
    pub witness: Permutation,
    /// `Aut(R_c)`, sorted, identity first.
    pub automorphisms: Vec<Permutation>,
    /// BFS parent and the vertex mutated from it.
    pub parent: Option<(usize, usize)>,
    pub depth: usize,
}

/// `μ_k(R_c) == R_target.relabel(witness)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub target: usize,
    pub witness: Permutation,
}

#[derive(Clone, Debug)]
pub struct MutationClass {
    members: Vec<ClassMember>,
    index: HashMap<ExchangeMatrix, usize>,
    /// `adjacency[c][k]`, `None` at frozen vertices.
    adjacency: Vec<Vec<Option<Edge>>>,
}

impl MutationClass {
    /// Enumerates the class of `start`; fails with [`Error::CapExceeded`]
    /// once more than `cap` non-isomorphic matrices are found.
    pub fn enumerate(start: &ExchangeMatrix, cap: usize) -> Result<Self> {
        let mut class = MutationClass {
            members: Vec::new(),
            index: HashMap::new(),
            adjacency: Vec::new(),
        };
        class.insert(start.clone(), None, 0, cap)?;
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let n = start.n();
            let mut row = vec![None; n];
            for k in start.mutable_vertices() {
                let m = class.members[c].matrix.mutate(k)?;
                let cf = canonical_form(&m);
                let edge = match class.index.get(&cf.matrix) {
                    Some(&t) => Edge {
                        target: t,
                        witness: class.least_witness(t, &cf.witness),
                    },
                    None => {
                        let depth = class.members[c].depth + 1;
                        let t = class.insert(m, Some((c, k)), depth, cap)?;
                        queue.push_back(t);
                        Edge {
                            target: t,
                            witness: Permutation::identity(n),
                        }
                    }
                };
                row[k] = Some(edge);
            }
            class.adjacency[c] = row;
        }
        Ok(class)
    }

    fn insert(
        &mut self,
        matrix: ExchangeMatrix,
        parent: Option<(usize, usize)>,
        depth: usize,
        cap: usize,
    ) -> Result<usize> {
        if self.members.len() >= cap {
            return Err(Error::CapExceeded(cap));
        }
        let (cf, automorphisms) = canonical_form_with_automorphisms(&matrix);
        let id = self.members.len();
        self.index.insert(cf.matrix.clone(), id);
        self.members.push(ClassMember {
            matrix,
            canonical: cf.matrix,
            witness: cf.witness,
            automorphisms,
            parent,
            depth,
        });
        self.adjacency.push(Vec::new());
        Ok(id)
    }

    /// Given the canonical witness `w` of some `M ≅ R_t`, the
    /// lexicographically least `π` with `M == R_t.relabel(π)`.
    fn least_witness(&self, t: usize, w: &Permutation) -> Permutation {
        let member = &self.members[t];
        let base = w.inverse().compose(&member.witness);
        member
            .automorphisms
            .iter()
            .map(|a| base.compose(a))
            .min()
            .expect("automorphism group is nonempty")
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn n(&self) -> usize {
        self.members[0].matrix.n()
    }

    pub fn members(&self) -> &[ClassMember] {
        &self.members
    }

    pub fn member(&self, c: usize) -> &ClassMember {
        &self.members[c]
    }

    pub fn representative(&self, c: usize) -> &ExchangeMatrix {
        &self.members[c].matrix
    }

    pub fn automorphisms(&self, c: usize) -> &[Permutation] {
        &self.members[c].automorphisms
    }

    pub fn mutable_vertices(&self) -> Vec<usize> {
        self.members[0].matrix.mutable_vertices()
    }

    /// Edge out of class `c` at vertex `k`.
    pub fn edge(&self, c: usize, k: usize) -> &Edge {
        self.adjacency[c][k]
            .as_ref()
            .expect("edge requested at a frozen vertex")
    }

    /// Locates `m` in the class: `(c, π)` with `m == R_c.relabel(π)`.
    pub fn locate(&self, m: &ExchangeMatrix) -> Option<(usize, Permutation)> {
        let cf = canonical_form(m);
        let &c = self.index.get(&cf.matrix)?;
        Some((c, self.least_witness(c, &cf.witness)))
    }

    /// The mutation path from `R_0` to `R_c` along the BFS tree, as a word
    /// with `R_0.apply_word(path) == R_c`.
    pub fn path(&self, c: usize) -> MutationWord {
        let mut written = Vec::new();
        let mut cur = c;
        while let Some((p, k)) = self.members[cur].parent {
            written.push(k);
            cur = p;
        }
        MutationWord::mutations(self.n(), &written)
    }

    /// Canonical matrices of all members, sorted.
    pub fn canonical_set(&self) -> Vec<ExchangeMatrix> {
        let mut v: Vec<ExchangeMatrix> = self.members.iter().map(|m| m.canonical.clone()).collect();
        v.sort();
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let members: Vec<serde_json::Value> = self
            .members
            .iter()
            .enumerate()
            .map(|(c, m)| {
                let edges: Vec<serde_json::Value> = self.adjacency[c]
                    .iter()
                    .enumerate()
                    .filter_map(|(k, e)| {
                        e.as_ref().map(|e| {
                            json!({"k": k, "target": e.target, "witness": e.witness.to_string()})
                        })
                    })
                    .collect();
                json!({
                    "id": c,
                    "quiver": m.matrix.to_json(),
                    "automorphism_order": m.automorphisms.len(),
                    "path": self.path(c).to_string(),
                    "edges": edges,
                })
            })
            .collect();
        json!({"size": self.len(), "members": members})
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn small_classes() {
        let a2 = catalog::get("a2").unwrap();
        let c = MutationClass::enumerate(&a2, 10).unwrap();
        assert_eq!(c.len(), 1);
        let markov = catalog::get("markov").unwrap();
        assert_eq!(MutationClass::enumerate(&markov, 10).unwrap().len(), 1);
    }

    #[test]
    fn edges_are_consistent() {
        let x7 = catalog::get("x7").unwrap();
        let c = MutationClass::enumerate(&x7, DEFAULT_CAP).unwrap();
        for id in 0..c.len() {
            for k in c.mutable_vertices() {
                let e = c.edge(id, k);
                let m = c.representative(id).mutate(k).unwrap();
                assert_eq!(m, c.representative(e.target).relabel(&e.witness).unwrap());
            }
            let reached = x7.apply_word(&c.path(id)).unwrap();
            assert_eq!(&reached, c.representative(id));
        }
    }

    #[test]
    fn cap_is_enforced() {
        // A 3-cycle with double arrows on two sides is of infinite mutation type.
        let m = ExchangeMatrix::skew_symmetric(vec![vec![0, 2, -1], vec![-2, 0, 2], vec![1, -2, 0]])
            .unwrap();
        assert!(matches!(MutationClass::enumerate(&m, 200), Err(Error::CapExceeded(200))));
    }

    use crate::word::WordAction;
}
