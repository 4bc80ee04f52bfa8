//! The modular graph of a mutation class: vertices are classes, edges are
//! orbits of mutations under the automorphism groups, faces are orbits of
//! standard polygon cycles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::canon::orbits;
use crate::class::MutationClass;
use crate::error::{Error, Result};
use crate::matrix::ExchangeMatrix;
use crate::perm::Permutation;
use crate::word::{MutationWord, Token};

/// The allowed `(p, h)` pairs of standard relations.
pub const STANDARD_TYPES: [(i64, usize); 4] = [(0, 2), (1, 3), (2, 4), (3, 6)];

/// `Some((p, h))` when `ε_kl = −p·ε_lk = p` for one of the standard types.
pub fn standard_type(m: &ExchangeMatrix, k: usize, l: usize) -> Option<(i64, usize)> {
    if k == l {
        return None;
    }
    let (a, b) = (m.get(k, l), m.get(l, k));
    STANDARD_TYPES
        .iter()
        .copied()
        .find(|&(p, _)| if p == 0 { a == 0 && b == 0 } else { a == p && b == -1 })
}

/// The standard sequence `((k l) μ_k)^(h+2)`.
pub fn standard_word(n: usize, k: usize, l: usize, h: usize) -> MutationWord {
    let step = MutationWord::from_tokens(
        n,
        vec![Token::Perm(Permutation::transposition(n, k, l)), Token::Mutate(k)],
    )
    .expect("indices in range");
    step.pow((h + 2) as i64)
}

/// An unoriented edge orbit, oriented from its lexicographically least
/// side `(source, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeOrbit {
    pub source: usize,
    pub k: usize,
    pub target: usize,
    /// Least element of the reverse orbit at `target`.
    pub reverse_k: usize,
    /// Some element of the group maps the edge to its own reverse.
    pub inverted: bool,
    /// The BFS tree edge into `target`.
    pub tree: bool,
}

/// A face orbit, represented by a cycle `C_{h+2}(k, l)` based at `base`
/// with `ε_kl = −p·ε_lk = p` in the base representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardCycle {
    pub base: usize,
    pub k: usize,
    pub l: usize,
    pub p: i64,
    pub h: usize,
    /// All corner orbits `(class, k, l)` (with `k < l`) met by the cycle.
    pub corners: Vec<(usize, usize, usize)>,
}

impl StandardCycle {
    pub fn length(&self) -> usize {
        self.h + 2
    }
}

#[derive(Clone, Debug)]
pub struct ModularGraph {
    pub class: MutationClass,
    /// Per class, the orbits of mutable vertices under `Aut(R_c)`.
    pub vertex_orbits: Vec<Vec<Vec<usize>>>,
    pub edges: Vec<EdgeOrbit>,
    pub faces: Vec<StandardCycle>,
}

impl ModularGraph {
    pub fn new(class: MutationClass) -> Result<Self> {
        let mutable = class.mutable_vertices();
        let vertex_orbits: Vec<Vec<Vec<usize>>> = (0..class.len())
            .map(|c| orbits(class.automorphisms(c), &mutable))
            .collect();
        let mut g = ModularGraph {
            class,
            vertex_orbits,
            edges: Vec::new(),
            faces: Vec::new(),
        };
        g.edges = g.compute_edges();
        g.faces = g.compute_faces()?;
        Ok(g)
    }

    /// Least element of the `Aut(R_c)`-orbit of `k`.
    pub fn orbit_rep(&self, c: usize, k: usize) -> usize {
        self.vertex_orbits[c]
            .iter()
            .find(|o| o.contains(&k))
            .map(|o| o[0])
            .expect("mutable vertex lies in an orbit")
    }

    /// Vertex of `R_t` along which `μ_k` at `R_c` is reversed.
    pub fn reverse_index(&self, c: usize, k: usize) -> (usize, usize) {
        let e = self.class.edge(c, k);
        (e.target, e.witness.inverse().apply(k))
    }

    fn compute_edges(&self) -> Vec<EdgeOrbit> {
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut out = Vec::new();
        for c in 0..self.class.len() {
            for orbit in &self.vertex_orbits[c] {
                let k = orbit[0];
                if seen.contains(&(c, k)) {
                    continue;
                }
                let (t, kr) = self.reverse_index(c, k);
                let rk = self.orbit_rep(t, kr);
                seen.insert((c, k));
                seen.insert((t, rk));
                // (c, k) is the least side: sides are visited in order
                let tree = self.class.member(t).parent == Some((c, k));
                out.push(EdgeOrbit {
                    source: c,
                    k,
                    target: t,
                    reverse_k: rk,
                    inverted: (t, rk) == (c, k),
                    tree,
                });
            }
        }
        out
    }

    /// Number of oriented edge orbits, i.e. `Σ_c #orbits(c)`.
    pub fn oriented_edge_count(&self) -> usize {
        self.edges.iter().map(|e| if e.inverted { 1 } else { 2 }).sum()
    }

    /// Fails with [`Error::InvertedEdge`] when some edge orbit is inverted.
    pub fn assert_no_inversions(&self) -> Result<()> {
        match self.edges.iter().find(|e| e.inverted) {
            Some(e) => Err(Error::InvertedEdge {
                class: e.source,
                k: e.k,
            }),
            None => Ok(()),
        }
    }

    /// Automorphisms of `R_c` fixing `k`; each also fixes `μ_k(R_c)`.
    pub fn simultaneous_automorphisms(&self, c: usize, k: usize) -> Result<Vec<Permutation>> {
        let r = self.class.representative(c);
        let mk = r.mutate(k)?;
        let out: Vec<Permutation> = self
            .class
            .automorphisms(c)
            .iter()
            .filter(|a| a.apply(k) == k)
            .cloned()
            .collect();
        for a in &out {
            if mk.relabel(a)? != mk {
                return Err(Error::Internal(format!(
                    "{a} fixes class {c} and vertex {k} but not the mutated matrix"
                )));
            }
        }
        Ok(out)
    }

    /// Corner orbit key: least `(k, l)` with `k < l` in the `Aut(R_c)`-orbit
    /// of the unordered pair.
    fn corner_key(&self, c: usize, k: usize, l: usize) -> (usize, usize, usize) {
        self.class
            .automorphisms(c)
            .iter()
            .map(|a| {
                let (x, y) = (a.apply(k), a.apply(l));
                (c, x.min(y), x.max(y))
            })
            .min()
            .expect("automorphism group is nonempty")
    }

    /// Walks the standard cycle at corner `(c, k, l)` (ordered so that
    /// `standard_type(R_c, k, l)` holds) through the class and returns the
    /// visited states: class and relabeling `τ` with current matrix
    /// `R_class.relabel(τ)`, before each period.
    pub fn walk_cycle(&self, c: usize, k: usize, l: usize) -> Result<Vec<(usize, Permutation)>> {
        let r = self.class.representative(c);
        let (_, h) = standard_type(r, k, l).ok_or_else(|| {
            Error::Internal(format!("({k}, {l}) is not a standard pair at class {c}"))
        })?;
        let n = r.n();
        let swap = Permutation::transposition(n, k, l);
        let mut states = Vec::with_capacity(h + 3);
        let (mut cls, mut tau) = (c, Permutation::identity(n));
        states.push((cls, tau.clone()));
        for _ in 0..h + 2 {
            let j = tau.inverse().apply(k);
            let e = self.class.edge(cls, j);
            tau = tau.compose(&e.witness);
            cls = e.target;
            tau = swap.compose(&tau);
            states.push((cls, tau.clone()));
        }
        let (end_c, end_tau) = states.last().expect("nonempty");
        if *end_c != c || r.relabel(end_tau)? != *r {
            return Err(Error::Internal(format!(
                "standard cycle at class {c}, pair ({k}, {l}) does not close"
            )));
        }
        Ok(states)
    }

    fn compute_faces(&self) -> Result<Vec<StandardCycle>> {
        let mutable = self.class.mutable_vertices();
        // corner key -> ordered pair realizing the standard type
        let mut corners: BTreeMap<(usize, usize, usize), (usize, usize, i64, usize)> = BTreeMap::new();
        for c in 0..self.class.len() {
            let r = self.class.representative(c);
            for &k in &mutable {
                for &l in &mutable {
                    if let Some((p, h)) = standard_type(r, k, l) {
                        let key = self.corner_key(c, k, l);
                        corners.entry(key).or_insert_with(|| {
                            let (x, y) = (key.1, key.2);
                            if standard_type(r, x, y).is_some() {
                                (x, y, p, h)
                            } else {
                                (y, x, p, h)
                            }
                        });
                    }
                }
            }
        }
        let mut assigned: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        let mut faces = Vec::new();
        for (&key, &(k, l, p, h)) in &corners {
            if assigned.contains(&key) {
                continue;
            }
            let c = key.0;
            let states = self.walk_cycle(c, k, l)?;
            let mut met: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
            for (cls, tau) in &states {
                let inv = tau.inverse();
                let (a, b) = (inv.apply(k), inv.apply(l));
                let rep = self.class.representative(*cls);
                let typed = standard_type(rep, a, b).or_else(|| standard_type(rep, b, a));
                if typed.map(|t| t.0) == Some(p) {
                    met.insert(self.corner_key(*cls, a, b));
                }
            }
            for m in &met {
                if assigned.contains(m) {
                    return Err(Error::Internal(format!(
                        "corner {m:?} lies on two different face orbits"
                    )));
                }
            }
            assigned.extend(met.iter().copied());
            faces.push(StandardCycle {
                base: c,
                k,
                l,
                p,
                h,
                corners: met.into_iter().collect(),
            });
        }
        Ok(faces)
    }

    /// Counts of faces by polygon length `h + 2`.
    pub fn face_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in &self.faces {
            *out.entry(f.length()).or_insert(0) += 1;
        }
        out
    }

    /// Graphviz text: tree edges solid, other edge orbits dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph modular {\n");
        for c in 0..self.class.len() {
            let _ = writeln!(
                s,
                "  v{c} [label=\"v{c}\\n|Aut|={}\"];",
                self.class.automorphisms(c).len()
            );
        }
        for e in &self.edges {
            let style = if e.tree { "solid" } else { "dashed" };
            let _ = writeln!(
                s,
                "  v{} -- v{} [label=\"{}\", style={style}];",
                e.source, e.target, e.k
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "class": self.class.to_json(),
            "vertex_orbits": self.vertex_orbits,
            "edges": self.edges,
            "faces": self.faces,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::class::DEFAULT_CAP;

    fn graph(name: &str) -> ModularGraph {
        let m = catalog::get(name).unwrap();
        ModularGraph::new(MutationClass::enumerate(&m, DEFAULT_CAP).unwrap()).unwrap()
    }

    #[test]
    fn a2_graph() {
        let g = graph("a2");
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.face_counts(), BTreeMap::from([(5, 1)]));
        assert_eq!(g.simultaneous_automorphisms(0, 0).unwrap().len(), 1);
    }

    #[test]
    fn markov_edge_is_inverted() {
        let g = graph("markov");
        assert_eq!(g.edges.len(), 1);
        assert!(g.edges[0].inverted);
        assert!(matches!(g.assert_no_inversions(), Err(Error::InvertedEdge { .. })));
    }

    #[test]
    fn standard_types() {
        let g2 = catalog::get("g2").unwrap();
        assert_eq!(standard_type(&g2, 2, 0), Some((3, 6)));
        assert_eq!(standard_type(&g2, 0, 2), None);
        assert_eq!(standard_type(&g2, 0, 3), Some((0, 2)));
        assert_eq!(standard_word(4, 2, 0, 6).mutation_count(), 8);
    }
}
