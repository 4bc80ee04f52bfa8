//! Presentations of the saturated cluster modular group by Brown's method.
//!
//! The group acts on the exchange graph with finite quotient [`ModularGraph`].
//! Fix the tree path `P_c` from `R_0` to every class representative `R_c`.
//! Every mutation out of `R_c`, corrected by its witness, is a morphism
//! `m_{c,j} = π_{c,j}⁻¹ μ_j : R_c → R_t`, and every automorphism of `R_c`
//! is a morphism `R_c → R_c`. Each `m_{c,j}` is rewritten through one edge
//! generator per edge orbit:
//!
//! * `(c, j)` on the source side of its orbit `e = (c, k)`: with `a(k) = j`,
//!   `m_{c,j} = [b]_t g_e [a⁻¹]_c` where `b = π_{c,j}⁻¹ a π_{c,k}`;
//! * `(c, j)` on the target side: `m_{c,j} = [b' z]_s g_e⁻¹ [a'⁻¹]_c`, using
//!   that `m_{c,k'} m_e` is the automorphism `z = (π_e π_{c,k'})⁻¹` of `R_s`.
//!
//! Relators are the multiplication tables of the automorphism groups, the
//! edge isotropy relations, the rewritten naturality and involution
//! identities of all `m_{c,j}`, and one relator per face orbit. A generator
//! expands at `R_0` to `P_c⁻¹ a P_c` or `P_t⁻¹ π_e⁻¹ μ_k P_c`; every relator
//! is certified as a trivial loop before the presentation is returned.

use std::collections::{BTreeMap, HashMap};

use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{EdgeOrbit, ModularGraph, StandardCycle};
use crate::group::presentation::{cyclic_reduce, free_reduce, GroupPresentation, Relator};
use crate::matrix::ExchangeMatrix;
use crate::perm::Permutation;
use crate::seed::{is_trivial_loop, Mode};
use crate::word::{MutationWord, Token, WordAction};

/// Tree `T`, edge representatives `E⁺` (one per unoriented edge orbit,
/// oriented from its least side) and face representatives `F`.
#[derive(Clone, Debug)]
pub struct DataOfRepresentatives {
    /// `(parent class, vertex, child class)` for every non-root class.
    pub tree: Vec<(usize, usize, usize)>,
    pub eplus: Vec<EdgeOrbit>,
    pub faces: Vec<StandardCycle>,
}

impl DataOfRepresentatives {
    pub fn tree_edge_count(&self) -> usize {
        self.eplus.iter().filter(|e| e.tree).count()
    }
}

pub fn choose_representatives(g: &ModularGraph) -> Result<DataOfRepresentatives> {
    let class = &g.class;
    let tree: Vec<(usize, usize, usize)> = (1..class.len())
        .map(|c| {
            let (p, k) = class.member(c).parent.expect("non-root classes have a parent");
            (p, k, c)
        })
        .collect();
    let d = DataOfRepresentatives {
        tree,
        eplus: g.edges.clone(),
        faces: g.faces.clone(),
    };
    if d.tree_edge_count() != d.tree.len() {
        return Err(Error::Internal(format!(
            "{} tree edges among the edge representatives, expected {}",
            d.tree_edge_count(),
            d.tree.len()
        )));
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Automorphism `element` of class `class`.
    Isotropy { class: usize, element: Permutation },
    /// Edge generator of `eplus[edge]`.
    Edge { edge: usize },
}

#[derive(Clone, Debug)]
pub struct BrownGenerator {
    pub name: String,
    pub kind: GeneratorKind,
    /// Expansion at `R_0`.
    pub word: MutationWord,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelatorKind {
    Table { class: usize },
    Tree { class: usize },
    Isotropy { edge: usize },
    Naturality { class: usize, vertex: usize },
    Involution { class: usize, vertex: usize },
    Face { face: usize },
}

impl RelatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            RelatorKind::Table { .. } => "table",
            RelatorKind::Tree { .. } => "tree",
            RelatorKind::Isotropy { .. } => "isotropy",
            RelatorKind::Naturality { .. } => "naturality",
            RelatorKind::Involution { .. } => "involution",
            RelatorKind::Face { .. } => "face",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Assembly {
    pub graph: ModularGraph,
    pub base: ExchangeMatrix,
    pub data: DataOfRepresentatives,
    pub generators: Vec<BrownGenerator>,
    pub presentation: GroupPresentation,
    pub kinds: Vec<RelatorKind>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sym {
    Aut(usize, Permutation),
    Edge(usize, i32),
}

struct Builder<'a> {
    g: &'a ModularGraph,
    /// Both sides `(class, orbit rep)` of every edge orbit.
    side: HashMap<(usize, usize), usize>,
    aut_gen: HashMap<(usize, Permutation), usize>,
    edge_gen: Vec<Option<usize>>,
}

impl<'a> Builder<'a> {
    fn new(g: &'a ModularGraph, generators: &[BrownGenerator]) -> Self {
        let mut side = HashMap::new();
        for (i, e) in g.edges.iter().enumerate() {
            side.insert((e.source, e.k), i);
            side.insert((e.target, e.reverse_k), i);
        }
        let mut aut_gen = HashMap::new();
        let mut edge_gen = vec![None; g.edges.len()];
        for (i, gen) in generators.iter().enumerate() {
            match &gen.kind {
                GeneratorKind::Isotropy { class, element } => {
                    aut_gen.insert((*class, element.clone()), i);
                }
                GeneratorKind::Edge { edge } => edge_gen[*edge] = Some(i),
            }
        }
        Builder {
            g,
            side,
            aut_gen,
            edge_gen,
        }
    }

    fn witness(&self, c: usize, j: usize) -> &Permutation {
        &self.g.class.edge(c, j).witness
    }

    fn first_aut_mapping(&self, c: usize, from: usize, to: usize) -> Permutation {
        self.g
            .class
            .automorphisms(c)
            .iter()
            .find(|a| a.apply(from) == to)
            .cloned()
            .expect("vertices in one orbit")
    }

    /// `m_{c,j}` in written order.
    fn edge_expr(&self, c: usize, j: usize) -> Vec<Sym> {
        let rep = self.g.orbit_rep(c, j);
        let ei = self.side[&(c, rep)];
        let e = &self.g.edges[ei];
        let pi_e = self.witness(e.source, e.k).clone();
        let pi_j = self.witness(c, j).clone();
        let edge = |s: i32| if e.tree { None } else { Some(Sym::Edge(ei, s)) };
        if (c, rep) == (e.source, e.k) {
            let a = self.first_aut_mapping(c, e.k, j);
            let b = pi_j.inverse().compose(&a).compose(&pi_e);
            [Some(Sym::Aut(e.target, b)), edge(1), Some(Sym::Aut(c, a.inverse()))]
                .into_iter()
                .flatten()
                .collect()
        } else {
            let k2 = pi_e.inverse().apply(e.k);
            let pi_k2 = self.witness(c, k2).clone();
            let z = pi_e.compose(&pi_k2).inverse();
            let a = self.first_aut_mapping(c, k2, j);
            let b = pi_j.inverse().compose(&a).compose(&pi_k2);
            [Some(Sym::Aut(e.source, b.compose(&z))), edge(-1), Some(Sym::Aut(c, a.inverse()))]
                .into_iter()
                .flatten()
                .collect()
        }
    }

    /// Cyclically reduced letters of a relator.
    fn letters(&self, syms: &[Sym]) -> Relator {
        cyclic_reduce(&self.letters_linear(syms))
    }

    /// Merges adjacent automorphisms and cancels `g g⁻¹`, then maps to letters.
    fn letters_linear(&self, syms: &[Sym]) -> Relator {
        let mut stack: Vec<Sym> = Vec::new();
        for s in syms {
            match s {
                Sym::Aut(_, a) if a.is_identity() => {}
                Sym::Aut(c, a) => match stack.last_mut() {
                    Some(Sym::Aut(d, b)) if d == c => {
                        let merged = b.compose(a);
                        if merged.is_identity() {
                            stack.pop();
                        } else {
                            *b = merged;
                        }
                    }
                    _ => stack.push(s.clone()),
                },
                Sym::Edge(e, x) => {
                    if stack.last() == Some(&Sym::Edge(*e, -x)) {
                        stack.pop();
                    } else {
                        stack.push(s.clone());
                    }
                }
            }
        }
        stack
            .iter()
            .map(|s| match s {
                Sym::Aut(c, a) => (self.aut_gen[&(*c, a.clone())], 1),
                Sym::Edge(e, x) => (self.edge_gen[*e].expect("non-tree edge"), *x),
            })
            .collect()
    }
}

/// Runs the full pipeline on a modular graph.
pub fn assemble_presentation(g: &ModularGraph) -> Result<Assembly> {
    let data = choose_representatives(g)?;
    let class = &g.class;
    let n = class.n();
    let base = class.representative(0).clone();

    let mut generators = Vec::new();
    for c in 0..class.len() {
        let path = class.path(c);
        for (i, a) in class.automorphisms(c).iter().enumerate().skip(1) {
            let word = path.inverse().then_after(&MutationWord::permutation(a.clone())).then_after(&path);
            generators.push(BrownGenerator {
                name: format!("a{c}_{i}"),
                kind: GeneratorKind::Isotropy {
                    class: c,
                    element: a.clone(),
                },
                word,
            });
        }
    }
    for (i, e) in g.edges.iter().enumerate() {
        if e.tree {
            continue;
        }
        let pi = &class.edge(e.source, e.k).witness;
        let step = MutationWord::from_tokens(n, vec![Token::Perm(pi.inverse()), Token::Mutate(e.k)])?;
        let word = class.path(e.target).inverse().then_after(&step).then_after(&class.path(e.source));
        generators.push(BrownGenerator {
            name: format!("g{}_{}", e.source, e.k),
            kind: GeneratorKind::Edge { edge: i },
            word,
        });
    }

    let b = Builder::new(g, &generators);
    let mut relators: Vec<(RelatorKind, Relator)> = Vec::new();

    for c in 0..class.len() {
        let auts = class.automorphisms(c);
        for x in auts.iter().skip(1) {
            for y in auts.iter().skip(1) {
                let xy = x.compose(y);
                let mut r = vec![(b.aut_gen[&(c, x.clone())], 1), (b.aut_gen[&(c, y.clone())], 1)];
                if !xy.is_identity() {
                    r.push((b.aut_gen[&(c, xy)], -1));
                }
                relators.push((RelatorKind::Table { class: c }, r));
            }
        }
    }

    for &(p, k, c) in &data.tree {
        relators.push((RelatorKind::Tree { class: c }, b.letters(&b.edge_expr(p, k))));
    }

    for (i, e) in g.edges.iter().enumerate() {
        let pi = &class.edge(e.source, e.k).witness;
        for a in g.simultaneous_automorphisms(e.source, e.k)?.iter().skip(1) {
            let bt = pi.inverse().compose(a).compose(pi);
            let edge = |s| if e.tree { None } else { Some(Sym::Edge(i, s)) };
            let syms: Vec<Sym> = [
                edge(1),
                Some(Sym::Aut(e.source, a.clone())),
                edge(-1),
                Some(Sym::Aut(e.target, bt.inverse())),
            ]
            .into_iter()
            .flatten()
            .collect();
            relators.push((RelatorKind::Isotropy { edge: i }, b.letters(&syms)));
        }
    }

    let mutable = class.mutable_vertices();
    for c in 0..class.len() {
        for &j in &mutable {
            let m_j = b.edge_expr(c, j);
            for a in class.automorphisms(c).iter().skip(1) {
                // m_{c,a(j)} = β m_{c,j} a⁻¹ with β = π_{c,a(j)}⁻¹ a π_{c,j}
                let aj = a.apply(j);
                let t = class.edge(c, j).target;
                let beta = b.witness(c, aj).inverse().compose(a).compose(b.witness(c, j));
                let mut syms = b.edge_expr(c, aj);
                syms.push(Sym::Aut(c, a.clone()));
                syms.extend(inverse_syms(&m_j));
                syms.push(Sym::Aut(t, beta.inverse()));
                relators.push((RelatorKind::Naturality { class: c, vertex: j }, b.letters(&syms)));
            }
            // m_{t,j'} m_{c,j} = (π π')⁻¹ with j' = π⁻¹(j)
            let edge = class.edge(c, j);
            let jr = edge.witness.inverse().apply(j);
            let back = class.edge(edge.target, jr);
            let mut syms = b.edge_expr(edge.target, jr);
            syms.extend(m_j.iter().cloned());
            syms.push(Sym::Aut(c, edge.witness.compose(&back.witness)));
            relators.push((RelatorKind::Involution { class: c, vertex: j }, b.letters(&syms)));
        }
    }

    for (fi, f) in data.faces.iter().enumerate() {
        let swap = Permutation::transposition(n, f.k, f.l);
        let (mut cls, mut tau) = (f.base, Permutation::identity(n));
        let mut steps: Vec<Vec<Sym>> = Vec::new();
        for _ in 0..f.h + 2 {
            let j = tau.inverse().apply(f.k);
            steps.push(b.edge_expr(cls, j));
            let e = class.edge(cls, j);
            tau = swap.compose(&tau.compose(&e.witness));
            cls = e.target;
        }
        if cls != f.base {
            return Err(Error::Internal(format!("face {fi} does not close")));
        }
        let mut syms = vec![Sym::Aut(f.base, tau)];
        for s in steps.iter().rev() {
            syms.extend(s.iter().cloned());
        }
        relators.push((RelatorKind::Face { face: fi }, b.letters(&syms)));
    }

    relators.retain(|(_, r)| !r.is_empty());
    let mut seen = std::collections::HashSet::new();
    relators.retain(|(_, r)| seen.insert(r.clone()));

    let presentation = GroupPresentation {
        generators: generators.iter().map(|g| g.name.clone()).collect(),
        relators: relators.iter().map(|(_, r)| r.clone()).collect(),
        expansions: generators.iter().map(|g| Some(g.word.clone())).collect(),
    };
    let assembly = Assembly {
        graph: g.clone(),
        base,
        data,
        generators,
        presentation,
        kinds: relators.into_iter().map(|(k, _)| k).collect(),
    };
    assembly.certify(Mode::CMatrix)?;
    Ok(assembly)
}

fn inverse_syms(w: &[Sym]) -> Vec<Sym> {
    w.iter()
        .rev()
        .map(|s| match s {
            Sym::Aut(c, a) => Sym::Aut(*c, a.inverse()),
            Sym::Edge(e, x) => Sym::Edge(*e, -x),
        })
        .collect()
}

impl Assembly {
    /// Rewrites a mutation loop at the base as a word in the generators.
    pub fn express(&self, w: &MutationWord) -> Result<Relator> {
        let class = &self.graph.class;
        let n = class.n();
        let b = Builder::new(&self.graph, &self.generators);
        let (mut cls, mut tau) = (0usize, Permutation::identity(n));
        let mut steps: Vec<Vec<Sym>> = Vec::new();
        for t in w.application_order() {
            match t {
                Token::Perm(s) => tau = s.compose(&tau),
                Token::Mutate(k) => {
                    let j = tau.inverse().apply(*k);
                    if class.representative(cls).is_frozen(j) {
                        return Err(Error::FrozenVertex(j));
                    }
                    steps.push(b.edge_expr(cls, j));
                    let e = class.edge(cls, j);
                    tau = tau.compose(&e.witness);
                    cls = e.target;
                }
            }
        }
        if cls != 0 || class.representative(0).relabel(&tau)? != self.base {
            return Err(Error::NotALoop {
                initial: Box::new(self.base.clone()),
                fin: Box::new(self.base.apply_word(w)?),
            });
        }
        let mut syms = vec![Sym::Aut(0, tau)];
        for s in steps.iter().rev() {
            syms.extend(s.iter().cloned());
        }
        Ok(free_reduce(&b.letters_linear(&syms)))
    }

    /// Checks that every relator expands to a trivial loop at the base.
    pub fn certify(&self, mode: Mode) -> Result<()> {
        for (r, kind) in self.presentation.relators.iter().zip(&self.kinds) {
            let w = self
                .presentation
                .expand(r)
                .unwrap_or_else(|| MutationWord::empty(self.base.n()))
                .normalize();
            let report = is_trivial_loop(&self.base, &w, mode).map_err(|e| {
                Error::Internal(format!("{} relator {} is not a loop: {e}", kind.label(), self.presentation.word_string(r)))
            })?;
            if !report.trivial {
                return Err(Error::Internal(format!(
                    "{} relator {} is not trivial",
                    kind.label(),
                    self.presentation.word_string(r)
                )));
            }
        }
        Ok(())
    }

    /// Number of generators from isotropy groups and from non-tree edges.
    pub fn generator_counts(&self) -> (usize, usize) {
        let iso = self
            .generators
            .iter()
            .filter(|g| matches!(g.kind, GeneratorKind::Isotropy { .. }))
            .count();
        (iso, self.generators.len() - iso)
    }

    pub fn relator_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for k in &self.kinds {
            *out.entry(k.label()).or_insert(0) += 1;
        }
        out
    }

    /// Text presentation with expansions in labels starting at `base`,
    /// followed by the relators grouped by origin.
    pub fn to_text(&self, base: usize) -> String {
        let mut out = format!(
            "# base quiver: {} vertices, class of {} quivers, {} edge orbits, {} face orbits\n",
            self.base.n(),
            self.data.tree.len() + 1,
            self.data.eplus.len(),
            self.data.faces.len()
        );
        let text = self.presentation.to_text(base);
        let mut lines = text.lines();
        let mut rel_index = 0;
        let mut last_label = "";
        for line in lines.by_ref() {
            if line.starts_with("relator") {
                let label = self.kinds[rel_index].label();
                if label != last_label {
                    out.push_str(&format!("# {label} relators\n"));
                    last_label = label;
                }
                rel_index += 1;
            }
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gens: Vec<serde_json::Value> = self
            .generators
            .iter()
            .map(|g| {
                let kind = match &g.kind {
                    GeneratorKind::Isotropy { class, element } => {
                        json!({"type": "isotropy", "class": class, "element": element.to_string()})
                    }
                    GeneratorKind::Edge { edge } => {
                        let e = &self.data.eplus[*edge];
                        json!({"type": "edge", "source": e.source, "k": e.k, "target": e.target})
                    }
                };
                json!({"name": g.name, "kind": kind, "word": g.word.to_string()})
            })
            .collect();
        let rels: Vec<serde_json::Value> = self
            .presentation
            .relators
            .iter()
            .zip(&self.kinds)
            .map(|(r, k)| json!({"kind": k.label(), "text": self.presentation.word_string(r)}))
            .collect();
        json!({
            "base": self.base.to_json(),
            "tree": self.data.tree,
            "edge_orbits": self.data.eplus.len(),
            "faces": self.data.faces.len(),
            "generators": gens,
            "relators": rels,
            "abelianization": self.presentation.abelianize().to_json(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::class::{MutationClass, DEFAULT_CAP};

    fn assemble(name: &str) -> Assembly {
        let m = catalog::get(name).unwrap();
        let g = ModularGraph::new(MutationClass::enumerate(&m, DEFAULT_CAP).unwrap()).unwrap();
        assemble_presentation(&g).unwrap()
    }

    #[test]
    fn a2_is_cyclic_of_order_five() {
        let a = assemble("a2");
        let ab = a.presentation.abelianize();
        assert_eq!((ab.free_rank, ab.torsion_u64()), (0, vec![5]));
        a.certify(Mode::Full).unwrap();
    }

    #[test]
    fn kronecker_is_infinite_cyclic() {
        let m = ExchangeMatrix::skew_symmetric(vec![vec![0, 2], vec![-2, 0]]).unwrap();
        let g = ModularGraph::new(MutationClass::enumerate(&m, 10).unwrap()).unwrap();
        let ab = assemble_presentation(&g).unwrap().presentation.abelianize();
        assert_eq!((ab.free_rank, ab.torsion.len()), (1, 0));
    }

    #[test]
    fn x7_generators() {
        let a = assemble("x7");
        assert_eq!(a.data.tree.len(), 1);
        assert_eq!(a.data.eplus.len(), 3);
        assert_eq!(a.generator_counts(), (10, 2));
    }
}
