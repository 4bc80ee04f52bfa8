//! Finite group presentations, their text format, Tietze cleanup and
//! abelianization.
//!
//! Text format, one directive per line, `#` starts a comment:
//!
//! ```text
//! vertices 7
//! index 0
//! generator g0_1 = (1 2) m1
//! generator a
//! relator g0_1 a g0_1^-1 a^-1
//! relator (a b)^3 = (b a)^3
//! ```
//!
//! `vertices` and `index` only matter for generator expansions, which are
//! mutation words. A relator `x = y` stands for `x y⁻¹`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::expr::{parse_expr, GroupOps, RawContext};
use crate::group::snf::{smith_normal_form, IntMatrix};
use crate::word::{MutationWord, Token};

/// A word in the generators: `(index, ±1)` letters in written order.
pub type Relator = Vec<(usize, i32)>;

pub fn free_reduce(w: &[(usize, i32)]) -> Relator {
    let mut out: Relator = Vec::with_capacity(w.len());
    for &(g, e) in w {
        if out.last() == Some(&(g, -e)) {
            out.pop();
        } else {
            out.push((g, e));
        }
    }
    out
}

pub fn cyclic_reduce(w: &[(usize, i32)]) -> Relator {
    let mut out = free_reduce(w);
    while out.len() >= 2 && out[0].0 == out[out.len() - 1].0 && out[0].1 == -out[out.len() - 1].1 {
        out.pop();
        out.remove(0);
    }
    out
}

pub fn invert(w: &[(usize, i32)]) -> Relator {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

/// Least rotation of `w` or its inverse: equal keys mean the relators are
/// conjugate up to inversion.
fn cyclic_key(w: &[(usize, i32)]) -> Relator {
    let mut best = w.to_vec();
    for cand in [w.to_vec(), invert(w)] {
        for r in 0..cand.len() {
            let mut rot = cand[r..].to_vec();
            rot.extend_from_slice(&cand[..r]);
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    /// Invariant factors `d₁ | d₂ | …`, each greater than one.
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect()
    }

    /// Primary decomposition, e.g. `[10]` becomes `[2, 5]`.
    pub fn primary_factors(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for d in &self.torsion {
            let mut rest = d.clone();
            let mut p = BigInt::from(2);
            while &p * &p <= rest {
                if (&rest % &p).is_zero() {
                    let mut q = BigInt::one();
                    while (&rest % &p).is_zero() {
                        rest /= &p;
                        q *= &p;
                    }
                    out.push(q);
                }
                p += 1;
            }
            if rest > BigInt::one() {
                out.push(rest);
            }
        }
        out.sort();
        out
    }

    /// Product form via the Chinese remainder theorem, e.g. `Z/2 x Z/5`.
    pub fn primary_string(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.primary_factors().iter().map(|q| format!("Z/{q}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" x ")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "free_rank": self.free_rank,
            "torsion": self.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "primary": self.primary_factors().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        write!(f, "free rank {}, torsion [{}]", self.free_rank, t.join(","))
    }
}

#[derive(Clone, Debug, Default)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Relator>,
    /// Mutation word of each generator at the base quiver, when known.
    pub expansions: Vec<Option<MutationWord>>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Relator>) -> Self {
        let expansions = vec![None; generators.len()];
        GroupPresentation {
            generators,
            relators,
            expansions,
        }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Relator exponent-sum matrix: one row per relator.
    pub fn exponent_matrix(&self) -> IntMatrix {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); self.generators.len()];
                for &(g, e) in r {
                    row[g] += e;
                }
                row
            })
            .collect()
    }

    pub fn abelianize(&self) -> AbelianInvariants {
        let cols = self.generators.len();
        let snf = smith_normal_form(&self.exponent_matrix(), cols);
        let diag = snf.diagonal();
        AbelianInvariants {
            free_rank: cols - diag.len(),
            torsion: diag.into_iter().map(|d| d.abs()).filter(|d| !d.is_one()).collect(),
        }
    }

    /// Composite mutation word of a relator, if every letter has an expansion.
    pub fn expand(&self, w: &[(usize, i32)]) -> Option<MutationWord> {
        let n = self.expansions.iter().flatten().next()?.n();
        let mut out = MutationWord::empty(n);
        for &(g, e) in w {
            let x = self.expansions[g].as_ref()?;
            out = out.then_after(&if e > 0 { x.clone() } else { x.inverse() });
        }
        Some(out)
    }

    pub fn word_string(&self, w: &[(usize, i32)]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let power = (j - i) as i64 * i64::from(w[i].1);
            let name = &self.generators[w[i].0];
            parts.push(if power == 1 {
                name.clone()
            } else {
                format!("{name}^{power}")
            });
            i = j;
        }
        parts.join(" ")
    }

    /// Tietze cleanup: drops trivial and duplicate relators and eliminates
    /// generators that occur exactly once in some relator, as long as the
    /// total relator length stays bounded.
    pub fn simplify(&self) -> GroupPresentation {
        let mut gens: Vec<Option<usize>> = (0..self.generators.len()).map(Some).collect();
        let mut rels: Vec<Relator> = self.relators.iter().map(|r| cyclic_reduce(r)).collect();
        let budget = rels.iter().map(Vec::len).sum::<usize>().max(64) * 2;
        loop {
            let mut seen = BTreeSet::new();
            rels.retain(|r| !r.is_empty() && seen.insert(cyclic_key(r)));
            // candidate (cost, relator, generator)
            let mut best: Option<(usize, usize, usize)> = None;
            for (ri, r) in rels.iter().enumerate() {
                let mut count: BTreeMap<usize, usize> = BTreeMap::new();
                for &(g, _) in r {
                    *count.entry(g).or_insert(0) += 1;
                }
                for (&g, &c) in &count {
                    if c != 1 {
                        continue;
                    }
                    let uses: usize = rels
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != ri)
                        .map(|(_, s)| s.iter().filter(|l| l.0 == g).count())
                        .sum();
                    let cost = uses * (r.len() - 1);
                    if best.is_none_or(|b| (cost, ri, g) < b) {
                        best = Some((cost, ri, g));
                    }
                }
            }
            let Some((_, ri, g)) = best else { break };
            let r = rels.remove(ri);
            let pos = r.iter().position(|l| l.0 == g).expect("generator occurs");
            // r = u x^e v = 1  =>  x^e = u⁻¹ v⁻¹  =>  x = (v u)^{-e}
            let mut vu: Relator = r[pos + 1..].to_vec();
            vu.extend_from_slice(&r[..pos]);
            let x_value = if r[pos].1 > 0 { invert(&vu) } else { vu };
            let x_inv = invert(&x_value);
            let substituted: Vec<Relator> = rels
                .iter()
                .map(|s| {
                    let mut out = Vec::new();
                    for &(h, e) in s {
                        if h == g {
                            out.extend_from_slice(if e > 0 { &x_value } else { &x_inv });
                        } else {
                            out.push((h, e));
                        }
                    }
                    cyclic_reduce(&out)
                })
                .collect();
            if substituted.iter().map(Vec::len).sum::<usize>() > budget {
                rels.insert(ri, r);
                break;
            }
            rels = substituted;
            gens[g] = None;
        }
        let kept: Vec<usize> = gens.iter().flatten().copied().collect();
        let remap: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        GroupPresentation {
            generators: kept.iter().map(|&g| self.generators[g].clone()).collect(),
            relators: rels
                .iter()
                .map(|r| r.iter().map(|&(g, e)| (remap[&g], e)).collect())
                .collect(),
            expansions: kept.iter().map(|&g| self.expansions[g].clone()).collect(),
        }
    }

    pub fn to_text(&self, base: usize) -> String {
        let mut out = String::new();
        if let Some(n) = self.expansions.iter().flatten().next().map(MutationWord::n) {
            out.push_str(&format!("vertices {n}\nindex {base}\n"));
        }
        for (g, name) in self.generators.iter().enumerate() {
            match &self.expansions[g] {
                Some(w) if !w.is_empty() => {
                    out.push_str(&format!("generator {name} = {}\n", w.to_string_with_base(base)))
                }
                Some(_) => out.push_str(&format!("generator {name} = 1\n")),
                None => out.push_str(&format!("generator {name}\n")),
            }
        }
        for r in &self.relators {
            out.push_str(&format!("relator {}\n", self.word_string(r)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gens: Vec<serde_json::Value> = self
            .generators
            .iter()
            .enumerate()
            .map(|(g, name)| {
                json!({
                    "name": name,
                    "expansion": self.expansions[g].as_ref().map(|w| w.to_string()),
                })
            })
            .collect();
        let rels: Vec<serde_json::Value> = self
            .relators
            .iter()
            .map(|r| {
                json!({
                    "text": self.word_string(r),
                    "letters": r.iter().map(|&(g, e)| json!([g, e])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"generators": gens, "relators": rels})
    }

    /// Parses the text format described in the module documentation.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ctx = RawContext { n: None, base: 0 };
        let mut gens: Vec<String> = Vec::new();
        let mut expansions: Vec<Option<MutationWord>> = Vec::new();
        let mut pending_rels: Vec<(usize, usize, String)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("");
            let trimmed = body.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = body.len() - trimmed.len();
            let (key, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed.trim_end(), ""));
            let rest_col = indent + key.len() + 2;
            match key {
                "vertices" => {
                    ctx.n = Some(rest.trim().parse().map_err(|_| Error::parse(line, rest_col, "expected a vertex count"))?)
                }
                "index" => match rest.trim() {
                    "0" => ctx.base = 0,
                    "1" => ctx.base = 1,
                    _ => return Err(Error::parse(line, rest_col, "index must be 0 or 1")),
                },
                "generator" => {
                    let (name, def) = match rest.split_once('=') {
                        Some((a, b)) => (a.trim(), Some(b)),
                        None => (rest.trim(), None),
                    };
                    let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                        && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
                    if !valid {
                        return Err(Error::parse(line, rest_col, format!("invalid generator name '{name}'")));
                    }
                    if gens.iter().any(|g| g == name) {
                        return Err(Error::parse(line, rest_col, format!("duplicate generator '{name}'")));
                    }
                    let expansion = match def {
                        None => None,
                        Some(d) => {
                            let n = ctx.n.ok_or_else(|| Error::parse(line, 1, "generator expansions need a 'vertices' line first"))?;
                            let col = rest_col + rest.find('=').unwrap_or(0) + 1;
                            let e = parse_expr(d, &ctx, line, col)?;
                            Some(WordEval { n, lets: &BTreeMap::new() }.eval(&e)?)
                        }
                    };
                    gens.push(name.to_string());
                    expansions.push(expansion);
                }
                "relator" => pending_rels.push((line, rest_col, rest.to_string())),
                other => return Err(Error::parse(line, indent + 1, format!("unknown directive '{other}'"))),
            }
        }
        let mut p = GroupPresentation {
            generators: gens,
            relators: Vec::new(),
            expansions,
        };
        let abstract_ctx = RawContext { n: None, base: 0 };
        let mut relators = Vec::new();
        for (line, col, text) in pending_rels {
            let mut parts = Vec::new();
            let mut offset = 0;
            for piece in text.split('=') {
                parts.push(parse_expr(piece, &abstract_ctx, line, col + offset)?);
                offset += piece.chars().count() + 1;
            }
            let eval = FreeEval { p: &p, line };
            let first = eval.eval(&parts[0])?;
            if parts.len() == 1 {
                relators.push(free_reduce(&first));
            }
            for other in &parts[1..] {
                let mut r = first.clone();
                r.extend(invert(&eval.eval(other)?));
                relators.push(free_reduce(&r));
            }
        }
        p.relators = relators;
        Ok(p)
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.word_string(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// Evaluates expressions into free-group words over a presentation.
struct FreeEval<'a> {
    p: &'a GroupPresentation,
    line: usize,
}

impl GroupOps for FreeEval<'_> {
    type Elem = Relator;
    fn identity(&self) -> Relator {
        Vec::new()
    }
    fn mul(&self, a: &Relator, b: &Relator) -> Relator {
        let mut out = a.clone();
        out.extend_from_slice(b);
        free_reduce(&out)
    }
    fn inv(&self, a: &Relator) -> Relator {
        invert(a)
    }
    fn ident(&self, name: &str) -> Result<Relator> {
        self.p
            .generator_index(name)
            .map(|g| vec![(g, 1)])
            .ok_or_else(|| Error::parse(self.line, 1, format!("unknown generator '{name}'")))
    }
    fn raw(&self, _: &Token) -> Result<Relator> {
        Err(Error::parse(self.line, 1, "raw mutation words are not allowed in relators"))
    }
}

/// Evaluates expressions into mutation words, resolving identifiers from
/// previously defined names.
pub(crate) struct WordEval<'a> {
    pub n: usize,
    pub lets: &'a BTreeMap<String, MutationWord>,
}

impl GroupOps for WordEval<'_> {
    type Elem = MutationWord;
    fn identity(&self) -> MutationWord {
        MutationWord::empty(self.n)
    }
    fn mul(&self, a: &MutationWord, b: &MutationWord) -> MutationWord {
        a.then_after(b)
    }
    fn inv(&self, a: &MutationWord) -> MutationWord {
        a.inverse()
    }
    fn ident(&self, name: &str) -> Result<MutationWord> {
        self.lets
            .get(name)
            .cloned()
            .ok_or_else(|| Error::parse(0, 0, format!("undefined name '{name}'")))
    }
    fn raw(&self, t: &Token) -> Result<MutationWord> {
        MutationWord::from_tokens(self.n, vec![t.clone()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braid_relation_is_free_abelian() {
        let p = GroupPresentation::parse("generator a\ngenerator b\nrelator (a b)^3 = (b a)^3\n").unwrap();
        let ab = p.abelianize();
        assert_eq!(ab.free_rank, 2);
        assert!(ab.torsion.is_empty());
    }

    #[test]
    fn cyclic_group_and_crt() {
        let p = GroupPresentation::parse("generator a\ngenerator b\nrelator a^2\nrelator b^5\nrelator [a, b]\n").unwrap();
        let ab = p.abelianize();
        assert_eq!(ab.torsion_u64(), vec![10]);
        assert_eq!(ab.primary_string(), "Z/2 x Z/5");
    }

    #[test]
    fn simplify_eliminates_defined_generators() {
        let text = "generator a\ngenerator b\ngenerator c\nrelator c = a b\nrelator c^3\nrelator a a^-1\n";
        let p = GroupPresentation::parse(text).unwrap();
        let s = p.simplify();
        assert_eq!(s.generators.len(), 2);
        assert_eq!(s.relators.len(), 1);
        assert_eq!(s.abelianize(), p.abelianize());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match GroupPresentation::parse("generator a\nrelator a b\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(GroupPresentation::parse("generator 1a\n").is_err());
        assert!(GroupPresentation::parse("frobnicate\n").is_err());
    }

    #[test]
    fn expansions_round_trip() {
        let text = "vertices 2\nindex 1\ngenerator phi = (1 2) m1\nrelator phi^5\n";
        let p = GroupPresentation::parse(text).unwrap();
        assert_eq!(p.expansions[0].as_ref().unwrap().to_string(), "(0 1) m0");
        let again = GroupPresentation::parse(&p.to_text(1)).unwrap();
        assert_eq!(again.expansions, p.expansions);
        assert_eq!(again.relators, p.relators);
    }
}
