//! Cluster Dehn twist candidates and the elimination homomorphism.

use serde_json::json;

use crate::class::MutationClass;
use crate::error::{Error, Result};
use crate::matrix::ExchangeMatrix;
use crate::perm::Permutation;
use crate::seed::FramedMatrix;
use crate::word::{MutationWord, Token, WordAction};

/// Largest power tried when looking for `((i j) μ_j)^ℓ` to close up.
pub const MAX_LOOP_POWER: usize = 12;

#[derive(Clone, Debug)]
pub struct DehnCandidate {
    pub class: usize,
    pub i: usize,
    pub j: usize,
    /// Tree path `P` with `R_0.apply_word(P) == R_class`.
    pub path: MutationWord,
    /// `(i j) μ_j` at `R_class`.
    pub step: MutationWord,
    /// Least `ℓ ≥ 1` with `step^ℓ` a loop at `R_class`, if any up to
    /// [`MAX_LOOP_POWER`].
    pub loop_power: Option<usize>,
    /// `P⁻¹ · step^ℓ · P`, a loop at `R_0`.
    pub twist: Option<MutationWord>,
}

impl DehnCandidate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "class": self.class,
            "i": self.i,
            "j": self.j,
            "path": self.path.to_string(),
            "loop_power": self.loop_power,
            "twist": self.twist.as_ref().map(|w| w.to_string()),
        })
    }
}

/// All pairs `(i, j)` with `ε_ij > 0` and `ε_ij ε_ji = -4` on class
/// representatives: two arrows in the skew-symmetric case, the `(1, 4)` or
/// `(4, 1)` pattern in the weighted one.
pub fn find_dehn_twist_candidates(class: &MutationClass) -> Result<Vec<DehnCandidate>> {
    let mutable = class.mutable_vertices();
    let n = class.n();
    let mut out = Vec::new();
    for c in 0..class.len() {
        let r = class.representative(c);
        for &i in &mutable {
            for &j in &mutable {
                let (a, b) = (r.get(i, j), r.get(j, i));
                if i == j || a <= 0 || a * b != -4 {
                    continue;
                }
                let step = MutationWord::from_tokens(
                    n,
                    vec![Token::Perm(Permutation::transposition(n, i, j)), Token::Mutate(j)],
                )?;
                let mut cur = r.clone();
                let mut loop_power = None;
                for l in 1..=MAX_LOOP_POWER {
                    cur = cur.apply_word(&step)?;
                    if &cur == r {
                        loop_power = Some(l);
                        break;
                    }
                }
                let path = class.path(c);
                let twist = loop_power.map(|l| path.inverse().then_after(&step.pow(l as i64)).then_after(&path));
                out.push(DehnCandidate {
                    class: c,
                    i,
                    j,
                    path,
                    step,
                    loop_power,
                    twist,
                });
            }
        }
    }
    Ok(out)
}

/// Whether the `k`-th power of the twist has a non-identity C-matrix for
/// every `k` in `1..=up_to`.
pub fn twist_powers_nontrivial(base: &ExchangeMatrix, twist: &MutationWord, up_to: usize) -> Result<bool> {
    let mut cur = FramedMatrix::new(base.clone());
    for _ in 0..up_to {
        cur = cur.apply_word(twist)?;
        if cur.c_is_identity() && &cur.matrix == base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Principal submatrix on `keep` (in the given order).
pub fn restrict(m: &ExchangeMatrix, keep: &[usize]) -> Result<ExchangeMatrix> {
    for &k in keep {
        if k >= m.n() {
            return Err(Error::IndexOutOfRange { index: k, n: m.n() });
        }
    }
    let rows = keep.iter().map(|&i| keep.iter().map(|&j| m.get(i, j)).collect()).collect();
    let weights = keep.iter().map(|&i| m.weights()[i]).collect();
    let frozen: Vec<usize> = (0..keep.len()).filter(|&p| m.is_frozen(keep[p])).collect();
    ExchangeMatrix::new(rows, Some(weights), &frozen)
}

/// Elimination homomorphism onto the vertices in `keep`: the normal form
/// `σ μ_{i_l} … μ_{i_1}` of `w` maps to `σ|_keep μ_{i_l} … μ_{i_1}` with
/// labels renumbered by their position in sorted `keep`.
///
/// Fails with [`Error::NotInSubgroup`] when a mutation hits a vertex outside
/// `keep` or `σ` does not preserve `keep`.
pub fn eliminate(w: &MutationWord, keep: &[usize]) -> Result<MutationWord> {
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let pos = |v: usize| sorted.binary_search(&v).ok();
    let (sigma, muts) = w.normal_parts();
    let mut tokens = Vec::with_capacity(muts.len() + 1);
    if !sigma.preserves_set(&sorted) {
        return Err(Error::NotInSubgroup(format!("{sigma} does not preserve {sorted:?}")));
    }
    let restricted = Permutation::from_images(sorted.iter().map(|&v| pos(sigma.apply(v)).expect("preserved")).collect())?;
    if !restricted.is_identity() {
        tokens.push(Token::Perm(restricted));
    }
    for k in muts {
        let p = pos(k).ok_or_else(|| Error::NotInSubgroup(format!("mutation at dropped vertex {k}")))?;
        tokens.push(Token::Mutate(p));
    }
    MutationWord::from_tokens(sorted.len(), tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn a2_has_no_candidates() {
        let c = MutationClass::enumerate(&catalog::get("a2").unwrap(), 10).unwrap();
        assert!(find_dehn_twist_candidates(&c).unwrap().is_empty());
    }

    #[test]
    fn kronecker_twist() {
        let m = ExchangeMatrix::skew_symmetric(vec![vec![0, 2], vec![-2, 0]]).unwrap();
        let c = MutationClass::enumerate(&m, 10).unwrap();
        let found = find_dehn_twist_candidates(&c).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!((found[0].i, found[0].j, found[0].loop_power), (0, 1, Some(1)));
        assert!(twist_powers_nontrivial(&m, found[0].twist.as_ref().unwrap(), 4).unwrap());
    }

    #[test]
    fn elimination_examples() {
        let psi = MutationWord::parse(7, "(0 1 2)(3 4 5 6) m2 m1 m0").unwrap();
        assert_eq!(eliminate(&psi, &[0, 1, 2]).unwrap().to_string(), "(0 1 2) m2 m1 m0");
        let sigma = MutationWord::parse(7, "(3 5)(4 6)").unwrap();
        assert!(eliminate(&sigma, &[0, 1, 2]).unwrap().is_empty());
        assert!(eliminate(&MutationWord::empty(7), &[0, 1, 2]).unwrap().is_empty());
        assert!(matches!(
            eliminate(&MutationWord::parse(7, "m4").unwrap(), &[0, 1, 2]),
            Err(Error::NotInSubgroup(_))
        ));
    }

    #[test]
    fn restrict_x7_gives_j() {
        let x7 = catalog::get("x7").unwrap();
        assert_eq!(restrict(&x7, &[0, 1, 2]).unwrap(), catalog::get("j").unwrap());
    }
}
