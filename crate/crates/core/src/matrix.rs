//! Integer exchange matrices with vertex weights and a frozen set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// An `n × n` skew-symmetrizable integer matrix `ε` together with positive
/// vertex weights `d` (`ε_ij·d_i = −ε_ji·d_j`) and a set of frozen vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExchangeMatrix {
    n: usize,
    entries: Vec<i64>,
    weights: Vec<i64>,
    frozen: Vec<bool>,
}

/// On-disk quiver format.
#[derive(Serialize, Deserialize)]
struct QuiverFile {
    n: usize,
    #[serde(default)]
    frozen: Vec<usize>,
    #[serde(default)]
    weights: Option<Vec<i64>>,
    matrix: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    /// Validates and builds a matrix. `weights` defaults to all ones.
    pub fn new(rows: Vec<Vec<i64>>, weights: Option<Vec<i64>>, frozen: &[usize]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!("matrix is not {n}x{n}")));
        }
        let weights = weights.unwrap_or_else(|| vec![1; n]);
        if weights.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "expected {n} weights, got {}",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| w <= 0) {
            return Err(Error::InvalidMatrix(format!("weight {w} is not positive")));
        }
        let mut flags = vec![false; n];
        for &f in frozen {
            if f >= n {
                return Err(Error::IndexOutOfRange { index: f, n });
            }
            flags[f] = true;
        }
        let m = ExchangeMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
            weights,
            frozen: flags,
        };
        m.validate()?;
        Ok(m)
    }

    /// Skew-symmetric matrix with unit weights and no frozen vertices.
    pub fn skew_symmetric(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(rows, None, &[])
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            if self.get(i, i) != 0 {
                return Err(Error::InvalidMatrix(format!("diagonal entry ({i}, {i}) is nonzero")));
            }
            for j in i + 1..self.n {
                let lhs = self.get(i, j).checked_mul(self.weights[i]);
                let rhs = self.get(j, i).checked_mul(self.weights[j]).and_then(i64::checked_neg);
                if lhs.is_none() || lhs != rhs {
                    return Err(Error::NotSkewSymmetrizable { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn is_frozen(&self, k: usize) -> bool {
        self.frozen[k]
    }

    pub fn frozen(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.frozen[i]).collect()
    }

    pub fn mutable_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.frozen[i]).collect()
    }

    pub fn check_mutable(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.n });
        }
        if self.frozen[k] {
            return Err(Error::FrozenVertex(k));
        }
        Ok(())
    }

    /// Matrix mutation at `k`:
    /// `ε'_ij = −ε_ij` if `k ∈ {i, j}`, else `ε_ij + (|ε_ik|ε_kj + ε_ik|ε_kj|)/2`.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.check_mutable(k)?;
        let n = self.n;
        let mut out = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                if i == k || j == k {
                    out[idx] = -self.entries[idx];
                    continue;
                }
                let a = self.get(i, k);
                let b = self.get(k, j);
                // |a|b + a|b| is 0 or ±2|a||b|
                if (a > 0 && b > 0) || (a < 0 && b < 0) {
                    let prod = a.checked_mul(b).ok_or(Error::Overflow(k))?;
                    let delta = if a > 0 { prod } else { -prod };
                    out[idx] = out[idx].checked_add(delta).ok_or(Error::Overflow(k))?;
                }
            }
        }
        Ok(ExchangeMatrix {
            n,
            entries: out,
            weights: self.weights.clone(),
            frozen: self.frozen.clone(),
        })
    }

    /// Relabels vertices by `σ`: `ε'_ij = ε_{σ⁻¹i, σ⁻¹j}`, and the weight and
    /// frozen flag of vertex `i` move to `σ(i)`. No legality check; used when
    /// evaluating words, whose intermediate permutations may move weights.
    pub fn relabel(&self, s: &Permutation) -> Result<Self> {
        if s.len() != self.n {
            return Err(Error::InvalidPermutation(format!(
                "permutation {s} acts on {} points, matrix has {}",
                s.len(),
                self.n
            )));
        }
        let inv = s.inverse();
        let n = self.n;
        let mut entries = vec![0; n * n];
        let mut weights = vec![0; n];
        let mut frozen = vec![false; n];
        for i in 0..n {
            let si = inv.apply(i);
            weights[i] = self.weights[si];
            frozen[i] = self.frozen[si];
            for j in 0..n {
                entries[i * n + j] = self.get(si, inv.apply(j));
            }
        }
        Ok(ExchangeMatrix {
            n,
            entries,
            weights,
            frozen,
        })
    }

    /// Seed permutation: like [`relabel`](Self::relabel) but rejects
    /// permutations that move frozen vertices or change weights.
    pub fn apply_permutation(&self, s: &Permutation) -> Result<Self> {
        if s.len() != self.n {
            return self.relabel(s);
        }
        if !s.preserves_set(&self.frozen()) {
            return Err(Error::FrozenNotPreserved(s.to_string()));
        }
        if (0..self.n).any(|i| self.weights[s.apply(i)] != self.weights[i]) {
            return Err(Error::WeightsNotPreserved(s.to_string()));
        }
        self.relabel(s)
    }

    /// Marks additional vertices frozen.
    pub fn freeze(&self, extra: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        for &k in extra {
            if k >= self.n {
                return Err(Error::IndexOutOfRange { index: k, n: self.n });
            }
            out.frozen[k] = true;
        }
        Ok(out)
    }

    /// Principal submatrix on the non-frozen vertices, in increasing order.
    pub fn unfreeze_part(&self) -> Self {
        let keep = self.mutable_vertices();
        let m = keep.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in &keep {
            for &j in &keep {
                entries.push(self.get(i, j));
            }
        }
        ExchangeMatrix {
            n: m,
            entries,
            weights: keep.iter().map(|&i| self.weights[i]).collect(),
            frozen: vec![false; m],
        }
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> i64 {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "frozen": self.frozen(),
            "weights": self.weights,
            "matrix": self.rows(),
        })
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let file: QuiverFile =
            serde_json::from_value(v).map_err(|e| Error::parse(0, 0, e.to_string()))?;
        Self::from_file(file)
    }

    /// Parses the JSON quiver format; errors carry line and column.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: QuiverFile =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        Self::from_file(file)
    }

    fn from_file(file: QuiverFile) -> Result<Self> {
        if file.matrix.len() != file.n {
            return Err(Error::InvalidMatrix(format!(
                "declared n = {} but matrix has {} rows",
                file.n,
                file.matrix.len()
            )));
        }
        Self::new(file.matrix, file.weights, &file.frozen)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("matrix serializes")
    }
}

impl Serialize for ExchangeMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExchangeMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = QuiverFile::deserialize(d)?;
        Self::from_file(file).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .map(|e| e.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.n {
            let cells: Vec<String> = self.row(i).iter().map(|e| format!("{e:>width$}")).collect();
            write!(f, "[{}]", cells.join(" "))?;
            if self.weights[i] != 1 {
                write!(f, " d={}", self.weights[i])?;
            }
            if self.frozen[i] {
                write!(f, " frozen")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn markov() -> ExchangeMatrix {
        ExchangeMatrix::skew_symmetric(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).unwrap()
    }

    #[test]
    fn markov_mutation_negates() {
        let m = markov().mutate(0).unwrap();
        assert_eq!(m.rows(), vec![vec![0, -2, 2], vec![2, 0, -2], vec![-2, 2, 0]]);
    }

    #[test]
    fn a2_mutation_and_swap() {
        let a2 = ExchangeMatrix::skew_symmetric(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(a2.mutate(0).unwrap().rows(), vec![vec![0, -1], vec![1, 0]]);
        let swapped = a2.apply_permutation(&Permutation::transposition(2, 0, 1)).unwrap();
        assert_eq!(swapped.rows(), vec![vec![0, -1], vec![1, 0]]);
        assert_eq!(a2.apply_permutation(&Permutation::identity(2)).unwrap(), a2);
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(matches!(
            ExchangeMatrix::skew_symmetric(vec![vec![0, 1], vec![1, 0]]),
            Err(Error::NotSkewSymmetrizable { .. })
        ));
        assert!(ExchangeMatrix::skew_symmetric(vec![vec![1, 0], vec![0, 0]]).is_err());
        assert!(ExchangeMatrix::skew_symmetric(vec![vec![0, 1]]).is_err());
        assert!(ExchangeMatrix::new(vec![vec![0]], Some(vec![0]), &[]).is_err());
        assert!(ExchangeMatrix::new(vec![vec![0]], None, &[3]).is_err());
        // weighted: ε_01·d_0 = −ε_10·d_1
        assert!(ExchangeMatrix::new(vec![vec![0, 1], vec![-2, 0]], Some(vec![2, 1]), &[]).is_ok());
        assert!(ExchangeMatrix::new(vec![vec![0, 1], vec![-2, 0]], Some(vec![1, 2]), &[]).is_err());
    }

    #[test]
    fn frozen_and_range_errors() {
        let m = ExchangeMatrix::new(vec![vec![0, 1], vec![-1, 0]], None, &[1]).unwrap();
        assert!(matches!(m.mutate(1), Err(Error::FrozenVertex(1))));
        assert!(matches!(m.mutate(5), Err(Error::IndexOutOfRange { index: 5, n: 2 })));
        assert!(matches!(
            m.apply_permutation(&Permutation::transposition(2, 0, 1)),
            Err(Error::FrozenNotPreserved(_))
        ));
    }

    #[test]
    fn weight_violation() {
        let m = ExchangeMatrix::new(vec![vec![0, 1], vec![-2, 0]], Some(vec![2, 1]), &[]).unwrap();
        let s = Permutation::transposition(2, 0, 1);
        assert!(matches!(m.apply_permutation(&s), Err(Error::WeightsNotPreserved(_))));
        let r = m.relabel(&s).unwrap();
        assert_eq!(r.weights(), &[1, 2]);
        assert_eq!(r.rows(), vec![vec![0, -2], vec![1, 0]]);
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2;
        let m = ExchangeMatrix::skew_symmetric(vec![
            vec![0, big, 0],
            vec![-big, 0, big],
            vec![0, -big, 0],
        ])
        .unwrap();
        assert!(matches!(m.mutate(1), Err(Error::Overflow(1))));
    }

    #[test]
    fn freeze_roundtrip() {
        let m = markov();
        assert_eq!(m.freeze(&[]).unwrap(), m);
        assert_eq!(m.unfreeze_part(), m);
        let f = m.freeze(&[2]).unwrap();
        assert_eq!(f.frozen(), vec![2]);
        assert_eq!(f.unfreeze_part().rows(), vec![vec![0, 2], vec![-2, 0]]);
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let m = markov().freeze(&[1]).unwrap();
        let text = m.to_json_string();
        assert_eq!(ExchangeMatrix::from_json_str(&text).unwrap(), m);
        let err = ExchangeMatrix::from_json_str("{\"n\": 2,\n \"matrix\": [[0, 1], [-1, 0]").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(ExchangeMatrix::from_json_str("{\"n\": 3, \"matrix\": [[0]]}").is_err());
    }
}
