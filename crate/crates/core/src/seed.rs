//! Seeds: cluster variables, C-matrix tracking and the loop-triviality oracle.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ExchangeMatrix;
use crate::perm::Permutation;
use crate::rational::{factor_pool, RationalFunction};
use crate::word::{MutationWord, WordAction};

/// Exchange matrix with a principal-coefficient frame.
///
/// `c[i][j]` is the entry `ε_{n+i, j}` of the extended matrix whose extra
/// frozen rows start as the identity; column `j` is the c-vector of vertex
/// `j`. Mutation applies the matrix formula to these rows, relabeling
/// permutes the columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FramedMatrix {
    pub matrix: ExchangeMatrix,
    pub c: Vec<Vec<i64>>,
}

impl FramedMatrix {
    pub fn new(matrix: ExchangeMatrix) -> Self {
        let n = matrix.n();
        let c = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        FramedMatrix { matrix, c }
    }

    pub fn c_is_identity(&self) -> bool {
        self.c
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }

    /// Mutable columns of the C-matrix whose entries have mixed signs.
    pub fn incoherent_columns(&self) -> Vec<usize> {
        self.matrix
            .mutable_vertices()
            .into_iter()
            .filter(|&j| {
                let pos = self.c.iter().any(|r| r[j] > 0);
                let neg = self.c.iter().any(|r| r[j] < 0);
                pos && neg
            })
            .collect()
    }
}

impl WordAction for FramedMatrix {
    fn mutate_at(&self, k: usize) -> Result<Self> {
        let matrix = self.matrix.mutate(k)?;
        let n = self.matrix.n();
        let mut c = self.c.clone();
        for row in c.iter_mut() {
            let a = row[k];
            for j in 0..n {
                if j == k {
                    row[j] = -row[j];
                    continue;
                }
                let b = self.matrix.get(k, j);
                if (a > 0 && b > 0) || (a < 0 && b < 0) {
                    let prod = a.checked_mul(b).ok_or(Error::Overflow(k))?;
                    let delta = if a > 0 { prod } else { -prod };
                    row[j] = row[j].checked_add(delta).ok_or(Error::Overflow(k))?;
                }
            }
        }
        let out = FramedMatrix { matrix, c };
        let bad = out.incoherent_columns();
        if !bad.is_empty() {
            return Err(Error::Internal(format!(
                "C-matrix columns {bad:?} are not sign-coherent after mutating at {k}"
            )));
        }
        Ok(out)
    }

    fn relabel_by(&self, s: &Permutation) -> Result<Self> {
        let matrix = self.matrix.relabel(s)?;
        let inv = s.inverse();
        let c = self
            .c
            .iter()
            .map(|row| (0..row.len()).map(|j| row[inv.apply(j)]).collect())
            .collect();
        Ok(FramedMatrix { matrix, c })
    }
}

/// A seed with exact A- and X-variables. Both families are rational
/// functions in their own `n` initial variables.
#[derive(Clone, Debug)]
pub struct Seed {
    pub framed: FramedMatrix,
    pub a: Vec<RationalFunction>,
    pub x: Vec<RationalFunction>,
}

impl Seed {
    pub fn initial(matrix: ExchangeMatrix) -> Self {
        let n = matrix.n();
        Seed {
            framed: FramedMatrix::new(matrix),
            a: (0..n).map(|i| RationalFunction::variable(n, i)).collect(),
            x: (0..n).map(|i| RationalFunction::variable(n, i)).collect(),
        }
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.framed.matrix
    }

    pub fn c_matrix(&self) -> &[Vec<i64>] {
        &self.framed.c
    }

    /// Whether every variable is exactly its initial value and the C-matrix
    /// is the identity.
    pub fn variables_are_initial(&self) -> bool {
        let n = self.framed.matrix.n();
        let unit = |i: usize| -> Vec<i32> { (0..n).map(|j| i32::from(i == j)).collect() };
        let check = |vars: &[RationalFunction]| {
            vars.iter()
                .enumerate()
                .all(|(i, v)| v.is_monomial_exactly(&unit(i)) || v.equals(&RationalFunction::variable(n, i)))
        };
        check(&self.a) && check(&self.x)
    }

    /// Same matrix, variables and C-matrix.
    pub fn same_as(&self, other: &Seed) -> bool {
        self.framed == other.framed
            && self.a.iter().zip(&other.a).all(|(p, q)| p.equals(q))
            && self.x.iter().zip(&other.x).all(|(p, q)| p.equals(q))
    }
}

impl WordAction for Seed {
    fn mutate_at(&self, k: usize) -> Result<Self> {
        let framed = self.framed.mutate_at(k)?;
        let m = &self.framed.matrix;
        let n = m.n();

        let a_pool = factor_pool(&self.a);
        let mut pos = RationalFunction::one(n);
        let mut neg = RationalFunction::one(n);
        for j in 0..n {
            let e = m.get(k, j) as i32;
            if e > 0 {
                pos = pos.mul(&self.a[j].pow(e));
            } else if e < 0 {
                neg = neg.mul(&self.a[j].pow(-e));
            }
        }
        let mut a = self.a.clone();
        a[k] = pos.add_with_pool(&neg, &a_pool).div(&self.a[k]);

        let x_pool = factor_pool(&self.x);
        let xk = &self.x[k];
        let plus = xk.one_plus(&x_pool); // 1 + X_k
        let minus = xk.inv().one_plus(&x_pool); // 1 + X_k⁻¹
        let mut x = self.x.clone();
        for i in 0..n {
            if i == k {
                x[i] = xk.inv();
                continue;
            }
            let e = m.get(i, k) as i32;
            if e > 0 {
                x[i] = x[i].mul(&minus.pow(-e));
            } else if e < 0 {
                x[i] = x[i].mul(&plus.pow(-e));
            }
        }
        Ok(Seed { framed, a, x })
    }

    fn relabel_by(&self, s: &Permutation) -> Result<Self> {
        let framed = self.framed.relabel_by(s)?;
        let inv = s.inverse();
        let move_vars =
            |v: &[RationalFunction]| -> Vec<RationalFunction> { (0..v.len()).map(|i| v[inv.apply(i)].clone()).collect() };
        Ok(Seed {
            framed,
            a: move_vars(&self.a),
            x: move_vars(&self.x),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Identity C-matrix test (integer arithmetic only).
    CMatrix,
    /// Exact comparison of all A- and X-variables.
    Full,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cmatrix" => Ok(Mode::CMatrix),
            "full" => Ok(Mode::Full),
            other => Err(Error::parse(0, 0, format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LoopReport {
    pub trivial: bool,
    pub mode: Mode,
    pub mutations: usize,
    pub final_c_matrix: Vec<Vec<i64>>,
    pub elapsed_ms: f64,
}

/// Checks that `w` is a mutation loop at `m` and returns the final matrix
/// trail on failure.
pub fn require_loop(m: &ExchangeMatrix, w: &MutationWord) -> Result<()> {
    let fin = m.apply_word(w)?;
    if &fin != m {
        return Err(Error::NotALoop {
            initial: Box::new(m.clone()),
            fin: Box::new(fin),
        });
    }
    Ok(())
}

/// Decides whether the loop `w` at `m` is trivial. Words that do not return
/// to `m` produce [`Error::NotALoop`].
pub fn is_trivial_loop(m: &ExchangeMatrix, w: &MutationWord, mode: Mode) -> Result<LoopReport> {
    let start = Instant::now();
    require_loop(m, w)?;
    let (trivial, c) = match mode {
        Mode::CMatrix => {
            let fin = FramedMatrix::new(m.clone()).apply_word(w)?;
            (fin.c_is_identity(), fin.c)
        }
        Mode::Full => {
            let fin = Seed::initial(m.clone()).apply_word(w)?;
            (fin.framed.c_is_identity() && fin.variables_are_initial(), fin.framed.c)
        }
    };
    Ok(LoopReport {
        trivial,
        mode,
        mutations: w.mutation_count(),
        final_c_matrix: c,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Matrices visited by `w`, starting with `m`, in application order.
pub fn matrix_trail(m: &ExchangeMatrix, w: &MutationWord) -> Result<Vec<ExchangeMatrix>> {
    let mut out = vec![m.clone()];
    let mut cur = m.clone();
    for t in w.application_order() {
        cur = cur.apply_token(t)?;
        out.push(cur.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use std::collections::BTreeSet;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::skew_symmetric(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn a2_phi_action() {
        let phi = MutationWord::parse(2, "(0 1) m0").unwrap();
        let s = Seed::initial(a2()).apply_word(&phi).unwrap();
        let v = |i| RationalFunction::variable(2, i);
        let pool = BTreeSet::new();
        assert!(s.a[0].equals(&v(1)));
        assert!(s.a[1].equals(&v(1).one_plus(&pool).div(&v(0))));
        assert!(s.x[0].equals(&v(1).mul(&v(0).one_plus(&pool))));
        assert!(s.x[1].equals(&v(0).inv()));
    }

    #[test]
    fn markov_exchange_relation() {
        let m = ExchangeMatrix::skew_symmetric(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]])
            .unwrap();
        let s = Seed::initial(m).mutate_at(0).unwrap();
        let v = |i| RationalFunction::variable(3, i);
        let expected = v(1).pow(2).add_with_pool(&v(2).pow(2), &BTreeSet::new()).div(&v(0));
        assert!(s.a[0].equals(&expected));
        let c = RationalFunction::constant(3, BigRational::from_integer(BigInt::from(2)));
        assert!(!s.a[0].equals(&expected.mul(&c)));
    }

    #[test]
    fn pentagon_is_trivial() {
        let phi = MutationWord::parse(2, "(0 1) m0").unwrap();
        for mode in [Mode::CMatrix, Mode::Full] {
            assert!(is_trivial_loop(&a2(), &phi.pow(5), mode).unwrap().trivial);
            for k in 1..5 {
                let r = is_trivial_loop(&a2(), &phi.pow(k), mode);
                // φ^k is a matrix loop for every k but only φ^5 is trivial
                assert!(!r.unwrap().trivial, "k = {k}");
            }
        }
    }

    #[test]
    fn not_a_loop_is_an_error() {
        let w = MutationWord::parse(2, "m0").unwrap();
        assert!(matches!(is_trivial_loop(&a2(), &w, Mode::CMatrix), Err(Error::NotALoop { .. })));
    }

    #[test]
    fn double_mutation_is_trivial() {
        let w = MutationWord::parse(2, "m1 m1").unwrap();
        assert!(is_trivial_loop(&a2(), &w, Mode::Full).unwrap().trivial);
        let s = Seed::initial(a2());
        let back = s.mutate_at(1).unwrap().mutate_at(1).unwrap();
        assert!(back.same_as(&s));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("full".parse::<Mode>().unwrap(), Mode::Full);
        assert!("fast".parse::<Mode>().is_err());
    }
}
