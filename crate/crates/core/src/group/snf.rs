//! Smith normal form over ℤ with recorded unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `u · a · v == d` with `u`, `v` unimodular and `d` diagonal, its nonzero
/// diagonal entries positive and forming a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i].clone()).filter(|x| !x.is_zero()).collect()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize) -> IntMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

/// Exact determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    rows: usize,
    cols: usize,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            r.swap(i, j);
        }
    }

    /// row_i -= q · row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(src) {
                *x -= q * y;
            }
        }
    }

    /// col_i -= q · col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for r in m.iter_mut() {
                let y = r[j].clone();
                r[i] -= q * y;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    /// Position of the smallest nonzero |entry| in the lower-right block.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Smith normal form of an `rows × cols` integer matrix.
pub fn smith_normal_form(a: &IntMatrix, cols: usize) -> SmithForm {
    let rows = a.len();
    let mut w = Work {
        a: a.clone(),
        u: identity(rows),
        v: identity(cols),
        rows,
        cols,
    };
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = w.pivot(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.row_sub(i, t, &q);
                if !w.a[i][t].is_zero() {
                    // remainder is smaller than the pivot
                    w.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.col_sub(j, t, &q);
                if !w.a[t][j].is_zero() {
                    w.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            let p = w.a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&w.a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    // row_t += row_i brings a non-multiple into the pivot row
                    w.row_sub(t, i, &-BigInt::one());
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    SmithForm {
        u: w.u,
        v: w.v,
        d: w.a,
    }
}
