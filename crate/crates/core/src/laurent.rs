//! Multivariate Laurent polynomials with arbitrary-precision coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense exponent vector.
pub type Exponents = Vec<i32>;

/// A Laurent polynomial in `n` variables. Terms are kept in a map keyed by
/// exponent vector, so iteration is in lexicographic order and the last
/// term is the lex-leading one. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    n: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(n: usize) -> Self {
        LaurentPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(n, vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, 1)
    }

    pub fn variable(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(n, e, 1)
    }

    pub fn monomial(n: usize, exps: Exponents, c: impl Into<BigInt>) -> Self {
        debug_assert_eq!(exps.len(), n);
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPolynomial { n, terms }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    /// A single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant coefficient of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigInt> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_default())
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.n);
        }
        LaurentPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        LaurentPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.n];
        };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    pub fn max_exponents(&self) -> Exponents {
        let mut m = vec![i32::MIN; self.n];
        for e in self.terms.keys() {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).max(*b);
            }
        }
        m
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Exact division in the ring. Returns `None` unless `divisor` divides
    /// `self` with a quotient whose exponents are bounded below by those of
    /// `self` minus those of `divisor`'s lowest terms, which holds for
    /// polynomials (nonnegative exponents) dividing polynomials.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (ld, cd) = divisor.leading_term()?;
        let floor: Vec<i32> = self
            .min_exponents()
            .iter()
            .zip(divisor.min_exponents())
            .map(|(a, b)| a - b)
            .collect();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.n);
        while let Some((lr, cr)) = rem.leading_term() {
            let e: Exponents = lr.iter().zip(ld).map(|(a, b)| a - b).collect();
            if e.iter().zip(&floor).any(|(a, f)| a < f) {
                return None;
            }
            let (q, r) = cr.div_rem(cd);
            if !r.is_zero() {
                return None;
            }
            let t = Self::monomial(self.n, e, q);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Evaluates at an integer point; all exponents must be nonnegative.
    pub fn eval_poly(&self, point: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                debug_assert!(k >= 0);
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Sign of the leading coefficient.
    pub fn leading_sign(&self) -> i32 {
        match self.leading_term() {
            Some((_, c)) if c.is_negative() => -1,
            Some(_) => 1,
            None => 0,
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum::<i64>())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}
