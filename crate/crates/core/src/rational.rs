//! Rational functions kept in factored form.
//!
//! A value is `c · x^m · ∏ f^e` with `c` rational, `m` an integer exponent
//! vector, and each `f` a primitive polynomial with positive leading
//! coefficient and no monomial factor. Factors are not guaranteed to be
//! irreducible, so two equal values may be stored differently; equality
//! falls back to cross-multiplying expanded numerators and denominators.
//!
//! Sums are computed over the common factored part and the new numerator
//! is trial-divided by a pool of known factors. Mutation only ever adds two
//! products of existing variables, so the pool is the set of factors that
//! occur in the current seed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::laurent::LaurentPolynomial;

type Poly = LaurentPolynomial;

#[derive(Clone, Debug)]
pub struct RationalFunction {
    n: usize,
    coeff: BigRational,
    mono: Vec<i32>,
    factors: BTreeMap<Poly, i32>,
}

/// Fixed evaluation point for cheap divisibility filtering.
fn probe_point(n: usize) -> Vec<BigInt> {
    const PRIMES: [i64; 12] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    (0..n).map(|i| BigInt::from(PRIMES[i % PRIMES.len()] + 40 * (i / PRIMES.len()) as i64)).collect()
}

impl RationalFunction {
    pub fn one(n: usize) -> Self {
        RationalFunction {
            n,
            coeff: BigRational::one(),
            mono: vec![0; n],
            factors: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        RationalFunction {
            coeff: c,
            ..Self::one(n)
        }
    }

    pub fn variable(n: usize, i: usize) -> Self {
        let mut r = Self::one(n);
        r.mono[i] = 1;
        r
    }

    /// Builds from a polynomial (any exponents) via normalization.
    pub fn from_laurent(p: &Poly) -> Self {
        let n = p.nvars();
        if p.is_zero() {
            return Self::constant(n, BigRational::zero());
        }
        let (c, m, prim) = split_polynomial(p);
        let mut r = RationalFunction {
            n,
            coeff: BigRational::from_integer(c),
            mono: m,
            factors: BTreeMap::new(),
        };
        if !prim.is_one() {
            r.factors.insert(prim, 1);
        }
        r
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn monomial_exponents(&self) -> &[i32] {
        &self.mono
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Poly, i32)> {
        self.factors.iter().map(|(f, &e)| (f, e))
    }

    /// Whether this is exactly `x^m` for the given `m`, structurally.
    pub fn is_monomial_exactly(&self, m: &[i32]) -> bool {
        self.coeff.is_one() && self.factors.is_empty() && self.mono == m
    }

    /// True when the value is a Laurent polynomial, i.e. the product of the
    /// negative-exponent factors divides the product of the positive ones.
    /// Factors carry no monomial part, so the monomial can be ignored.
    pub fn has_monomial_denominator(&self) -> bool {
        if self.factors.values().all(|&e| e > 0) {
            return true;
        }
        let mut num = Poly::one(self.n);
        let mut den = Poly::one(self.n);
        for (f, &e) in &self.factors {
            if e > 0 {
                num = num.mul(&f.pow(e as u32));
            } else {
                den = den.mul(&f.pow((-e) as u32));
            }
        }
        num.div_exact(&den).is_some()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.coeff = &self.coeff * &other.coeff;
        for (a, b) in out.mono.iter_mut().zip(&other.mono) {
            *a += b;
        }
        for (f, &e) in &other.factors {
            *out.factors.entry(f.clone()).or_insert(0) += e;
        }
        out.factors.retain(|_, e| *e != 0);
        out
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        RationalFunction {
            n: self.n,
            coeff: self.coeff.recip(),
            mono: self.mono.iter().map(|x| -x).collect(),
            factors: self.factors.iter().map(|(f, e)| (f.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i32) -> Self {
        if k == 0 {
            return Self::one(self.n);
        }
        if self.is_zero() {
            return self.clone();
        }
        let base = if k < 0 { self.inv() } else { self.clone() };
        let k = k.unsigned_abs();
        RationalFunction {
            n: self.n,
            coeff: num_traits::pow(base.coeff.clone(), k as usize),
            mono: base.mono.iter().map(|x| x * k as i32).collect(),
            factors: base.factors.iter().map(|(f, e)| (f.clone(), e * k as i32)).collect(),
        }
    }

    /// Integer numerator and denominator polynomials (both with nonnegative
    /// exponents), with the rational coefficient split between them.
    pub fn expanded_parts(&self) -> (Poly, Poly) {
        let n = self.n;
        let num_mono: Vec<i32> = self.mono.iter().map(|&m| m.max(0)).collect();
        let den_mono: Vec<i32> = self.mono.iter().map(|&m| (-m).max(0)).collect();
        let mut num = Poly::monomial(n, num_mono, self.coeff.numer().clone());
        let mut den = Poly::monomial(n, den_mono, self.coeff.denom().clone());
        for (f, &e) in &self.factors {
            if e > 0 {
                num = num.mul(&f.pow(e as u32));
            } else {
                den = den.mul(&f.pow((-e) as u32));
            }
        }
        (num, den)
    }

    /// `self + other`, reusing `pool` factors when splitting the new
    /// numerator.
    pub fn add_with_pool(&self, other: &Self, pool: &BTreeSet<Poly>) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let n = self.n;
        // common part G: minimum exponents of everything
        let mono_g: Vec<i32> = self.mono.iter().zip(&other.mono).map(|(a, b)| *a.min(b)).collect();
        let mut keys: BTreeSet<&Poly> = self.factors.keys().collect();
        keys.extend(other.factors.keys());
        let mut fac_g: BTreeMap<Poly, i32> = BTreeMap::new();
        for f in keys {
            let ea = self.factors.get(f).copied().unwrap_or(0);
            let eb = other.factors.get(f).copied().unwrap_or(0);
            let g = ea.min(eb);
            if g != 0 {
                fac_g.insert(f.clone(), g);
            }
        }
        let g = RationalFunction {
            n,
            coeff: BigRational::one(),
            mono: mono_g,
            factors: fac_g,
        };
        let a = self.div(&g);
        let b = other.div(&g);
        // a, b now have nonnegative monomial and factor exponents
        let lcm = a.coeff.denom().lcm(b.coeff.denom());
        let pa = a.positive_part().scale(&(a.coeff.numer() * (&lcm / a.coeff.denom())));
        let pb = b.positive_part().scale(&(b.coeff.numer() * (&lcm / b.coeff.denom())));
        let sum = pa.add(&pb);
        if sum.is_zero() {
            return Self::constant(n, BigRational::zero());
        }
        let mut pool_all: BTreeSet<Poly> = pool.clone();
        pool_all.extend(self.factors.keys().cloned());
        pool_all.extend(other.factors.keys().cloned());
        let s = factor_with_pool(&sum, &pool_all);
        let inv_lcm = RationalFunction::constant(n, BigRational::new(BigInt::one(), lcm));
        g.mul(&s).mul(&inv_lcm)
    }

    /// Product of the monomial and positive-exponent factors (coefficient
    /// omitted). Only meaningful when all exponents are nonnegative.
    fn positive_part(&self) -> Poly {
        let mono: Vec<i32> = self.mono.clone();
        let mut p = Poly::monomial(self.n, mono, 1);
        for (f, &e) in &self.factors {
            debug_assert!(e > 0);
            p = p.mul(&f.pow(e as u32));
        }
        p
    }

    /// `1 + self`.
    pub fn one_plus(&self, pool: &BTreeSet<Poly>) -> Self {
        Self::one(self.n).add_with_pool(self, pool)
    }

    /// Exact equality of the represented functions.
    pub fn equals(&self, other: &Self) -> bool {
        if self.coeff == other.coeff && self.mono == other.mono && self.factors == other.factors {
            return true;
        }
        let q = self.div(other);
        if q.factors.is_empty() {
            return q.coeff.is_one() && q.mono.iter().all(|&x| x == 0);
        }
        let (num, den) = q.expanded_parts();
        num == den
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

/// Splits a nonzero polynomial as `c · x^m · p` with `p` primitive, free of
/// monomial factors and with positive leading coefficient.
fn split_polynomial(p: &Poly) -> (BigInt, Vec<i32>, Poly) {
    let m = p.min_exponents();
    let neg: Vec<i32> = m.iter().map(|x| -x).collect();
    let shifted = p.shift(&neg);
    let mut c = shifted.content();
    if shifted.leading_sign() < 0 {
        c = -c;
    }
    let prim = shifted.div_exact(&Poly::constant(p.nvars(), c.clone())).expect("content divides");
    (c, m, prim)
}

/// Factors a nonzero polynomial by trial division against `pool`.
fn factor_with_pool(p: &Poly, pool: &BTreeSet<Poly>) -> RationalFunction {
    let n = p.nvars();
    let (c, m, mut rest) = split_polynomial(p);
    let mut out = RationalFunction {
        n,
        coeff: BigRational::from_integer(c),
        mono: m,
        factors: BTreeMap::new(),
    };
    if rest.is_one() {
        return out;
    }
    let point = probe_point(n);
    let mut rest_val = rest.eval_poly(&point);
    let rest_deg = rest.total_degree();
    for f in pool {
        if f.is_one() || f.total_degree() > rest_deg {
            continue;
        }
        let fv = f.eval_poly(&point);
        loop {
            if f.total_degree() > rest.total_degree() {
                break;
            }
            if !fv.is_zero() && !rest_val.is_multiple_of(&fv) {
                break;
            }
            match rest.div_exact(f) {
                Some(q) => {
                    rest = q;
                    if !fv.is_zero() {
                        rest_val /= &fv;
                    } else {
                        rest_val = rest.eval_poly(&point);
                    }
                    *out.factors.entry(f.clone()).or_insert(0) += 1;
                }
                None => break,
            }
        }
        if rest.is_one() {
            break;
        }
    }
    if !rest.is_one() {
        debug_assert!(rest.leading_sign() > 0);
        *out.factors.entry(rest).or_insert(0) += 1;
    }
    out
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        for (i, &m) in self.mono.iter().enumerate() {
            if m != 0 {
                write!(f, " * x{i}^{m}")?;
            }
        }
        for (p, &e) in &self.factors {
            write!(f, " * ({p})^{e}")?;
        }
        Ok(())
    }
}

/// The union of all factors occurring in a family of rational functions.
pub fn factor_pool<'a>(values: impl IntoIterator<Item = &'a RationalFunction>) -> BTreeSet<Poly> {
    let mut pool = BTreeSet::new();
    for v in values {
        pool.extend(v.factors.keys().cloned());
    }
    pool
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> RationalFunction {
        RationalFunction::variable(2, i)
    }

    #[test]
    fn one_plus_and_cancellation() {
        let pool = BTreeSet::new();
        let y = x(0).one_plus(&pool); // 1 + x0
        assert_eq!(y.num_factors(), 1);
        let z = y.div(&y);
        assert!(z.is_monomial_exactly(&[0, 0]));
        // (1 + x0) + x1·(1 + x0) = (1 + x0)(1 + x1)
        let sum = y.add_with_pool(&x(1).mul(&y), &pool);
        assert_eq!(sum.num_factors(), 2);
    }

    #[test]
    fn equality_across_representations() {
        let pool = BTreeSet::new();
        let a = x(0).one_plus(&pool);
        let b = x(1).one_plus(&pool);
        let ab = a.mul(&b);
        // expanded (1 + x0)(1 + x1) as one factor
        let (num, _) = ab.expanded_parts();
        let merged = RationalFunction::from_laurent(&num);
        assert_eq!(merged.num_factors(), 1);
        assert!(merged.equals(&ab));
        assert!(!merged.equals(&a));
    }

    #[test]
    fn trial_division_uses_pool() {
        let a = x(0).one_plus(&BTreeSet::new());
        let pool = factor_pool([&a]);
        // x0 + x0^2 = x0 (1 + x0)
        let s = x(0).add_with_pool(&x(0).pow(2), &pool);
        assert_eq!(s.num_factors(), 1);
        assert!(s.div(&a).is_monomial_exactly(&[1, 0]));
    }

    #[test]
    fn laurent_denominators() {
        let pool = BTreeSet::new();
        let a = x(0).one_plus(&pool).div(&x(1));
        assert!(a.has_monomial_denominator());
        let b = x(1).div(&x(0).one_plus(&pool));
        assert!(!b.has_monomial_denominator());
    }
}
