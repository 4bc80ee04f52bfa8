//! Mutation words: products of mutations `μ_k` and seed permutations `σ`.
//!
//! Words are written and stored in composition order, so the text
//! `"(0 1) m0"` is `(0 1)∘μ_0` and applies `μ_0` first. [`APPLICATION_ORDER`]
//! records this once; every evaluator iterates [`MutationWord::application_order`].

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::ExchangeMatrix;
use crate::perm::Permutation;

/// Tokens are applied right to left: the last written token acts first.
pub const APPLICATION_ORDER: &str = "right-to-left";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Mutate(usize),
    Perm(Permutation),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MutationWord {
    n: usize,
    tokens: Vec<Token>,
}

/// Anything a word can act on.
pub trait WordAction: Sized {
    fn mutate_at(&self, k: usize) -> Result<Self>;
    fn relabel_by(&self, s: &Permutation) -> Result<Self>;

    fn apply_token(&self, t: &Token) -> Result<Self> {
        match t {
            Token::Mutate(k) => self.mutate_at(*k),
            Token::Perm(s) => self.relabel_by(s),
        }
    }

    fn apply_word(&self, w: &MutationWord) -> Result<Self> {
        let mut iter = w.application_order();
        let Some(first) = iter.next() else {
            return self.relabel_by(&Permutation::identity(w.n()));
        };
        let mut cur = self.apply_token(first)?;
        for t in iter {
            cur = cur.apply_token(t)?;
        }
        Ok(cur)
    }
}

impl WordAction for ExchangeMatrix {
    fn mutate_at(&self, k: usize) -> Result<Self> {
        self.mutate(k)
    }
    fn relabel_by(&self, s: &Permutation) -> Result<Self> {
        self.relabel(s)
    }
}

impl MutationWord {
    pub fn empty(n: usize) -> Self {
        MutationWord { n, tokens: Vec::new() }
    }

    /// Builds a word from tokens in written order.
    pub fn from_tokens(n: usize, tokens: Vec<Token>) -> Result<Self> {
        for t in &tokens {
            match t {
                Token::Mutate(k) if *k >= n => {
                    return Err(Error::IndexOutOfRange { index: *k, n });
                }
                Token::Perm(s) if s.len() != n => {
                    return Err(Error::InvalidPermutation(format!(
                        "permutation {s} has size {}, expected {n}",
                        s.len()
                    )));
                }
                _ => {}
            }
        }
        Ok(MutationWord { n, tokens })
    }

    pub fn mutation(n: usize, k: usize) -> Self {
        MutationWord {
            n,
            tokens: vec![Token::Mutate(k)],
        }
    }

    pub fn permutation(s: Permutation) -> Self {
        let n = s.len();
        let tokens = if s.is_identity() { vec![] } else { vec![Token::Perm(s)] };
        MutationWord { n, tokens }
    }

    /// Mutations only, given in written order: `[2, 1, 0]` is `μ_2μ_1μ_0`.
    pub fn mutations(n: usize, written: &[usize]) -> Self {
        MutationWord {
            n,
            tokens: written.iter().map(|&k| Token::Mutate(k)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Tokens in written order.
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn mutation_count(&self) -> usize {
        self.tokens.iter().filter(|t| matches!(t, Token::Mutate(_))).count()
    }

    /// Tokens in the order they act.
    pub fn application_order(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().rev()
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn then_after(&self, other: &MutationWord) -> MutationWord {
        let mut tokens = self.tokens.clone();
        tokens.extend(other.tokens.iter().cloned());
        MutationWord { n: self.n, tokens }
    }

    /// Appends a token on the left, so it acts after everything else.
    pub fn push_outer(&mut self, t: Token) {
        self.tokens.insert(0, t);
    }

    pub fn inverse(&self) -> MutationWord {
        let tokens = self
            .tokens
            .iter()
            .rev()
            .map(|t| match t {
                Token::Mutate(k) => Token::Mutate(*k),
                Token::Perm(s) => Token::Perm(s.inverse()),
            })
            .collect();
        MutationWord { n: self.n, tokens }
    }

    pub fn pow(&self, e: i64) -> MutationWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = MutationWord::empty(self.n);
        for _ in 0..e.unsigned_abs() {
            out = out.then_after(&base);
        }
        out
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &MutationWord) -> MutationWord {
        self.then_after(other).then_after(&self.inverse())
    }

    /// Normal form `σ μ_{i_l} … μ_{i_1}`: permutations are pushed to the
    /// outside using `μ_k σ = σ μ_{σ⁻¹(k)}` and adjacent equal mutations
    /// cancel.
    pub fn normalize(&self) -> MutationWord {
        let mut sigma = Permutation::identity(self.n);
        // mutations in application order
        let mut stack: Vec<usize> = Vec::new();
        for t in self.application_order() {
            match t {
                Token::Perm(s) => sigma = s.compose(&sigma),
                Token::Mutate(k) => {
                    let j = sigma.inverse().apply(*k);
                    if stack.last() == Some(&j) {
                        stack.pop();
                    } else {
                        stack.push(j);
                    }
                }
            }
        }
        let mut tokens = Vec::with_capacity(stack.len() + 1);
        if !sigma.is_identity() {
            tokens.push(Token::Perm(sigma));
        }
        tokens.extend(stack.iter().rev().map(|&k| Token::Mutate(k)));
        MutationWord { n: self.n, tokens }
    }

    /// The permutation part and written-order mutation indices of the
    /// normal form.
    pub fn normal_parts(&self) -> (Permutation, Vec<usize>) {
        let w = self.normalize();
        let mut sigma = Permutation::identity(self.n);
        let mut muts = Vec::new();
        for t in w.tokens {
            match t {
                Token::Perm(s) => sigma = s,
                Token::Mutate(k) => muts.push(k),
            }
        }
        (sigma, muts)
    }

    /// Parses the text format with 0-based labels.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        Self::parse_with_base(n, text, 0)
    }

    /// Parses whitespace-separated tokens: `mK` (or `μK`) and permutations
    /// in cycle notation. Adjacent cycles form a single permutation token.
    /// Labels are shifted down by `base`.
    pub fn parse_with_base(n: usize, text: &str, base: usize) -> Result<Self> {
        parse_word(n, text, base, 1, 1)
    }

    pub fn to_string_with_base(&self, base: usize) -> String {
        let parts: Vec<String> = self
            .tokens
            .iter()
            .map(|t| match t {
                Token::Mutate(k) => format!("m{}", k + base),
                Token::Perm(s) => s.to_cycle_string(base),
            })
            .collect();
        parts.join(" ")
    }
}

impl fmt::Display for MutationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with_base(0))
    }
}

/// Word parser shared with the relation-file reader; `line`/`col0` locate
/// `text` in its file for error messages.
pub(crate) fn parse_word(n: usize, text: &str, base: usize, line: usize, col0: usize) -> Result<MutationWord> {
    let chars: Vec<char> = text.chars().collect();
    let err = |pos: usize, msg: String| Error::parse(line, col0 + pos, msg);
    let label = |pos: usize, value: usize| -> Result<usize> {
        if value < base || value - base >= n {
            return Err(err(
                pos,
                format!("label {value} out of range for {n} vertices (labels start at {base})"),
            ));
        }
        Ok(value - base)
    };
    let mut tokens = Vec::new();
    let mut pending: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    let flush = |pending: &mut Vec<Vec<usize>>, tokens: &mut Vec<Token>, pos: usize| -> Result<()> {
        if pending.is_empty() {
            return Ok(());
        }
        let s = Permutation::from_cycles(n, pending).map_err(|e| err(pos, e.to_string()))?;
        pending.clear();
        if !s.is_identity() {
            tokens.push(Token::Perm(s));
        }
        Ok(())
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '(' {
            let start = i;
            i += 1;
            let mut cycle = Vec::new();
            loop {
                while i < chars.len() && (chars[i].is_whitespace() || chars[i] == ',') {
                    i += 1;
                }
                if i >= chars.len() {
                    return Err(err(start, "unclosed '('".into()));
                }
                if chars[i] == ')' {
                    i += 1;
                    break;
                }
                let num_start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if num_start == i {
                    return Err(err(i, format!("unexpected '{}' inside cycle", chars[i])));
                }
                let s: String = chars[num_start..i].iter().collect();
                let v: usize = s.parse().map_err(|_| err(num_start, format!("bad label '{s}'")))?;
                cycle.push(label(num_start, v)?);
            }
            if !cycle.is_empty() {
                pending.push(cycle);
            }
            continue;
        }
        flush(&mut pending, &mut tokens, i)?;
        if c == 'm' || c == 'μ' {
            let start = i;
            i += 1;
            let num_start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if num_start == i {
                return Err(err(start, "expected a vertex label after 'm'".into()));
            }
            let s: String = chars[num_start..i].iter().collect();
            let v: usize = s.parse().map_err(|_| err(num_start, format!("bad label '{s}'")))?;
            tokens.push(Token::Mutate(label(num_start, v)?));
            if i < chars.len() && !chars[i].is_whitespace() && chars[i] != '(' {
                return Err(err(i, format!("unexpected '{}' after mutation", chars[i])));
            }
            continue;
        }
        return Err(err(i, format!("unexpected character '{c}'")));
    }
    flush(&mut pending, &mut tokens, chars.len())?;
    Ok(MutationWord { n, tokens })
}
