//! Group-word expressions shared by relation files and presentation files.
//!
//! Grammar (juxtaposition is the product, written in composition order):
//!
//! ```text
//! expr    := factor*
//! factor  := atom ('^' integer)*
//! atom    := ident | '1' | mutation | cycles | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! A parenthesis starting with a digit opens a cycle, otherwise it groups.
//! `[a, b]` is the commutator `a b a⁻¹ b⁻¹`.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::word::Token;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Ident(String),
    Identity,
    /// Raw word tokens, labels already shifted to 0-based.
    Raw(Token),
    Product(Vec<Expr>),
    Power(Box<Expr>, i64),
    Commutator(Box<Expr>, Box<Expr>),
}

/// Context needed to read raw mutation/permutation tokens.
#[derive(Clone, Copy, Debug)]
pub struct RawContext {
    pub n: Option<usize>,
    pub base: usize,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    ctx: &'a RawContext,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col0 + self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| {
            self.pos = start;
            self.err(format!("expected an integer, found '{s}'"))
        })
    }

    fn label(&mut self, value: i64, at: usize) -> Result<usize> {
        let n = self.ctx.n.ok_or_else(|| Error::parse(self.line, self.col0 + at, "raw words need a vertex count"))?;
        let base = self.ctx.base as i64;
        if value < base || value - base >= n as i64 {
            return Err(Error::parse(
                self.line,
                self.col0 + at,
                format!("label {value} out of range for {n} vertices (labels start at {base})"),
            ));
        }
        Ok((value - base) as usize)
    }

    fn expr(&mut self, stop: &[char]) -> Result<Expr> {
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                None => break,
                Some(c) if stop.contains(&c) => break,
                Some(_) => factors.push(self.factor()?),
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            let k = self.number()?;
            e = Expr::Power(Box::new(e), k);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of expression"))?;
        let start = self.pos;
        if c == '(' {
            self.pos += 1;
            match self.peek() {
                Some(d) if d.is_ascii_digit() => return self.cycles(start),
                Some(')') => {
                    self.pos += 1;
                    return Ok(Expr::Identity);
                }
                _ => {}
            }
            let inner = self.expr(&[')'])?;
            if self.peek() != Some(')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
            return Ok(inner);
        }
        if c == '[' {
            self.pos += 1;
            let a = self.expr(&[','])?;
            if self.peek() != Some(',') {
                return Err(self.err("expected ',' in commutator"));
            }
            self.pos += 1;
            let b = self.expr(&[']'])?;
            if self.peek() != Some(']') {
                return Err(self.err("expected ']'"));
            }
            self.pos += 1;
            return Ok(Expr::Commutator(Box::new(a), Box::new(b)));
        }
        if c == '1' {
            self.pos += 1;
            if self.chars.get(self.pos).is_some_and(|d| d.is_ascii_alphanumeric()) {
                return Err(self.err("identifiers cannot start with a digit"));
            }
            return Ok(Expr::Identity);
        }
        if (c == 'm' || c == 'μ') && self.chars.get(self.pos + 1).is_some_and(|d| d.is_ascii_digit()) {
            let rest: String = self.chars[self.pos + 1..]
                .iter()
                .take_while(|d| d.is_ascii_alphanumeric() || **d == '_')
                .collect();
            if rest.chars().all(|d| d.is_ascii_digit()) {
                self.pos += 1;
                let at = self.pos;
                let v = self.number()?;
                return Ok(Expr::Raw(Token::Mutate(self.label(v, at)?)));
            }
        }
        if c.is_alphabetic() || c == '_' {
            while self.pos < self.chars.len()
                && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_' || self.chars[self.pos] == '\'')
            {
                self.pos += 1;
            }
            return Ok(Expr::Ident(self.chars[start..self.pos].iter().collect()));
        }
        Err(self.err(format!("unexpected character '{c}'")))
    }

    /// Reads consecutive cycles starting at the '(' at `start`.
    fn cycles(&mut self, start: usize) -> Result<Expr> {
        self.pos = start;
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        while self.peek() == Some('(') {
            let save = self.pos;
            self.pos += 1;
            match self.peek() {
                Some(d) if d.is_ascii_digit() => {}
                _ => {
                    self.pos = save;
                    break;
                }
            }
            let mut cycle = Vec::new();
            loop {
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(',') => self.pos += 1,
                    Some(d) if d.is_ascii_digit() => {
                        let at = self.pos;
                        let v = self.number()?;
                        cycle.push(self.label(v, at)?);
                    }
                    Some(other) => return Err(self.err(format!("unexpected '{other}' inside cycle"))),
                    None => return Err(self.err("unclosed cycle")),
                }
            }
            cycles.push(cycle);
        }
        let n = self.ctx.n.expect("label() checked n");
        let s = Permutation::from_cycles(n, &cycles).map_err(|e| Error::parse(self.line, self.col0 + start, e.to_string()))?;
        Ok(Expr::Raw(Token::Perm(s)))
    }
}

/// Parses a full expression. `line` and `col0` locate the text in its file.
pub fn parse_expr(text: &str, ctx: &RawContext, line: usize, col0: usize) -> Result<Expr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line,
        col0,
        ctx,
    };
    let e = p.expr(&[])?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Generic evaluator: maps an expression into a group given by callbacks.
pub trait GroupOps {
    type Elem: Clone;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn ident(&self, name: &str) -> Result<Self::Elem>;
    fn raw(&self, t: &Token) -> Result<Self::Elem>;

    fn eval(&self, e: &Expr) -> Result<Self::Elem> {
        Ok(match e {
            Expr::Ident(name) => self.ident(name)?,
            Expr::Identity => self.identity(),
            Expr::Raw(t) => self.raw(t)?,
            Expr::Product(fs) => {
                let mut acc = self.identity();
                for f in fs {
                    acc = self.mul(&acc, &self.eval(f)?);
                }
                acc
            }
            Expr::Power(b, k) => {
                let base = self.eval(b)?;
                let base = if *k < 0 { self.inv(&base) } else { base };
                let mut acc = self.identity();
                for _ in 0..k.unsigned_abs() {
                    acc = self.mul(&acc, &base);
                }
                acc
            }
            Expr::Commutator(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                let ab = self.mul(&a, &b);
                let ainv_binv = self.mul(&self.inv(&a), &self.inv(&b));
                self.mul(&ab, &ainv_binv)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CTX: RawContext = RawContext { n: Some(7), base: 0 };

    #[test]
    fn parses_words_and_groups() {
        let e = parse_expr("(0 1 2)(3 4 5 6) m2 m1 m0", &CTX, 1, 1).unwrap();
        match e {
            Expr::Product(fs) => assert_eq!(fs.len(), 4),
            other => panic!("{other:?}"),
        }
        let e = parse_expr("(psi1^-1 sigma)^2", &CTX, 1, 1).unwrap();
        assert!(matches!(e, Expr::Power(_, 2)));
        let e = parse_expr("[a, b c]", &RawContext { n: None, base: 0 }, 1, 1).unwrap();
        assert!(matches!(e, Expr::Commutator(_, _)));
        assert_eq!(parse_expr("1", &CTX, 1, 1).unwrap(), Expr::Identity);
        assert_eq!(parse_expr("m12x", &CTX, 1, 1).unwrap(), Expr::Ident("m12x".into()));
    }

    #[test]
    fn reports_positions() {
        match parse_expr("a (0 9)", &CTX, 3, 1) {
            Err(Error::Parse { line: 3, col, .. }) => assert_eq!(col, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("(a b", &CTX, 1, 1).is_err());
        assert!(parse_expr("[a b]", &CTX, 1, 1).is_err());
        assert!(parse_expr("m3", &RawContext { n: None, base: 0 }, 1, 1).is_err());
    }
}
