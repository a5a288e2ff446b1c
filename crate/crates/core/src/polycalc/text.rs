//! Text forms of polynomials.
//!
//! Canonical form lists every term as `p/q * x1^a1 ... xN^aN` (all variables,
//! zero exponents included), highest graded-lex term first, joined by
//! `" + "`. The zero polynomial prints as `0`. The parser is lenient: it
//! reads the canonical form and the usual hand-written notation
//! (`x1^2 - 1/2 x2^2`, `3*x1*x2`, `2.5e-1 x3`).

use num_traits::{One, Signed, Zero};

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::numeric::{parse_rational, rational_to_text, Rational};

impl Polynomial {
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().rev().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&rational_to_text(c));
            out.push_str(" *");
            for (k, e) in m.exponents().iter().enumerate() {
                out.push_str(&format!(" x{}^{}", k + 1, e));
            }
        }
        out
    }

    /// Human-oriented form: unit coefficients and zero exponents omitted,
    /// signs folded into the separators.
    pub fn to_pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let a = c.abs();
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| {
                    if e == 1 {
                        format!("x{}", k + 1)
                    } else {
                        format!("x{}^{}", k + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push(' ');
                }
                out.push_str(&vars.join(" "));
            }
        }
        out
    }

    /// Parses either text form. With `dim = None` the dimension is the
    /// largest variable index seen (at least 1).
    pub fn parse(s: &str, dim: Option<usize>) -> Result<Polynomial> {
        let terms = Parser::new(s).terms()?;
        let max_var = terms
            .iter()
            .flat_map(|(_, vs)| vs.iter().map(|(v, _)| *v))
            .max()
            .unwrap_or(0);
        let n = match dim {
            Some(n) => {
                if max_var > n {
                    return Err(Error::AxisOutOfRange {
                        axis: max_var,
                        dim: n,
                    });
                }
                n
            }
            None => max_var.max(1),
        };
        let mut p = Polynomial::zero(n);
        for (c, vs) in terms {
            let mut e = vec![0u32; n];
            for (v, k) in vs {
                e[v - 1] += k;
            }
            p.add_term(Monomial::new(e), c);
        }
        Ok(p)
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Polynomial::parse(s, None)
    }
}

type RawTerm = (Rational, Vec<(usize, u32)>);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    /// Leading signs, possibly repeated (`+ -3` from the canonical form).
    fn signs(&mut self) -> bool {
        let mut neg = false;
        while let Some(b) = self.peek() {
            match b {
                b'+' => self.pos += 1,
                b'-' => {
                    neg = !neg;
                    self.pos += 1
                }
                _ => break,
            }
        }
        neg
    }

    fn number(&mut self) -> Result<Rational> {
        let start = self.pos;
        let bytes = self.src;
        let mut i = self.pos;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        // p/q, allowing spaces around the slash
        let mut k = i;
        while k < bytes.len() && bytes[k] == b' ' {
            k += 1;
        }
        if k < bytes.len() && bytes[k] == b'/' {
            k += 1;
            while k < bytes.len() && bytes[k] == b' ' {
                k += 1;
            }
            let ds = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            if k == ds {
                self.pos = k;
                return Err(self.err("expected denominator after '/'"));
            }
            let num = std::str::from_utf8(&bytes[start..i]).unwrap_or("");
            let den = std::str::from_utf8(&bytes[ds..k]).unwrap_or("");
            self.pos = k;
            let n = parse_rational(num).map_err(|_| self.err("bad numerator"))?;
            let d = parse_rational(den).map_err(|_| self.err("bad denominator"))?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(n / d);
        }
        let text = std::str::from_utf8(&bytes[start..i]).unwrap_or("");
        self.pos = i;
        parse_rational(text).map_err(|_| Error::Parse {
            pos: start,
            msg: format!("bad number '{text}'"),
        })
    }

    fn term(&mut self) -> Result<RawTerm> {
        let neg = self.signs();
        let mut coeff = Rational::one();
        let mut vars = Vec::new();
        let mut any = false;
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() || b == b'.' => {
                    coeff *= self.number()?;
                    any = true;
                }
                Some(b'x') | Some(b'X') => {
                    self.pos += 1;
                    let idx = self.digits();
                    if idx.is_empty() {
                        return Err(self.err("expected variable index after 'x'"));
                    }
                    let v: usize = idx.parse().map_err(|_| self.err("variable index too large"))?;
                    if v == 0 {
                        return Err(self.err("variables are numbered from 1"));
                    }
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let d = self.digits();
                        if d.is_empty() {
                            return Err(self.err("expected exponent after '^'"));
                        }
                        e = d.parse().map_err(|_| self.err("exponent too large"))?;
                    }
                    vars.push((v, e));
                    any = true;
                }
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(b'(') | Some(b')') => {
                    return Err(self.err("parentheses are not supported"));
                }
                _ => break,
            }
        }
        if !any {
            return Err(self.err("expected a term"));
        }
        if neg {
            coeff = -coeff;
        }
        Ok((coeff, vars))
    }

    fn terms(&mut self) -> Result<Vec<RawTerm>> {
        let mut out = vec![self.term()?];
        while let Some(b) = self.peek() {
            if b == b'+' || b == b'-' {
                out.push(self.term()?);
            } else {
                return Err(self.err(format!("unexpected character '{}'", b as char)));
            }
        }
        Ok(out)
    }
}
