//! Text grammar for forms: `3*X^2*Y - 1/2*Z^3`, parentheses allowed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::form::Form;
use super::Rational;
use crate::error::{Error, Result};

type Sparse = BTreeMap<[u32; 3], Rational>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = s[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
                continue;
            }
            'X' | 'x' => Tok::Var(0),
            'Y' | 'y' => Tok::Var(1),
            'Z' | 'z' => Tok::Var(2),
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character {:?}", other),
                })
            }
        };
        out.push((i, tok));
        i += c.len_utf8();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.here(),
            msg: msg.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Sparse> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    add_into(&mut acc, t, false);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    add_into(&mut acc, t, true);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = mul(&acc, &f);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let f = self.unary()?;
                    let c = match as_constant(&f) {
                        Some(c) if !c.is_zero() => c,
                        _ => {
                            return Err(Error::Parse {
                                pos: at,
                                msg: "division only by nonzero constants".into(),
                            })
                        }
                    };
                    let inv = c.recip();
                    for v in acc.values_mut() {
                        *v *= &inv;
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Sparse> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                let mut f = self.unary()?;
                for v in f.values_mut() {
                    *v = -v.clone();
                }
                Ok(f)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Num(n)) => n.clone(),
                _ => return self.err("exponent must be a non-negative integer"),
            };
            self.pos += 1;
            let e: u32 = match u32::try_from(e) {
                Ok(e) if e <= 64 => e,
                _ => return self.err("exponent too large"),
            };
            let mut acc = constant(Rational::one());
            for _ in 0..e {
                acc = mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Sparse> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(constant(Rational::from_integer(n)))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                let mut e = [0u32; 3];
                e[v] = 1;
                let mut m = Sparse::new();
                m.insert(e, Rational::one());
                Ok(m)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn constant(c: Rational) -> Sparse {
    let mut m = Sparse::new();
    if !c.is_zero() {
        m.insert([0, 0, 0], c);
    }
    m
}

fn as_constant(f: &Sparse) -> Option<Rational> {
    match f.len() {
        0 => Some(Rational::zero()),
        1 => f.get(&[0, 0, 0]).cloned(),
        _ => None,
    }
}

fn add_into(acc: &mut Sparse, t: Sparse, negate: bool) {
    for (e, c) in t {
        let entry = acc.entry(e).or_insert_with(Rational::zero);
        if negate {
            *entry -= c;
        } else {
            *entry += c;
        }
        if entry.is_zero() {
            acc.remove(&e);
        }
    }
}

fn mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (e, x) in a {
        for (f, y) in b {
            let g = [e[0] + f[0], e[1] + f[1], e[2] + f[2]];
            let entry = out.entry(g).or_insert_with(Rational::zero);
            *entry += x * y;
            if entry.is_zero() {
                out.remove(&g);
            }
        }
    }
    out
}

fn parse_sparse(s: &str) -> Result<Sparse> {
    let toks = lex(s)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: s.len(),
    };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Parse a homogeneous form. `expected` fixes the degree, which also
/// gives the zero polynomial a degree; without it zero parses as degree 0.
pub fn parse_form(s: &str, expected: Option<u32>) -> Result<Form> {
    let f = parse_sparse(s)?;
    let mut degrees: Vec<u32> = f.keys().map(|e| e[0] + e[1] + e[2]).collect();
    degrees.sort_unstable();
    degrees.dedup();
    if degrees.len() > 1 {
        return Err(Error::Inhomogeneous { degrees });
    }
    let d = match (degrees.first(), expected) {
        (None, Some(d)) => d,
        (None, None) => 0,
        (Some(&d), None) => d,
        (Some(&d), Some(want)) if d == want => d,
        (Some(&d), Some(want)) => {
            return Err(Error::DegreeMismatch(format!(
                "form of degree {} where degree {} is required",
                d, want
            )))
        }
    };
    let mut out = Form::zero(d);
    for (e, c) in f {
        out = &out + &Form::monomial(e, c);
    }
    Ok(out)
}

impl std::str::FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Form> {
        parse_form(s, None)
    }
}

/// Parse an exact rational such as `-3`, `5/7`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("not a rational number: {:?}", s),
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}
