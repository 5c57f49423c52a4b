//! Text form of integer polynomials: `z^2 - 1`, `3*z1^2*z2 + 5`, `(z-1)(z+1)`.
//!
//! `z` denotes `z1`. Multiplication may be implicit. Coefficients are integers.

use num_bigint::BigInt;

use super::intpoly::IntPolynomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = vec![];
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            'z' | 'x' => {
                i += 1;
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let idx = if start == i {
                    1
                } else {
                    cs[start..i].iter().collect::<String>().parse::<usize>().unwrap()
                };
                if idx == 0 {
                    return Err(Error::Parse("variables are numbered from z1".into()));
                }
                out.push(Tok::Var(idx - 1));
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Tok::Num(cs[start..i].iter().collect::<String>().parse().unwrap()));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} in polynomial"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    arity: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<IntPolynomial> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -&self.term()?
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<IntPolynomial> {
        let base = match self.next() {
            Some(Tok::Num(n)) => IntPolynomial::constant(self.arity, n),
            Some(Tok::Var(i)) => IntPolynomial::var(self.arity, i),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                e
            }
            Some(Tok::Minus) => return Ok(-&self.factor()?),
            t => return Err(Error::Parse(format!("unexpected token {t:?}"))),
        };
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(k)) => {
                    let k: u32 = k.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(base.pow(k));
                }
                _ => return Err(Error::Parse("expected an integer exponent".into())),
            }
        }
        Ok(base)
    }
}

pub fn parse_polynomial(s: &str, arity: Option<usize>) -> Result<IntPolynomial> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let max_var = toks.iter().filter_map(|t| if let Tok::Var(i) = t { Some(*i + 1) } else { None }).max().unwrap_or(1);
    let arity = match arity {
        Some(a) if a < max_var => {
            return Err(Error::Parse(format!("polynomial uses z{max_var} but arity is {a}")));
        }
        Some(a) => a,
        None => max_var,
    };
    let mut p = Parser { toks, pos: 0, arity };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}
