//! Canonical text form of ring elements, e.g. `v1*e^2 + 2*e^3 + O(e^4)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::coeff::{self, Coeff};
use super::element::{GradedElement, Monomial};
use super::RingSpec;
use crate::error::{Error, Result};

pub(crate) fn format_monomial(ring: &RingSpec, m: &Monomial) -> String {
    let parts: Vec<String> = ring
        .generators()
        .iter()
        .zip(&m.0)
        .filter(|(_, &e)| e != 0)
        .map(|(g, &e)| {
            if e == 1 {
                g.name.clone()
            } else {
                format!("{}^{}", g.name, e)
            }
        })
        .collect();
    parts.join("*")
}

fn format_term(ring: &RingSpec, m: &Monomial, c: &Coeff, first: bool) -> String {
    let mono = format_monomial(ring, m);
    let neg = c.is_negative();
    let abs = c.abs();
    let body = if mono.is_empty() {
        coeff::format_coeff(&abs)
    } else if abs.is_one() {
        mono
    } else {
        format!("{}*{}", coeff::format_coeff(&abs), mono)
    };
    match (first, neg) {
        (true, true) => format!("-{body}"),
        (true, false) => body,
        (false, true) => format!(" - {body}"),
        (false, false) => format!(" + {body}"),
    }
}

pub(crate) fn format_big_o(ring: &RingSpec, p: i32) -> String {
    let series: Vec<_> = ring
        .generators()
        .iter()
        .filter(|g| g.kind.is_series())
        .collect();
    if series.len() == 1 && series[0].weight == 1 {
        format!("O({}^{})", series[0].name, p)
    } else {
        format!("O({p})")
    }
}

pub(crate) fn format_element(a: &GradedElement) -> String {
    let ring = a.ring();
    let mut out = String::new();
    for (i, (m, c)) in a.sorted_terms().into_iter().enumerate() {
        out.push_str(&format_term(ring, m, c, i == 0));
    }
    if let Some(p) = a.prec() {
        if out.is_empty() {
            out = format_big_o(ring, p);
        } else {
            out.push_str(" + ");
            out.push_str(&format_big_o(ring, p));
        }
    } else if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
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
            '/' => {
                out.push(Tok::Slash);
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
            d if d.is_ascii_digit() => {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let n: String = cs[st..i].iter().collect();
                out.push(Tok::Num(n.parse().expect("digits")));
            }
            a if a.is_alphabetic() || a == '_' => {
                let st = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                if i < cs.len() && cs[i] == '[' {
                    while i < cs.len() && cs[i] != ']' {
                        i += 1;
                    }
                    if i == cs.len() {
                        return Err(Error::Parse(format!("unclosed `[` in `{s}`")));
                    }
                    i += 1;
                }
                out.push(Tok::Name(cs[st..i].iter().filter(|c| **c != ' ').collect()));
            }
            other => return Err(Error::Parse(format!("unexpected `{other}` in `{s}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a Arc<RingSpec>,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} of `{}`", self.pos, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn int(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Num(n)) => {
                let v: i64 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("expected integer")),
        }
    }

    /// Returns either a term or a precision marker.
    fn term(&mut self) -> Result<(Option<(Monomial, Coeff)>, Option<i32>)> {
        let n = self.ring.ngens();
        let mut m = Monomial::one(n);
        let mut c = Coeff::one();
        loop {
            match self.next() {
                Some(Tok::Num(a)) => {
                    let mut q = Coeff::from_integer(a);
                    if self.peek() == Some(&Tok::Slash) {
                        self.pos += 1;
                        match self.next() {
                            Some(Tok::Num(b)) if !b.is_zero() => q /= Coeff::from_integer(b),
                            _ => return Err(self.err("expected denominator")),
                        }
                    }
                    c *= q;
                }
                Some(Tok::Name(name)) if name == "O" && self.peek() == Some(&Tok::LParen) => {
                    self.pos += 1;
                    let p = match self.next() {
                        Some(Tok::Num(a)) => a.try_into().map_err(|_| self.err("bad precision"))?,
                        Some(Tok::Name(_)) => {
                            if self.next() != Some(Tok::Caret) {
                                return Err(self.err("expected ^ in O(...)"));
                            }
                            self.int()? as i32
                        }
                        _ => return Err(self.err("bad O(...)")),
                    };
                    if self.next() != Some(Tok::RParen) {
                        return Err(self.err("expected )"));
                    }
                    return Ok((None, Some(p)));
                }
                Some(Tok::Name(name)) => {
                    let i = self
                        .ring
                        .gen_index(&name)
                        .ok_or_else(|| Error::MissingGenerator(name.clone()))?;
                    let e = if self.peek() == Some(&Tok::Caret) {
                        self.pos += 1;
                        self.int()? as i32
                    } else {
                        1
                    };
                    m.0[i] += e;
                }
                _ => return Err(self.err("expected factor")),
            }
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                return Ok((Some((m, c)), None));
            }
        }
    }
}

/// Parses the canonical text form in the given ring.
pub fn parse_element(ring: &Arc<RingSpec>, s: &str) -> Result<GradedElement> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
        ring,
        src: s,
    };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut terms = Vec::new();
    let mut prec = None;
    let mut sign = Coeff::one();
    if let Some(Tok::Minus) = p.peek() {
        sign = -Coeff::one();
        p.pos += 1;
    } else if let Some(Tok::Plus) = p.peek() {
        p.pos += 1;
    }
    loop {
        let (t, o) = p.term()?;
        if let Some((m, c)) = t {
            terms.push((m, c * &sign));
        }
        if let Some(o) = o {
            prec = Some(o);
        }
        match p.next() {
            None => break,
            Some(Tok::Plus) => sign = Coeff::one(),
            Some(Tok::Minus) => sign = -Coeff::one(),
            _ => return Err(p.err("expected + or -")),
        }
    }
    let el = GradedElement::from_terms(ring, terms);
    el.check_exponents()?;
    Ok(match prec {
        Some(pr) => el.truncate(pr),
        None => el,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let r = RingSpec::builder(2)
            .bp_generators(3)
            .inverted("e[1,0]", -2)
            .series("x", -2)
            .build()
            .unwrap();
        for s in [
            "v1*x^2 + 2*x^3",
            "v3 - 1/2*v1*e[1,0]^-2",
            "1 + O(x^4)",
            "O(x^3)",
            "0",
            "-x - 3*x^2",
        ] {
            let a = parse_element(&r, s).unwrap();
            assert_eq!(a.to_string(), s, "{s}");
        }
        assert!(parse_element(&r, "v1 +").is_err());
        assert!(matches!(
            parse_element(&r, "w"),
            Err(Error::MissingGenerator(_))
        ));
        assert!(parse_element(&r, "v1^-1").is_err());
    }
}
