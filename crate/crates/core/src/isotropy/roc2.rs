//! Monomials in `a`, `u^+-` and integer-graded classes, with their
//! `RO(C_2)` degrees.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::Coeff;

/// `int + sigma * σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RoDegree {
    pub int: i32,
    pub sigma: i32,
}

impl RoDegree {
    pub fn new(int: i32, sigma: i32) -> Self {
        RoDegree { int, sigma }
    }
}

impl std::ops::Add for RoDegree {
    type Output = RoDegree;
    fn add(self, o: RoDegree) -> RoDegree {
        RoDegree::new(self.int + o.int, self.sigma + o.sigma)
    }
}

impl fmt::Display for RoDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}σ", self.int, self.sigma)
    }
}

/// `c * a^i * u^j * e^k * (product of named classes)`. Named classes are
/// `q{i}` (degree `2i - 2`), `b{i}_{j}` (degree `2(i + j) - 2`) and `v{i}`
/// (degree `2(2^i - 1)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roc2Monomial {
    pub coeff: Coeff,
    pub a: i32,
    pub u: i32,
    pub e: i32,
    pub classes: BTreeMap<String, i32>,
}

fn class_degree(name: &str) -> Result<i32> {
    let bad = || Error::Parse(format!("unknown class `{name}`"));
    if let Some(i) = name.strip_prefix('q') {
        let i: i32 = i.parse().map_err(|_| bad())?;
        return Ok(2 * i - 2);
    }
    if let Some(rest) = name.strip_prefix('b') {
        let (i, j) = rest.split_once('_').ok_or_else(bad)?;
        let i: i32 = i.parse().map_err(|_| bad())?;
        let j: i32 = j.parse().map_err(|_| bad())?;
        return Ok(2 * (i + j) - 2);
    }
    if let Some(i) = name.strip_prefix('v') {
        let i: u32 = i.parse().map_err(|_| bad())?;
        return Ok(2 * (2i32.pow(i) - 1));
    }
    Err(bad())
}

impl Roc2Monomial {
    pub fn one() -> Self {
        Roc2Monomial {
            coeff: Coeff::one(),
            a: 0,
            u: 0,
            e: 0,
            classes: BTreeMap::new(),
        }
    }

    pub fn a_pow(k: i32) -> Self {
        Roc2Monomial { a: k, ..Self::one() }
    }

    pub fn u_pow(k: i32) -> Self {
        Roc2Monomial { u: k, ..Self::one() }
    }

    pub fn e_pow(k: i32) -> Self {
        Roc2Monomial { e: k, ..Self::one() }
    }

    pub fn class(name: &str, k: i32) -> Result<Self> {
        class_degree(name)?;
        let mut m = Self::one();
        m.classes.insert(name.to_string(), k);
        Ok(m)
    }

    pub fn mul(&self, o: &Roc2Monomial) -> Roc2Monomial {
        let mut classes = self.classes.clone();
        for (k, v) in &o.classes {
            *classes.entry(k.clone()).or_insert(0) += v;
        }
        classes.retain(|_, v| *v != 0);
        Roc2Monomial {
            coeff: &self.coeff * &o.coeff,
            a: self.a + o.a,
            u: self.u + o.u,
            e: self.e + o.e,
            classes,
        }
    }

    /// Rewrites `e = a^2 u^-1`; `None` when the monomial is zero because it
    /// contains `a q_1` or a zero coefficient.
    pub fn normalize(&self) -> Option<Roc2Monomial> {
        if self.coeff.is_zero() {
            return None;
        }
        let mut m = self.clone();
        m.a += 2 * m.e;
        m.u -= m.e;
        m.e = 0;
        if m.a > 0 && m.classes.get("q1").is_some_and(|&k| k > 0) {
            return None;
        }
        Some(m)
    }
}

impl fmt::Display for Roc2Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.coeff.is_one() {
            parts.push(self.coeff.to_string());
        }
        for (name, k) in [("a", self.a), ("u", self.u), ("e", self.e)] {
            match k {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{k}")),
            }
        }
        for (name, &k) in &self.classes {
            if k == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{k}"));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl FromStr for Roc2Monomial {
    type Err = Error;

    /// Factors joined by `*`, each `name` or `name^k`; an optional leading
    /// rational coefficient.
    fn from_str(s: &str) -> Result<Self> {
        let mut m = Roc2Monomial::one();
        for (idx, part) in s.split('*').map(str::trim).enumerate() {
            if part.is_empty() {
                return Err(Error::Parse(format!("empty factor in `{s}`")));
            }
            if idx == 0 {
                if let Ok(c) = part.parse::<Coeff>() {
                    m.coeff = c;
                    continue;
                }
            }
            let (name, k) = match part.split_once('^') {
                Some((n, k)) => (n, k.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in `{part}`")))?),
                None => (part, 1),
            };
            let f = match name {
                "a" => Roc2Monomial::a_pow(k),
                "u" => Roc2Monomial::u_pow(k),
                "e" => Roc2Monomial::e_pow(k),
                other => Roc2Monomial::class(other, k)?,
            };
            m = m.mul(&f);
        }
        Ok(m)
    }
}

/// Degree of a monomial: `a` in `-σ`, `u` in `2 - 2σ`, `e` in `-2`.
pub fn ro_degree(m: &Roc2Monomial) -> RoDegree {
    let mut d = RoDegree::new(-2 * m.e, 0) + RoDegree::new(0, -m.a) + RoDegree::new(2 * m.u, -2 * m.u);
    for (name, &k) in &m.classes {
        d = d + RoDegree::new(k * class_degree(name).expect("validated on construction"), 0);
    }
    d
}

/// `u^(-2^(n-1)) q_(2^n)` sits in degree `(2^n - 2) + 2^n σ`.
pub fn mahowald_lift_degree_check(n: u32) -> Result<bool> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be positive".into()));
    }
    let m = Roc2Monomial::u_pow(-(1 << (n - 1))).mul(&Roc2Monomial::class(&format!("q{}", 1 << n), 1)?);
    let m = m.normalize().expect("no a");
    let want = RoDegree::new((1 << n) - 2, 1 << n);
    Ok(ro_degree(&m) == want)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        assert_eq!(ro_degree(&"a".parse().unwrap()), RoDegree::new(0, -1));
        assert_eq!(ro_degree(&"u".parse().unwrap()), RoDegree::new(2, -2));
        assert_eq!(ro_degree(&"u^-2*q4".parse().unwrap()), RoDegree::new(2, 4));
        let e: Roc2Monomial = "a^2*u^-1".parse().unwrap();
        assert_eq!(e.normalize().unwrap(), Roc2Monomial::e_pow(1).normalize().unwrap());
        assert_eq!(ro_degree(&e), RoDegree::new(-2, 0));
        assert!("a*q1".parse::<Roc2Monomial>().unwrap().normalize().is_none());
        for n in 1..=3 {
            assert!(mahowald_lift_degree_check(n).unwrap());
        }
    }
}
