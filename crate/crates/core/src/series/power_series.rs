use std::fmt;
use std::sync::Arc;

use num_traits::One;

use super::coeff::Coeff;
use super::element::{GradedElement, Monomial};
use super::map::RingMap;
use super::{Generator, GeneratorKind, RingSpec};
use crate::error::{Error, Result};

/// `sum_{k < order} c_k x^k + O(x^order)` with coefficients in a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries1 {
    var: String,
    ring: Arc<RingSpec>,
    coeffs: Vec<GradedElement>,
}

impl PowerSeries1 {
    /// Coefficients past `order` are dropped; missing ones are zero.
    pub fn new(var: &str, ring: &Arc<RingSpec>, mut coeffs: Vec<GradedElement>, order: usize) -> Self {
        coeffs.truncate(order);
        while coeffs.len() < order {
            coeffs.push(GradedElement::zero(ring));
        }
        PowerSeries1 {
            var: var.to_string(),
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn zero(var: &str, ring: &Arc<RingSpec>, order: usize) -> Self {
        Self::new(var, ring, vec![], order)
    }

    pub fn identity(var: &str, ring: &Arc<RingSpec>, order: usize) -> Self {
        Self::monomial(var, ring, GradedElement::one(ring), 1, order)
    }

    pub fn monomial(var: &str, ring: &Arc<RingSpec>, c: GradedElement, k: usize, order: usize) -> Self {
        let mut v = vec![GradedElement::zero(ring); order];
        if k < order {
            v[k] = c;
        }
        Self::new(var, ring, v, order)
    }

    /// From rational coefficients `c_0, c_1, ...`.
    pub fn from_rationals(var: &str, ring: &Arc<RingSpec>, cs: &[Coeff], order: usize) -> Self {
        let v = cs
            .iter()
            .map(|c| GradedElement::constant(ring, c.clone()))
            .collect();
        Self::new(var, ring, v, order)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[GradedElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &GradedElement {
        &self.coeffs[k]
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(&self.var, &self.ring, self.coeffs.clone(), order.min(self.order()))
    }

    pub fn map_coefficients(&self, f: impl Fn(&GradedElement) -> Result<GradedElement>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        let ring = coeffs.first().map_or(self.ring.clone(), |c| c.ring().clone());
        Ok(Self::new(&self.var, &ring, coeffs, self.order()))
    }

    pub fn reduce_mod_in(&self, n: u32) -> Result<Self> {
        self.map_coefficients(|c| c.reduce_mod_in(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let v = (0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        Self::new(&self.var, &self.ring, v, n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let v = (0..n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        Self::new(&self.var, &self.ring, v, n)
    }

    pub fn neg(&self) -> Self {
        let v = self.coeffs.iter().map(|c| -c).collect();
        Self::new(&self.var, &self.ring, v, self.order())
    }

    pub fn scale(&self, c: &GradedElement) -> Self {
        let v = self.coeffs.iter().map(|a| a * c).collect();
        Self::new(&self.var, &self.ring, v, self.order())
    }

    pub fn scale_rational(&self, c: &Coeff) -> Self {
        let v = self.coeffs.iter().map(|a| a.scale(c)).collect();
        Self::new(&self.var, &self.ring, v, self.order())
    }

    /// Product truncated at the smaller order. Zero coefficients are skipped,
    /// so sparse factors are cheap.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut v = vec![GradedElement::zero(&self.ring); n];
        let nz_b: Vec<usize> = (0..n).filter(|&j| !other.coeffs[j].is_zero()).collect();
        for i in 0..n {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for &j in &nz_b {
                if i + j >= n {
                    break;
                }
                v[i + j] = &v[i + j] + &(a * &other.coeffs[j]);
            }
        }
        Self::new(&self.var, &self.ring, v, n)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::monomial(&self.var, &self.ring, GradedElement::one(&self.ring), 0, self.order());
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

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let v = (1..n)
            .map(|k| self.coeffs[k].scale(&Coeff::from_integer((k as i64).into())))
            .collect();
        Self::new(&self.var, &self.ring, v, n.saturating_sub(1))
    }

    /// Multiplicative inverse; the constant coefficient must be invertible.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let c0 = self.coeffs[0].inverse()?;
        let mut h: Vec<GradedElement> = vec![c0.clone()];
        for k in 1..n {
            let mut s = GradedElement::zero(&self.ring);
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    s = &s + &(&self.coeffs[i] * &h[k - i]);
                }
            }
            h.push(-&(&c0 * &s));
        }
        Ok(Self::new(&self.var, &self.ring, h, n))
    }

    /// `self(g)`; requires `g(0) = 0`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs.first().is_none_or(|c| c.is_zero()) {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let nz: Vec<usize> = (0..n).filter(|&k| !self.coeffs[k].is_zero()).collect();
        let mut out = Self::zero(&self.var, &self.ring, n);
        if nz.len() * 3 <= n {
            // Sparse outer series: accumulate needed powers of g.
            let mut power = Self::monomial(&self.var, &self.ring, GradedElement::one(&self.ring), 0, n);
            let mut have = 0u32;
            for &k in &nz {
                let k = k as u32;
                if k > have {
                    power = if k == 2 * have {
                        power.mul(&power)
                    } else {
                        power.mul(&g.pow(k - have))
                    };
                    have = k;
                }
                out = out.add(&power.scale(&self.coeffs[k as usize]));
            }
        } else {
            // Horner.
            for k in (0..n).rev() {
                out = out.mul(&g);
                let mut c = out.coeffs[0].clone();
                c = &c + &self.coeffs[k];
                out.coeffs[0] = c;
            }
        }
        Ok(Self::new(&self.var, &self.ring, out.coeffs, n))
    }

    /// Compositional inverse; requires `f = a x + O(x^2)` with `a` invertible.
    pub fn reverse(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if n == 1 {
            return Ok(self.clone());
        }
        if self.coeffs[1].is_unit() == Ok(false) {
            return Err(Error::NonunitLinearTerm);
        }
        let a_inv = self.coeffs[1]
            .inverse()
            .map_err(|_| Error::NonunitLinearTerm)?;
        let x = Self::identity(&self.var, &self.ring, n);
        let mut g = x.scale(&a_inv);
        let df = self.derivative();
        // Newton: g <- g - (f(g) - x) / f'(g); precision doubles each round.
        let mut good = 2usize;
        while good < n {
            let next = (2 * good).min(n);
            let gt = Self::new(&self.var, &self.ring, g.coeffs.clone(), next);
            let fg = self.truncate(next).compose(&gt)?.sub(&x.truncate(next));
            let dfg = Self::new(&self.var, &self.ring, df.coeffs.clone(), next).compose(&gt)?;
            let step = fg.mul(&dfg.inverse()?);
            g = gt.sub(&step);
            good = next;
        }
        Ok(g)
    }

    /// The series ring `ring[[var]]` truncated at this order.
    pub fn extended_ring(&self) -> Result<Arc<RingSpec>> {
        self.ring.extend(
            &[Generator {
                name: self.var.clone(),
                degree: -2,
                kind: GeneratorKind::Series,
                weight: 1,
            }],
            self.order() as i32,
        )
    }

    /// As an element of a ring containing the coefficient generators and `var`.
    pub fn to_element(&self, target: &Arc<RingSpec>) -> Result<GradedElement> {
        let xi = target.require_gen(&self.var)?;
        let embed = RingMap::by_name(&self.ring, target, &[])?;
        let mut out = GradedElement::zero(target);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && c.is_exact() {
                continue;
            }
            let m = Monomial::generator(target.ngens(), xi, k as i32);
            out = &out + &embed.apply(c)?.mul_monomial(&m, &Coeff::one());
        }
        let w = target.generators()[xi].weight;
        Ok(out.truncate(self.order() as i32 * w))
    }

    /// Reads off the coefficients of `var^k` from an element whose terms have
    /// nonnegative `var` exponents; other generators must exist in `ring`.
    pub fn from_element(el: &GradedElement, var: &str, ring: &Arc<RingSpec>, order: usize) -> Result<Self> {
        let src = el.ring();
        let xi = src.require_gen(var)?;
        let mut slots: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); order];
        let pos: Vec<Option<usize>> = src
            .generators()
            .iter()
            .map(|g| ring.gen_index(&g.name))
            .collect();
        for (m, c) in el.terms() {
            let k = m.0[xi];
            if k < 0 {
                return Err(Error::MalformedSeries(format!("negative power of {var}")));
            }
            if k as usize >= order {
                continue;
            }
            let mut mm = Monomial::one(ring.ngens());
            for (i, &e) in m.0.iter().enumerate() {
                if i == xi || e == 0 {
                    continue;
                }
                let j = pos[i].ok_or_else(|| Error::MissingGenerator(src.generators()[i].name.clone()))?;
                mm.0[j] = e;
            }
            slots[k as usize].push((mm, c.clone()));
        }
        let coeffs = slots
            .into_iter()
            .map(|t| GradedElement::from_terms(ring, t))
            .collect();
        let order = match el.prec() {
            Some(p) => order.min(p.max(0) as usize),
            None => order,
        };
        Ok(Self::new(var, ring, coeffs, order))
    }

    /// `sum c_k w^k` in the ring of `w`, coefficients embedded by generator name.
    pub fn eval_at(&self, w: &GradedElement) -> Result<GradedElement> {
        let target = w.ring();
        let embed = RingMap::by_name(&self.ring, target, &[])?;
        let n = self.order();
        let vw = w.valuation();
        if vw.is_none_or(|v| v <= 0) && !(w.is_zero() && w.is_exact()) {
            return Err(Error::NotTopologicallyNilpotent);
        }
        let mut acc = GradedElement::zero(target);
        for k in (0..n).rev() {
            acc = &(&acc * w) + &embed.apply(&self.coeffs[k])?;
        }
        if w.is_zero() && w.is_exact() {
            return Ok(acc);
        }
        let cap = n as i32 * vw.expect("checked");
        Ok(acc.truncate(cap))
    }

    /// Exact zero test up to the order.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for PowerSeries1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = String::new();
        let ring = match self.extended_ring() {
            Ok(r) => r,
            Err(_) => return write!(f, "<series>"),
        };
        let el = match self.to_element(&ring) {
            Ok(e) => e,
            Err(_) => return write!(f, "<series>"),
        };
        let body = el.with_prec(None).to_string();
        if body != "0" || self.order() == 0 {
            parts.push_str(&body);
            parts.push_str(" + ");
        }
        parts.push_str(&format!("O({}^{})", self.var, self.order()));
        f.write_str(&parts)
    }
}
