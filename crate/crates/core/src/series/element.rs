use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::coeff::{self, Coeff};
use super::{GeneratorKind, RelationStrategy, RingSpec};
use crate::error::{Error, Result};

/// Exponent vector over the generators of a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn generator(n: usize, i: usize, e: i32) -> Self {
        let mut v = vec![0; n];
        v[i] = e;
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| -a).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

pub(crate) type Terms = BTreeMap<Monomial, Coeff>;

/// A sparse element of a [`RingSpec`], known modulo terms of series degree
/// `>= prec` (`None` when exact).
#[derive(Debug, Clone)]
pub struct GradedElement {
    ring: Arc<RingSpec>,
    terms: Terms,
    prec: Option<i32>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_generators(&other.ring) && self.terms == other.terms && self.prec == other.prec
    }
}

fn min_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl RingSpec {
    pub fn sdeg(&self, m: &Monomial) -> i32 {
        self.generators
            .iter()
            .zip(&m.0)
            .map(|(g, e)| g.weight * e)
            .sum()
    }

    pub fn degree(&self, m: &Monomial) -> i32 {
        self.generators
            .iter()
            .zip(&m.0)
            .map(|(g, e)| g.degree * e)
            .sum()
    }

    /// Killed by a set-to-zero relation.
    fn killed(&self, m: &Monomial) -> bool {
        self.relations.iter().any(|r| {
            r.strategy == RelationStrategy::SetToZero
                && r.terms.keys().next().is_some_and(|k| k.divides(m))
        })
    }

    /// Monomial made of inverted or Laurent generators only.
    pub fn is_unit_monomial(&self, m: &Monomial) -> bool {
        self.generators
            .iter()
            .zip(&m.0)
            .all(|(g, &e)| e == 0 || g.kind.allows_negative())
    }

    fn series_free(&self, m: &Monomial) -> bool {
        self.generators
            .iter()
            .zip(&m.0)
            .all(|(g, &e)| e == 0 || !g.kind.is_series())
    }
}

/// Common denominator and numerators when every numerator is below `2^62`.
fn small_numerators(terms: &Terms) -> Option<(BigInt, Vec<i64>)> {
    let mut d = BigInt::one();
    for c in terms.values() {
        if !c.denom().is_one() {
            d = d.lcm(c.denom());
        }
    }
    let bound = BigInt::one() << 62;
    let mut out = Vec::with_capacity(terms.len());
    for c in terms.values() {
        let n = if c.denom() == &d {
            c.numer().clone()
        } else {
            c.numer() * (&d / c.denom())
        };
        if n.abs() >= bound {
            return None;
        }
        out.push(n.to_i64()?);
    }
    Some((d, out))
}

/// Exponents fit in 8-bit slots of a `u128` for the product of these terms.
fn pack_bounds(a: &Terms, b: &Terms) -> bool {
    let range = |t: &Terms| -> Option<Vec<(i32, i32)>> {
        let mut it = t.keys();
        let first = it.next()?;
        let mut r: Vec<(i32, i32)> = first.0.iter().map(|&e| (e, e)).collect();
        for m in it {
            for (x, &e) in r.iter_mut().zip(&m.0) {
                x.0 = x.0.min(e);
                x.1 = x.1.max(e);
            }
        }
        Some(r)
    };
    let (Some(ra), Some(rb)) = (range(a), range(b)) else {
        return false;
    };
    ra.len() <= 16
        && ra.iter().zip(&rb).all(|(x, y)| {
            let (lo, hi) = (x.0.min(0) + y.0.min(0), x.1.max(0) + y.1.max(0));
            lo >= -128 && hi <= 127
        })
}

fn pack(m: &Monomial) -> u128 {
    m.0.iter()
        .enumerate()
        .fold(0u128, |k, (i, &e)| k | (((e + 128) as u128) << (8 * i)))
}

fn unpack(k: u128, n: usize) -> Monomial {
    Monomial((0..n).map(|i| ((k >> (8 * i)) & 0xff) as i32 - 128).collect())
}

struct Conv {
    cap: Option<i32>,
    order: i32,
}

impl Conv {
    /// Pairwise products below the cap; `None` if `add` reports overflow.
    #[allow(clippy::type_complexity)]
    fn run<K: std::hash::Hash + Eq, C, V>(
        &self,
        a: &[(K, i32, C)],
        b: &[(K, i32, C)],
        key: impl Fn(&K, &K) -> K,
        mulc: impl Fn(&C, &C) -> V,
        add: impl Fn(&mut V, V) -> bool,
    ) -> Option<(HashMap<K, V>, bool)>
    where
        V: Default,
    {
        let mut acc: HashMap<K, V> = HashMap::new();
        let mut dropped = false;
        for (ka, sa, ca) in a {
            for (kb, sb, cb) in b {
                if let Some(cap) = self.cap {
                    if sa + sb >= cap {
                        if sa + sb >= self.order {
                            dropped = true;
                        }
                        continue;
                    }
                }
                let v = mulc(ca, cb);
                let e = acc.entry(key(ka, kb)).or_default();
                if !add(e, v) {
                    return None;
                }
            }
        }
        Some((acc, dropped))
    }
}

impl GradedElement {
    /// Builds an element, dropping zero terms and terms at or beyond the precision.
    pub fn from_parts(ring: Arc<RingSpec>, terms: Terms, prec: Option<i32>) -> Self {
        let mut prec = prec;
        let mut out = Terms::new();
        let series = ring.has_series();
        for (m, c) in terms {
            if c.is_zero() || ring.killed(&m) {
                continue;
            }
            if series {
                let s = ring.sdeg(&m);
                if prec.is_some_and(|p| s >= p) {
                    continue;
                }
                if s >= ring.order {
                    prec = min_opt(prec, Some(ring.order));
                    continue;
                }
            }
            out.insert(m, c);
        }
        if !series {
            prec = None;
        } else if prec.is_some_and(|p| p > ring.order) {
            prec = Some(ring.order);
        }
        GradedElement {
            ring,
            terms: out,
            prec,
        }
    }

    pub fn from_terms(ring: &Arc<RingSpec>, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut t = Terms::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), ring.ngens(), "monomial length");
            *t.entry(m).or_insert_with(Coeff::zero) += c;
        }
        Self::from_parts(ring.clone(), t, None)
    }

    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        GradedElement {
            ring: ring.clone(),
            terms: Terms::new(),
            prec: None,
        }
    }

    pub fn constant(ring: &Arc<RingSpec>, c: Coeff) -> Self {
        Self::from_terms(ring, [(Monomial::one(ring.ngens()), c)])
    }

    pub fn integer(ring: &Arc<RingSpec>, n: i64) -> Self {
        Self::constant(ring, coeff::from_i64(n))
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::integer(ring, 1)
    }

    pub fn monomial(ring: &Arc<RingSpec>, m: Monomial, c: Coeff) -> Self {
        Self::from_terms(ring, [(m, c)])
    }

    /// `name^e`; negative `e` only for invertible generators.
    pub fn gen_pow(ring: &Arc<RingSpec>, name: &str, e: i32) -> Result<Self> {
        let i = ring.require_gen(name)?;
        if e < 0 && !ring.generators[i].kind.allows_negative() {
            return Err(Error::NegativePowerOfNonUnit);
        }
        Ok(Self::monomial(
            ring,
            Monomial::generator(ring.ngens(), i, e),
            Coeff::one(),
        ))
    }

    pub fn gen(ring: &Arc<RingSpec>, name: &str) -> Result<Self> {
        Self::gen_pow(ring, name, 1)
    }

    /// A term of `name^e`; a coefficient and a list of (generator, exponent).
    pub fn term(ring: &Arc<RingSpec>, c: Coeff, factors: &[(&str, i32)]) -> Result<Self> {
        let mut m = Monomial::one(ring.ngens());
        for (name, e) in factors {
            let i = ring.require_gen(name)?;
            if *e < 0 && !ring.generators[i].kind.allows_negative() {
                return Err(Error::NegativePowerOfNonUnit);
            }
            m.0[i] += e;
        }
        Ok(Self::monomial(ring, m, c))
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn prec(&self) -> Option<i32> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// No known nonzero terms (zero up to the precision).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Least series degree of a term; `prec` when there are no terms.
    pub fn valuation(&self) -> Option<i32> {
        self.terms
            .keys()
            .map(|m| self.ring.sdeg(m))
            .min()
            .or(self.prec)
    }

    /// Total degree, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|m| self.ring.degree(m));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn is_p_local(&self) -> bool {
        let p = self.ring.prime;
        self.terms.values().all(|c| coeff::is_p_local(c, p))
    }

    /// Drops terms of series degree `>= p`.
    pub fn truncate(&self, p: i32) -> Self {
        Self::from_parts(self.ring.clone(), self.terms.clone(), min_opt(self.prec, Some(p)))
    }

    /// Forgets a precision bound, e.g. for a polynomial known to be exact.
    pub fn with_prec(&self, prec: Option<i32>) -> Self {
        Self::from_parts(self.ring.clone(), self.terms.clone(), prec)
    }

    /// The same element viewed in a ring with identical generators.
    pub fn rehome(&self, ring: &Arc<RingSpec>) -> Result<Self> {
        if !self.ring.same_generators(ring) {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, ring)));
        }
        Ok(Self::from_parts(ring.clone(), self.terms.clone(), self.prec))
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring.same_generators(&other.ring),
            "elements from different rings: {} and {}",
            self.ring,
            other.ring
        );
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::from_parts(self.ring.clone(), Terms::new(), self.prec);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        GradedElement {
            ring: self.ring.clone(),
            terms,
            prec: self.prec,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coeff) -> Self {
        let s = self.ring.sdeg(m);
        let terms = self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect();
        Self::from_parts(self.ring.clone(), terms, self.prec.map(|p| p + s))
    }

    fn add_impl(&self, other: &Self, sign: bool) -> Self {
        self.check_ring(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(e) => coeff::add_assign(e, c, sign),
                None => {
                    terms.insert(m.clone(), if sign { c.clone() } else { -c });
                }
            }
        }
        Self::from_parts(self.ring.clone(), terms, min_opt(self.prec, other.prec))
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.check_ring(other);
        let ring = &self.ring;
        let va = self.valuation();
        let vb = other.valuation();
        let mut prec = None;
        if let (Some(pa), Some(vb)) = (self.prec, vb) {
            prec = min_opt(prec, Some(pa + vb));
        }
        if let (Some(pb), Some(va)) = (other.prec, va) {
            prec = min_opt(prec, Some(pb + va));
        }
        if (self.terms.is_empty() && self.prec.is_none())
            || (other.terms.is_empty() && other.prec.is_none())
        {
            return Self::zero(ring);
        }
        let cap = if ring.has_series() {
            Some(prec.map_or(ring.order, |p| p.min(ring.order)))
        } else {
            None
        };
        let conv = Conv {
            cap,
            order: ring.order,
        };
        let sa: Vec<i32> = self.terms.keys().map(|m| ring.sdeg(m)).collect();
        let sb: Vec<i32> = other.terms.keys().map(|m| ring.sdeg(m)).collect();
        let packed = pack_bounds(&self.terms, &other.terms);
        let small = small_numerators(&self.terms).zip(small_numerators(&other.terms));
        let (terms, dropped): (Terms, bool) = match (packed, small) {
            (true, Some(((da, na), (db, nb)))) => {
                let a: Vec<(u128, i32, i64)> = self.terms.keys().zip(&sa).zip(na).map(|((m, &s), c)| (pack(m), s, c)).collect();
                let b: Vec<(u128, i32, i64)> = other.terms.keys().zip(&sb).zip(nb).map(|((m, &s), c)| (pack(m), s, c)).collect();
                let n = ring.ngens();
                let zero = pack(&Monomial::one(n));
                match conv.run(&a, &b, |x, y| x.wrapping_add(*y).wrapping_sub(zero), |x, y| *x as i128 * *y as i128, |acc: &mut i128, v| match acc.checked_add(v) {
                    Some(t) => {
                        *acc = t;
                        true
                    }
                    None => false,
                }) {
                    Some((acc, dropped)) => {
                        let d = da * db;
                        let t = acc
                            .into_iter()
                            .filter(|(_, c)| *c != 0)
                            .map(|(k, c)| (unpack(k, n), coeff::ratio(BigInt::from(c), &d)))
                            .collect();
                        (t, dropped)
                    }
                    None => self.mul_general(other, &conv, &sa, &sb),
                }
            }
            _ => self.mul_general(other, &conv, &sa, &sb),
        };
        if dropped {
            prec = min_opt(prec, Some(ring.order));
        }
        Self::from_parts(ring.clone(), terms, prec)
    }

    fn mul_general(&self, other: &Self, conv: &Conv, sa: &[i32], sb: &[i32]) -> (Terms, bool) {
        let a: Vec<(Monomial, i32, &Coeff)> = self.terms.iter().zip(sa).map(|((m, c), &s)| (m.clone(), s, c)).collect();
        let b: Vec<(Monomial, i32, &Coeff)> = other.terms.iter().zip(sb).map(|((m, c), &s)| (m.clone(), s, c)).collect();
        let (acc, dropped) = conv
            .run(&a, &b, |x, y| Monomial(x.0.iter().zip(&y.0).map(|(p, q)| p + q).collect()), |x, y| *x * *y, |acc: &mut Coeff, v| {
                coeff::add_assign(acc, &v, true);
                true
            })
            .expect("no overflow");
        (acc.into_iter().collect(), dropped)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Inverse: exact for a unit monomial, otherwise a geometric series around
    /// the lowest-order part, which must be a single invertible term.
    pub fn inverse(&self) -> Result<Self> {
        let ring = &self.ring;
        let v = self.terms.keys().map(|m| ring.sdeg(m)).min();
        let Some(v) = v else {
            return Err(Error::NegativePowerOfNonUnit);
        };
        let low: Vec<(&Monomial, &Coeff)> = self
            .terms
            .iter()
            .filter(|(m, _)| ring.sdeg(m) == v)
            .collect();
        if low.len() != 1 || !ring.is_unit_monomial(low[0].0) {
            return Err(Error::NegativePowerOfNonUnit);
        }
        let (um, uc) = (low[0].0.clone(), low[0].1.clone());
        let u_inv = Self::from_parts(
            ring.clone(),
            [(um.inv(), uc.recip())].into_iter().collect(),
            None,
        );
        if self.terms.len() == 1 && self.prec.is_none() {
            return Ok(u_inv);
        }
        if !ring.has_series() {
            return Err(Error::NegativePowerOfNonUnit);
        }
        // x = u (1 + t) with t of positive series degree.
        let px = self.prec.unwrap_or(ring.order);
        let cap = (px - v).min(ring.order);
        let mut t = &u_inv * self;
        t = &t - &Self::one(ring);
        t = t.truncate(cap);
        let neg_t = -&t;
        let mut sum = Self::one(ring);
        let mut power = Self::one(ring);
        loop {
            power = (&power * &neg_t).truncate(cap);
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        let sum = sum.with_prec(Some(cap));
        Ok(&u_inv * &sum)
    }

    /// Terms with no series generator.
    pub fn constant_term(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.series_free(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Self::from_parts(self.ring.clone(), terms, None)
    }

    /// Unit test for graded polynomial/Laurent rings and complete local rings.
    pub fn is_unit(&self) -> Result<bool> {
        let ring = &self.ring;
        if ring.has_laurent() {
            return Err(Error::UnsupportedRingKind(
                "units in rings with inverted series variables".into(),
            ));
        }
        let target = if ring.has_series() {
            self.constant_term()
        } else {
            self.clone()
        };
        if target.terms.len() != 1 {
            return Ok(false);
        }
        let (m, c) = target.terms.iter().next().expect("one term");
        Ok(ring.is_unit_monomial(m) && coeff::val_p(c, ring.prime) == Some(0))
    }

    /// Coefficients reduced into `0..p`.
    pub fn reduce_mod_p(&self) -> Result<Self> {
        let p = self.ring.prime;
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            let r = coeff::mod_p(c, p)?;
            if r != 0 {
                terms.insert(m.clone(), coeff::from_i64(r as i64));
            }
        }
        Ok(Self::from_parts(self.ring.clone(), terms, self.prec))
    }

    /// Sets the named generators to zero.
    pub fn kill(&self, idx: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| idx.iter().all(|&i| m.0[i] == 0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Self::from_parts(self.ring.clone(), terms, self.prec)
    }

    /// Image modulo `(p, v_1, ..., v_{n-1})`; `n = 0` is the identity.
    pub fn reduce_mod_in(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Ok(self.clone());
        }
        let idx = (1..n)
            .map(|i| self.ring.require_gen(&format!("v{i}")))
            .collect::<Result<Vec<_>>>()?;
        self.kill(&idx).reduce_mod_p()
    }

    /// Exact quotient by a generator; every term must contain it.
    pub fn divide_by_gen(&self, i: usize) -> Option<Self> {
        let kind = self.ring.generators[i].kind;
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            if m.0[i] < 1 && !kind.allows_negative() {
                return None;
            }
            let mut m = m.clone();
            m.0[i] -= 1;
            terms.insert(m, c.clone());
        }
        let w = self.ring.generators[i].weight;
        Some(Self::from_parts(
            self.ring.clone(),
            terms,
            self.prec.map(|p| p - w),
        ))
    }

    /// Map each coefficient, keeping monomials.
    pub fn map_coefficients(&self, f: impl Fn(&Coeff) -> Coeff) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect();
        Self::from_parts(self.ring.clone(), terms, self.prec)
    }

    /// Terms sorted for display: by series degree, then exponent vector.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Coeff)> {
        let mut v: Vec<(&Monomial, &Coeff)> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            self.ring
                .sdeg(a.0)
                .cmp(&self.ring.sdeg(b.0))
                .then_with(|| a.0.cmp(b.0))
        });
        v
    }

    /// Every exponent is admissible for its generator kind.
    pub fn check_exponents(&self) -> Result<()> {
        for m in self.terms.keys() {
            for (g, &e) in self.ring.generators.iter().zip(&m.0) {
                if e < 0 && !g.kind.allows_negative() {
                    return Err(Error::NegativePowerOfNonUnit);
                }
            }
        }
        Ok(())
    }

    pub fn is_negative_leading(&self) -> bool {
        self.sorted_terms()
            .first()
            .is_some_and(|(_, c)| c.is_negative())
    }

    pub(crate) fn kinds(&self) -> Vec<GeneratorKind> {
        self.ring.generators.iter().map(|g| g.kind).collect()
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_element(self))
    }
}

impl<'a> Add<&'a GradedElement> for &'a GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: &GradedElement) -> GradedElement {
        self.add_impl(rhs, true)
    }
}

impl<'a> Sub<&'a GradedElement> for &'a GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        self.add_impl(rhs, false)
    }
}

impl<'a> Mul<&'a GradedElement> for &'a GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: &GradedElement) -> GradedElement {
        self.mul_impl(rhs)
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        self.scale(&-Coeff::one())
    }
}

impl Add for GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: GradedElement) -> GradedElement {
        &self + &rhs
    }
}

impl Sub for GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: GradedElement) -> GradedElement {
        &self - &rhs
    }
}

impl Mul for GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: GradedElement) -> GradedElement {
        &self * &rhs
    }
}

impl Neg for GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        -&self
    }
}
