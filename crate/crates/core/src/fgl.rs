//! One-dimensional formal group laws over graded rings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::balmer::HeightValue;
use crate::error::{Error, Result};
use crate::series::{
    bp_ring, val_p, Coeff, Generator, GeneratorKind, GradedElement, Monomial, PowerSeries1, RingMap, RingSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    Araki,
    Hazewinkel,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Araki => "araki",
            Convention::Hazewinkel => "hazewinkel",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "araki" => Ok(Convention::Araki),
            "hazewinkel" => Ok(Convention::Hazewinkel),
            _ => Err(Error::Parse(format!("unknown convention `{s}`"))),
        }
    }
}

fn series_gen(name: &str) -> Generator {
    Generator {
        name: name.to_string(),
        degree: -2,
        kind: GeneratorKind::Series,
        weight: 1,
    }
}

fn fresh_name(base: &RingSpec, want: &str) -> String {
    let mut s = want.to_string();
    while base.gen_index(&s).is_some() {
        s.push('\'');
    }
    s
}

/// Pads an element of `base` into a ring whose first generators are those of `base`.
pub(crate) fn lift(el: &GradedElement, ring: &Arc<RingSpec>) -> GradedElement {
    let n = ring.ngens();
    let terms = el.terms().iter().map(|(m, c)| {
        let mut v = m.0.clone();
        v.resize(n, 0);
        (Monomial(v), c.clone())
    });
    let out = GradedElement::from_terms(ring, terms);
    match el.prec() {
        Some(p) => out.truncate(p),
        None => out,
    }
}

/// Coefficients of the base inside a ring that contains its generators by name.
pub(crate) enum Embedding {
    Prefix(Arc<RingSpec>),
    Map(RingMap),
}

impl Embedding {
    pub(crate) fn new(base: &Arc<RingSpec>, target: &Arc<RingSpec>) -> Result<Self> {
        let prefix = base.prime() == target.prime()
            && base.ngens() <= target.ngens()
            && base.generators().iter().zip(target.generators()).all(|(a, b)| a == b);
        if prefix {
            Ok(Embedding::Prefix(target.clone()))
        } else {
            Ok(Embedding::Map(RingMap::by_name(base, target, &[])?))
        }
    }

    pub(crate) fn apply(&self, x: &GradedElement) -> Result<GradedElement> {
        match self {
            Embedding::Prefix(t) => Ok(lift(x, t)),
            Embedding::Map(m) => m.apply(x),
        }
    }
}

/// `F(x, y)` known modulo total degree `> degree`.
#[derive(Debug, Clone)]
pub struct Fgl {
    base: Arc<RingSpec>,
    degree: usize,
    f: GradedElement,
    coeffs: BTreeMap<(usize, usize), GradedElement>,
    log: Option<PowerSeries1>,
}

impl Fgl {
    fn from_bivariate(base: &Arc<RingSpec>, degree: usize, f: GradedElement, log: Option<PowerSeries1>) -> Self {
        let nb = base.ngens();
        let mut slots: BTreeMap<(usize, usize), Vec<(Monomial, Coeff)>> = BTreeMap::new();
        for (m, c) in f.terms() {
            let i = m.0[nb] as usize;
            let j = m.0[nb + 1] as usize;
            if i + j > degree {
                continue;
            }
            slots
                .entry((i, j))
                .or_default()
                .push((Monomial(m.0[..nb].to_vec()), c.clone()));
        }
        let coeffs = slots
            .into_iter()
            .map(|(k, t)| (k, GradedElement::from_terms(base, t)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Fgl {
            base: base.clone(),
            degree,
            f,
            coeffs,
            log,
        }
    }

    fn bivariate_ring(base: &Arc<RingSpec>, degree: usize) -> Result<Arc<RingSpec>> {
        let x = fresh_name(base, "x");
        let y = fresh_name(base, "y");
        base.extend(&[series_gen(&x), series_gen(&y)], degree as i32 + 1)
    }

    /// `F = sum a_ij x^i y^j` from explicit coefficients; `a_10 = a_01 = 1`
    /// are added when absent.
    pub fn from_coefficients(base: &Arc<RingSpec>, degree: usize, coeffs: &[((usize, usize), GradedElement)]) -> Result<Self> {
        let ring2 = Self::bivariate_ring(base, degree)?;
        let nb = base.ngens();
        let mut f = GradedElement::zero(&ring2);
        let mut have = BTreeMap::new();
        for ((i, j), c) in coeffs {
            have.insert((*i, *j), ());
            let mut m = Monomial::one(ring2.ngens());
            m.0[nb] = *i as i32;
            m.0[nb + 1] = *j as i32;
            f = &f + &lift(c, &ring2).mul_monomial(&m, &Coeff::one());
        }
        for (k, idx) in [((1, 0), nb), ((0, 1), nb + 1)] {
            if !have.contains_key(&k) {
                f = &f + &GradedElement::monomial(&ring2, Monomial::generator(ring2.ngens(), idx, 1), Coeff::one());
            }
        }
        Ok(Self::from_bivariate(base, degree, f, None))
    }

    pub fn additive(base: &Arc<RingSpec>, degree: usize) -> Result<Self> {
        let log = PowerSeries1::identity("x", base, degree + 1);
        Self::from_log(&log)
    }

    /// `x + y + xy`.
    pub fn multiplicative(base: &Arc<RingSpec>, degree: usize) -> Result<Self> {
        let one = GradedElement::one(base);
        let mut f = Self::from_coefficients(base, degree, &[((1, 1), one)])?;
        let cs: Vec<Coeff> = (0..=degree as i64)
            .map(|n| {
                if n == 0 {
                    Coeff::zero()
                } else {
                    let s = if n % 2 == 1 { 1 } else { -1 };
                    Coeff::new(s.into(), n.into())
                }
            })
            .collect();
        f.log = Some(PowerSeries1::from_rationals("x", base, &cs, degree + 1));
        Ok(f)
    }

    /// `F(x, y) = exp(log x + log y)` where `exp` is the compositional inverse.
    pub fn from_log(log: &PowerSeries1) -> Result<Self> {
        let base = log.ring().clone();
        if log.order() < 2 || !log.coeff(0).is_zero() || log.coeff(1) != &GradedElement::one(&base) {
            return Err(Error::BadLogLinearTerm);
        }
        let degree = log.order() - 1;
        let ring2 = Self::bivariate_ring(&base, degree)?;
        let nb = base.ngens();
        let n2 = ring2.ngens();
        // Solve G + sum_k l_k G^k = x + y + sum_k l_k (x^k + y^k) degree by degree;
        // only powers of G appear, so intermediate coefficients stay small.
        let xk = |k: usize| {
            &GradedElement::monomial(&ring2, Monomial::generator(n2, nb, k as i32), Coeff::one())
                + &GradedElement::monomial(&ring2, Monomial::generator(n2, nb + 1, k as i32), Coeff::one())
        };
        let ls: Vec<(usize, GradedElement)> = (2..=degree)
            .filter(|&k| !log.coeff(k).is_zero())
            .map(|k| (k, lift(log.coeff(k), &ring2)))
            .collect();
        // exponents to build, each as a sum of two smaller ones
        let mut plan: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut todo: Vec<usize> = ls.iter().map(|(k, _)| *k).collect();
        while let Some(e) = todo.pop() {
            if e < 2 || plan.contains_key(&e) {
                continue;
            }
            let split = if e % 2 == 0 { (e / 2, e / 2) } else { (e - 1, 1) };
            plan.insert(e, split);
            todo.push(split.0);
        }
        let zero = GradedElement::zero(&ring2);
        let mut comps: BTreeMap<usize, Vec<GradedElement>> = BTreeMap::new();
        comps.insert(1, vec![zero.clone(), xk(1)]);
        for &e in plan.keys() {
            comps.insert(e, vec![zero.clone(); e]);
        }
        for d in 2..=degree {
            for (&e, &(u, v)) in &plan {
                if e > d {
                    continue;
                }
                let mut c = zero.clone();
                for a in u..=(d - v) {
                    let pa = &comps[&u][a];
                    let pb = &comps[&v][d - a];
                    if !pa.is_zero() && !pb.is_zero() {
                        c = &c + &(pa * pb);
                    }
                }
                comps.get_mut(&e).expect("planned").push(c);
            }
            let mut g = zero.clone();
            for (k, l) in &ls {
                if *k == d {
                    g = &g + &(l * &xk(d));
                }
                if *k <= d {
                    g = &g - &(l * &comps[k][d]);
                }
            }
            comps.get_mut(&1).expect("G").push(g);
        }
        let acc = comps[&1].iter().fold(zero.clone(), |a, b| &a + b);
        let f = acc.with_prec(None);
        let log = PowerSeries1::new("x", &base, log.coeffs().to_vec(), degree + 1);
        Ok(Self::from_bivariate(&base, degree, f, Some(log)))
    }

    pub fn base(&self) -> &Arc<RingSpec> {
        &self.base
    }

    /// Largest total degree known.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn log(&self) -> Option<&PowerSeries1> {
        self.log.as_ref()
    }

    pub fn bivariate(&self) -> &GradedElement {
        &self.f
    }

    /// `a_ij`, including `a_10 = a_01 = 1`.
    pub fn coefficient(&self, i: usize, j: usize) -> GradedElement {
        self.coeffs
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| GradedElement::zero(&self.base))
    }

    pub fn coefficients(&self) -> &BTreeMap<(usize, usize), GradedElement> {
        &self.coeffs
    }

    pub fn is_p_local(&self) -> bool {
        self.coeffs.values().all(|c| c.is_p_local())
    }

    /// The same law with coefficients pushed along a ring map out of the base.
    pub fn map_coefficients(&self, map: &RingMap) -> Result<Self> {
        if !map.source().same_generators(&self.base) {
            return Err(Error::RingMismatch("map source is not the base".into()));
        }
        let target = map.target().clone();
        let mut cs = Vec::new();
        for (k, c) in &self.coeffs {
            cs.push((*k, map.apply(c)?));
        }
        let mut f = Self::from_coefficients(&target, self.degree, &cs)?;
        if let Some(log) = &self.log {
            f.log = Some(log.map_coefficients(|c| map.apply(c))?);
        }
        Ok(f)
    }

    /// `F(a, b)` for elements of a ring containing the base generators by name.
    pub fn eval(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
        let target = a.ring();
        let a_zero = a.is_zero() && a.is_exact();
        let b_zero = b.is_zero() && b.is_exact();
        if b_zero {
            return Ok(a.clone());
        }
        if a_zero {
            return Ok(b.clone());
        }
        let va = a.valuation().filter(|&v| v > 0).ok_or(Error::NotTopologicallyNilpotent)?;
        let vb = b.valuation().filter(|&v| v > 0).ok_or(Error::NotTopologicallyNilpotent)?;
        let embed = Embedding::new(&self.base, target)?;
        let m = self.degree;
        let mut apow = vec![GradedElement::one(target)];
        for i in 1..=m {
            let next = &apow[i - 1] * a;
            apow.push(next);
        }
        let mut out = GradedElement::zero(target);
        let mut bpow = GradedElement::one(target);
        for j in 0..=m {
            let mut inner = GradedElement::zero(target);
            for i in 0..=(m - j) {
                if let Some(c) = self.coeffs.get(&(i, j)) {
                    inner = &inner + &(&embed.apply(c)? * &apow[i]);
                }
            }
            if !inner.is_zero() {
                out = &out + &(&inner * &bpow);
            }
            if j < m {
                bpow = &bpow * b;
            }
        }
        let cap = (m as i32 + 1) * va.min(vb);
        Ok(out.truncate(cap))
    }

    /// Formal sum of a list, left to right.
    pub fn sum_all(&self, xs: &[GradedElement]) -> Result<GradedElement> {
        let mut it = xs.iter();
        let Some(first) = it.next() else {
            return Err(Error::PreconditionViolated("empty formal sum".into()));
        };
        let mut acc = first.clone();
        for x in it {
            acc = self.eval(&acc, x)?;
        }
        Ok(acc)
    }

    /// `e +_F z` as a series in `z` over the ring of `e`.
    pub fn translate(&self, e: &GradedElement, var: &str, order: usize) -> Result<PowerSeries1> {
        let ring = e.ring();
        let embed = Embedding::new(&self.base, ring)?;
        let e_zero = e.is_zero() && e.is_exact();
        let ve = if e_zero {
            None
        } else {
            Some(e.valuation().filter(|&v| v > 0).ok_or(Error::NotTopologicallyNilpotent)?)
        };
        let m = self.degree;
        let mut epow = vec![GradedElement::one(ring)];
        for i in 1..=m {
            let next = &epow[i - 1] * e;
            epow.push(next);
        }
        let order = order.min(m + 1);
        let mut coeffs = Vec::with_capacity(order);
        for j in 0..order {
            let mut c = GradedElement::zero(ring);
            for i in 0..=(m - j) {
                if let Some(a) = self.coeffs.get(&(i, j)) {
                    c = &c + &(&embed.apply(a)? * &epow[i]);
                }
            }
            if let Some(v) = ve {
                c = c.truncate((m - j + 1) as i32 * v);
            }
            coeffs.push(c);
        }
        Ok(PowerSeries1::new(var, ring, coeffs, order))
    }

    fn one_variable_ring(&self) -> Result<(Arc<RingSpec>, String)> {
        let x = fresh_name(&self.base, "x");
        let r = self.base.extend(&[series_gen(&x)], self.degree as i32 + 1)?;
        Ok((r, x))
    }

    /// `[n](x)` to order `degree + 1`.
    pub fn n_series(&self, n: i64) -> Result<PowerSeries1> {
        let order = self.degree + 1;
        if let Some(log) = &self.log {
            let exp = log.reverse()?;
            let nl = log.scale_rational(&Coeff::from_integer(n.into()));
            return exp.compose(&nl);
        }
        let (r1, x) = self.one_variable_ring()?;
        let xe = GradedElement::gen(&r1, &x)?;
        let unit = if n >= 0 { xe.clone() } else { self.inverse_element(&xe)? };
        let mut acc = GradedElement::zero(&r1);
        for _ in 0..n.unsigned_abs() {
            acc = self.eval(&acc, &unit)?;
        }
        PowerSeries1::from_element(&acc, &x, &self.base, order)
    }

    /// `i(a)` with `F(a, i(a)) = 0`, by fixed-point iteration.
    fn inverse_element(&self, a: &GradedElement) -> Result<GradedElement> {
        let mut g = -a;
        for _ in 0..=self.degree {
            // F(a, g) = a + g + rest(a, g); iterate g <- g - F(a, g)
            let s = self.eval(a, &g)?;
            g = &g - &s;
        }
        Ok(g)
    }

    /// The formal inverse `[-1](x)`.
    pub fn inverse_series(&self) -> Result<PowerSeries1> {
        self.n_series(-1)
    }

    /// Unit, commutativity and associativity residuals.
    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        let one = GradedElement::one(&self.base);
        let zero = GradedElement::zero(&self.base);
        let expect = |k: usize| if k == 1 { &one } else { &zero };
        let unit = (0..=self.degree)
            .all(|k| &self.coefficient(k, 0) == expect(k) && &self.coefficient(0, k) == expect(k));
        let commutative = self
            .coeffs
            .iter()
            .all(|((i, j), c)| &self.coefficient(*j, *i) == c);
        let names: Vec<String> = ["x", "y", "z"].iter().map(|n| fresh_name(&self.base, n)).collect();
        let gens: Vec<Generator> = names.iter().map(|n| series_gen(n)).collect();
        let r3 = self.base.extend(&gens, self.degree as i32 + 1)?;
        let x = GradedElement::gen(&r3, &names[0])?;
        let y = GradedElement::gen(&r3, &names[1])?;
        let z = GradedElement::gen(&r3, &names[2])?;
        let left = self.eval(&self.eval(&x, &y)?, &z)?;
        let right = self.eval(&x, &self.eval(&y, &z)?)?;
        let residual = &left - &right;
        Ok(AxiomReport {
            unit,
            commutative,
            associative: residual.is_zero(),
            associativity_residual: residual.with_prec(None).to_string(),
        })
    }
}

impl fmt::Display for Fgl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg {})", self.f.with_prec(None), self.degree + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub unit: bool,
    pub commutative: bool,
    pub associative: bool,
    pub associativity_residual: String,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.unit && self.commutative && self.associative
    }
}

fn p_pow(p: u64, k: u32) -> usize {
    (p as usize).pow(k)
}

/// Logarithm coefficients `m_0 = 1, m_1, ...` of the universal p-typical law
/// over `BP_*` with `v_1..v_count`; `v_n = 0` for `n > count`.
pub fn log_coefficients(ring: &Arc<RingSpec>, convention: Convention, count: usize, upto: usize) -> Result<Vec<GradedElement>> {
    let p = ring.prime();
    let pq = Coeff::from_integer(p.into());
    let v = |n: usize| -> Result<GradedElement> {
        if n == 0 {
            Ok(GradedElement::constant(ring, pq.clone()))
        } else if n <= count {
            GradedElement::gen(ring, &format!("v{n}"))
        } else {
            Ok(GradedElement::zero(ring))
        }
    };
    let mut m = vec![GradedElement::one(ring)];
    for n in 1..=upto {
        let val = match convention {
            Convention::Araki => {
                let mut s = v(n)?;
                for i in 1..n {
                    s = &s + &(&m[i] * &v(n - i)?.pow(p_pow(p, i as u32) as i64)?);
                }
                let d = pq.clone() - Coeff::from_integer(p.into()).pow(p_pow(p, n as u32) as i32);
                s.scale(&d.recip())
            }
            Convention::Hazewinkel => {
                let mut s = GradedElement::zero(ring);
                for i in 0..n {
                    s = &s + &(&m[i] * &v(n - i)?.pow(p_pow(p, i as u32) as i64)?);
                }
                s.scale(&pq.recip())
            }
        };
        m.push(val);
    }
    Ok(m)
}

/// The universal p-typical law over `BP_*` with `v_1..v_count`, to total
/// degree `degree`. The Araki law is checked against its defining p-series.
pub fn p_typical(p: u64, convention: Convention, count: usize, degree: usize) -> Result<Fgl> {
    if count == 0 {
        return Err(Error::PreconditionViolated("need at least v1".into()));
    }
    let ring = bp_ring(p, count)?;
    let mut upto = 0;
    while p_pow(p, upto as u32 + 1) <= degree {
        upto += 1;
    }
    let ms = log_coefficients(&ring, convention, count, upto)?;
    let mut cs = vec![GradedElement::zero(&ring); degree + 1];
    for (n, mn) in ms.iter().enumerate() {
        cs[p_pow(p, n as u32)] = mn.clone();
    }
    let log = PowerSeries1::new("x", &ring, cs, degree + 1);
    let f = Fgl::from_log(&log)?;
    if !f.is_p_local() {
        return Err(Error::ConventionSelfTestFailed(
            convention.to_string(),
            "coefficients are not p-local".into(),
        ));
    }
    if convention == Convention::Araki {
        araki_self_test(&f, count)?;
    }
    Ok(f)
}

/// `[p](x) = sum^F v_i x^{p^i}` with `v_0 = p`.
pub fn araki_self_test(f: &Fgl, count: usize) -> Result<()> {
    let base = f.base();
    let p = base.prime();
    let (r1, x) = f.one_variable_ring()?;
    let xe = GradedElement::gen(&r1, &x)?;
    let mut terms = vec![xe.scale(&Coeff::from_integer(p.into()))];
    let mut i = 1;
    while p_pow(p, i as u32) <= f.degree() && i <= count {
        let v = GradedElement::gen(&r1, &format!("v{i}"))?;
        terms.push(&v * &xe.pow(p_pow(p, i as u32) as i64)?);
        i += 1;
    }
    let direct = f.sum_all(&terms)?;
    let ps = f.n_series(p as i64)?;
    let from_series = ps.to_element(&r1)?;
    let diff = &direct - &from_series;
    if diff.is_zero() {
        Ok(())
    } else {
        Err(Error::ConventionSelfTestFailed(
            "araki".into(),
            format!("[p](x) - sum v_i x^(p^i) = {diff}"),
        ))
    }
}

/// Outcome of the `[p]`-series congruence modulo `I_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceReport {
    pub p: u64,
    pub n: u32,
    pub reduced: PowerSeries1,
    pub lower_vanish: bool,
    pub leading: GradedElement,
    pub leading_unit: Option<GradedElement>,
    pub next: GradedElement,
    pub next_unit: Option<GradedElement>,
}

impl CongruenceReport {
    pub fn holds(&self) -> bool {
        self.lower_vanish && self.leading_unit.is_some() && self.next_unit.is_some()
    }
}

/// Checks `[p](x) = v_{n-1} x^{p^{n-1}} + v_n x^{p^n} + ...` modulo
/// `(p, v_1, ..., v_{n-2})`, each up to a unit.
pub fn two_series_congruence(f: &Fgl, n: u32) -> Result<CongruenceReport> {
    let base = f.base();
    let p = base.prime();
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be at least 1".into()));
    }
    let lo = p_pow(p, n - 1);
    let hi = p_pow(p, n);
    if f.degree() < hi {
        return Err(Error::PrecisionTooLow(format!("need degree >= {hi}, have {}", f.degree())));
    }
    let ps = f.n_series(p as i64)?;
    let reduced = ps.reduce_mod_in(n - 1)?;
    let lower_vanish = (0..lo).all(|k| reduced.coeff(k).is_zero());
    let leading = reduced.coeff(lo).clone();
    let leading_unit = vn_unit(&leading, n - 1)?;
    let next = reduced.coeff(hi).reduce_mod_in(n)?;
    let next_unit = vn_unit(reduced.coeff(hi), n)?;
    let report = CongruenceReport {
        p,
        n,
        reduced,
        lower_vanish,
        leading,
        leading_unit,
        next,
        next_unit,
    };
    if report.holds() {
        Ok(report)
    } else {
        Err(Error::CongruenceFails(format!(
            "n = {n}: lower terms vanish {}, x^{lo} coefficient {}, x^{hi} coefficient {}",
            report.lower_vanish, report.leading, report.next
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Height {
    Exactly(u32),
    AtLeast(u32),
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Exactly(n) => write!(f, "{n}"),
            Height::AtLeast(n) => write!(f, "AtLeast({n})"),
        }
    }
}

/// Height of a law whose coefficients are p-local constants, read off the
/// mod-p reduction of `[p](x)`.
pub fn height_over_field(f: &Fgl, bound: u32) -> Result<Height> {
    let p = f.base().prime();
    for c in f.coefficients().values() {
        if c.terms().keys().any(|m| !m.is_one()) || !c.is_p_local() {
            return Err(Error::NotOverPrimeField);
        }
    }
    let ps = f.n_series(p as i64)?;
    let top = p_pow(p, bound);
    for k in 1..=top.min(f.degree()) {
        let c = ps.coeff(k).reduce_mod_p()?;
        if !c.is_zero() {
            let mut n = 0;
            while p_pow(p, n) < k {
                n += 1;
            }
            if p_pow(p, n) != k {
                return Err(Error::PreconditionViolated(format!(
                    "leading term of [p](x) in degree {k}, not a power of {p}"
                )));
            }
            return Ok(Height::Exactly(n));
        }
    }
    if f.degree() < top {
        return Err(Error::PrecisionTooLow(format!("need degree >= {top}, have {}", f.degree())));
    }
    Ok(Height::AtLeast(bound))
}

/// The unit `u` with `x = u * v_n` modulo `I_n` (for `n = 0`, `x = u * p`).
pub fn vn_unit(x: &GradedElement, n: u32) -> Result<Option<GradedElement>> {
    let ring = x.ring();
    let p = ring.prime();
    if n == 0 {
        if x.is_zero() || x.terms().values().any(|c| val_p(c, p).is_none_or(|v| v < 1)) {
            return Ok(None);
        }
        let u = x.scale(&Coeff::from_integer(p.into()).recip());
        return Ok(u.is_unit()?.then_some(u));
    }
    let y = x.reduce_mod_in(n)?;
    let i = ring.require_gen(&format!("v{n}"))?;
    let Some(q) = y.divide_by_gen(i) else {
        return Ok(None);
    };
    if q.is_zero() {
        return Ok(None);
    }
    Ok(q.is_unit()?.then_some(q))
}

/// `x` is a `v_n`-generator: zero for `n = -1`, a unit for `n = inf`, and
/// `unit * v_n` modulo `I_n` otherwise.
pub fn vn_generator_check(x: &GradedElement, n: HeightValue) -> Result<bool> {
    match n {
        HeightValue::NegOne => Ok(x.is_zero()),
        HeightValue::Infinite => x.is_unit(),
        HeightValue::Finite(k) => Ok(vn_unit(x, k)?.is_some()),
    }
}
