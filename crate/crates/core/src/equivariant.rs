//! Equivariant formal group law data over a complete base: an underlying
//! law, Euler classes and translation series, with adic consistency checks.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::group::{CharacterId, SubgroupLattice};
use crate::series::{
    relation_member, Generator, GeneratorKind, GradedElement, Membership, MembershipConfig, PowerSeries1,
    RelationStrategy, RingSpec, ZeroCertificate,
};

/// Name of the series variable of every `b^a(z)`.
pub const TRANSLATION_VAR: &str = "z";

/// Index of the character whose coordinate is called `y_a` in the other
/// common convention. Every inversion of characters goes through here.
pub fn opposite_convention(lattice: &SubgroupLattice, a: CharacterId) -> CharacterId {
    lattice.char_inv(a)
}

#[derive(Debug, Clone)]
pub struct EquivariantFglData {
    lattice: SubgroupLattice,
    base: Arc<RingSpec>,
    adic: Vec<String>,
    fgl: Fgl,
    euler: Vec<GradedElement>,
    bseries: Vec<PowerSeries1>,
}

impl EquivariantFglData {
    /// `euler` and `bseries` are indexed by character id. The adic ideal is
    /// generated by the named series generators of `base`.
    pub fn new(
        lattice: SubgroupLattice,
        base: Arc<RingSpec>,
        adic: Vec<String>,
        fgl: Fgl,
        euler: Vec<GradedElement>,
        bseries: Vec<PowerSeries1>,
    ) -> Result<Self> {
        let n = lattice.character_count();
        if euler.len() != n || bseries.len() != n {
            return Err(Error::PreconditionViolated(format!(
                "expected {n} Euler classes and translation series"
            )));
        }
        for name in &adic {
            let i = base.require_gen(name)?;
            if !base.generators()[i].kind.is_series() {
                return Err(Error::PreconditionViolated(format!("`{name}` is not a series generator")));
            }
        }
        for (k, (e, b)) in euler.iter().zip(&bseries).enumerate() {
            let label = lattice.character_label(CharacterId(k));
            if !e.ring().same_generators(&base) || !b.ring().same_generators(&base) {
                return Err(Error::RingMismatch(format!("data for {label} is not over the base")));
            }
            if e.homogeneous_degree().is_some_and(|d| d != -2) && !e.is_zero() {
                return Err(Error::PreconditionViolated(format!("e_{label} is not in degree -2")));
            }
            for (i, c) in b.coeffs().iter().enumerate() {
                let want = 2 * i as i32 - 2;
                if c.homogeneous_degree().is_some_and(|d| d != want) && !c.is_zero() {
                    return Err(Error::PreconditionViolated(format!(
                        "b_{i} of {label} is not in degree {want}"
                    )));
                }
            }
        }
        Ok(EquivariantFglData {
            lattice,
            base,
            adic,
            fgl,
            euler,
            bseries,
        })
    }

    /// The `C_2` model over `Z[e]/(e^2 + 2e)` with `F = x + y + xy`,
    /// `e_s = e` and `b^s(z) = e + (1 + e) z`, truncated at `e^order`.
    pub fn multiplicative_c2(order: i32) -> Result<Self> {
        let lattice = SubgroupLattice::build(&crate::group::PGroupSpec::cyclic(2, 1)?)?;
        let plain = RingSpec::builder(2).series("e", -2).order(order).build()?;
        let e = GradedElement::gen(&plain, "e")?;
        let rel = &(&e * &e) + &(&GradedElement::integer(&plain, 2) * &e);
        let base = plain.with_relations(vec![("e^2 + 2e".into(), rel, RelationStrategy::CertificateOnly)])?;
        let coef = RingSpec::builder(2).build()?;
        let fgl = Fgl::multiplicative(&coef, order.max(2) as usize - 1)?;
        let e = GradedElement::gen(&base, "e")?;
        let one = GradedElement::one(&base);
        let sigma = lattice.character_from_coefficients(&[1])?;
        let mut euler = vec![GradedElement::zero(&base); 2];
        euler[sigma.0] = e.clone();
        let mut bseries = vec![PowerSeries1::identity(TRANSLATION_VAR, &base, order as usize); 2];
        bseries[sigma.0] = PowerSeries1::new(TRANSLATION_VAR, &base, vec![e.clone(), &one + &e], order as usize);
        Self::new(lattice, base, vec!["e".into()], fgl, euler, bseries)
    }

    /// The same data with one translation series replaced.
    pub fn with_bseries(&self, a: CharacterId, b: PowerSeries1) -> Result<Self> {
        let mut bs = self.bseries.clone();
        *bs.get_mut(a.0).ok_or_else(|| Error::UnknownCharacter(a.0.to_string()))? = b;
        Self::new(
            self.lattice.clone(),
            self.base.clone(),
            self.adic.clone(),
            self.fgl.clone(),
            self.euler.clone(),
            bs,
        )
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn base(&self) -> &Arc<RingSpec> {
        &self.base
    }

    pub fn adic_generators(&self) -> &[String] {
        &self.adic
    }

    pub fn fgl(&self) -> &Fgl {
        &self.fgl
    }

    pub fn euler(&self, a: CharacterId) -> &GradedElement {
        &self.euler[a.0]
    }

    pub fn euler_classes(&self) -> &[GradedElement] {
        &self.euler
    }

    pub fn bseries(&self, a: CharacterId) -> &PowerSeries1 {
        &self.bseries[a.0]
    }

    pub fn all_bseries(&self) -> &[PowerSeries1] {
        &self.bseries
    }

    /// Exactly zero, or every term divisible by an adic generator.
    pub fn in_adic_ideal(&self, x: &GradedElement) -> bool {
        let idx: Vec<usize> = self.adic.iter().filter_map(|n| self.base.gen_index(n)).collect();
        if x.is_zero() {
            return x.is_exact() || x.prec().is_some_and(|p| p > 0);
        }
        x.terms().keys().all(|m| idx.iter().map(|&i| m.0[i]).sum::<i32>() > 0)
    }

    /// `e_{ab} - (e_a +_F e_b)`, decided against the base relations.
    pub fn factorization_residual(&self, a: CharacterId, b: CharacterId, config: &MembershipConfig) -> Result<Outcome> {
        let ab = self.lattice.char_mul(a, b);
        let sum = self.fgl.eval(&self.euler[a.0], &self.euler[b.0])?;
        Ok(decide(&(&self.euler[ab.0] - &sum), config))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// `e_1 = 0` and `b^1(z) = z`.
    I,
    /// `b^a(0) = e_a`.
    II,
    /// `e_{ab} = b^b(e_a)`.
    III,
    /// For `e_a` adic: translation, torsion and additivity.
    IV,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::I => "i",
            Axiom::II => "ii",
            Axiom::III => "iii",
            Axiom::IV => "iv",
        };
        f.write_str(s)
    }
}

/// Result of one identity check.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Exact,
    /// Zero modulo the base relations, with certificates.
    Certified(Vec<ZeroCertificate>),
    /// The residual, or the reason no certificate exists.
    Failed(String),
    Skipped(String),
}

impl Outcome {
    pub fn is_failure(&self) -> bool {
        matches!(self, Outcome::Failed(_))
    }

    pub fn holds(&self) -> bool {
        matches!(self, Outcome::Exact | Outcome::Certified(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Exact => "exact",
            Outcome::Certified(_) => "certified",
            Outcome::Failed(_) => "failed",
            Outcome::Skipped(_) => "skipped",
        }
    }

    fn and(self, other: Outcome) -> Outcome {
        match (self, other) {
            (f @ Outcome::Failed(_), _) | (_, f @ Outcome::Failed(_)) => f,
            (s @ Outcome::Skipped(_), _) | (_, s @ Outcome::Skipped(_)) => s,
            (Outcome::Certified(mut a), Outcome::Certified(b)) => {
                a.extend(b);
                Outcome::Certified(a)
            }
            (c @ Outcome::Certified(_), Outcome::Exact) | (Outcome::Exact, c @ Outcome::Certified(_)) => c,
            (Outcome::Exact, Outcome::Exact) => Outcome::Exact,
        }
    }
}

fn decide(d: &GradedElement, config: &MembershipConfig) -> Outcome {
    if d.is_zero() {
        return Outcome::Exact;
    }
    match relation_member(d, config) {
        Membership::Zero(c) => Outcome::Certified(vec![c]),
        Membership::Nonzero => Outcome::Failed(format!("{d} is not in the relation ideal")),
        Membership::Unknown => Outcome::Failed(format!("no certificate for {d}")),
    }
}

fn compare_series(a: &PowerSeries1, b: &PowerSeries1, config: &MembershipConfig) -> Outcome {
    let n = a.order().min(b.order());
    let mut out = Outcome::Exact;
    for k in 0..n {
        let o = decide(&(a.coeff(k) - b.coeff(k)), config);
        if let Outcome::Failed(r) = o {
            return Outcome::Failed(format!("z^{k}: {r}"));
        }
        out = out.and(o);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomEntry {
    pub axiom: Axiom,
    pub identity: String,
    pub alpha: CharacterId,
    pub beta: Option<CharacterId>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomCheck {
    pub entries: Vec<AxiomEntry>,
}

impl AxiomCheck {
    /// No failed entry for this axiom.
    pub fn passed(&self, axiom: Axiom) -> bool {
        self.entries.iter().filter(|e| e.axiom == axiom).all(|e| !e.outcome.is_failure())
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| !e.outcome.is_failure())
    }

    pub fn failed_axioms(&self) -> Vec<Axiom> {
        let mut v: Vec<Axiom> = self
            .entries
            .iter()
            .filter(|e| e.outcome.is_failure())
            .map(|e| e.axiom)
            .collect();
        v.dedup();
        v
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.entries.iter().filter(|e| e.outcome.is_failure())
    }
}

/// Checks the axioms to the truncation of the base. Identities that only hold
/// after completing at `e_a` are checked only when `e_a` is adic.
pub fn check_axioms(d: &EquivariantFglData, config: &MembershipConfig) -> Result<AxiomCheck> {
    let lat = &d.lattice;
    let chars: Vec<CharacterId> = lat.character_ids().collect();
    let mut adic = Vec::with_capacity(chars.len());
    for &a in &chars {
        let e = &d.euler[a.0];
        let is_adic = d.in_adic_ideal(e);
        if !is_adic && !e.is_unit()? {
            return Err(Error::PreconditionViolated(format!(
                "e_{} is neither adic nor a unit",
                lat.character_label(a)
            )));
        }
        adic.push(is_adic);
    }
    let name = |a: CharacterId| lat.character_label(a);
    let mut out = AxiomCheck::default();
    let mut push = |axiom, identity: String, alpha, beta, outcome| {
        out.entries.push(AxiomEntry {
            axiom,
            identity,
            alpha,
            beta,
            outcome,
        })
    };

    let one = lat.trivial_character();
    let e1 = &d.euler[one.0];
    let o = if e1.is_zero() {
        Outcome::Exact
    } else {
        Outcome::Failed(format!("e_1 = {e1}"))
    };
    push(Axiom::I, "e_1 = 0".into(), one, None, o);
    let b1 = &d.bseries[one.0];
    let z = PowerSeries1::identity(TRANSLATION_VAR, &d.base, b1.order());
    let o = if b1.sub(&z).is_zero() {
        Outcome::Exact
    } else {
        Outcome::Failed(format!("b^1(z) = {b1}"))
    };
    push(Axiom::I, "b^1(z) = z".into(), one, None, o);

    for &a in &chars {
        let o = decide(&(d.bseries[a.0].coeff(0) - &d.euler[a.0]), config);
        push(Axiom::II, format!("b^{}(0) = e_{}", name(a), name(a)), a, None, o);
    }

    for &a in &chars {
        for &b in &chars {
            let ab = lat.char_mul(a, b);
            let identity = format!("e_{} = b^{}(e_{})", name(ab), name(b), name(a));
            let o = if adic[a.0] {
                let v = d.bseries[b.0].eval_at(&d.euler[a.0])?;
                decide(&(&d.euler[ab.0] - &v), config)
            } else {
                Outcome::Skipped(format!("e_{} is a unit", name(a)))
            };
            push(Axiom::III, identity, a, Some(b), o);
        }
    }

    for &a in &chars {
        if !adic[a.0] {
            continue;
        }
        let e = &d.euler[a.0];
        let b = &d.bseries[a.0];
        let t = d.fgl.translate(e, TRANSLATION_VAR, b.order())?;
        let o = compare_series(b, &t, config);
        push(Axiom::IV, format!("b^{}(z) = e_{} +_F z", name(a), name(a)), a, None, o);

        let n = lat.char_order(a) as usize;
        let copies = vec![e.clone(); n];
        let o = decide(&d.fgl.sum_all(&copies)?, config);
        push(Axiom::IV, format!("[{n}](e_{}) = 0", name(a)), a, None, o);

        for &b in &chars {
            if b < a || !adic[b.0] {
                continue;
            }
            let ab = lat.char_mul(a, b);
            let o = d.factorization_residual(a, b, config)?;
            let identity = format!("e_{} = e_{} +_F e_{}", name(ab), name(a), name(b));
            push(Axiom::IV, identity, a, Some(b), o);
        }
    }
    Ok(out)
}

fn euler_names(m: usize) -> Vec<String> {
    if m == 1 {
        vec!["e".to_string()]
    } else {
        (1..=m).map(|j| format!("e{j}")).collect()
    }
}

/// `[n](x)` at `x = w`, by iterated formal sums.
pub(crate) fn n_times(f: &Fgl, w: &GradedElement, n: u64) -> Result<GradedElement> {
    if n == 0 {
        return Ok(GradedElement::zero(w.ring()));
    }
    let mut acc = w.clone();
    let mut bits = 64 - n.leading_zeros() - 1;
    // double-and-add
    while bits > 0 {
        bits -= 1;
        acc = f.eval(&acc, &acc)?;
        if (n >> bits) & 1 == 1 {
            acc = f.eval(&acc, w)?;
        }
    }
    Ok(acc)
}

/// The completed model: series variables on a direct basis of characters,
/// modulo their torsion series, with composite Euler classes built by formal
/// sums and `b^a(z) = e_a +_F z`.
pub fn borel_model(lattice: &SubgroupLattice, f: &Fgl, order: i32) -> Result<EquivariantFglData> {
    let q = lattice.quotient_characters(lattice.bottom());
    let names = euler_names(q.basis.len());
    let gens: Vec<Generator> = names
        .iter()
        .map(|n| Generator {
            name: n.clone(),
            degree: -2,
            kind: GeneratorKind::Series,
            weight: 1,
        })
        .collect();
    let plain = f.base().extend(&gens, order)?;
    let mut rels = Vec::new();
    for (name, &(_, ord)) in names.iter().zip(&q.basis) {
        let e = GradedElement::gen(&plain, name)?;
        rels.push((format!("[{ord}]({name})"), n_times(f, &e, ord)?, RelationStrategy::CertificateOnly));
    }
    let base = plain.with_relations(rels)?;
    let basis_e: Vec<GradedElement> = names
        .iter()
        .map(|n| GradedElement::gen(&base, n))
        .collect::<Result<_>>()?;
    let mut euler = Vec::with_capacity(lattice.character_count());
    let mut bseries = Vec::with_capacity(lattice.character_count());
    for a in lattice.character_ids() {
        let coords = lattice
            .coordinates(&q.basis, a)
            .expect("a direct basis spans every character");
        let mut e = GradedElement::zero(&base);
        for (j, &c) in coords.iter().enumerate() {
            if c > 0 {
                e = f.eval(&e, &n_times(f, &basis_e[j], c)?)?;
            }
        }
        bseries.push(f.translate(&e, TRANSLATION_VAR, order as usize)?);
        euler.push(e);
    }
    EquivariantFglData::new(lattice.clone(), base, names, f.clone(), euler, bseries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PGroupSpec;

    #[test]
    fn multiplicative_model() {
        let d = EquivariantFglData::multiplicative_c2(6).unwrap();
        let r = check_axioms(&d, &MembershipConfig::default()).unwrap();
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn corrupted_translation_fails() {
        let d = EquivariantFglData::multiplicative_c2(6).unwrap();
        let s = CharacterId(1);
        let e = d.euler(s).clone();
        let b = PowerSeries1::new("z", d.base(), vec![e, GradedElement::one(d.base())], 6);
        let r = check_axioms(&d.with_bseries(s, b).unwrap(), &MembershipConfig::default()).unwrap();
        assert!(!r.passed(Axiom::IV));
        assert!(r.passed(Axiom::I) && r.passed(Axiom::II));
    }

    #[test]
    fn trivial_group_model() {
        let lat = SubgroupLattice::build(&PGroupSpec::trivial(2).unwrap()).unwrap();
        let f = crate::fgl::p_typical(2, crate::fgl::Convention::Araki, 2, 4).unwrap();
        let d = borel_model(&lat, &f, 5).unwrap();
        assert_eq!(d.euler_classes().len(), 1);
        assert!(check_axioms(&d, &MembershipConfig::default()).unwrap().all_passed());
    }
}
