//! Node and edge rings over the subdivided subgroup lattice, the maps between
//! them, and element-level compatibility certificates.

mod roc2;
mod strickland;

pub use roc2::{mahowald_lift_degree_check, ro_degree, Roc2Monomial, RoDegree};
pub use strickland::{
    geometric_fixed_points, vnm_check, FixedPoints, PullbackPair, StricklandParams, StricklandTable, VnmReport,
};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::equivariant::{n_times, TRANSLATION_VAR};
use crate::error::{Error, Result};
use crate::fgl::{p_typical, Convention, Fgl};
use crate::group::{CharacterId, Section, SubgroupId, SubgroupLattice};
use crate::series::{
    relation_member, Generator, GeneratorKind, GradedElement, Membership, MembershipConfig, PowerSeries1,
    RelationStrategy, RingMap, RingSpec, ZeroCertificate,
};

/// Suffix naming a character: the exponent of the first basis character for
/// cyclic groups (empty for the generator itself), otherwise the coefficients.
fn char_suffix(lat: &SubgroupLattice, a: CharacterId) -> String {
    let c = lat.character_coefficients(a);
    if c.len() == 1 {
        if c[0] == 1 {
            String::new()
        } else {
            c[0].to_string()
        }
    } else {
        c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")
    }
}

/// Name of the Euler class generator of a character.
pub fn euler_name(lat: &SubgroupLattice, a: CharacterId) -> String {
    format!("e{}", char_suffix(lat, a))
}

/// Name of `b_i` attached to a character.
pub fn b_name(lat: &SubgroupLattice, a: CharacterId, i: usize) -> String {
    let s = char_suffix(lat, a);
    if s.is_empty() {
        format!("b{i}")
    } else {
        format!("b{i}_{s}")
    }
}

fn gen(name: String, degree: i32, kind: GeneratorKind, weight: i32) -> Generator {
    Generator {
        name,
        degree,
        kind,
        weight,
    }
}

/// Shared precision data: the lattice, the `BP` law and truncations.
#[derive(Debug, Clone)]
pub struct Isotropy {
    lattice: SubgroupLattice,
    fgl: Fgl,
    i_max: usize,
    order: i32,
    config: MembershipConfig,
}

impl Isotropy {
    /// Araki `BP` law with `v` generators, known far enough for `order` and `i_max`.
    pub fn new(lattice: &SubgroupLattice, i_max: usize, order: i32, v: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::PrecisionTooLow(format!("order {order}")));
        }
        let degree = order as usize + i_max;
        let fgl = p_typical(lattice.p(), Convention::Araki, v, degree)?;
        Self::with_fgl(lattice, fgl, i_max, order)
    }

    pub fn with_fgl(lattice: &SubgroupLattice, fgl: Fgl, i_max: usize, order: i32) -> Result<Self> {
        let config = MembershipConfig {
            max_series_order: order,
            max_v_index: fgl.base().ngens(),
            ..MembershipConfig::default()
        };
        Ok(Isotropy {
            lattice: lattice.clone(),
            fgl,
            i_max,
            order,
            config,
        })
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn fgl(&self) -> &Fgl {
        &self.fgl
    }

    pub fn i_max(&self) -> usize {
        self.i_max
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn config(&self) -> &MembershipConfig {
        &self.config
    }

    /// The ring at `(B)`.
    pub fn node_ring(&self, b: SubgroupId) -> Result<NodeRing> {
        let lat = &self.lattice;
        let section = lat.section(b);
        let mut gens = Vec::new();
        let mut inverted = Vec::new();
        for s in section.nontrivial_lifts() {
            let name = euler_name(lat, s);
            gens.push(gen(name.clone(), -2, GeneratorKind::Inverted, 0));
            let bs: Vec<String> = (1..=self.i_max).map(|i| b_name(lat, s, i)).collect();
            for (i, n) in bs.iter().enumerate() {
                gens.push(gen(n.clone(), 2 * (i as i32 + 1) - 2, GeneratorKind::Polynomial, 0));
            }
            inverted.push(InvertedChar {
                character: s,
                euler: name,
                b: bs,
            });
        }
        let basis = lat.quotient_characters(b).basis;
        let series: Vec<SeriesChar> = basis
            .iter()
            .map(|&(a, ord)| SeriesChar {
                character: a,
                order: ord,
                euler: euler_name(lat, a),
            })
            .collect();
        for s in &series {
            gens.push(gen(s.euler.clone(), -2, GeneratorKind::Series, 1));
        }
        let plain = self.fgl.base().extend(&gens, self.order)?;
        let ring = self.torsion_relations(&plain, &series)?;
        Ok(NodeRing {
            subgroup: b,
            section,
            inverted,
            series,
            ring,
        })
    }

    fn torsion_relations(&self, plain: &Arc<RingSpec>, series: &[SeriesChar]) -> Result<Arc<RingSpec>> {
        let mut rels = Vec::new();
        for s in series {
            let e = GradedElement::gen(plain, &s.euler)?;
            rels.push((
                format!("[{}]({})", s.order, s.euler),
                n_times(&self.fgl, &e, s.order)?,
                RelationStrategy::CertificateOnly,
            ));
        }
        plain.with_relations(rels)
    }

    /// `e_a` in a ring whose series generators sit on the given basis.
    fn euler_in(&self, ring: &Arc<RingSpec>, basis: &[SeriesChar], a: CharacterId) -> Result<GradedElement> {
        let pairs: Vec<(CharacterId, u64)> = basis.iter().map(|s| (s.character, s.order)).collect();
        let coords = self
            .lattice
            .coordinates(&pairs, a)
            .ok_or_else(|| Error::PreconditionViolated(format!("{} is outside the basis span", a.0)))?;
        let mut e = GradedElement::zero(ring);
        for (s, &c) in basis.iter().zip(&coords) {
            if c > 0 {
                let g = GradedElement::gen(ring, &s.euler)?;
                e = self.fgl.eval(&e, &n_times(&self.fgl, &g, c)?)?;
            }
        }
        Ok(e)
    }

    /// Edge ring of a cover and the two maps into it.
    pub fn edge_maps(&self, lower: SubgroupId, upper: SubgroupId) -> Result<EdgeMaps> {
        let lat = &self.lattice;
        if !lat.is_cover(lower, upper) {
            return Err(Error::PreconditionViolated(format!("{lower} < {upper} is not a cover")));
        }
        let n1 = self.node_ring(lower)?;
        let n2 = self.node_ring(upper)?;
        let adapted = adapted_basis(lat, &n1.series, upper);
        let has_adic = adapted.len() > 1;
        let weight = if has_adic { 2 } else { 1 };
        let mut gens: Vec<Generator> = n1.ring.generators()[..self.fgl.base().ngens()].to_vec();
        for inv in &n1.inverted {
            gens.push(gen(inv.euler.clone(), -2, GeneratorKind::Inverted, 0));
            for (i, n) in inv.b.iter().enumerate() {
                gens.push(gen(n.clone(), 2 * i as i32, GeneratorKind::Polynomial, 0));
            }
        }
        for (k, s) in adapted.iter().enumerate() {
            if k == 0 {
                gens.push(gen(s.euler.clone(), -2, GeneratorKind::LaurentSeries, 1));
            } else {
                gens.push(gen(s.euler.clone(), -2, GeneratorKind::Series, weight));
            }
        }
        let mut b = RingSpec::builder(lat.p()).order(self.order * weight);
        for g in gens {
            b = b.generator(g);
        }
        let edge = self.torsion_relations(&b.build()?, &adapted)?;

        // lower map: canonical
        let mut over = Vec::new();
        for s in &n1.series {
            over.push((s.euler.clone(), self.euler_in(&edge, &adapted, s.character)?));
        }
        let over_ref: Vec<(&str, GradedElement)> = over.iter().map(|(n, x)| (n.as_str(), x.clone())).collect();
        let from_lower = RingMap::by_name(&n1.ring, &edge, &over_ref)?;

        // upper map
        let s1 = &n1.section;
        let mut images: BTreeMap<String, GradedElement> = BTreeMap::new();
        let mut decompositions = Vec::new();
        for inv in &n2.inverted {
            let g = inv.character;
            let beta1 = lat.restrict(g, lower);
            let lift1 = s1.lift_of(&beta1).expect("sections are total");
            let alpha1 = lat.char_mul(g, lat.char_inv(lift1));
            decompositions.push((g, lift1, alpha1));
            let e_a1 = self.euler_in(&edge, &adapted, alpha1)?;
            let bser = if lift1 == lat.trivial_character() {
                None
            } else {
                n1.inverted.iter().find(|x| x.character == lift1)
            };
            images.insert(inv.euler.clone(), self.apply_b(&edge, bser, &e_a1)?);
            let translated = if e_a1.is_zero() && e_a1.is_exact() {
                PowerSeries1::identity(TRANSLATION_VAR, &edge, self.i_max + 1)
            } else {
                self.fgl.translate(&e_a1, TRANSLATION_VAR, self.i_max + 1)?
            };
            let composed = self.apply_b_series(&edge, bser, &translated, &e_a1)?;
            for (i, n) in inv.b.iter().enumerate() {
                images.insert(n.clone(), composed.coeff(i + 1).clone());
            }
        }
        for s in &n2.series {
            images.insert(s.euler.clone(), self.euler_in(&edge, &adapted, s.character)?);
        }
        let over_ref: Vec<(&str, GradedElement)> = images.iter().map(|(n, x)| (n.as_str(), x.clone())).collect();
        let from_upper = RingMap::by_name(&n2.ring, &edge, &over_ref)?;

        let mut relations = Vec::new();
        for (side, node, map) in [(Side::Lower, &n1, &from_lower), (Side::Upper, &n2, &from_upper)] {
            for (r, el) in node.ring.relations().iter().zip(node.ring.relation_elements()) {
                let img = map.apply(&el)?;
                relations.push(RelationImage {
                    side,
                    label: r.label.clone(),
                    outcome: relation_member(&img, &self.config),
                });
            }
        }
        let mut degrees_preserved = true;
        for (node, map) in [(&n1, &from_lower), (&n2, &from_upper)] {
            for (g, img) in node.ring.generators().iter().zip(map.images()) {
                if img.homogeneous_degree().is_some_and(|d| d != g.degree) {
                    degrees_preserved = false;
                }
            }
        }
        Ok(EdgeMaps {
            lower: n1,
            upper: n2,
            ring: edge,
            adapted,
            from_lower,
            from_upper,
            decompositions,
            relations,
            degrees_preserved,
        })
    }

    /// `b^s(w)` with `b^1(w) = w`; known to `(i_max + 1) val(w)`.
    fn apply_b(&self, ring: &Arc<RingSpec>, s: Option<&InvertedChar>, w: &GradedElement) -> Result<GradedElement> {
        let Some(s) = s else { return Ok(w.clone()) };
        let mut coeffs = vec![GradedElement::gen(ring, &s.euler)?];
        for n in &s.b {
            coeffs.push(GradedElement::gen(ring, n)?);
        }
        let b = PowerSeries1::new(TRANSLATION_VAR, ring, coeffs, self.i_max + 1);
        b.eval_at(w)
    }

    /// `b^s(t(z))` for a series `t` with constant term `w`.
    fn apply_b_series(
        &self,
        ring: &Arc<RingSpec>,
        s: Option<&InvertedChar>,
        t: &PowerSeries1,
        w: &GradedElement,
    ) -> Result<PowerSeries1> {
        let Some(s) = s else { return Ok(t.clone()) };
        let n = self.i_max + 1;
        let mut acc = PowerSeries1::monomial(TRANSLATION_VAR, ring, GradedElement::gen(ring, &s.euler)?, 0, n);
        let mut tp = PowerSeries1::monomial(TRANSLATION_VAR, ring, GradedElement::one(ring), 0, n);
        for name in &s.b {
            tp = tp.mul(t);
            acc = acc.add(&tp.scale(&GradedElement::gen(ring, name)?));
        }
        if w.is_zero() && w.is_exact() {
            return Ok(acc);
        }
        // b_i for i > i_max contribute to z^k only through w^(i - k)
        let v = w.valuation().unwrap_or(0).max(1);
        let coeffs = acc
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.truncate((n - k) as i32 * v))
            .collect();
        Ok(PowerSeries1::new(TRANSLATION_VAR, ring, coeffs, n))
    }

    /// Checks every edge: the two images of a tuple must differ by a relation
    /// member of the edge ring.
    pub fn limit_membership(&self, tuple: &BTreeMap<SubgroupId, GradedElement>) -> Result<LimitVerdict> {
        let lat = &self.lattice;
        for id in lat.ids() {
            if !tuple.contains_key(&id) {
                return Err(Error::PreconditionViolated(format!("no element at {id}")));
            }
        }
        let degs: Vec<i32> = tuple.values().filter_map(|x| x.homogeneous_degree()).collect();
        if degs.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::PreconditionViolated("elements in different degrees".into()));
        }
        let mut certs = Vec::new();
        let mut unknown = Vec::new();
        for &(lo, hi) in lat.covers() {
            let maps = self.edge_maps(lo, hi)?;
            let a = maps.from_lower.apply(&tuple[&lo].rehome(&maps.lower.ring)?)?;
            let b = maps.from_upper.apply(&tuple[&hi].rehome(&maps.upper.ring)?)?;
            let d = &a - &b;
            match relation_member(&d, &self.config) {
                Membership::Zero(c) => certs.push(EdgeCertificate {
                    lower: lo,
                    upper: hi,
                    difference: d,
                    certificate: c,
                }),
                Membership::Nonzero => {
                    return Ok(LimitVerdict::Incompatible {
                        lower: lo,
                        upper: hi,
                        witness: d.to_string(),
                    })
                }
                Membership::Unknown => unknown.push((lo, hi)),
            }
        }
        if unknown.is_empty() {
            Ok(LimitVerdict::Compatible(certs))
        } else {
            Ok(LimitVerdict::Unknown(unknown))
        }
    }
}

/// Basis of the lower quotient characters in which exactly the first element
/// is nontrivial on `upper`.
fn adapted_basis(lat: &SubgroupLattice, basis: &[SeriesChar], upper: SubgroupId) -> Vec<SeriesChar> {
    let outside = |a: CharacterId| !lat.is_trivial_on(a, upper);
    let pivot = basis
        .iter()
        .filter(|s| outside(s.character))
        .min_by_key(|s| s.order)
        .expect("a cover has a character nontrivial above")
        .clone();
    let p = lat.p();
    let mut out = vec![pivot.clone()];
    for s in basis {
        if s.character == pivot.character {
            continue;
        }
        let mut a = s.character;
        if outside(a) {
            a = (1..p)
                .map(|c| lat.char_mul(a, lat.char_inv(lat.char_pow(pivot.character, c))))
                .find(|&x| !outside(x))
                .expect("the quotient by the upper characters has order p");
        }
        out.push(SeriesChar {
            character: a,
            order: s.order,
            euler: euler_name(lat, a),
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertedChar {
    /// The lift `s(b)` of a nontrivial character of `B`.
    pub character: CharacterId,
    pub euler: String,
    pub b: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesChar {
    pub character: CharacterId,
    pub order: u64,
    pub euler: String,
}

/// `BP_*[e_s^+-, b_i^s][[e_a]]` modulo the torsion series of the basis.
#[derive(Debug, Clone)]
pub struct NodeRing {
    pub subgroup: SubgroupId,
    pub section: Section,
    pub inverted: Vec<InvertedChar>,
    pub series: Vec<SeriesChar>,
    pub ring: Arc<RingSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone)]
pub struct RelationImage {
    pub side: Side,
    pub label: String,
    pub outcome: Membership,
}

#[derive(Debug, Clone)]
pub struct EdgeMaps {
    pub lower: NodeRing,
    pub upper: NodeRing,
    pub ring: Arc<RingSpec>,
    /// Series basis of the edge ring; the first is inverted.
    pub adapted: Vec<SeriesChar>,
    pub from_lower: RingMap,
    pub from_upper: RingMap,
    /// `s_2(b) = s_1(b_1) a_1` for each inverted character above.
    pub decompositions: Vec<(CharacterId, CharacterId, CharacterId)>,
    pub relations: Vec<RelationImage>,
    pub degrees_preserved: bool,
}

impl EdgeMaps {
    /// Every source relation maps to a certified zero.
    pub fn relations_certified(&self) -> bool {
        self.relations.iter().all(|r| r.outcome.is_zero())
    }

    /// Image of a named generator of the upper node.
    pub fn upper_image(&self, name: &str) -> Result<&GradedElement> {
        let i = self.upper.ring.require_gen(name)?;
        Ok(&self.from_upper.images()[i])
    }
}

#[derive(Debug, Clone)]
pub struct EdgeCertificate {
    pub lower: SubgroupId,
    pub upper: SubgroupId,
    pub difference: GradedElement,
    pub certificate: ZeroCertificate,
}

#[derive(Debug, Clone)]
pub enum LimitVerdict {
    Compatible(Vec<EdgeCertificate>),
    Incompatible {
        lower: SubgroupId,
        upper: SubgroupId,
        witness: String,
    },
    Unknown(Vec<(SubgroupId, SubgroupId)>),
}

impl LimitVerdict {
    pub fn is_compatible(&self) -> bool {
        matches!(self, LimitVerdict::Compatible(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            LimitVerdict::Compatible(_) => "Compatible",
            LimitVerdict::Incompatible { .. } => "Incompatible",
            LimitVerdict::Unknown(_) => "Unknown",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PGroupSpec;

    #[test]
    fn names() {
        let c4 = SubgroupLattice::build(&PGroupSpec::cyclic(2, 2).unwrap()).unwrap();
        let a3 = c4.parse_character("[3]").unwrap();
        assert_eq!(euler_name(&c4, a3), "e3");
        assert_eq!(b_name(&c4, c4.parse_character("[1]").unwrap(), 2), "b2");
        let k = SubgroupLattice::build(&PGroupSpec::new(2, vec![1, 1]).unwrap()).unwrap();
        assert_eq!(b_name(&k, k.parse_character("[1,0]").unwrap(), 1), "b1_1_0");
    }

    #[test]
    fn c2_nodes() {
        let lat = SubgroupLattice::build(&PGroupSpec::cyclic(2, 1).unwrap()).unwrap();
        let iso = Isotropy::new(&lat, 2, 4, 2).unwrap();
        let borel = iso.node_ring(lat.bottom()).unwrap();
        assert_eq!(borel.ring.to_string(), "Z_(2)[v1, v2, e[[ ]]] mod deg_s >= 4 / ([2](e))");
        let geom = iso.node_ring(lat.top()).unwrap();
        assert_eq!(geom.ring.to_string(), "Z_(2)[v1, v2, e^±, b1, b2]");
    }
}
