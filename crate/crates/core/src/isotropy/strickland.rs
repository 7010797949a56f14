//! Generators of the `C_2`-equivariant `BP` ring as compatible pairs of Borel
//! and geometric elements.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Isotropy, LimitVerdict, NodeRing};
use crate::error::{Error, Result};
use crate::fgl::{p_typical, vn_unit, Convention};
use crate::group::{PGroupSpec, SubgroupLattice};
use crate::series::{relation_member, GradedElement, Membership, RingMap, RingSpec, ZeroCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StricklandParams {
    pub i_max: usize,
    pub j_max: usize,
    /// Number of Borel coefficients kept for every generator.
    pub order: i32,
    pub v: usize,
}

impl Default for StricklandParams {
    fn default() -> Self {
        StricklandParams {
            i_max: 8,
            j_max: 2,
            order: 9,
            v: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PullbackPair {
    pub name: String,
    /// In `BP_*[[e]]/([2](e))`.
    pub borel: GradedElement,
    /// In `BP_*[e^+-, b_i]`.
    pub geom: GradedElement,
}

#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub name: String,
    pub borel: bool,
    pub geom: bool,
}

#[derive(Debug, Clone)]
pub struct Compatibility {
    pub name: String,
    pub verdict: &'static str,
    /// Multiplier of `[2](e)` in the Tate ring.
    pub multiplier: Option<String>,
    /// `e^i (q_i^borel - q_i^geom) = [2](e)` checked directly.
    pub closed_form: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct StricklandTable {
    pub params: StricklandParams,
    pub iso: Isotropy,
    pub borel: NodeRing,
    pub geom: NodeRing,
    pub tate: Arc<RingSpec>,
    /// `p_k`, the coefficients of the 2-series, `p_0 = 0`.
    pub p: Vec<GradedElement>,
    pub e: PullbackPair,
    /// `q_1, ..., q_imax`.
    pub q: Vec<PullbackPair>,
    /// `b_{i,j}` for `1 <= i <= imax`, `0 <= j <= jmax`.
    pub b: BTreeMap<(usize, usize), PullbackPair>,
    pub rel1: Vec<RelationCheck>,
    pub rel2: Vec<RelationCheck>,
    /// `e q_1 = [2](e)` on the Borel side.
    pub eq1_borel: Option<ZeroCertificate>,
    pub eq1_geom_zero: bool,
    pub compatibility: Vec<Compatibility>,
}

impl StricklandTable {
    pub fn compute(params: StricklandParams) -> Result<Self> {
        let StricklandParams { i_max, j_max, order, v } = params;
        if order < 1 || i_max < 1 {
            return Err(Error::PrecisionTooLow(format!("order {order}, imax {i_max}")));
        }
        if i_max > order as usize {
            return Err(Error::PreconditionViolated(format!("imax {i_max} exceeds the order {order}")));
        }
        let n = order as usize;
        // the Borel side keeps `order` terms of every q_i
        let t = order + i_max as i32;
        let degree = i_max + j_max + n - 1;
        let lat = SubgroupLattice::build(&PGroupSpec::cyclic(2, 1)?)?;
        let fgl = p_typical(2, Convention::Araki, v, degree)?;
        let iso = Isotropy::with_fgl(&lat, fgl.clone(), i_max, t)?;
        let borel = iso.node_ring(lat.bottom())?;
        let geom = iso.node_ring(lat.top())?;
        let maps = iso.edge_maps(lat.bottom(), lat.top())?;
        let tate = maps.ring.clone();
        let br = &borel.ring;
        let gr = &geom.ring;

        let two = fgl.n_series(2)?;
        let p: Vec<GradedElement> = (0..=degree).map(|k| two.coeff(k).clone()).collect();
        let a = |i: usize, j: usize| fgl.coefficient(i, j);
        let lift_b = |x: &GradedElement| crate::fgl::lift(x, br);
        let lift_g = |x: &GradedElement| crate::fgl::lift(x, gr);
        let eb = GradedElement::gen(br, "e")?;
        let eg = GradedElement::gen(gr, "e")?;
        let eg_inv = GradedElement::gen_pow(gr, "e", -1)?;
        let epow = |k: usize| eb.pow(k as i64).expect("nonnegative power");

        let e = PullbackPair {
            name: "e".into(),
            borel: eb.clone(),
            geom: eg.clone(),
        };

        let mut q = Vec::with_capacity(i_max);
        let mut qg = GradedElement::zero(gr);
        for i in 1..=i_max {
            let mut qb = GradedElement::zero(br);
            for k in i..(t as usize + i).min(degree + 1) {
                qb = &qb + &(&lift_b(&p[k]) * &epow(k - i));
            }
            let qb = qb.truncate(t - i as i32);
            if i > 1 {
                qg = &eg_inv * &(&qg - &lift_g(&p[i - 1]));
            }
            q.push(PullbackPair {
                name: format!("q{i}"),
                borel: qb,
                geom: qg.clone(),
            });
        }

        let mut b = BTreeMap::new();
        for i in 1..=i_max {
            let mut g = GradedElement::gen(gr, &format!("b{i}"))?;
            for j in 0..=j_max {
                let cap = (degree + 1 - i - j) as i32;
                let mut x = GradedElement::zero(br);
                for k in j..=(degree - i) {
                    x = &x + &(&lift_b(&a(i, k)) * &epow(k - j));
                }
                let x = x.truncate(cap.min(t));
                if j > 0 {
                    g = &eg_inv * &(&g - &lift_g(&a(i, j - 1)));
                }
                b.insert(
                    (i, j),
                    PullbackPair {
                        name: format!("b{i},{j}"),
                        borel: x,
                        geom: g.clone(),
                    },
                );
            }
        }

        let mut rel1 = Vec::new();
        for i in 1..i_max {
            let (x, y) = (&q[i - 1], &q[i]);
            let db = &(&x.borel - &lift_b(&p[i])) - &(&eb * &y.borel);
            let dg = &(&x.geom - &lift_g(&p[i])) - &(&eg * &y.geom);
            rel1.push(RelationCheck {
                name: format!("q{i} = p{i} + e q{}", i + 1),
                borel: db.is_zero(),
                geom: dg.is_zero() && dg.is_exact(),
            });
        }
        let mut rel2 = Vec::new();
        for i in 1..=i_max {
            for j in 0..j_max {
                let (x, y) = (&b[&(i, j)], &b[&(i, j + 1)]);
                let db = &(&x.borel - &lift_b(&a(i, j))) - &(&eb * &y.borel);
                let dg = &(&x.geom - &lift_g(&a(i, j))) - &(&eg * &y.geom);
                rel2.push(RelationCheck {
                    name: format!("b{i},{j} = a{i},{j} + e b{i},{}", j + 1),
                    borel: db.is_zero(),
                    geom: dg.is_zero() && dg.is_exact(),
                });
            }
        }

        let cfg = *iso.config();
        let eq1 = &eb * &q[0].borel;
        let eq1_borel = match relation_member(&eq1, &cfg) {
            Membership::Zero(c) => Some(c),
            _ => None,
        };
        let eq1_geom_zero = {
            let x = &eg * &q[0].geom;
            x.is_zero() && x.is_exact()
        };

        let two_e = tate.relation_elements()[0].clone();
        let et = GradedElement::gen(&tate, "e")?;
        let mut compatibility = Vec::new();
        let mut check = |pair: &PullbackPair, closed: Option<usize>| -> Result<()> {
            let mut tuple = BTreeMap::new();
            tuple.insert(lat.bottom(), pair.borel.clone());
            tuple.insert(lat.top(), pair.geom.clone());
            let verdict = iso.limit_membership(&tuple)?;
            let multiplier = match &verdict {
                LimitVerdict::Compatible(cs) => cs.first().map(|c| {
                    c.certificate
                        .used()
                        .first()
                        .map_or_else(|| "0".to_string(), |(_, g)| g.to_string())
                }),
                _ => None,
            };
            let closed_form = match closed {
                Some(i) => {
                    let d = &maps.from_lower.apply(&pair.borel)? - &maps.from_upper.apply(&pair.geom)?;
                    let lhs = &et.pow(i as i64)? * &d;
                    Some((&lhs - &two_e).is_zero())
                }
                None => None,
            };
            compatibility.push(Compatibility {
                name: pair.name.clone(),
                verdict: verdict.label(),
                multiplier,
                closed_form,
            });
            Ok(())
        };
        check(&e, None)?;
        for (i, x) in q.iter().enumerate() {
            check(x, Some(i + 1))?;
        }
        for x in b.values() {
            check(x, None)?;
        }

        Ok(StricklandTable {
            params,
            iso,
            borel,
            geom,
            tate,
            p,
            e,
            q,
            b,
            rel1,
            rel2,
            eq1_borel,
            eq1_geom_zero,
            compatibility,
        })
    }

    pub fn q(&self, i: usize) -> Option<&PullbackPair> {
        i.checked_sub(1).and_then(|k| self.q.get(k))
    }

    /// Every relation and compatibility check passed.
    pub fn all_passed(&self) -> bool {
        self.rel1.iter().chain(&self.rel2).all(|r| r.borel && r.geom)
            && self.eq1_borel.is_some()
            && self.eq1_geom_zero
            && self
                .compatibility
                .iter()
                .all(|c| c.verdict == "Compatible" && c.closed_form.unwrap_or(true))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPoints {
    /// Underlying: `e -> 0` on the Borel side.
    Trivial,
    /// The geometric side.
    Full,
}

/// Geometric fixed points of a pair; the trivial subgroup lands in `BP_*`.
pub fn geometric_fixed_points(pair: &PullbackPair, which: FixedPoints) -> Result<GradedElement> {
    match which {
        FixedPoints::Full => Ok(pair.geom.clone()),
        FixedPoints::Trivial => {
            let src = pair.borel.ring();
            let i = src.require_gen("e")?;
            let mut b = RingSpec::builder(src.prime());
            for (k, g) in src.generators().iter().enumerate() {
                if k != i {
                    b = b.generator(g.clone());
                }
            }
            let bp = b.build()?;
            let map = RingMap::by_name(&src.without_relations(), &bp, &[("e", GradedElement::zero(&bp))])?;
            map.apply(&pair.borel.rehome(&src.without_relations())?)
        }
    }
}

#[derive(Debug, Clone)]
pub struct VnmReport {
    pub n: u32,
    pub underlying: GradedElement,
    pub underlying_unit: Option<GradedElement>,
    pub geometric: GradedElement,
    pub geometric_unit: Option<GradedElement>,
}

impl VnmReport {
    pub fn passed(&self) -> bool {
        self.underlying_unit.is_some() && self.geometric_unit.is_some()
    }
}

/// `q_{2^n}` has underlying fixed points a `v_n`-generator and geometric fixed
/// points a `v_{n-1}`-generator.
pub fn vnm_check(n: u32, order: i32, v: usize) -> Result<VnmReport> {
    if n == 0 || v < n as usize {
        return Err(Error::PreconditionViolated(format!("need 1 <= n <= V, got n = {n}, V = {v}")));
    }
    let i = 1usize << n;
    if order as usize <= i {
        return Err(Error::PrecisionTooLow(format!("order {order} must exceed {i}")));
    }
    let table = StricklandTable::compute(StricklandParams {
        i_max: i,
        j_max: 0,
        order,
        v,
    })?;
    let q = table.q(i).expect("computed");
    let underlying = geometric_fixed_points(q, FixedPoints::Trivial)?;
    let geometric = geometric_fixed_points(q, FixedPoints::Full)?;
    Ok(VnmReport {
        n,
        underlying_unit: vn_unit(&underlying, n)?,
        geometric_unit: vn_unit(&geometric, n - 1)?,
        underlying,
        geometric,
    })
}
