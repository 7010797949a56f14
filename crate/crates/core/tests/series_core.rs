use std::sync::Arc;

use eqchrom::series::*;
use eqchrom::Error;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Coeff {
    Coeff::new(n.into(), d.into())
}

/// `BP_*[v1, v2][[e]]` at p = 2.
fn series_ring(order: i32) -> Arc<RingSpec> {
    RingSpec::builder(2).bp_generators(2).series("e", -2).order(order).build().unwrap()
}

fn laurent_poly() -> Arc<RingSpec> {
    RingSpec::builder(2).bp_generators(2).inverted("e", -2).polynomial("b1", 2).build().unwrap()
}

fn el(r: &Arc<RingSpec>, s: &str) -> GradedElement {
    parse_element(r, s).unwrap()
}

/// Constants with 5 as the prime.
fn rationals() -> Arc<RingSpec> {
    RingSpec::builder(5).build().unwrap()
}

// ---- Lagrange inversion oracle over Q ----

type Poly = Vec<Coeff>;

fn pmul(a: &Poly, b: &Poly, n: usize) -> Poly {
    let mut out = vec![Coeff::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn pinv(a: &Poly, n: usize) -> Poly {
    let mut out = vec![Coeff::zero(); n];
    out[0] = a[0].recip();
    for k in 1..n {
        let mut s = Coeff::zero();
        for i in 1..=k.min(a.len() - 1) {
            s += &a[i] * &out[k - i];
        }
        out[k] = -(&out[0] * s);
    }
    out
}

/// `[x^k] f^{-1} = (1/k) [w^{k-1}] (w / f(w))^k`.
fn lagrange_reverse(f: &Poly, n: usize) -> Poly {
    let shifted: Poly = f[1..].to_vec();
    let h = pinv(&shifted, n);
    let mut out = vec![Coeff::zero(); n];
    let mut pow = vec![Coeff::one()];
    for k in 1..n {
        pow = pmul(&pow, &h, n);
        out[k] = &pow[k - 1] / Coeff::from_integer(k.into());
    }
    out
}

#[test]
fn arithmetic_examples() {
    let r = laurent_poly();
    assert_eq!((&el(&r, "e + v1") * &el(&r, "e")).to_string(), "e^2 + v1*e");
    assert_eq!((&el(&r, "e^-1") * &el(&r, "e")).to_string(), "1");
    assert_eq!(el(&r, "e").pow(-2).unwrap().to_string(), "e^-2");
    assert_eq!(el(&r, "v1").pow(-1), Err(Error::NegativePowerOfNonUnit));
    let s = series_ring(2);
    assert_eq!(el(&s, "2 + e").pow(3).unwrap().to_string(), "8 + 12*e + O(e^2)");
    assert_eq!(el(&r, "b1*e").homogeneous_degree(), Some(0));
    assert_eq!(el(&r, "v1 + e").homogeneous_degree(), None);
}

#[test]
fn ring_construction_errors() {
    assert!(matches!(
        RingSpec::builder(2).polynomial("a", 2).polynomial("a", 4).build(),
        Err(Error::DuplicateGenerator(_))
    ));
    assert!(matches!(RingSpec::builder(2).polynomial("a", 3).build(), Err(Error::OddDegree(_))));
    assert!(RingSpec::builder(4).build().is_err());
}

#[test]
fn compose_and_reverse_examples() {
    let r = rationals();
    let x = PowerSeries1::identity("x", &r, 5);
    assert_eq!(x.reverse().unwrap(), x);
    let f = PowerSeries1::from_rationals("x", &r, &[q(0, 1), q(1, 1), q(1, 1)], 5);
    assert_eq!(f.reverse().unwrap().to_string(), "x - x^2 + 2*x^3 - 5*x^4 + O(x^5)");
    let sq = PowerSeries1::from_rationals("x", &r, &[q(0, 1), q(0, 1), q(1, 1)], 5);
    let shift = PowerSeries1::from_rationals("x", &r, &[q(1, 1), q(1, 1)], 5);
    assert_eq!(sq.compose(&shift), Err(Error::NonzeroConstantTerm));
    // 5 is not a unit at p = 5
    let five = PowerSeries1::from_rationals("x", &r, &[q(0, 1), q(5, 1)], 5);
    assert_eq!(five.reverse(), Err(Error::NonunitLinearTerm));
}

#[test]
fn reduce_mod_in_examples() {
    let r = RingSpec::builder(2).bp_generators(2).series("x", -2).build().unwrap();
    let a = el(&r, "2*x + v1*x^2");
    assert_eq!(a.reduce_mod_in(1).unwrap().to_string(), "v1*x^2");
    assert!(el(&r, "v1 + 4*v2").reduce_mod_in(2).unwrap().is_zero());
    assert_eq!(a.reduce_mod_in(0).unwrap(), a);
    assert!(matches!(a.reduce_mod_in(4), Err(Error::MissingGenerator(_))));
}

#[test]
fn unit_examples() {
    let r = laurent_poly();
    assert!(el(&r, "3*e^-2").is_unit().unwrap());
    assert!(!el(&r, "v1").is_unit().unwrap());
    assert!(!el(&r, "1 + e").is_unit().unwrap());
    let bp = bp_ring(2, 2).unwrap();
    assert!(!el(&bp, "v1").is_unit().unwrap());
    assert!(el(&bp, "-5").is_unit().unwrap());
    let s = series_ring(5);
    assert!(el(&s, "1 + e").is_unit().unwrap());
    assert!(!el(&s, "2 + e").is_unit().unwrap());
    let t = RingSpec::builder(2).laurent("e", -2, 1).order(5).build().unwrap();
    assert!(matches!(el(&t, "e").is_unit(), Err(Error::UnsupportedRingKind(_))));
}

#[test]
fn relation_member_examples() {
    let s = series_ring(6);
    let two = el(&s, "2*e + v1*e^2 + O(e^6)");
    let r = s.with_relations(vec![("[2](e)".into(), two.clone(), RelationStrategy::CertificateOnly)]).unwrap();
    let cfg = MembershipConfig::default();
    let rel = &r.relation_elements()[0];
    match relation_member(rel, &cfg) {
        Membership::Zero(c) => {
            assert_eq!(c.used(), vec![("[2](e)", &GradedElement::one(&r))]);
            assert!(c.verify(rel, &r.relation_elements()));
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(relation_member(&GradedElement::one(&r), &cfg), Membership::Nonzero);
    let multiple = &el(&r, "v2 + e^2") * rel;
    assert!(relation_member(&multiple, &cfg).is_zero());
    assert!(matches!(
        s.with_relations(vec![("bad".into(), two, RelationStrategy::SetToZero)]),
        Err(Error::NonMonomialRelation)
    ));
}

#[test]
fn text_round_trip_examples() {
    let s = series_ring(6);
    for t in ["0", "1", "-1/3*v1^2*e + O(e^6)", "v1*e^2 + 2*e^3", "e + O(e^4)"] {
        let x = el(&s, t);
        assert_eq!(el(&s, &x.to_string()), x, "{t}");
    }
    assert_eq!(el(&s, "v1*e^2 + 2*e^3").to_string(), "v1*e^2 + 2*e^3");
    assert!(parse_element(&s, "w").is_err());
    assert!(parse_element(&s, "e^-1").is_err());
    assert!(parse_element(&s, "v1 +").is_err());
}

// ---- properties ----

fn term() -> impl Strategy<Value = String> {
    (-4i64..=4, prop::sample::select(vec![1i64, 3, 5]), 0u32..=2, 0u32..=1, 0u32..=3).prop_map(|(n, d, a, b, e)| {
        format!("{n}/{d}*v1^{a}*v2^{b}*e^{e}")
    })
}

/// Joins signed terms as `a - b + c`.
fn join_terms(ts: &[String]) -> String {
    let mut out = String::new();
    for t in ts {
        match (out.is_empty(), t.strip_prefix('-')) {
            (true, _) => out.push_str(t),
            (false, Some(rest)) => out.push_str(&format!(" - {rest}")),
            (false, None) => out.push_str(&format!(" + {t}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn element() -> impl Strategy<Value = String> {
    prop::collection::vec(term(), 0..4).prop_map(|ts| join_terms(&ts))
}

fn laurent_term() -> impl Strategy<Value = String> {
    (-4i64..=4, 0u32..=2, -2i32..=2, 0u32..=1).prop_map(|(n, a, e, b)| format!("{n}*v1^{a}*e^{e}*b1^{b}"))
}

fn laurent_element() -> impl Strategy<Value = String> {
    prop::collection::vec(laurent_term(), 1..4).prop_map(|ts| join_terms(&ts))
}

fn rational_series() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-5i64..=5, 1i64..=4), 5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in element(), b in element(), c in element()) {
        let s = series_ring(6);
        let (a, b, c) = (el(&s, &a), el(&s, &b), el(&s, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &GradedElement::one(&s), a.clone());
    }

    #[test]
    fn laurent_axioms_and_inverse(a in laurent_element(), b in laurent_element(), k in -2i32..=2) {
        let r = laurent_poly();
        let (a, b) = (el(&r, &a), el(&r, &b));
        prop_assert_eq!(&a * &b, &b * &a);
        let ek = el(&r, &format!("e^{k}"));
        let back = &(&a * &ek) * &ek.pow(-1).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn display_parse_round_trip(a in element(), b in element()) {
        let s = series_ring(5);
        let x = &el(&s, &a) * &el(&s, &b);
        prop_assert_eq!(el(&s, &x.to_string()), x);
    }

    #[test]
    fn truncation_is_monotone(a in element(), b in element(), lo in 1i32..6) {
        let hi = series_ring(7);
        let low = hi.with_order(lo);
        let big = &el(&hi, &a) * &el(&hi, &b);
        let small = &el(&low, &a) * &el(&low, &b);
        let cut = big.truncate(lo);
        prop_assert_eq!(cut.terms(), small.terms());
        prop_assert!(small.prec().is_none_or(|p| p >= lo));
    }

    #[test]
    fn reduce_mod_in_idempotent(a in element(), n in 0u32..=3) {
        let s = series_ring(6);
        let x = el(&s, &a);
        let once = x.reduce_mod_in(n).unwrap();
        prop_assert_eq!(once.reduce_mod_in(n).unwrap(), once.clone());
        // a ring map: reduction of a product is the product of reductions, reduced
        let y = &x * &el(&s, "1 + 2*v1 + v2*e");
        let lhs = y.reduce_mod_in(n).unwrap();
        let rhs = (&once * &el(&s, "1 + 2*v1 + v2*e").reduce_mod_in(n).unwrap()).reduce_mod_in(n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reverse_matches_lagrange(cs in rational_series()) {
        let r = rationals();
        let mut all: Poly = vec![q(0, 1), q(1, 1)];
        all.extend(cs.iter().map(|&(n, d)| q(n, d)));
        let n = all.len();
        let f = PowerSeries1::from_rationals("x", &r, &all, n);
        let g = f.reverse().unwrap();
        let want = lagrange_reverse(&all, n);
        for k in 0..n {
            prop_assert_eq!(g.coeff(k), &GradedElement::constant(&r, want[k].clone()), "k = {}", k);
        }
        prop_assert_eq!(g.reverse().unwrap(), f.clone());
        prop_assert_eq!(f.compose(&g).unwrap(), PowerSeries1::identity("x", &r, n));
    }
}
