//! The p-local Balmer spectrum of finite genuine A-spectra as a poset of
//! pairs (subgroup, chromatic level), with height and type functions on the
//! subgroup lattice.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{CharacterId, SubgroupId, SubgroupLattice};

/// A value in `{-1} ∪ N ∪ {∞}`; the derived order is the natural one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HeightValue {
    NegOne,
    Finite(u32),
    Infinite,
}

impl HeightValue {
    /// `self + r` where `-1 + r` is the integer `r - 1` and `∞` absorbs.
    pub fn plus(self, r: u32) -> HeightValue {
        match self {
            HeightValue::NegOne if r == 0 => HeightValue::NegOne,
            HeightValue::NegOne => HeightValue::Finite(r - 1),
            HeightValue::Finite(n) => HeightValue::Finite(n + r),
            HeightValue::Infinite => HeightValue::Infinite,
        }
    }

    /// `self - 1` with `∞ - 1 = ∞`; `0 - 1 = -1`. Returns `None` below `-1`.
    pub fn minus_one(self) -> Option<HeightValue> {
        match self {
            HeightValue::NegOne => None,
            HeightValue::Finite(0) => Some(HeightValue::NegOne),
            HeightValue::Finite(n) => Some(HeightValue::Finite(n - 1)),
            HeightValue::Infinite => Some(HeightValue::Infinite),
        }
    }

    pub fn is_finite(self) -> bool {
        !matches!(self, HeightValue::Infinite)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            HeightValue::Finite(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightValue::NegOne => write!(f, "-1"),
            HeightValue::Finite(n) => write!(f, "{n}"),
            HeightValue::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for HeightValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-1" => Ok(HeightValue::NegOne),
            "inf" | "∞" => Ok(HeightValue::Infinite),
            t => t
                .parse()
                .map(HeightValue::Finite)
                .map_err(|_| Error::Parse(format!("bad height value `{s}`"))),
        }
    }
}

/// A chromatic level `n ∈ N ∪ {∞}` of a Balmer point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(n) => write!(f, "{n}"),
            Level::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BalmerPoint {
    pub subgroup: SubgroupId,
    pub level: Level,
}

impl BalmerPoint {
    pub fn new(subgroup: SubgroupId, level: Level) -> Self {
        BalmerPoint { subgroup, level }
    }

    pub fn finite(subgroup: SubgroupId, n: u32) -> Self {
        Self::new(subgroup, Level::Finite(n))
    }

    pub fn infinite(subgroup: SubgroupId) -> Self {
        Self::new(subgroup, Level::Infinite)
    }
}

impl fmt::Display for BalmerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B:{},n:{}", self.subgroup, self.level)
    }
}

/// `P <= Q` iff `B_P <= B_Q` and `n_P >= n_Q + rk(B_Q/B_P)`, with `∞` on top.
pub fn point_leq(lat: &SubgroupLattice, p: BalmerPoint, q: BalmerPoint) -> bool {
    if !lat.leq(p.subgroup, q.subgroup) {
        return false;
    }
    match (p.level, q.level) {
        (Level::Infinite, _) => true,
        (Level::Finite(_), Level::Infinite) => false,
        (Level::Finite(n), Level::Finite(m)) => {
            n >= m + lat.rank_between(p.subgroup, q.subgroup)
        }
    }
}

/// A total function on subgroups with values in `{-1} ∪ N ∪ {∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeightFunction(Vec<HeightValue>);

impl HeightFunction {
    pub fn new(lat: &SubgroupLattice, values: Vec<HeightValue>) -> Result<Self> {
        if values.len() != lat.len() {
            return Err(Error::NotTotal {
                expected: lat.len(),
                got: values.len(),
            });
        }
        Ok(HeightFunction(values))
    }

    pub fn constant(lat: &SubgroupLattice, v: HeightValue) -> Self {
        HeightFunction(vec![v; lat.len()])
    }

    pub fn values(&self) -> &[HeightValue] {
        &self.0
    }

    pub fn get(&self, b: SubgroupId) -> HeightValue {
        self.0[b.0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain_nonnegative(&self) -> BTreeSet<SubgroupId> {
        self.select(|v| v >= HeightValue::Finite(0))
    }

    pub fn domain_finite(&self) -> BTreeSet<SubgroupId> {
        self.select(HeightValue::is_finite)
    }

    pub fn domain_infinite(&self) -> BTreeSet<SubgroupId> {
        self.select(|v| !v.is_finite())
    }

    fn select(&self, f: impl Fn(HeightValue) -> bool) -> BTreeSet<SubgroupId> {
        (0..self.0.len())
            .filter(|&i| f(self.0[i]))
            .map(SubgroupId)
            .collect()
    }

    /// Agrees with `self` on `s` and is `-1` elsewhere.
    pub fn restrict_to(&self, s: &BTreeSet<SubgroupId>) -> Result<HeightFunction> {
        let dom = self.domain_nonnegative();
        if let Some(b) = s.iter().find(|b| !dom.contains(b)) {
            return Err(Error::PreconditionViolated(format!(
                "{b} is not in the non-negative domain"
            )));
        }
        Ok(HeightFunction(
            (0..self.0.len())
                .map(|i| {
                    if s.contains(&SubgroupId(i)) {
                        self.0[i]
                    } else {
                        HeightValue::NegOne
                    }
                })
                .collect(),
        ))
    }

    /// The type function `self + 1` (so `-1` becomes `0`).
    pub fn to_type(&self) -> TypeFunction {
        TypeFunction(HeightFunction(self.0.iter().map(|v| v.plus(1)).collect()))
    }
}

/// A height function that never takes the value `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeFunction(HeightFunction);

impl TypeFunction {
    pub fn new(lat: &SubgroupLattice, values: Vec<HeightValue>) -> Result<Self> {
        HeightFunction::new(lat, values)?.try_into()
    }

    pub fn as_height(&self) -> &HeightFunction {
        &self.0
    }

    pub fn get(&self, b: SubgroupId) -> HeightValue {
        self.0.get(b)
    }

    pub fn values(&self) -> &[HeightValue] {
        self.0.values()
    }

    /// The height function `self - 1`, with `∞ - 1 = ∞`.
    pub fn to_height(&self) -> HeightFunction {
        HeightFunction(
            self.0
                 .0
                .iter()
                .map(|v| v.minus_one().expect("type functions are nonnegative"))
                .collect(),
        )
    }
}

impl TryFrom<HeightFunction> for TypeFunction {
    type Error = Error;
    fn try_from(h: HeightFunction) -> Result<Self> {
        match h.0.iter().position(|&v| v == HeightValue::NegOne) {
            Some(i) => Err(Error::NegativeType(i)),
            None => Ok(TypeFunction(h)),
        }
    }
}

/// First pair `B < C` violating `n(B) <= n(C) + rk(C/B)`.
pub fn admissibility_witness(
    lat: &SubgroupLattice,
    f: &HeightFunction,
) -> Option<(SubgroupId, SubgroupId)> {
    for b in lat.ids() {
        for c in lat.ids() {
            if lat.lt(b, c) && f.get(b) > f.get(c).plus(lat.rank_between(b, c)) {
                return Some((b, c));
            }
        }
    }
    None
}

pub fn is_admissible(lat: &SubgroupLattice, f: &HeightFunction) -> bool {
    admissibility_witness(lat, f).is_none()
}

fn require_admissible(lat: &SubgroupLattice, f: &HeightFunction) -> Result<()> {
    match admissibility_witness(lat, f) {
        Some((b, c)) => Err(Error::NotAdmissible(b.0, c.0)),
        None => Ok(()),
    }
}

/// A set of Balmer points closed under specialization, stored per subgroup:
/// `(B, i)` is present iff `i >= thresholds[B]`, and `(B, ∞)` iff `infinity[B]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedSet {
    pub thresholds: Vec<Option<u32>>,
    pub infinity: Vec<bool>,
}

impl ClosedSet {
    pub fn empty(lat: &SubgroupLattice) -> Self {
        ClosedSet {
            thresholds: vec![None; lat.len()],
            infinity: vec![false; lat.len()],
        }
    }

    /// Thresholds only, with `(B, ∞)` present whenever some `(B, i)` is.
    pub fn from_thresholds(thresholds: Vec<Option<u32>>) -> Self {
        let infinity = thresholds.iter().map(Option::is_some).collect();
        ClosedSet {
            thresholds,
            infinity,
        }
    }

    pub fn contains(&self, p: BalmerPoint) -> bool {
        match p.level {
            Level::Infinite => self.infinity[p.subgroup.0],
            Level::Finite(i) => self.thresholds[p.subgroup.0].is_some_and(|t| i >= t),
        }
    }

    pub fn union(&self, other: &ClosedSet) -> ClosedSet {
        ClosedSet {
            thresholds: self
                .thresholds
                .iter()
                .zip(&other.thresholds)
                .map(|(a, b)| match (a, b) {
                    (Some(x), Some(y)) => Some(*x.min(y)),
                    (x, None) => *x,
                    (None, y) => *y,
                })
                .collect(),
            infinity: self
                .infinity
                .iter()
                .zip(&other.infinity)
                .map(|(a, b)| *a || *b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &ClosedSet) -> ClosedSet {
        ClosedSet {
            thresholds: self
                .thresholds
                .iter()
                .zip(&other.thresholds)
                .map(|(a, b)| match (a, b) {
                    (Some(x), Some(y)) => Some(*x.max(y)),
                    _ => None,
                })
                .collect(),
            infinity: self
                .infinity
                .iter()
                .zip(&other.infinity)
                .map(|(a, b)| *a && *b)
                .collect(),
        }
    }

    /// A pair `(P, Q)` with `Q` in the set, `P <= Q`, `P` missing; `None` if closed.
    pub fn closure_witness(&self, lat: &SubgroupLattice) -> Option<(BalmerPoint, BalmerPoint)> {
        for c in lat.ids() {
            let q = match (self.thresholds[c.0], self.infinity[c.0]) {
                (Some(t), _) => BalmerPoint::finite(c, t),
                (None, true) => BalmerPoint::infinite(c),
                (None, false) => continue,
            };
            for b in lat.ids().filter(|&b| lat.leq(b, c)) {
                let inf = BalmerPoint::infinite(b);
                if !self.contains(inf) {
                    return Some((inf, q));
                }
                if let Some(t) = self.thresholds[c.0] {
                    let p = BalmerPoint::finite(b, t + lat.rank_between(b, c));
                    if !self.contains(p) {
                        return Some((p, q));
                    }
                }
            }
        }
        None
    }

    pub fn is_closed(&self, lat: &SubgroupLattice) -> bool {
        self.closure_witness(lat).is_none()
    }
}

/// `V_n = {(B, i) : n(B) < ∞, i >= n(B)} ∪ {(B, ∞) : n(B) < ∞}`.
pub fn closed_set_of(t: &TypeFunction) -> ClosedSet {
    ClosedSet::from_thresholds(t.values().iter().map(|v| v.finite()).collect())
}

/// Membership in the open set `U_m = {(B, i) : i <= m(B)}` of a height function.
pub fn open_set_contains(m: &HeightFunction, p: BalmerPoint) -> bool {
    match (p.level, m.get(p.subgroup)) {
        (_, HeightValue::Infinite) => true,
        (Level::Infinite, _) => false,
        (_, HeightValue::NegOne) => false,
        (Level::Finite(i), HeightValue::Finite(n)) => i <= n,
    }
}

/// A downward-closed set of subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Family(BTreeSet<SubgroupId>);

#[derive(Debug, Clone)]
pub enum FamilySelector {
    /// Subgroups of `C`.
    SubgroupsOf(SubgroupId),
    /// Subgroups not containing `C`.
    NotContaining(SubgroupId),
    /// Subgroups on which the character is trivial.
    Euler(CharacterId),
    Union(Box<FamilySelector>, Box<FamilySelector>),
    Intersection(Box<FamilySelector>, Box<FamilySelector>),
    Explicit(BTreeSet<SubgroupId>),
}

impl Family {
    pub fn make(lat: &SubgroupLattice, sel: &FamilySelector) -> Result<Family> {
        let pick = |f: &dyn Fn(SubgroupId) -> bool| lat.ids().filter(|&b| f(b)).collect();
        Ok(match sel {
            FamilySelector::SubgroupsOf(c) => {
                let c = lat.check_id(*c)?;
                Family(pick(&|b| lat.leq(b, c)))
            }
            FamilySelector::NotContaining(c) => {
                let c = lat.check_id(*c)?;
                Family(pick(&|b| !lat.leq(c, b)))
            }
            FamilySelector::Euler(a) => Family(pick(&|b| lat.is_trivial_on(*a, b))),
            FamilySelector::Union(x, y) => {
                let (x, y) = (Family::make(lat, x)?, Family::make(lat, y)?);
                Family(x.0.union(&y.0).copied().collect())
            }
            FamilySelector::Intersection(x, y) => {
                let (x, y) = (Family::make(lat, x)?, Family::make(lat, y)?);
                Family(x.0.intersection(&y.0).copied().collect())
            }
            FamilySelector::Explicit(set) => {
                for &b in set {
                    lat.check_id(b)?;
                    if let Some(c) = lat.ids().find(|&c| lat.leq(c, b) && !set.contains(&c)) {
                        return Err(Error::NotDownwardClosed {
                            member: b.0,
                            missing: c.0,
                        });
                    }
                }
                Family(set.clone())
            }
        })
    }

    pub fn members(&self) -> &BTreeSet<SubgroupId> {
        &self.0
    }

    pub fn contains(&self, b: SubgroupId) -> bool {
        self.0.contains(&b)
    }

    /// The type function that is `0` on the family and `∞` off it.
    pub fn type_function(&self, lat: &SubgroupLattice) -> TypeFunction {
        let vals = lat
            .ids()
            .map(|b| {
                if self.contains(b) {
                    HeightValue::Finite(0)
                } else {
                    HeightValue::Infinite
                }
            })
            .collect();
        TypeFunction::new(lat, vals).expect("total and nonnegative")
    }

    /// All points over subgroups in the family.
    pub fn closed_set(&self, lat: &SubgroupLattice) -> ClosedSet {
        closed_set_of(&self.type_function(lat))
    }
}

/// Every downward-closed set of subgroups, in lexicographic order of members.
pub fn all_families(lat: &SubgroupLattice) -> Vec<Family> {
    let n = lat.len();
    assert!(n <= 20, "too many subgroups to enumerate families");
    (0u32..1 << n)
        .filter_map(|mask| {
            let set: BTreeSet<SubgroupId> =
                (0..n).filter(|i| mask >> i & 1 == 1).map(SubgroupId).collect();
            Family::make(lat, &FamilySelector::Explicit(set)).ok()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    /// `B ↦ max(n - rk B, -1)`.
    Height(u32),
    Constant(u32),
    /// `-1` where the character is trivial, `∞` elsewhere.
    Euler(CharacterId),
}

pub fn standard_function(lat: &SubgroupLattice, kind: StandardKind) -> HeightFunction {
    let vals = lat
        .ids()
        .map(|b| match kind {
            StandardKind::Height(n) => {
                let r = lat.p_rank(b, None).expect("no upper subgroup");
                if n >= r {
                    HeightValue::Finite(n - r)
                } else {
                    HeightValue::NegOne
                }
            }
            StandardKind::Constant(n) => HeightValue::Finite(n),
            StandardKind::Euler(a) => {
                if lat.is_trivial_on(a, b) {
                    HeightValue::NegOne
                } else {
                    HeightValue::Infinite
                }
            }
        })
        .collect();
    HeightFunction(vals)
}

/// The closed height stratum `{(B, m) : m >= n - rk B}`.
pub fn height_stratum(lat: &SubgroupLattice, n: u32) -> ClosedSet {
    ClosedSet::from_thresholds(
        lat.ids()
            .map(|b| Some(n.saturating_sub(lat.p_rank(b, None).expect("no upper subgroup"))))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    Allowed,
    Obstructed(SubgroupId, SubgroupId),
}

/// Whether `t + χ_S` stays admissible.
pub fn obstruction_check(
    lat: &SubgroupLattice,
    t: &TypeFunction,
    s: &BTreeSet<SubgroupId>,
) -> Result<Obstruction> {
    require_admissible(lat, t.as_height())?;
    for &b in s {
        lat.check_id(b)?;
        if !t.get(b).is_finite() {
            return Err(Error::SNotInFiniteDomain(b.0));
        }
    }
    let bumped = HeightFunction(
        lat.ids()
            .map(|b| t.get(b).plus(u32::from(s.contains(&b))))
            .collect(),
    );
    Ok(match admissibility_witness(lat, &bumped) {
        Some((b, c)) => Obstruction::Obstructed(b, c),
        None => Obstruction::Allowed,
    })
}

/// `{(B, m) : n1(B) < m <= n2(B) < ∞}`.
pub fn fracture_set(
    lat: &SubgroupLattice,
    n1: &HeightFunction,
    n2: &HeightFunction,
) -> Result<Vec<(SubgroupId, u32)>> {
    if let Some(b) = lat.ids().find(|&b| n1.get(b) > n2.get(b)) {
        return Err(Error::PreconditionViolated(format!(
            "first function exceeds second at {b}"
        )));
    }
    if let Some((b, c)) = admissibility_witness(lat, n1) {
        return Err(Error::PreconditionViolated(format!(
            "first function is not admissible at ({b}, {c})"
        )));
    }
    if n1.domain_infinite() != n2.domain_infinite() {
        return Err(Error::PreconditionViolated(
            "infinite domains differ".into(),
        ));
    }
    let mut out = Vec::new();
    for b in lat.ids() {
        if let HeightValue::Finite(hi) = n2.get(b) {
            let lo = match n1.get(b) {
                HeightValue::NegOne => 0,
                HeightValue::Finite(x) => x + 1,
                HeightValue::Infinite => unreachable!("n1 <= n2 < ∞"),
            };
            out.extend((lo..=hi).map(|m| (b, m)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EphiBehavior {
    Identity,
    Localize(u32),
    Zero,
}

pub fn ephi_behavior(
    lat: &SubgroupLattice,
    n: &HeightFunction,
    c: SubgroupId,
) -> Result<EphiBehavior> {
    require_admissible(lat, n)?;
    lat.check_id(c)?;
    Ok(match n.get(c) {
        HeightValue::Infinite => EphiBehavior::Identity,
        HeightValue::Finite(m) => EphiBehavior::Localize(m),
        HeightValue::NegOne => EphiBehavior::Zero,
    })
}

pub const MAX_ENUMERATION_BOUND: u32 = 8;
pub const MAX_ENUMERATION_SUBGROUPS: usize = 12;

/// All admissible type functions with values in `{0..=bound, ∞}`.
pub fn enumerate_admissible(lat: &SubgroupLattice, bound: u32) -> Result<Vec<TypeFunction>> {
    if bound > MAX_ENUMERATION_BOUND || lat.len() > MAX_ENUMERATION_SUBGROUPS {
        return Err(Error::TooLarge(format!(
            "{} subgroups with values up to {bound}",
            lat.len()
        )));
    }
    let n = lat.len();
    let choices: Vec<HeightValue> = (0..=bound)
        .map(HeightValue::Finite)
        .chain([HeightValue::Infinite])
        .collect();
    // Larger subgroups have larger ids, so filling from the top lets each
    // new value be checked against everything above it.
    let uppers: Vec<Vec<(usize, u32)>> = (0..n)
        .map(|b| {
            (b + 1..n)
                .filter(|&c| lat.lt(SubgroupId(b), SubgroupId(c)))
                .map(|c| (c, lat.rank_between(SubgroupId(b), SubgroupId(c))))
                .collect()
        })
        .collect();
    let mut vals = vec![HeightValue::Infinite; n];
    let mut out = Vec::new();

    fn go(
        i: usize,
        vals: &mut Vec<HeightValue>,
        choices: &[HeightValue],
        uppers: &[Vec<(usize, u32)>],
        out: &mut Vec<TypeFunction>,
    ) {
        if i == 0 {
            out.push(TypeFunction(HeightFunction(vals.clone())));
            return;
        }
        let b = i - 1;
        for &v in choices {
            if uppers[b].iter().all(|&(c, r)| v <= vals[c].plus(r)) {
                vals[b] = v;
                go(b, vals, choices, uppers, out);
            }
        }
    }
    go(n, &mut vals, &choices, &uppers, &mut out);
    out.sort();
    Ok(out)
}

/// DOT rendering of the points with finite level `<= n_max` plus the `∞` points,
/// edges along covers of the restricted order, points of `shade` filled.
pub fn poset_dot(lat: &SubgroupLattice, n_max: u32, shade: Option<&ClosedSet>) -> String {
    let pts = truncated_points(lat, n_max);
    let mut out = String::from("digraph balmer {\n  rankdir=BT;\n");
    for p in &pts {
        let fill = if shade.is_some_and(|s| s.contains(*p)) {
            " [style=filled, fillcolor=lightgray]"
        } else {
            ""
        };
        out.push_str(&format!("  \"{p}\"{fill};\n"));
    }
    for (p, q) in poset_covers(lat, &pts) {
        out.push_str(&format!("  \"{p}\" -> \"{q}\";\n"));
    }
    out.push_str("}\n");
    out
}

pub fn truncated_points(lat: &SubgroupLattice, n_max: u32) -> Vec<BalmerPoint> {
    let mut pts = Vec::new();
    for b in lat.ids() {
        pts.extend((0..=n_max).map(|n| BalmerPoint::finite(b, n)));
        pts.push(BalmerPoint::infinite(b));
    }
    pts
}

/// Covering pairs `P < Q` of `point_leq` restricted to `pts`.
pub fn poset_covers(lat: &SubgroupLattice, pts: &[BalmerPoint]) -> Vec<(BalmerPoint, BalmerPoint)> {
    let lt = |a: BalmerPoint, b: BalmerPoint| a != b && point_leq(lat, a, b);
    let mut out = Vec::new();
    for &p in pts {
        for &q in pts {
            if lt(p, q) && !pts.iter().any(|&r| lt(p, r) && lt(r, q)) {
                out.push((p, q));
            }
        }
    }
    out.sort_by(|a, b| cmp_pair(a, b));
    out
}

fn cmp_pair(a: &(BalmerPoint, BalmerPoint), b: &(BalmerPoint, BalmerPoint)) -> Ordering {
    a.0.cmp(&b.0).then(a.1.cmp(&b.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PGroupSpec;
    use HeightValue::*;

    fn lat(s: &str) -> SubgroupLattice {
        SubgroupLattice::build(&s.parse::<PGroupSpec>().unwrap()).unwrap()
    }

    fn hf(l: &SubgroupLattice, v: &[HeightValue]) -> HeightFunction {
        HeightFunction::new(l, v.to_vec()).unwrap()
    }

    fn tf(l: &SubgroupLattice, v: &[HeightValue]) -> TypeFunction {
        TypeFunction::new(l, v.to_vec()).unwrap()
    }

    const E: SubgroupId = SubgroupId(0);
    const C: SubgroupId = SubgroupId(1);

    #[test]
    fn value_order_and_arith() {
        assert!(NegOne < Finite(0) && Finite(7) < Infinite);
        assert_eq!(NegOne.plus(1), Finite(0));
        assert_eq!(NegOne.plus(0), NegOne);
        assert_eq!(Infinite.plus(3), Infinite);
        assert_eq!(Infinite.minus_one(), Some(Infinite));
        assert_eq!("inf".parse::<HeightValue>().unwrap(), Infinite);
    }

    #[test]
    fn point_order_c2() {
        let l = lat("2:[1]");
        assert!(point_leq(&l, BalmerPoint::finite(E, 3), BalmerPoint::finite(C, 2)));
        assert!(!point_leq(&l, BalmerPoint::finite(E, 2), BalmerPoint::finite(C, 2)));
        for n in 0..5 {
            assert!(point_leq(&l, BalmerPoint::infinite(C), BalmerPoint::finite(C, n)));
        }
    }

    #[test]
    fn admissibility_examples() {
        let l = lat("2:[1]");
        assert!(is_admissible(&l, &hf(&l, &[Finite(2), Finite(1)])));
        assert_eq!(
            admissibility_witness(&l, &hf(&l, &[Finite(3), Finite(1)])),
            Some((E, C))
        );
        // A cyclic quotient of order p^2 has rank 1, not 2.
        let c4 = lat("2:[2]");
        assert!(!is_admissible(&c4, &hf(&c4, &[Finite(2), Finite(2), Finite(0)])));
    }

    #[test]
    fn closed_sets() {
        let l = lat("2:[1]");
        let v = closed_set_of(&tf(&l, &[Finite(1), Finite(0)]));
        assert_eq!(v.thresholds, vec![Some(1), Some(0)]);
        assert!(v.is_closed(&l));
        let empty = closed_set_of(&tf(&l, &[Infinite, Infinite]));
        assert_eq!(empty, ClosedSet::empty(&l));
        assert!(empty.is_closed(&l));
        let bad = ClosedSet::from_thresholds(vec![Some(3), Some(1)]);
        assert_eq!(
            bad.closure_witness(&l),
            Some((BalmerPoint::finite(E, 2), BalmerPoint::finite(C, 1)))
        );
        let ok = ClosedSet::from_thresholds(vec![Some(0), Some(2)]);
        assert!(ok.is_closed(&l));
    }

    #[test]
    fn families() {
        let k = lat("2:[1,1]");
        let a = SubgroupId(1);
        let sub = Family::make(&k, &FamilySelector::SubgroupsOf(a)).unwrap();
        assert_eq!(sub.members().iter().copied().collect::<Vec<_>>(), vec![E, a]);
        let alpha = k
            .character_ids()
            .find(|&c| k.kernel(c) == a)
            .unwrap();
        assert_eq!(Family::make(&k, &FamilySelector::Euler(alpha)).unwrap(), sub);
        assert!(Family::make(&k, &FamilySelector::NotContaining(E))
            .unwrap()
            .members()
            .is_empty());
        let bad = FamilySelector::Explicit([a].into());
        assert_eq!(
            Family::make(&k, &bad),
            Err(Error::NotDownwardClosed { member: 1, missing: 0 })
        );
        assert_eq!(all_families(&k).len(), 10);
    }

    #[test]
    fn standard() {
        let k = lat("2:[1,1]");
        let h2 = standard_function(&k, StandardKind::Height(2));
        assert_eq!(
            h2.values(),
            &[Finite(2), Finite(1), Finite(1), Finite(1), Finite(0)]
        );
        let c2 = lat("2:[1]");
        let sigma = c2.character_from_coefficients(&[1]).unwrap();
        assert_eq!(
            standard_function(&c2, StandardKind::Euler(sigma)).values(),
            &[NegOne, Infinite]
        );
        assert_eq!(
            standard_function(&c2, StandardKind::Constant(0)).values(),
            &[Finite(0), Finite(0)]
        );
    }

    #[test]
    fn obstruction_examples() {
        let l = lat("2:[1]");
        let t = tf(&l, &[Finite(1), Finite(0)]);
        assert_eq!(
            obstruction_check(&l, &t, &[E].into()).unwrap(),
            Obstruction::Obstructed(E, C)
        );
        assert_eq!(obstruction_check(&l, &t, &[E, C].into()).unwrap(), Obstruction::Allowed);
        assert_eq!(obstruction_check(&l, &t, &[C].into()).unwrap(), Obstruction::Allowed);
        assert_eq!(obstruction_check(&l, &t, &BTreeSet::new()).unwrap(), Obstruction::Allowed);
        let t = tf(&l, &[Finite(1), Infinite]);
        assert_eq!(
            obstruction_check(&l, &t, &[C].into()),
            Err(Error::SNotInFiniteDomain(1))
        );
    }

    #[test]
    fn fracture_examples() {
        let l = lat("2:[1]");
        let n1 = hf(&l, &[Finite(1), Finite(0)]);
        let n2 = hf(&l, &[Finite(2), Finite(1)]);
        assert_eq!(fracture_set(&l, &n1, &n2).unwrap(), vec![(E, 2), (C, 1)]);
        assert!(fracture_set(&l, &n1, &n1).unwrap().is_empty());
        let n1 = hf(&l, &[Finite(0), Infinite]);
        let n2 = hf(&l, &[Finite(2), Infinite]);
        assert_eq!(fracture_set(&l, &n1, &n2).unwrap(), vec![(E, 1), (E, 2)]);
        // (∞, 0) is not admissible.
        let n1 = hf(&l, &[Infinite, Finite(0)]);
        let n2 = hf(&l, &[Infinite, Finite(2)]);
        assert!(matches!(
            fracture_set(&l, &n1, &n2),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn ephi() {
        let l = lat("2:[1]");
        let f = |u, v| ephi_behavior(&l, &hf(&l, &[u, v]), C).unwrap();
        assert_eq!(f(Infinite, Infinite), EphiBehavior::Identity);
        assert_eq!(f(Finite(4), Finite(3)), EphiBehavior::Localize(3));
        assert_eq!(f(Finite(0), NegOne), EphiBehavior::Zero);
        assert!(matches!(
            ephi_behavior(&l, &hf(&l, &[Finite(3), Finite(1)]), C),
            Err(Error::NotAdmissible(0, 1))
        ));
    }

    #[test]
    fn enumeration_c2() {
        let l = lat("2:[1]");
        let all = enumerate_admissible(&l, 1).unwrap();
        assert_eq!(all.len(), 7);
        assert!(!all.contains(&tf(&l, &[Infinite, Finite(0)])));
        assert!(all.contains(&tf(&l, &[Infinite, Infinite])));
        assert!(all.contains(&tf(&l, &[Finite(1), Finite(0)])));
        assert!(all.contains(&tf(&l, &[Finite(0), Infinite])));
        assert_eq!(enumerate_admissible(&lat("2:[]"), 3).unwrap().len(), 5);
        assert!(matches!(enumerate_admissible(&l, 9), Err(Error::TooLarge(_))));
    }

    #[test]
    fn poset_dot_c2() {
        let l = lat("2:[1]");
        let dot = poset_dot(&l, 3, None);
        let nodes = dot.lines().filter(|s| s.contains("B:") && !s.contains("->")).count();
        assert_eq!(nodes, 10);
    }

    #[test]
    fn restriction_domain() {
        let l = lat("2:[1]");
        let n = hf(&l, &[Finite(2), Finite(1)]);
        let r = n.restrict_to(&[C].into()).unwrap();
        assert_eq!(r.values(), &[NegOne, Finite(1)]);
        assert_eq!(r.domain_nonnegative(), [C].into());
    }
}
