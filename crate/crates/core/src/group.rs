//! Finite abelian p-groups, their characters and subgroup lattices.
//!
//! Elements of `Z/p^k1 x ... x Z/p^kr` are numbered in mixed radix with the
//! first coordinate most significant, so numeric order of indices is the
//! lexicographic order of residue vectors. Characters use the same encoding:
//! the coefficient vector `c` pairs with `x` to `sum c_i x_i p^(K - k_i)`
//! modulo `p^K`, where `K` is the largest exponent.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default bound on `|A|` is `p^8`.
pub const DEFAULT_ORDER_EXPONENT_BOUND: u32 = 8;

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `Z/p^k1 x ... x Z/p^kr` with `k1 >= ... >= kr >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PGroupSpec {
    p: u64,
    exponents: Vec<u32>,
}

impl PGroupSpec {
    pub fn new(p: u64, exponents: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidGroupSpec(format!("{p} is not prime")));
        }
        if exponents.iter().any(|&k| k == 0) {
            return Err(Error::InvalidGroupSpec("exponents must be positive".into()));
        }
        if exponents.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidGroupSpec(
                "exponents must be nonincreasing".into(),
            ));
        }
        Ok(PGroupSpec { p, exponents })
    }

    pub fn cyclic(p: u64, k: u32) -> Result<Self> {
        Self::new(p, vec![k])
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, vec![])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// `log_p |A|`.
    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.log_order())
    }
}

impl fmt::Display for PGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.exponents.iter().map(|k| k.to_string()).collect();
        write!(f, "{}:[{}]", self.p, ks.join(","))
    }
}

impl FromStr for PGroupSpec {
    type Err = Error;

    /// Parses `p:[k1,k2,...]`, e.g. `2:[2,1]` or `3:[]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGroupSpec(format!("expected p:[k1,...], got `{s}`"));
        let (p, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let inner = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let exponents = if inner.trim().is_empty() {
            vec![]
        } else {
            inner
                .split(',')
                .map(|k| k.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        PGroupSpec::new(p, exponents)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubgroupId(pub usize);

impl fmt::Display for SubgroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.0)
    }
}

impl FromStr for SubgroupId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.strip_prefix('S')
            .and_then(|n| n.parse().ok())
            .map(SubgroupId)
            .ok_or_else(|| Error::UnknownSubgroup(s.to_string()))
    }
}

/// A character of `A`, numbered like elements by its coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharacterId(pub usize);

/// Arithmetic in the ambient group, shared by elements and characters.
#[derive(Debug, Clone)]
struct Arith {
    p: u64,
    moduli: Vec<u64>,
    /// `p^(K - k_i)`, scaling coordinate `i` into `Z/p^K`.
    scale: Vec<u64>,
    top: u64,
    size: usize,
}

impl Arith {
    fn new(spec: &PGroupSpec) -> Self {
        let kmax = spec.exponents.first().copied().unwrap_or(0);
        let moduli: Vec<u64> = spec.exponents.iter().map(|&k| spec.p.pow(k)).collect();
        let scale = spec
            .exponents
            .iter()
            .map(|&k| spec.p.pow(kmax - k))
            .collect();
        let size = moduli.iter().product::<u64>() as usize;
        Arith {
            p: spec.p,
            moduli,
            scale,
            top: spec.p.pow(kmax),
            size,
        }
    }

    fn decode(&self, mut idx: usize) -> Vec<u64> {
        let mut v = vec![0; self.moduli.len()];
        for i in (0..self.moduli.len()).rev() {
            let m = self.moduli[i] as usize;
            v[i] = (idx % m) as u64;
            idx /= m;
        }
        v
    }

    fn encode(&self, v: &[u64]) -> usize {
        let mut idx = 0usize;
        for (x, m) in v.iter().zip(&self.moduli) {
            idx = idx * (*m as usize) + (*x % *m) as usize;
        }
        idx
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (va, vb) = (self.decode(a), self.decode(b));
        let s: Vec<u64> = va
            .iter()
            .zip(&vb)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        self.encode(&s)
    }

    fn scale_by(&self, k: u64, a: usize) -> usize {
        let v: Vec<u64> = self
            .decode(a)
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| (x % m) * (k % m) % m)
            .collect();
        self.encode(&v)
    }

    fn neg(&self, a: usize) -> usize {
        let v: Vec<u64> = self
            .decode(a)
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| (m - x) % m)
            .collect();
        self.encode(&v)
    }

    fn order(&self, a: usize) -> u64 {
        let mut o = 1;
        let mut x = a;
        while x != 0 {
            x = self.scale_by(self.p, x);
            o *= self.p;
        }
        o
    }

    /// Pairing of character `c` with element `x`, valued in `Z/p^K`.
    fn pair(&self, c: usize, x: usize) -> u64 {
        let (vc, vx) = (self.decode(c), self.decode(x));
        let mut s = 0u64;
        for i in 0..vc.len() {
            let t = (vc[i] * vx[i]) % self.moduli[i];
            s = (s + t * self.scale[i]) % self.top;
        }
        s
    }
}

/// Greedy basis of a subgroup `set` (sorted element indices): repeatedly take
/// the lex-least element whose order equals its order modulo the current span
/// and is maximal. The result is a direct basis, so the orders multiply to `|set|`.
fn greedy_basis(ar: &Arith, set: &[usize]) -> Vec<(usize, u64)> {
    let mut span: Vec<usize> = vec![0];
    let mut span_set: HashSet<usize> = HashSet::from([0]);
    let mut basis = Vec::new();
    while span.len() < set.len() {
        let mut best: Option<(usize, u64)> = None;
        for &x in set {
            if span_set.contains(&x) {
                continue;
            }
            let mut q = 1;
            let mut y = x;
            while !span_set.contains(&y) {
                y = ar.scale_by(ar.p, y);
                q *= ar.p;
            }
            if ar.order(x) != q {
                continue;
            }
            if best.is_none_or(|(_, bq)| q > bq) {
                best = Some((x, q));
            }
        }
        let (g, q) = best.expect("a p-group quotient always has a lift of equal order");
        let mut next = Vec::with_capacity(span.len() * q as usize);
        let mut mult = 0usize;
        for _ in 0..q {
            for &s in &span {
                next.push(ar.add(s, mult));
            }
            mult = ar.add(mult, g);
        }
        span_set = next.iter().copied().collect();
        span = next;
        basis.push((g, q));
    }
    basis
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub id: SubgroupId,
    /// Sorted element indices.
    pub elements: Vec<usize>,
    pub generators: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterInfo {
    pub id: CharacterId,
    pub kernel: SubgroupId,
    pub order: u64,
}

/// Characters of `A` trivial on `B`, with a direct basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientCharacters {
    pub members: Vec<CharacterId>,
    pub basis: Vec<(CharacterId, u64)>,
}

/// One character of `B` with its lex-least extension to `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionEntry {
    /// Values of the character on the generators of `B`.
    pub restriction: Vec<u64>,
    pub lift: CharacterId,
}

/// The section `B^v -> A^v`, sorted by lift; the first entry is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub subgroup: SubgroupId,
    pub entries: Vec<SectionEntry>,
}

impl Section {
    pub fn lift_of(&self, restriction: &[u64]) -> Option<CharacterId> {
        self.entries
            .iter()
            .find(|e| e.restriction == restriction)
            .map(|e| e.lift)
    }

    /// Lifts of the nontrivial characters of `B`.
    pub fn nontrivial_lifts(&self) -> impl Iterator<Item = CharacterId> + '_ {
        self.entries.iter().skip(1).map(|e| e.lift)
    }
}

#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    spec: PGroupSpec,
    ar: Arith,
    subgroups: Vec<Subgroup>,
    /// `leq[i][j]` iff `S_i <= S_j`.
    leq: Vec<Vec<bool>>,
    covers: Vec<(SubgroupId, SubgroupId)>,
}

impl SubgroupLattice {
    pub fn build(spec: &PGroupSpec) -> Result<Self> {
        let bound = (spec.p as u128).pow(DEFAULT_ORDER_EXPONENT_BOUND);
        Self::build_with_bound(spec, bound)
    }

    pub fn build_with_bound(spec: &PGroupSpec, bound: u128) -> Result<Self> {
        let order = spec.order().unwrap_or(u128::MAX);
        if order > bound {
            return Err(Error::GroupTooLarge { order, bound });
        }
        let ar = Arith::new(spec);

        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::from([vec![0usize]]);
        seen.insert(vec![0]);
        while let Some(s) = queue.pop_front() {
            let members: HashSet<usize> = s.iter().copied().collect();
            for g in 0..ar.size {
                if members.contains(&g) {
                    continue;
                }
                let mut next: HashSet<usize> = members.clone();
                let mut mult = g;
                while !members.contains(&mult) {
                    for &x in &s {
                        next.insert(ar.add(x, mult));
                    }
                    mult = ar.add(mult, g);
                }
                let mut v: Vec<usize> = next.into_iter().collect();
                v.sort_unstable();
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
        let mut sets: Vec<Vec<usize>> = seen.into_iter().collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

        let subgroups: Vec<Subgroup> = sets
            .into_iter()
            .enumerate()
            .map(|(i, elements)| {
                let generators = greedy_basis(&ar, &elements)
                    .into_iter()
                    .map(|(g, _)| g)
                    .collect();
                Subgroup {
                    id: SubgroupId(i),
                    elements,
                    generators,
                }
            })
            .collect();

        let n = subgroups.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (&subgroups[i], &subgroups[j]);
                leq[i][j] = a.order() <= b.order()
                    && b.order() % a.order() == 0
                    && a.generators.iter().all(|&g| b.contains(g));
            }
        }
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j
                    && leq[i][j]
                    && !(0..n).any(|k| k != i && k != j && leq[i][k] && leq[k][j])
                {
                    covers.push((SubgroupId(i), SubgroupId(j)));
                }
            }
        }
        Ok(SubgroupLattice {
            spec: spec.clone(),
            ar,
            subgroups,
            leq,
            covers,
        })
    }

    pub fn spec(&self) -> &PGroupSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn group_order(&self) -> usize {
        self.ar.size
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = SubgroupId> + ExactSizeIterator {
        (0..self.subgroups.len()).map(SubgroupId)
    }

    pub fn subgroup(&self, id: SubgroupId) -> &Subgroup {
        &self.subgroups[id.0]
    }

    pub fn check_id(&self, id: SubgroupId) -> Result<SubgroupId> {
        if id.0 < self.subgroups.len() {
            Ok(id)
        } else {
            Err(Error::UnknownSubgroup(id.to_string()))
        }
    }

    pub fn parse_id(&self, s: &str) -> Result<SubgroupId> {
        let id: SubgroupId = s.parse()?;
        self.check_id(id).map_err(|_| Error::UnknownSubgroup(s.to_string()))
    }

    pub fn bottom(&self) -> SubgroupId {
        SubgroupId(0)
    }

    pub fn top(&self) -> SubgroupId {
        SubgroupId(self.subgroups.len() - 1)
    }

    pub fn leq(&self, a: SubgroupId, b: SubgroupId) -> bool {
        self.leq[a.0][b.0]
    }

    pub fn lt(&self, a: SubgroupId, b: SubgroupId) -> bool {
        a != b && self.leq(a, b)
    }

    /// Covering pairs `(lower, upper)`.
    pub fn covers(&self) -> &[(SubgroupId, SubgroupId)] {
        &self.covers
    }

    pub fn is_cover(&self, a: SubgroupId, b: SubgroupId) -> bool {
        self.covers.contains(&(a, b))
    }

    /// The subgroup with exactly these elements, if any.
    pub fn find(&self, elements: &[usize]) -> Option<SubgroupId> {
        let mut v = elements.to_vec();
        v.sort_unstable();
        v.dedup();
        self.subgroups.iter().find(|s| s.elements == v).map(|s| s.id)
    }

    /// Smallest subgroup containing the given elements.
    pub fn generated_by(&self, gens: &[usize]) -> SubgroupId {
        self.subgroups
            .iter()
            .find(|s| gens.iter().all(|&g| s.contains(g)))
            .map(|s| s.id)
            .expect("the whole group contains everything")
    }

    // ---- elements ----

    pub fn element(&self, idx: usize) -> Vec<u64> {
        self.ar.decode(idx)
    }

    pub fn element_index(&self, residues: &[u64]) -> Result<usize> {
        if residues.len() != self.ar.moduli.len() {
            return Err(Error::InvalidGroupSpec(format!(
                "element needs {} coordinates",
                self.ar.moduli.len()
            )));
        }
        Ok(self.ar.encode(residues))
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.ar.add(a, b)
    }

    pub fn neg(&self, a: usize) -> usize {
        self.ar.neg(a)
    }

    pub fn scale(&self, k: u64, a: usize) -> usize {
        self.ar.scale_by(k, a)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.ar.order(a)
    }

    fn log_p(&self, mut n: usize) -> u32 {
        let p = self.p() as usize;
        let mut k = 0;
        while n > 1 {
            debug_assert_eq!(n % p, 0);
            n /= p;
            k += 1;
        }
        k
    }

    /// `rk_p(B)`, or `rk_p(C/B)` when `c` is given.
    pub fn p_rank(&self, b: SubgroupId, c: Option<SubgroupId>) -> Result<u32> {
        let bs = self.subgroup(b);
        match c {
            None => {
                let n = bs
                    .elements
                    .iter()
                    .filter(|&&x| self.ar.scale_by(self.p(), x) == 0)
                    .count();
                Ok(self.log_p(n))
            }
            Some(c) => {
                if !self.leq(b, c) {
                    return Err(Error::NotASubgroup(b.0, c.0));
                }
                let cs = self.subgroup(c);
                let n = cs
                    .elements
                    .iter()
                    .filter(|&&x| bs.contains(self.ar.scale_by(self.p(), x)))
                    .count();
                Ok(self.log_p(n / bs.order()))
            }
        }
    }

    /// `rk_p(C/B)` for `B <= C`; panics otherwise.
    pub fn rank_between(&self, b: SubgroupId, c: SubgroupId) -> u32 {
        self.p_rank(b, Some(c)).expect("caller ensures B <= C")
    }

    // ---- characters ----

    pub fn character_count(&self) -> usize {
        self.ar.size
    }

    pub fn character_ids(&self) -> impl Iterator<Item = CharacterId> {
        (0..self.ar.size).map(CharacterId)
    }

    pub fn character_coefficients(&self, a: CharacterId) -> Vec<u64> {
        self.ar.decode(a.0)
    }

    /// `[c1,c2,...]`, the coefficient vector.
    pub fn character_label(&self, a: CharacterId) -> String {
        let v: Vec<String> = self.character_coefficients(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", v.join(","))
    }

    pub fn parse_character(&self, s: &str) -> Result<CharacterId> {
        let bad = || Error::UnknownCharacter(s.to_string());
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let cs: Vec<u64> = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        if cs.len() != self.spec.rank() {
            return Err(bad());
        }
        self.character_from_coefficients(&cs).map_err(|_| bad())
    }

    pub fn character_from_coefficients(&self, c: &[u64]) -> Result<CharacterId> {
        self.element_index(c).map(CharacterId)
    }

    pub fn trivial_character(&self) -> CharacterId {
        CharacterId(0)
    }

    /// Product of characters (sum of coefficient vectors).
    pub fn char_mul(&self, a: CharacterId, b: CharacterId) -> CharacterId {
        CharacterId(self.ar.add(a.0, b.0))
    }

    pub fn char_pow(&self, a: CharacterId, k: u64) -> CharacterId {
        CharacterId(self.ar.scale_by(k, a.0))
    }

    pub fn char_inv(&self, a: CharacterId) -> CharacterId {
        CharacterId(self.ar.neg(a.0))
    }

    pub fn char_order(&self, a: CharacterId) -> u64 {
        self.ar.order(a.0)
    }

    /// `<a, x>` as an element of `Z/p^K`.
    pub fn pairing(&self, a: CharacterId, x: usize) -> u64 {
        self.ar.pair(a.0, x)
    }

    pub fn is_trivial_on(&self, a: CharacterId, b: SubgroupId) -> bool {
        self.subgroup(b)
            .generators
            .iter()
            .all(|&g| self.ar.pair(a.0, g) == 0)
    }

    pub fn kernel(&self, a: CharacterId) -> SubgroupId {
        let k: Vec<usize> = (0..self.ar.size)
            .filter(|&x| self.ar.pair(a.0, x) == 0)
            .collect();
        self.find(&k).expect("kernels are subgroups")
    }

    pub fn characters(&self) -> Vec<CharacterInfo> {
        self.character_ids()
            .map(|id| CharacterInfo {
                id,
                kernel: self.kernel(id),
                order: self.char_order(id),
            })
            .collect()
    }

    /// Values of `a` on the generators of `b`.
    pub fn restrict(&self, a: CharacterId, b: SubgroupId) -> Vec<u64> {
        self.subgroup(b)
            .generators
            .iter()
            .map(|&g| self.ar.pair(a.0, g))
            .collect()
    }

    pub fn quotient_characters(&self, b: SubgroupId) -> QuotientCharacters {
        let members: Vec<usize> = (0..self.ar.size)
            .filter(|&a| self.is_trivial_on(CharacterId(a), b))
            .collect();
        let basis = greedy_basis(&self.ar, &members)
            .into_iter()
            .map(|(g, q)| (CharacterId(g), q))
            .collect();
        QuotientCharacters {
            members: members.into_iter().map(CharacterId).collect(),
            basis,
        }
    }

    /// Coordinates of `a` in a direct basis: `a = prod basis_j^{c_j}` with `0 <= c_j < ord_j`.
    pub fn coordinates(&self, basis: &[(CharacterId, u64)], a: CharacterId) -> Option<Vec<u64>> {
        let mut coords = vec![0u64; basis.len()];
        loop {
            let mut acc = self.trivial_character();
            for (j, &(g, _)) in basis.iter().enumerate() {
                acc = self.char_mul(acc, self.char_pow(g, coords[j]));
            }
            if acc == a {
                return Some(coords);
            }
            let mut j = 0;
            loop {
                if j == basis.len() {
                    return None;
                }
                coords[j] += 1;
                if coords[j] < basis[j].1 {
                    break;
                }
                coords[j] = 0;
                j += 1;
            }
        }
    }

    pub fn section(&self, b: SubgroupId) -> Section {
        let mut entries: Vec<SectionEntry> = Vec::new();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for a in self.character_ids() {
            let r = self.restrict(a, b);
            if seen.insert(r.clone()) {
                entries.push(SectionEntry {
                    restriction: r,
                    lift: a,
                });
            }
        }
        Section {
            subgroup: b,
            entries,
        }
    }

    pub fn sd_diagram(&self) -> SdDiagram {
        let mut objects: Vec<SdObject> = self.ids().map(SdObject::Vertex).collect();
        let mut arrows = Vec::new();
        for &(lo, hi) in &self.covers {
            let target = objects.len();
            objects.push(SdObject::Edge(lo, hi));
            arrows.push((lo.0, target));
            arrows.push((hi.0, target));
        }
        SdDiagram { objects, arrows }
    }

    /// Human-readable element list, e.g. `{(0,0),(1,0)}`.
    pub fn describe(&self, id: SubgroupId) -> String {
        let parts: Vec<String> = self
            .subgroup(id)
            .elements
            .iter()
            .map(|&x| {
                let v: Vec<String> = self.element(x).iter().map(|c| c.to_string()).collect();
                format!("({})", v.join(","))
            })
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Hasse diagram in DOT, trivial subgroup at the top. Shaded ids are filled.
    pub fn to_dot(&self, shaded: &[SubgroupId]) -> String {
        let mut out = String::from("digraph subgroups {\n  rankdir=TB;\n  node [shape=box];\n");
        for s in &self.subgroups {
            let fill = if shaded.contains(&s.id) {
                ", style=filled, fillcolor=lightgray"
            } else {
                ""
            };
            out.push_str(&format!(
                "  \"{}\" [label=\"{} |{}|={}\"{}];\n",
                s.id,
                s.id,
                s.id,
                s.order(),
                fill
            ));
        }
        for (lo, hi) in &self.covers {
            out.push_str(&format!("  \"{lo}\" -> \"{hi}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdObject {
    Vertex(SubgroupId),
    /// A covering pair `lower < upper`.
    Edge(SubgroupId, SubgroupId),
}

impl fmt::Display for SdObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SdObject::Vertex(b) => write!(f, "({b})"),
            SdObject::Edge(a, b) => write!(f, "({a}<{b})"),
        }
    }
}

/// Barycentric subdivision of the Hasse diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdDiagram {
    pub objects: Vec<SdObject>,
    /// Arrows as (source, target) indices into `objects`.
    pub arrows: Vec<(usize, usize)>,
}

impl SdDiagram {
    pub fn vertex_count(&self) -> usize {
        self.objects
            .iter()
            .filter(|o| matches!(o, SdObject::Vertex(_)))
            .count()
    }

    pub fn edge_count(&self) -> usize {
        self.objects.len() - self.vertex_count()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph sd {\n  rankdir=TB;\n");
        for o in &self.objects {
            let shape = match o {
                SdObject::Vertex(_) => "box",
                SdObject::Edge(..) => "ellipse",
            };
            out.push_str(&format!("  \"{o}\" [shape={shape}];\n"));
        }
        for &(s, t) in &self.arrows {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                self.objects[s], self.objects[t]
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(s: &str) -> SubgroupLattice {
        SubgroupLattice::build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let g: PGroupSpec = "2:[2,1]".parse().unwrap();
        assert_eq!(g.to_string(), "2:[2,1]");
        assert!("2:[1,2]".parse::<PGroupSpec>().is_err());
        assert!("4:[1]".parse::<PGroupSpec>().is_err());
        assert!("2:[0]".parse::<PGroupSpec>().is_err());
        assert_eq!("3:[]".parse::<PGroupSpec>().unwrap().rank(), 0);
    }

    #[test]
    fn small_lattices() {
        let k = lat("2:[1,1]");
        assert_eq!(k.len(), 5);
        let orders: Vec<usize> = k.subgroups().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 4]);
        assert_eq!(k.covers().len(), 6);

        let c4 = lat("2:[2]");
        assert_eq!(c4.len(), 3);
        assert_eq!(c4.covers(), &[(SubgroupId(0), SubgroupId(1)), (SubgroupId(1), SubgroupId(2))]);

        assert_eq!(lat("2:[2,1]").len(), 8);
        let t = lat("2:[]");
        assert_eq!(t.len(), 1);
        assert_eq!(t.bottom(), t.top());
    }

    #[test]
    fn too_large() {
        let g: PGroupSpec = "2:[5,4]".parse().unwrap();
        assert!(matches!(
            SubgroupLattice::build(&g),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn ranks() {
        let a = lat("2:[2,1]");
        assert_eq!(a.p_rank(a.top(), None).unwrap(), 2);
        let c8 = lat("2:[3]");
        assert_eq!(c8.p_rank(SubgroupId(0), Some(SubgroupId(2))).unwrap(), 1);
        assert_eq!(c8.p_rank(SubgroupId(0), Some(SubgroupId(3))).unwrap(), 1);
        let k = lat("2:[1,1]");
        assert_eq!(k.p_rank(k.bottom(), Some(k.top())).unwrap(), 2);
        assert!(matches!(
            k.p_rank(SubgroupId(1), Some(SubgroupId(2))),
            Err(Error::NotASubgroup(1, 2))
        ));
    }

    #[test]
    fn characters_and_kernels() {
        let k = lat("2:[1,1]");
        let a = k.character_from_coefficients(&[1, 0]).unwrap();
        let ker = k.kernel(a);
        assert_eq!(k.describe(ker), "{(0,0),(0,1)}");
        assert_eq!(k.char_order(a), 2);
        assert_eq!(k.kernel(k.trivial_character()), k.top());

        let c4 = lat("2:[2]");
        let a = c4.character_from_coefficients(&[1]).unwrap();
        assert_eq!(c4.kernel(a), c4.bottom());
        assert_eq!(c4.char_order(a), 4);
    }

    #[test]
    fn quotient_characters_examples() {
        let c4 = lat("2:[2]");
        let q = c4.quotient_characters(SubgroupId(1));
        assert_eq!(q.members, vec![CharacterId(0), CharacterId(2)]);
        assert_eq!(q.basis, vec![(CharacterId(2), 2)]);

        let k = lat("2:[1,1]");
        let q = k.quotient_characters(k.bottom());
        assert_eq!(q.members.len(), 4);
        assert_eq!(q.basis.len(), 2);
        assert!(q.basis.iter().all(|&(_, o)| o == 2));
        assert!(k.quotient_characters(k.top()).basis.is_empty());
    }

    #[test]
    fn sections() {
        let c4 = lat("2:[2]");
        let s = c4.section(SubgroupId(1));
        assert_eq!(s.entries.len(), 2);
        assert_eq!(s.entries[0].lift, CharacterId(0));
        assert_eq!(c4.character_coefficients(s.entries[1].lift), vec![1]);

        let k = lat("2:[1,1]");
        // <a> with a = (1,0)
        let a = k.find(&[0, k.element_index(&[1, 0]).unwrap()]).unwrap();
        let s = k.section(a);
        assert_eq!(k.character_coefficients(s.entries[1].lift), vec![1, 0]);
    }

    #[test]
    fn sd_counts() {
        let d = lat("2:[1]").sd_diagram();
        assert_eq!((d.vertex_count(), d.edge_count(), d.arrows.len()), (2, 1, 2));
        let d = lat("2:[2]").sd_diagram();
        assert_eq!((d.vertex_count(), d.edge_count(), d.arrows.len()), (3, 2, 4));
        let d = lat("2:[1,1]").sd_diagram();
        assert_eq!((d.vertex_count(), d.edge_count(), d.arrows.len()), (5, 6, 12));
    }

    #[test]
    fn coordinates_roundtrip() {
        let a = lat("2:[2,1]");
        let q = a.quotient_characters(a.bottom());
        let prod: u64 = q.basis.iter().map(|b| b.1).product();
        assert_eq!(prod as usize, a.group_order());
        for c in a.character_ids() {
            assert!(a.coordinates(&q.basis, c).is_some());
        }
    }
}
