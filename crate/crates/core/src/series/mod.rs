//! Exact sparse graded rings over p-local rationals: polynomial, inverted,
//! and truncated power-series generators, with optional relations.

mod coeff;
mod element;
mod map;
mod membership;
mod power_series;
mod text;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub use coeff::{is_p_local, mod_p, val_p, Coeff};
pub use element::{GradedElement, Monomial};
pub use map::RingMap;
pub use membership::{relation_member, relation_member_in, Membership, MembershipConfig, ZeroCertificate};
pub use power_series::PowerSeries1;
pub use text::parse_element;

use crate::error::{Error, Result};

/// Default truncation of series variables.
pub const DEFAULT_ORDER: i32 = 9;
/// Default number of `v_i` generators.
pub const DEFAULT_V: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Polynomial,
    /// Invertible: exponents of any sign.
    Inverted,
    /// Topologically nilpotent power-series variable.
    Series,
    /// A series variable that has also been inverted.
    LaurentSeries,
}

impl GeneratorKind {
    pub fn is_series(self) -> bool {
        matches!(self, GeneratorKind::Series | GeneratorKind::LaurentSeries)
    }

    pub fn allows_negative(self) -> bool {
        matches!(self, GeneratorKind::Inverted | GeneratorKind::LaurentSeries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    pub kind: GeneratorKind,
    /// Contribution to series degree; zero for non-series generators.
    pub weight: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationStrategy {
    /// Monomial relations applied during normalization.
    SetToZero,
    /// Used only by membership certificates.
    CertificateOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub terms: element::Terms,
    pub prec: Option<i32>,
    pub strategy: RelationStrategy,
}

#[derive(Debug, PartialEq, Eq)]
pub struct RingSpec {
    prime: u64,
    generators: Vec<Generator>,
    order: i32,
    relations: Vec<Relation>,
    index: HashMap<String, usize>,
}

impl RingSpec {
    pub fn builder(prime: u64) -> RingBuilder {
        RingBuilder {
            prime,
            generators: Vec::new(),
            order: DEFAULT_ORDER,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require_gen(&self, name: &str) -> Result<usize> {
        self.gen_index(name)
            .ok_or_else(|| Error::MissingGenerator(name.to_string()))
    }

    pub fn has_series(&self) -> bool {
        self.generators.iter().any(|g| g.kind.is_series())
    }

    pub fn has_laurent(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.kind == GeneratorKind::LaurentSeries)
    }

    /// Same generators and order.
    pub fn same_generators(&self, other: &RingSpec) -> bool {
        self.prime == other.prime && self.generators == other.generators && self.order == other.order
    }

    /// A copy of this ring with the given relations; each relation element must
    /// live in a ring with the same generators.
    pub fn with_relations(
        self: &Arc<Self>,
        relations: Vec<(String, GradedElement, RelationStrategy)>,
    ) -> Result<Arc<RingSpec>> {
        let mut rels = Vec::new();
        for (label, el, strategy) in relations {
            if !self.same_generators(el.ring()) {
                return Err(Error::RingMismatch(format!(
                    "relation `{label}` lives in a different ring"
                )));
            }
            if strategy == RelationStrategy::SetToZero && el.terms().len() != 1 {
                return Err(Error::NonMonomialRelation);
            }
            rels.push(Relation {
                label,
                terms: el.terms().clone(),
                prec: el.prec(),
                strategy,
            });
        }
        Ok(Arc::new(RingSpec {
            prime: self.prime,
            generators: self.generators.clone(),
            order: self.order,
            relations: rels,
            index: self.index.clone(),
        }))
    }

    /// The same generators without relations.
    pub fn without_relations(self: &Arc<Self>) -> Arc<RingSpec> {
        if self.relations.is_empty() {
            return self.clone();
        }
        Arc::new(RingSpec {
            prime: self.prime,
            generators: self.generators.clone(),
            order: self.order,
            relations: Vec::new(),
            index: self.index.clone(),
        })
    }

    /// A copy with a different series truncation order.
    pub fn with_order(self: &Arc<Self>, order: i32) -> Arc<RingSpec> {
        Arc::new(RingSpec {
            prime: self.prime,
            generators: self.generators.clone(),
            order,
            relations: self.relations.clone(),
            index: self.index.clone(),
        })
    }

    /// Relations as elements of this ring.
    pub fn relation_elements(self: &Arc<Self>) -> Vec<GradedElement> {
        self.relations
            .iter()
            .map(|r| GradedElement::from_parts(self.clone(), r.terms.clone(), r.prec))
            .collect()
    }

    /// A ring with the same prime whose generators are this ring's followed by `extra`.
    pub fn extend(self: &Arc<Self>, extra: &[Generator], order: i32) -> Result<Arc<RingSpec>> {
        let mut b = RingSpec::builder(self.prime).order(order);
        for g in self.generators.iter().chain(extra) {
            b = b.generator(g.clone());
        }
        b.build()
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                let tag = match g.kind {
                    GeneratorKind::Polynomial => "",
                    GeneratorKind::Inverted => "^±",
                    GeneratorKind::Series => "[[ ]]",
                    GeneratorKind::LaurentSeries => "((  ))",
                };
                format!("{}{}", g.name, tag)
            })
            .collect();
        write!(f, "Z_({})[{}]", self.prime, gens.join(", "))?;
        if self.has_series() {
            write!(f, " mod deg_s >= {}", self.order)?;
        }
        for r in &self.relations {
            write!(f, " / ({})", r.label)?;
        }
        Ok(())
    }
}

pub struct RingBuilder {
    prime: u64,
    generators: Vec<Generator>,
    order: i32,
}

impl RingBuilder {
    pub fn order(mut self, order: i32) -> Self {
        self.order = order;
        self
    }

    pub fn generator(mut self, g: Generator) -> Self {
        self.generators.push(g);
        self
    }

    fn push(self, name: &str, degree: i32, kind: GeneratorKind, weight: i32) -> Self {
        self.generator(Generator {
            name: name.to_string(),
            degree,
            kind,
            weight,
        })
    }

    pub fn polynomial(self, name: &str, degree: i32) -> Self {
        self.push(name, degree, GeneratorKind::Polynomial, 0)
    }

    pub fn inverted(self, name: &str, degree: i32) -> Self {
        self.push(name, degree, GeneratorKind::Inverted, 0)
    }

    pub fn series(self, name: &str, degree: i32) -> Self {
        self.push(name, degree, GeneratorKind::Series, 1)
    }

    pub fn weighted_series(self, name: &str, degree: i32, weight: i32) -> Self {
        self.push(name, degree, GeneratorKind::Series, weight)
    }

    pub fn laurent(self, name: &str, degree: i32, weight: i32) -> Self {
        self.push(name, degree, GeneratorKind::LaurentSeries, weight)
    }

    /// `v_1, ..., v_count` in degrees `2(p^i - 1)`.
    pub fn bp_generators(mut self, count: usize) -> Self {
        let p = self.prime as i32;
        for i in 1..=count as u32 {
            let d = 2 * (p.pow(i) - 1);
            self = self.polynomial(&format!("v{i}"), d);
        }
        self
    }

    pub fn build(self) -> Result<Arc<RingSpec>> {
        if !crate::group::is_prime(self.prime) {
            return Err(Error::InvalidGroupSpec(format!("{} is not prime", self.prime)));
        }
        let mut index = HashMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
            if g.degree % 2 != 0 {
                return Err(Error::OddDegree(g.name.clone()));
            }
            if g.kind.is_series() && g.weight <= 0 {
                return Err(Error::UnsupportedRingKind(format!(
                    "series generator `{}` needs a positive weight",
                    g.name
                )));
            }
        }
        let mut gens = self.generators;
        for g in gens.iter_mut() {
            if !g.kind.is_series() {
                g.weight = 0;
            }
        }
        Ok(Arc::new(RingSpec {
            prime: self.prime,
            generators: gens,
            order: self.order,
            relations: Vec::new(),
            index,
        }))
    }
}

/// `BP_*` with `v_1..v_count` at the prime `p`.
pub fn bp_ring(p: u64, count: usize) -> Result<Arc<RingSpec>> {
    RingSpec::builder(p).bp_generators(count).build()
}
