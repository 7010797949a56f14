use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;


use super::element::{GradedElement, Monomial};
use super::RingSpec;
use crate::error::{Error, Result};

/// A ring map given by generator images.
#[derive(Debug, Clone)]
pub struct RingMap {
    source: Arc<RingSpec>,
    target: Arc<RingSpec>,
    images: Vec<GradedElement>,
    inverses: Vec<Option<GradedElement>>,
}

impl RingMap {
    /// Images must be invertible for inverted generators and topologically
    /// nilpotent (positive valuation or exactly zero) for series generators.
    pub fn new(source: &Arc<RingSpec>, target: &Arc<RingSpec>, images: Vec<GradedElement>) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::RingMismatch(format!(
                "{} images for {} generators",
                images.len(),
                source.ngens()
            )));
        }
        let mut inverses = Vec::with_capacity(images.len());
        for (g, img) in source.generators().iter().zip(&images) {
            if !img.ring().same_generators(target) {
                return Err(Error::RingMismatch(format!("image of `{}` is not in the target", g.name)));
            }
            if g.kind.is_series() {
                let exact_zero = img.is_zero() && img.is_exact();
                if !exact_zero && img.valuation().is_none_or(|v| v <= 0) {
                    return Err(Error::NotTopologicallyNilpotent);
                }
            }
            if g.kind.allows_negative() {
                inverses.push(Some(img.inverse()?));
            } else {
                inverses.push(None);
            }
        }
        Ok(RingMap {
            source: source.clone(),
            target: target.clone(),
            images,
            inverses,
        })
    }

    /// Each source generator goes to the target generator of the same name
    /// unless overridden.
    pub fn by_name(
        source: &Arc<RingSpec>,
        target: &Arc<RingSpec>,
        overrides: &[(&str, GradedElement)],
    ) -> Result<Self> {
        let mut images = Vec::with_capacity(source.ngens());
        for g in source.generators() {
            if let Some((_, img)) = overrides.iter().find(|(n, _)| *n == g.name) {
                images.push(img.clone());
            } else {
                images.push(GradedElement::gen(target, &g.name)?);
            }
        }
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<RingSpec> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RingSpec> {
        &self.target
    }

    pub fn images(&self) -> &[GradedElement] {
        &self.images
    }

    fn power(&self, cache: &mut HashMap<(usize, i32), GradedElement>, i: usize, e: i32) -> Result<GradedElement> {
        if let Some(x) = cache.get(&(i, e)) {
            return Ok(x.clone());
        }
        let x = if e == 0 {
            GradedElement::one(&self.target)
        } else if e == 1 {
            self.images[i].clone()
        } else if e == -1 {
            self.inverses[i].clone().ok_or(Error::NegativePowerOfNonUnit)?
        } else {
            let half = self.power(cache, i, e.div_euclid(2))?;
            let rest = self.power(cache, i, e - 2 * e.div_euclid(2))?;
            &(&half * &half) * &rest
        };
        cache.insert((i, e), x.clone());
        Ok(x)
    }

    /// Image of `x`; the source precision becomes a precision in the target
    /// scaled by the least valuation of a series image per unit weight.
    pub fn apply(&self, x: &GradedElement) -> Result<GradedElement> {
        if !x.ring().same_generators(&self.source) {
            return Err(Error::RingMismatch(format!("{} is not {}", x.ring(), self.source)));
        }
        let gens = self.source.generators();
        let series: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].kind.is_series()).collect();
        let plain: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i].kind.is_series()).collect();
        let mut groups: BTreeMap<Vec<i32>, Vec<(&Monomial, _)>> = BTreeMap::new();
        for (m, c) in x.terms() {
            let key: Vec<i32> = series.iter().map(|&i| m.0[i]).collect();
            groups.entry(key).or_default().push((m, c));
        }
        let mut cache = HashMap::new();
        let mut out = GradedElement::zero(&self.target);
        for (key, terms) in groups {
            let mut inner = GradedElement::zero(&self.target);
            for (m, c) in terms {
                let mut t = GradedElement::constant(&self.target, c.clone());
                for &i in &plain {
                    if m.0[i] != 0 {
                        t = &t * &self.power(&mut cache, i, m.0[i])?;
                    }
                }
                inner = &inner + &t;
            }
            let mut s = GradedElement::one(&self.target);
            for (k, &i) in series.iter().enumerate() {
                if key[k] != 0 {
                    s = &s * &self.power(&mut cache, i, key[k])?;
                }
            }
            out = &out + &(&inner * &s);
        }
        if let Some(p) = x.prec() {
            let mut cap: Option<i32> = None;
            let mut all_zero = true;
            for &i in &series {
                let img = &self.images[i];
                if img.is_zero() && img.is_exact() {
                    continue;
                }
                all_zero = false;
                let v = img.valuation().expect("nonzero");
                let w = gens[i].weight;
                // least image degree per unit of source weight, rounded up
                let c = (p as i64 * v as i64 + w as i64 - 1).div_euclid(w as i64) as i32;
                cap = Some(cap.map_or(c, |a| a.min(c)));
            }
            if let (false, Some(c)) = (all_zero, cap) {
                out = out.truncate(c);
            }
        }
        Ok(out)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &RingMap) -> Result<RingMap> {
        let images = self
            .images
            .iter()
            .map(|x| g.apply(x))
            .collect::<Result<Vec<_>>>()?;
        RingMap::new(&self.source, &g.target, images)
    }
}
