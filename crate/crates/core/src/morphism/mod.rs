//! Endomorphisms given by generator images, and twisted inner derivations
//! `e(x) = a φ(x) - x a`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Element, FreeSum, Sym, Word};
use crate::coeff::{Coeff, CoeffError, Param};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("image of invertible generator `{0}` is not invertible")]
    NotInvertibleImage(String),
    #[error("no inverse is declared")]
    MissingInverse,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// An algebra endomorphism, fixed by the images of the base generators.
///
/// Images of inverse symbols are forced: `φ(g^-1) = φ(g)^-1`, which requires
/// `φ(g)` to be a scalar multiple of a word of invertible letters. When the
/// algebra has an adjoined `N^-1`, its image is forced the same way.
#[derive(Debug, Clone, PartialEq)]
pub struct Endomorphism {
    images: Vec<Element>,
    symbol_images: Vec<Element>,
    declared_inverse: Option<Box<Endomorphism>>,
}

impl Endomorphism {
    pub fn identity(alg: &Algebra) -> Self {
        let images = alg.generators();
        Self::from_images(alg, images).expect("identity is well defined")
    }

    /// Builds from `(generator, image)` pairs; unlisted generators map to
    /// themselves. An inverse is attached automatically when every image is
    /// a nonzero scalar times a distinct base generator.
    pub fn new(alg: &Algebra, images: &[(&str, Element)]) -> Result<Self, MorphismError> {
        let mut full = alg.generators();
        for (name, img) in images {
            let s = alg
                .table()
                .lookup(name)
                .ok_or_else(|| MorphismError::UnknownGenerator(name.to_string()))?;
            full[alg.table().generator_of(s)] = img.clone();
        }
        let mut out = Self::from_images(alg, full)?;
        out.declared_inverse = out.monomial_inverse(alg)?.map(Box::new);
        Ok(out)
    }

    fn from_images(alg: &Algebra, mut images: Vec<Element>) -> Result<Self, MorphismError> {
        let table = alg.table();
        let loc = alg.localization();
        if let Some(loc) = loc {
            // φ(N^-1) = φ(N)^-1 where φ(N) = μ N
            let gi = table.generator_of(loc.symbol());
            let mut partial = Endomorphism {
                images: images.clone(),
                symbol_images: Vec::new(),
                declared_inverse: None,
            };
            partial.symbol_images = partial.expand(alg, gi)?;
            let image_n = partial.apply(alg, loc.element());
            let (w, c) = loc.element().terms().next_back().expect("nonzero element");
            let mu = image_n.coefficient(w).div(c)?;
            if mu.is_zero() || image_n != loc.element().scale(&mu) {
                return Err(MorphismError::NotInvertibleImage(
                    table.generator_name(loc.symbol()).to_string(),
                ));
            }
            images[gi] = alg.symbol(loc.symbol()).scale(&mu.inv()?);
        }
        let mut out = Endomorphism {
            images,
            symbol_images: Vec::new(),
            declared_inverse: None,
        };
        out.symbol_images = out.expand(alg, usize::MAX)?;
        Ok(out)
    }

    /// Per-symbol images; generator index `skip` is left as itself.
    fn expand(&self, alg: &Algebra, skip: usize) -> Result<Vec<Element>, MorphismError> {
        let table = alg.table();
        let mut out = Vec::with_capacity(table.symbol_count());
        for s in table.symbols() {
            let g = table.generator_of(s);
            if g == skip {
                out.push(alg.symbol(s));
                continue;
            }
            let img = &self.images[g];
            if table.is_inverse(s) {
                let inv = alg.inverse_monomial(img).map_err(|_| {
                    MorphismError::NotInvertibleImage(table.generator_name(s).to_string())
                })?;
                out.push(inv);
            } else {
                out.push(img.clone());
            }
        }
        Ok(out)
    }

    fn monomial_inverse(&self, alg: &Algebra) -> Result<Option<Endomorphism>, MorphismError> {
        let table = alg.table();
        let n = table.generator_count();
        let mut inv: Vec<Option<Element>> = vec![None; n];
        for (g, img) in self.images.iter().enumerate() {
            let Some((w, c)) = img.as_single_term() else {
                return Ok(None);
            };
            let Some(s) = w.first().filter(|_| w.degree() == 1) else {
                return Ok(None);
            };
            if table.is_inverse(s) {
                return Ok(None);
            }
            let target = table.generator_of(s);
            if inv[target].is_some() {
                return Ok(None);
            }
            inv[target] = Some(alg.symbol(table.base_symbol(g)).scale(&c.inv()?));
        }
        let images = inv.into_iter().map(|e| e.expect("permutation")).collect();
        Ok(Some(Self::from_images(alg, images)?))
    }

    pub fn with_inverse(mut self, inverse: Endomorphism) -> Self {
        self.declared_inverse = Some(Box::new(inverse));
        self
    }

    pub fn declared_inverse(&self) -> Option<&Endomorphism> {
        self.declared_inverse.as_deref()
    }

    /// Images of the base generators, in declaration order.
    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn symbol_image(&self, s: Sym) -> &Element {
        &self.symbol_images[s as usize]
    }

    /// `Some(c)` per base generator when `φ(g) = c g` for all `g`.
    pub fn as_scaling(&self, alg: &Algebra) -> Option<Vec<Coeff>> {
        self.images
            .iter()
            .enumerate()
            .map(|(g, img)| {
                let base = Word::letter(alg.table().base_symbol(g));
                let (w, c) = img.as_single_term()?;
                (*w == base).then(|| c.clone())
            })
            .collect()
    }

    pub fn apply_word(&self, alg: &Algebra, w: &Word) -> Element {
        let mut acc = Element::one();
        for &(s, k) in w.runs() {
            let img = &self.symbol_images[s as usize];
            acc = alg.mul(&acc, &alg.pow(img, k));
        }
        acc
    }

    pub fn apply(&self, alg: &Algebra, x: &Element) -> Element {
        let mut out = Element::zero();
        for (w, c) in x.terms() {
            out.add_scaled(c, &self.apply_word(alg, w));
        }
        out
    }

    fn apply_free(&self, alg: &Algebra, sum: &FreeSum) -> Element {
        let mut out = Element::zero();
        for (c, w) in sum {
            out.add_scaled(c, &self.apply_word(alg, w));
        }
        out
    }

    /// Index of the first defining relation not preserved, if any.
    pub fn broken_relation(&self, alg: &Algebra) -> Option<usize> {
        for (k, rel) in alg.relations().iter().enumerate() {
            if self.apply_free(alg, &rel.lhs) != self.apply_free(alg, &rel.rhs) {
                return Some(k);
            }
        }
        None
    }

    /// `φ(L) = φ(R)` for every defining relation, and `φ(g) φ(g^-1) = 1` for
    /// every adjoined inverse.
    pub fn verify_respects_relations(&self, alg: &Algebra) -> bool {
        if self.broken_relation(alg).is_some() {
            return false;
        }
        let table = alg.table();
        for s in table.symbols() {
            if let Some(t) = table.inverse(s) {
                let prod = alg.mul(self.symbol_image(s), self.symbol_image(t));
                if prod != Element::one() {
                    return false;
                }
            }
        }
        if let Some(loc) = alg.localization() {
            let n = self.apply(alg, loc.element());
            if alg.mul(&n, self.symbol_image(loc.symbol())) != Element::one() {
                return false;
            }
        }
        true
    }

    /// `self ∘ other`.
    pub fn compose(&self, alg: &Algebra, other: &Endomorphism) -> Endomorphism {
        let images = other
            .images
            .iter()
            .map(|img| self.apply(alg, img))
            .collect();
        let mut out = Self::from_images(alg, images).expect("composition of well-defined maps");
        if let (Some(a), Some(b)) = (self.declared_inverse(), other.declared_inverse()) {
            out.declared_inverse = Some(Box::new(b.compose(alg, a)));
        }
        out
    }

    /// Checks `φ ∘ φ^-1 = φ^-1 ∘ φ = id` on generators.
    pub fn verify_inverse(&self, alg: &Algebra) -> Result<bool, MorphismError> {
        let inv = self
            .declared_inverse()
            .ok_or(MorphismError::MissingInverse)?;
        Ok(alg.generators().iter().all(|g| {
            self.apply(alg, &inv.apply(alg, g)) == *g && inv.apply(alg, &self.apply(alg, g)) == *g
        }))
    }

    pub fn is_identity(&self, alg: &Algebra) -> bool {
        self.images == alg.generators()
    }

    pub fn substitute(
        &self,
        alg: &Algebra,
        bindings: &BTreeMap<Param, Coeff>,
    ) -> Result<Endomorphism, MorphismError> {
        let images = self
            .images
            .iter()
            .map(|e| alg.substitute(e, bindings))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = Self::from_images(alg, images)?;
        if let Some(inv) = self.declared_inverse() {
            out.declared_inverse = Some(Box::new(inv.substitute(alg, bindings)?));
        }
        Ok(out)
    }
}

/// `e(x) = weight φ(x) - x weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedDerivation {
    pub weight: Element,
    pub twist: Endomorphism,
}

impl TwistedDerivation {
    pub fn new(weight: Element, twist: Endomorphism) -> Self {
        TwistedDerivation { weight, twist }
    }

    /// The discrete derivative `φ - id`.
    pub fn discrete(twist: Endomorphism) -> Self {
        Self::new(Element::one(), twist)
    }

    pub fn apply(&self, alg: &Algebra, x: &Element) -> Element {
        let twisted = alg.mul(&self.weight, &self.twist.apply(alg, x));
        twisted.sub(&alg.mul(x, &self.weight))
    }
}

#[cfg(test)]
mod tests;
