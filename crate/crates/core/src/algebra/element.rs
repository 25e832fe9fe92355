use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::Coeff;

use super::{GeneratorTable, Word};

/// A finite sum of coefficient times normal-form word.
///
/// Elements are only produced in normal form by an [`super::Algebra`]; the
/// linear operations here never create new words, so they preserve it.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<Word, Coeff>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::scalar(Coeff::one())
    }

    pub fn scalar(c: Coeff) -> Self {
        Element::term(c, Word::empty())
    }

    /// A single term. The caller guarantees `w` is in normal form.
    pub fn term(c: Coeff, w: Word) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Element { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// The scalar value when the element is a multiple of the unit.
    pub fn as_scalar(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (w, c) = self.terms.iter().next()?;
                w.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_single_term(&self) -> Option<(&Word, &Coeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Element) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, c: &Coeff, other: &Element) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), c.mul(d));
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(&Coeff::from_integer(-1), other);
        out
    }

    pub fn neg(&self) -> Element {
        self.scale(&Coeff::from_integer(-1))
    }

    pub fn scale(&self, c: &Coeff) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self
                .terms
                .iter()
                .map(|(w, d)| (w.clone(), c.mul(d)))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coefficients<E>(
        &self,
        mut f: impl FnMut(&Coeff) -> Result<Coeff, E>,
    ) -> Result<Element, E> {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, table: &'a GeneratorTable) -> ElementDisplay<'a> {
        ElementDisplay { el: self, table }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Writes `coefficient * body` in expression syntax. `body` of `None` means the unit.
pub(crate) fn write_scaled(
    f: &mut fmt::Formatter<'_>,
    c: &Coeff,
    body: Option<&dyn fmt::Display>,
    first: bool,
) -> fmt::Result {
    let negative = c.is_negative_looking();
    let c = if negative { c.neg() } else { c.clone() };
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    match body {
        None => {
            if c.is_compound() {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        Some(b) => {
            if c.is_one() {
                write!(f, "{b}")
            } else if c.is_compound() {
                write!(f, "({c}) * {b}")
            } else {
                write!(f, "{c} * {b}")
            }
        }
    }
}

pub struct ElementDisplay<'a> {
    el: &'a Element,
    table: &'a GeneratorTable,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.el.is_zero() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.el.terms.iter().enumerate() {
            if w.is_empty() {
                write_scaled(f, c, None, k == 0)?;
            } else {
                let wd = w.display(self.table);
                write_scaled(f, c, Some(&wd), k == 0)?;
            }
        }
        Ok(())
    }
}
