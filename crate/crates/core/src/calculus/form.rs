use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{write_scaled, Element, GeneratorTable};
use crate::coeff::{Coeff, CoeffError};

use super::Mono;

/// A differential form `Σ a_I θ^I` with algebra coefficients on the left.
#[derive(Clone, Default, PartialEq)]
pub struct Form {
    terms: BTreeMap<Mono, Element>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn from_element(a: Element) -> Self {
        Form::term(a, Mono::ONE)
    }

    pub fn term(a: Element, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert(m, a);
        }
        Form { terms }
    }

    pub fn theta(s: usize) -> Self {
        Form::term(Element::one(), Mono::single(s))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Element)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Mono) -> Element {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// The grade of a homogeneous form (0 for the zero form).
    pub fn grade(&self) -> Option<u32> {
        let mut grades = self.terms.keys().map(|m| m.grade());
        let g = grades.next().unwrap_or(0);
        grades.all(|h| h == g).then_some(g)
    }

    pub fn max_grade(&self) -> u32 {
        self.terms.keys().map(|m| m.grade()).max().unwrap_or(0)
    }

    /// The grade-`k` part.
    pub fn component(&self, k: u32) -> Form {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.grade() == k)
                .map(|(m, a)| (*m, a.clone()))
                .collect(),
        }
    }

    /// The grade-0 part as an element.
    pub fn as_element(&self) -> Option<Element> {
        match self.grade() {
            Some(0) => Some(self.coefficient(Mono::ONE)),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Mono, a: &Element) {
        if a.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            None => {
                self.terms.insert(m, a.clone());
            }
            Some(e) => {
                e.add_assign(a);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Form) {
        for (m, a) in &other.terms {
            self.add_term(*m, a);
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&Coeff::from_integer(-1))
    }

    pub fn scale(&self, c: &Coeff) -> Form {
        let mut out = Form::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, &a.scale(c));
        }
        out
    }

    pub fn map_coefficients<E>(
        &self,
        mut f: impl FnMut(&Element) -> Result<Element, E>,
    ) -> Result<Form, E> {
        let mut out = Form::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, &f(a)?);
        }
        Ok(out)
    }

    pub fn map_scalars(
        &self,
        f: impl Fn(&Coeff) -> Result<Coeff, CoeffError>,
    ) -> Result<Form, CoeffError> {
        self.map_coefficients(|a| a.map_coefficients(&f))
    }

    pub fn display<'a>(
        &'a self,
        table: &'a GeneratorTable,
        labels: &'a [String],
    ) -> FormDisplay<'a> {
        FormDisplay {
            form: self,
            table,
            labels,
        }
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

pub struct FormDisplay<'a> {
    form: &'a Form,
    table: &'a GeneratorTable,
    labels: &'a [String],
}

pub(crate) fn mono_name(m: Mono, labels: &[String]) -> String {
    m.indices()
        .map(|i| labels[i].as_str())
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, a) in &self.form.terms {
            let theta = mono_name(*m, self.labels);
            if let Some((w, c)) = a.as_single_term() {
                let body = match (w.is_empty(), theta.is_empty()) {
                    (true, true) => None,
                    (true, false) => Some(theta.clone()),
                    (false, true) => Some(w.display(self.table).to_string()),
                    (false, false) => Some(format!("{}*{}", w.display(self.table), theta)),
                };
                write_scaled(f, c, body.as_ref().map(|b| b as &dyn fmt::Display), first)?;
            } else {
                if !first {
                    f.write_str(" + ")?;
                }
                if theta.is_empty() {
                    write!(f, "{}", a.display(self.table))?;
                } else {
                    write!(f, "({})*{}", a.display(self.table), theta)?;
                }
            }
            first = false;
        }
        Ok(())
    }
}
