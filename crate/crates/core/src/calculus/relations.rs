use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{write_scaled, Element, Word};
use crate::coeff::{solve_linear, Coeff, Matrix};

use super::{Calculus, CalculusError, Form, Mono};

/// Which factor stands on the left in a derived relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `x ω = Σ c ω_j h`
    ElementFirst,
    /// `ω x = Σ c h ω_j`
    FormFirst,
}

/// `element form = Σ coeff form_j element_h` (or the mirror image).
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedRelation {
    pub orientation: Orientation,
    pub element: String,
    pub form: String,
    /// `(coefficient, form name, element name)`, zero terms omitted.
    pub terms: Vec<(Coeff, String, String)>,
}

fn product(orientation: Orientation, element: &str, form: &str) -> String {
    let e = if element == "1" { None } else { Some(element) };
    match (orientation, e) {
        (_, None) => form.to_string(),
        (Orientation::ElementFirst, Some(e)) => format!("{e}*{form}"),
        (Orientation::FormFirst, Some(e)) => format!("{form}*{e}"),
    }
}

impl DerivedRelation {
    pub fn lhs(&self) -> String {
        product(self.orientation, &self.element, &self.form)
    }
}

struct Rhs<'a>(&'a DerivedRelation);

impl fmt::Display for Rhs<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = self.0;
        if rel.terms.is_empty() {
            return f.write_str("0");
        }
        let flip = match rel.orientation {
            Orientation::ElementFirst => Orientation::FormFirst,
            Orientation::FormFirst => Orientation::ElementFirst,
        };
        for (k, (c, form, el)) in rel.terms.iter().enumerate() {
            let body = product(flip, el, form);
            write_scaled(f, c, Some(&body), k == 0)?;
        }
        Ok(())
    }
}

impl fmt::Display for DerivedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs(), Rhs(self))
    }
}

impl Calculus {
    /// For every element `x` and form `ω`, solves `x ω = Σ c_{j,h} ω_j h`
    /// (or `ω x = Σ c_{j,h} h ω_j`) for scalars `c` over the span of the
    /// given forms and elements.
    pub fn commutation_relations(
        &self,
        forms: &[(String, Form)],
        elements: &[(String, Element)],
        orientation: Orientation,
    ) -> Result<Vec<DerivedRelation>, CalculusError> {
        let mut ansatz: Vec<(usize, usize, Form)> = Vec::new();
        for (j, (_, w)) in forms.iter().enumerate() {
            for (h, (_, e)) in elements.iter().enumerate() {
                let f = match orientation {
                    Orientation::ElementFirst => self.right_mul(w, e),
                    Orientation::FormFirst => self.left_mul(e, w),
                };
                ansatz.push((j, h, f));
            }
        }
        let mut out = Vec::new();
        for (xname, x) in elements {
            for (wname, w) in forms {
                let lhs = match orientation {
                    Orientation::ElementFirst => self.left_mul(x, w),
                    Orientation::FormFirst => self.right_mul(w, x),
                };
                let mut keys: BTreeMap<(Mono, Word), usize> = BTreeMap::new();
                for f in ansatz.iter().map(|(_, _, f)| f).chain([&lhs]) {
                    for (m, a) in f.terms() {
                        for (word, _) in a.terms() {
                            let n = keys.len();
                            keys.entry((*m, word.clone())).or_insert(n);
                        }
                    }
                }
                let mut mat = Matrix::zeros(keys.len(), ansatz.len());
                for (col, (_, _, f)) in ansatz.iter().enumerate() {
                    for (m, a) in f.terms() {
                        for (word, c) in a.terms() {
                            mat.set(keys[&(*m, word.clone())], col, c.clone());
                        }
                    }
                }
                let mut rhs = vec![Coeff::zero(); keys.len()];
                for (m, a) in lhs.terms() {
                    for (word, c) in a.terms() {
                        rhs[keys[&(*m, word.clone())]] = c.clone();
                    }
                }
                let inexpressible = || CalculusError::Inexpressible {
                    element: xname.clone(),
                    form: wname.clone(),
                };
                let sol = solve_linear(&mat, &rhs).ok_or_else(inexpressible)?;
                let mut check = Form::zero();
                let mut terms = Vec::new();
                for ((j, h, f), c) in ansatz.iter().zip(&sol) {
                    if c.is_zero() {
                        continue;
                    }
                    check.add_assign(&f.scale(c));
                    terms.push((c.clone(), forms[*j].0.clone(), elements[*h].0.clone()));
                }
                if check != lhs {
                    return Err(inexpressible());
                }
                out.push(DerivedRelation {
                    orientation,
                    element: xname.clone(),
                    form: wname.clone(),
                    terms,
                });
            }
        }
        Ok(out)
    }
}
