//! Differentiable automorphisms, the left-linear tensor basis `θ^s ⊗_L θ^t`,
//! metrics, connections given by transport operators, and torsion.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{write_scaled, Element, GeneratorTable, Word};
use crate::calculus::{Calculus, Form, Mismatch, Mono};
use crate::coeff::{solve_linear, Coeff, CoeffError, Matrix};
use crate::morphism::{Endomorphism, MorphismError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("extension matrix is singular")]
    Singular,
    #[error("no inverse is declared for the base automorphism")]
    MissingInverse,
    #[error("expected {expected} {what}, got {got}")]
    Arity {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("no theta action solves the differentiability conditions")]
    NotDifferentiable,
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// An automorphism together with a scalar action on the `θ` basis:
/// `φ(θ^s) = Σ_t M[s][t] θ^t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormExtension {
    pub base: Endomorphism,
    pub matrix: Matrix,
}

impl FormExtension {
    pub fn identity_action(base: Endomorphism, n: usize) -> Self {
        FormExtension {
            base,
            matrix: Matrix::identity(n),
        }
    }

    pub fn new(base: Endomorphism, matrix: Matrix) -> Self {
        FormExtension { base, matrix }
    }

    pub fn theta_image(&self, s: usize) -> Form {
        let mut out = Form::zero();
        for t in 0..self.matrix.cols() {
            let c = self.matrix.get(s, t);
            if !c.is_zero() {
                out.add_assign(&Form::theta(t).scale(c));
            }
        }
        out
    }

    /// `φ(a θ^I) = φ(a) φ(θ^{i1}) ... φ(θ^{ik})`.
    pub fn apply(&self, calc: &Calculus, w: &Form) -> Form {
        let alg = calc.algebra();
        let mut out = Form::zero();
        for (m, a) in w.terms() {
            let mut acc = Form::from_element(self.base.apply(alg, a));
            for i in m.indices() {
                acc = calc.wedge(&acc, &self.theta_image(i));
            }
            out.add_assign(&acc);
        }
        out
    }

    pub fn inverse(&self) -> Result<FormExtension, GeometryError> {
        let base = self
            .base
            .declared_inverse()
            .ok_or(GeometryError::MissingInverse)?
            .clone();
        let matrix = self.matrix.inverse().map_err(|_| GeometryError::Singular)?;
        Ok(FormExtension { base, matrix })
    }

    /// First failure of `φ ∘ d = d ∘ φ` on generators, or of compatibility
    /// with the wedge rules and the `θ`-passing rules.
    pub fn differentiability_mismatch(&self, calc: &Calculus) -> Option<Mismatch> {
        let alg = calc.algebra();
        let table = alg.table();
        for s in table.base_symbols() {
            let g = alg.symbol(s);
            let lhs = self.apply(calc, &calc.d(&calc.element(&g)));
            let rhs = calc.d(&calc.element(&self.base.apply(alg, &g)));
            if lhs != rhs {
                return Some(Mismatch {
                    context: format!(
                        "φ(d {}) = d φ({})",
                        table.symbol_name(s),
                        table.symbol_name(s)
                    ),
                    lhs: calc.render(&lhs),
                    rhs: calc.render(&rhs),
                });
            }
        }
        let labels = calc.labels();
        for ((hi, lo), rhs) in calc.theta().rules() {
            let lhs = calc.wedge(&self.theta_image(hi), &self.theta_image(lo));
            let mut r = Form::zero();
            for (c, (i, j)) in rhs {
                r.add_assign(
                    &calc
                        .wedge(&self.theta_image(*i), &self.theta_image(*j))
                        .scale(c),
                );
            }
            if lhs != r {
                return Some(Mismatch {
                    context: format!("φ respects {}*{}", labels[hi], labels[lo]),
                    lhs: calc.render(&lhs),
                    rhs: calc.render(&r),
                });
            }
        }
        for (s, label) in labels.iter().enumerate().take(calc.dim()) {
            let img = self.theta_image(s);
            for g in alg.generators() {
                let lhs = calc.right_mul(&img, &self.base.apply(alg, &g));
                let moved = self.base.apply(alg, &calc.twist(s).apply(alg, &g));
                let rhs = calc.left_mul(&moved, &img);
                if lhs != rhs {
                    return Some(Mismatch {
                        context: format!("φ({}) passes {}", label, g.display(table)),
                        lhs: calc.render(&lhs),
                        rhs: calc.render(&rhs),
                    });
                }
            }
        }
        None
    }

    pub fn verify_differentiable(&self, calc: &Calculus) -> bool {
        self.differentiability_mismatch(calc).is_none()
    }
}

/// Solves `φ(d g) = d(φ g)` on generators for a scalar `θ` action.
pub fn derive_theta_action(calc: &Calculus, base: &Endomorphism) -> Result<Matrix, GeometryError> {
    let alg = calc.algebra();
    let n = calc.dim();
    // equations are keyed by (generator, θ index, word)
    let mut rows: BTreeMap<(usize, Mono, Word), Vec<Coeff>> = BTreeMap::new();
    let mut targets: BTreeMap<(usize, Mono, Word), Coeff> = BTreeMap::new();
    for (gi, g) in alg.generators().iter().enumerate() {
        let dg = calc.d(&calc.element(g));
        let want = calc.d(&calc.element(&base.apply(alg, g)));
        for s in 0..n {
            let cs = base.apply(alg, &dg.coefficient(Mono::single(s)));
            for t in 0..n {
                for (w, c) in cs.terms() {
                    let key = (gi, Mono::single(t), w.clone());
                    let row = rows
                        .entry(key)
                        .or_insert_with(|| vec![Coeff::zero(); n * n]);
                    row[s * n + t] = row[s * n + t].add(c);
                }
            }
        }
        for (m, a) in want.terms() {
            for (w, c) in a.terms() {
                let key = (gi, *m, w.clone());
                rows.entry(key.clone())
                    .or_insert_with(|| vec![Coeff::zero(); n * n]);
                targets.insert(key, c.clone());
            }
        }
    }
    let keys: Vec<_> = rows.keys().cloned().collect();
    let a = Matrix::from_rows(keys.iter().map(|k| rows[k].clone()).collect());
    let b: Vec<Coeff> = keys
        .iter()
        .map(|k| targets.get(k).cloned().unwrap_or_else(Coeff::zero))
        .collect();
    let x = solve_linear(&a, &b).ok_or(GeometryError::NotDifferentiable)?;
    let mut m = Matrix::zeros(n, n);
    for s in 0..n {
        for t in 0..n {
            m.set(s, t, x[s * n + t].clone());
        }
    }
    Ok(m)
}

/// `Σ g_{st} θ^s ⊗_L θ^t` with left coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TensorForm {
    terms: BTreeMap<(usize, usize), Element>,
}

impl TensorForm {
    pub fn zero() -> Self {
        TensorForm::default()
    }

    pub fn basis(s: usize, t: usize) -> Self {
        TensorForm::term(s, t, Element::one())
    }

    pub fn term(s: usize, t: usize, a: Element) -> Self {
        let mut out = TensorForm::zero();
        out.add_term(s, t, &a);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Element)> {
        self.terms.iter()
    }

    pub fn get(&self, s: usize, t: usize) -> Element {
        self.terms.get(&(s, t)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, s: usize, t: usize, a: &Element) {
        if a.is_zero() {
            return;
        }
        let e = self.terms.entry((s, t)).or_default();
        e.add_assign(a);
        if e.is_zero() {
            self.terms.remove(&(s, t));
        }
    }

    pub fn add_assign(&mut self, other: &TensorForm) {
        for ((s, t), a) in &other.terms {
            self.add_term(*s, *t, a);
        }
    }

    pub fn add(&self, other: &TensorForm) -> TensorForm {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &TensorForm) -> TensorForm {
        self.add(&other.scale(&Coeff::from_integer(-1)))
    }

    pub fn scale(&self, c: &Coeff) -> TensorForm {
        let mut out = TensorForm::zero();
        for ((s, t), a) in &self.terms {
            out.add_term(*s, *t, &a.scale(c));
        }
        out
    }

    pub fn display<'a>(
        &'a self,
        table: &'a GeneratorTable,
        labels: &'a [String],
    ) -> TensorDisplay<'a> {
        TensorDisplay {
            t: self,
            table,
            labels,
        }
    }
}

pub struct TensorDisplay<'a> {
    t: &'a TensorForm,
    table: &'a GeneratorTable,
    labels: &'a [String],
}

impl fmt::Display for TensorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((s, t), a) in &self.t.terms {
            let basis = format!("[{},{}]", self.labels[*s], self.labels[*t]);
            match a.as_single_term() {
                Some((w, c)) => {
                    let body = if w.is_empty() {
                        basis
                    } else {
                        format!("{}*{basis}", w.display(self.table))
                    };
                    write_scaled(f, c, Some(&body), first)?;
                }
                None => {
                    if !first {
                        f.write_str(" + ")?;
                    }
                    write!(f, "({})*{basis}", a.display(self.table))?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Transport operators `𝒱_s`: row `t` of `transport[s]` is `𝒱_s(θ^t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub transport: Vec<Vec<Form>>,
}

impl Connection {
    /// `𝒱_s(θ^t) = θ^t` for all `s`.
    pub fn trivial(n: usize) -> Self {
        let rows: Vec<Form> = (0..n).map(Form::theta).collect();
        Connection {
            transport: vec![rows; n],
        }
    }
}

/// A calculus together with differentiable extensions of its twists.
#[derive(Debug, Clone)]
pub struct Geometry<'a> {
    calc: &'a Calculus,
    ext: Vec<FormExtension>,
    inv: Vec<FormExtension>,
}

impl<'a> Geometry<'a> {
    /// `extensions[s]` extends `φ_s`.
    pub fn new(calc: &'a Calculus, extensions: Vec<FormExtension>) -> Result<Self, GeometryError> {
        if extensions.len() != calc.dim() {
            return Err(GeometryError::Arity {
                what: "extensions",
                expected: calc.dim(),
                got: extensions.len(),
            });
        }
        let inv = extensions
            .iter()
            .map(FormExtension::inverse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Geometry {
            calc,
            ext: extensions,
            inv,
        })
    }

    pub fn calculus(&self) -> &Calculus {
        self.calc
    }

    pub fn extension(&self, s: usize) -> &FormExtension {
        &self.ext[s]
    }

    pub fn inverse_extension(&self, s: usize) -> &FormExtension {
        &self.inv[s]
    }

    fn one_form_coeffs(&self, w: &Form) -> Vec<Element> {
        (0..self.calc.dim())
            .map(|s| w.coefficient(Mono::single(s)))
            .collect()
    }

    pub fn left_mul(&self, a: &Element, tf: &TensorForm) -> TensorForm {
        let alg = self.calc.algebra();
        let mut out = TensorForm::zero();
        for ((s, t), g) in tf.terms() {
            out.add_term(*s, *t, &alg.mul(a, g));
        }
        out
    }

    /// `(Σ a_s θ^s) ⊗_L (Σ b_t θ^t) = Σ a_s b_t θ^s ⊗_L θ^t`.
    pub fn tensor_l(&self, w: &Form, v: &Form) -> TensorForm {
        let alg = self.calc.algebra();
        let a = self.one_form_coeffs(w);
        let b = self.one_form_coeffs(v);
        let mut out = TensorForm::zero();
        for (s, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (t, y) in b.iter().enumerate() {
                out.add_term(s, t, &alg.mul(x, y));
            }
        }
        out
    }

    /// `ω ⊗_A η` in the `⊗_L` basis: `θ^s ⊗_A θ^t = θ^s ⊗_L φ_s(θ^t)`.
    pub fn tensor_a(&self, w: &Form, v: &Form) -> TensorForm {
        let alg = self.calc.algebra();
        let a = self.one_form_coeffs(w);
        let b = self.one_form_coeffs(v);
        let mut out = TensorForm::zero();
        for (s, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let phi = self.calc.twist(s);
            for (t, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let coeff = alg.mul(x, &phi.apply(alg, y));
                for u in 0..self.calc.dim() {
                    let m = self.ext[s].matrix.get(t, u);
                    if !m.is_zero() {
                        out.add_term(s, u, &coeff.scale(m));
                    }
                }
            }
        }
        out
    }

    /// `ω ⊗_L η` through its definition `θ^s ⊗_A φ_s^-1(...)`.
    pub fn tensor_l_via_a(&self, w: &Form, v: &Form) -> TensorForm {
        let mut out = TensorForm::zero();
        for (s, a) in self.one_form_coeffs(w).iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let left = self.calc.left_mul(a, &Form::theta(s));
            out.add_assign(&self.tensor_a(&left, &self.inv[s].apply(self.calc, v)));
        }
        out
    }

    /// `𝒱_s(Σ a_t θ^t) = Σ φ_s^-1(a_t) 𝒱_s(θ^t)`.
    pub fn transport_form(&self, conn: &Connection, s: usize, w: &Form) -> Form {
        let alg = self.calc.algebra();
        let phi_inv = &self.inv[s].base;
        let mut out = Form::zero();
        for (t, a) in self.one_form_coeffs(w).iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            out.add_assign(
                &self
                    .calc
                    .left_mul(&phi_inv.apply(alg, a), &conn.transport[s][t]),
            );
        }
        out
    }

    /// `∇ω = ϑ ⊗_A ω - Σ θ^s ⊗_A 𝒱_s ω`.
    pub fn nabla(&self, conn: &Connection, w: &Form) -> TensorForm {
        let mut out = self.tensor_a(self.calc.mc_form(), w);
        for s in 0..self.calc.dim() {
            let moved = self.transport_form(conn, s, w);
            out = out.sub(&self.tensor_a(&Form::theta(s), &moved));
        }
        out
    }

    /// `𝒱_s(a θ^t ⊗_L θ^u) = 𝒱_s(a θ^t) ⊗_L 𝒱_s(θ^u)`.
    pub fn transport_tensor(&self, conn: &Connection, s: usize, tf: &TensorForm) -> TensorForm {
        let mut out = TensorForm::zero();
        for ((t, u), a) in tf.terms() {
            let left = self.transport_form(conn, s, &self.calc.left_mul(a, &Form::theta(*t)));
            let right = self.transport_form(conn, s, &Form::theta(*u));
            out.add_assign(&self.tensor_l(&left, &right));
        }
        out
    }

    /// The same action computed entry by entry from the transport matrices.
    pub fn transport_tensor_entrywise(
        &self,
        conn: &Connection,
        s: usize,
        tf: &TensorForm,
    ) -> TensorForm {
        let alg = self.calc.algebra();
        let n = self.calc.dim();
        let phi_inv = &self.inv[s].base;
        let mut out = TensorForm::zero();
        for ((t, u), a) in tf.terms() {
            let a = phi_inv.apply(alg, a);
            for t2 in 0..n {
                let vt = conn.transport[s][*t].coefficient(Mono::single(t2));
                if vt.is_zero() {
                    continue;
                }
                let left = alg.mul(&a, &vt);
                for u2 in 0..n {
                    let vu = conn.transport[s][*u].coefficient(Mono::single(u2));
                    out.add_term(t2, u2, &alg.mul(&left, &vu));
                }
            }
        }
        out
    }

    /// `𝒱_s(g) = g` for every `s`.
    pub fn metric_compatible(&self, conn: &Connection, g: &TensorForm) -> bool {
        (0..self.calc.dim()).all(|s| self.transport_tensor(conn, s, g) == *g)
    }

    pub fn metric_compatible_entrywise(&self, conn: &Connection, g: &TensorForm) -> bool {
        (0..self.calc.dim()).all(|s| self.transport_tensor_entrywise(conn, s, g) == *g)
    }

    /// `θ^s ⊗_L θ^t ↦ θ^s ∧ φ_s^-1(θ^t)`, the wedge of the underlying `⊗_A`.
    pub fn wedge_project(&self, tf: &TensorForm) -> Form {
        let mut out = Form::zero();
        for ((s, t), a) in tf.terms() {
            let left = self.calc.left_mul(a, &Form::theta(*s));
            out.add_assign(&self.calc.wedge(&left, &self.inv[*s].theta_image(*t)));
        }
        out
    }

    /// `T(ω) = dω - π(∇ω)`.
    pub fn torsion(&self, conn: &Connection, w: &Form) -> Form {
        self.calc
            .d(w)
            .sub(&self.wedge_project(&self.nabla(conn, w)))
    }

    pub fn torsion_free(&self, conn: &Connection) -> bool {
        (0..self.calc.dim()).all(|s| self.torsion(conn, &Form::theta(s)).is_zero())
    }

    pub fn render(&self, tf: &TensorForm) -> String {
        tf.display(self.calc.algebra().table(), self.calc.labels())
            .to_string()
    }
}

#[cfg(test)]
mod tests;
