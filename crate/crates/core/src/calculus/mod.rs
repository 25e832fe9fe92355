//! Inner differential calculi over a presented algebra.
//!
//! One-forms have a left basis `θ^s` with `θ^s a = φ_s(a) θ^s`; the
//! differential is the graded commutator with `ϑ = Σ a_s θ^s`.

mod form;
mod relations;
mod theta;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, Element, Sym, Word};
use crate::coeff::{Coeff, CoeffError, Param};
use crate::morphism::{Endomorphism, MorphismError, TwistedDerivation};
use crate::sample::Sampler;

pub use form::{Form, FormDisplay};
pub use relations::{DerivedRelation, Orientation};
pub use theta::{Mono, MonoSum, ThetaAlgebra, ThetaRule, MAX_THETA};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("no wedge rule for t{}*t{}", .0 + 1, .1 + 1)]
    MissingThetaRule(usize, usize),
    #[error("invalid wedge rule: {0}")]
    BadThetaRule(String),
    #[error("at most 16 basis 1-forms are supported, got {0}")]
    TooManyThetas(usize),
    #[error("expected {expected} {what}, got {got}")]
    Arity {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("`{element} {form}` is not expressible in the given span")]
    Inexpressible { element: String, form: String },
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// The data of an inner calculus.
#[derive(Debug, Clone)]
pub struct CalculusSpec {
    pub labels: Vec<String>,
    pub twists: Vec<Endomorphism>,
    pub weights: Vec<Element>,
    pub theta_rules: Vec<ThetaRule>,
    /// Optional independently given differentials of the base generators.
    /// When present, `verify_inner` compares them against `[ϑ, g]`.
    pub differentials: Vec<Option<Form>>,
}

/// A calculus bound to its algebra, with the `θ` product table and the
/// composite twists `φ_I` precomputed.
#[derive(Debug, Clone)]
pub struct Calculus {
    algebra: Arc<Algebra>,
    spec: CalculusSpec,
    theta: ThetaAlgebra,
    twists: HashMap<Mono, Endomorphism>,
    derivations: Vec<TwistedDerivation>,
    vartheta: Form,
    letter_d: Vec<Form>,
}

/// A failed identity with both sides rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub context: String,
    pub lhs: String,
    pub rhs: String,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} != {}", self.context, self.lhs, self.rhs)
    }
}

impl Calculus {
    pub fn new(algebra: Arc<Algebra>, spec: CalculusSpec) -> Result<Self, CalculusError> {
        let n = spec.labels.len();
        for (what, got) in [
            ("twists", spec.twists.len()),
            ("weights", spec.weights.len()),
        ] {
            if got != n {
                return Err(CalculusError::Arity {
                    what,
                    expected: n,
                    got,
                });
            }
        }
        let gens = algebra.table().generator_count();
        if !spec.differentials.is_empty() && spec.differentials.len() != gens {
            return Err(CalculusError::Arity {
                what: "generator differentials",
                expected: gens,
                got: spec.differentials.len(),
            });
        }
        let theta = ThetaAlgebra::new(n, &spec.theta_rules)?;
        let mut twists = HashMap::new();
        for m in theta.basis() {
            let mut phi = Endomorphism::identity(&algebra);
            for i in m.indices() {
                phi = phi.compose(&algebra, &spec.twists[i]);
            }
            twists.insert(m, phi);
        }
        let derivations = spec
            .weights
            .iter()
            .zip(&spec.twists)
            .map(|(w, t)| TwistedDerivation::new(w.clone(), t.clone()))
            .collect();
        let mut vartheta = Form::zero();
        for (s, w) in spec.weights.iter().enumerate() {
            vartheta.add_term(Mono::single(s), w);
        }
        let mut calc = Calculus {
            algebra,
            spec,
            theta,
            twists,
            derivations,
            vartheta,
            letter_d: Vec::new(),
        };
        calc.letter_d = calc.letter_differentials();
        Ok(calc)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn spec(&self) -> &CalculusSpec {
        &self.spec
    }

    pub fn theta(&self) -> &ThetaAlgebra {
        &self.theta
    }

    pub fn labels(&self) -> &[String] {
        &self.spec.labels
    }

    pub fn dim(&self) -> usize {
        self.spec.labels.len()
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.spec.labels.iter().position(|l| l == name)
    }

    pub fn twist(&self, s: usize) -> &Endomorphism {
        &self.spec.twists[s]
    }

    /// `φ_I = φ_{i1} ∘ ... ∘ φ_{ik}`, so that `θ^I a = φ_I(a) θ^I`.
    pub fn mono_twist(&self, m: Mono) -> &Endomorphism {
        &self.twists[&m]
    }

    pub fn derivation(&self, s: usize) -> &TwistedDerivation {
        &self.derivations[s]
    }

    pub fn render(&self, w: &Form) -> String {
        w.display(self.algebra.table(), &self.spec.labels)
            .to_string()
    }

    pub fn theta_form(&self, s: usize) -> Form {
        Form::theta(s)
    }

    pub fn element(&self, a: &Element) -> Form {
        Form::from_element(a.clone())
    }

    /// `a ∧ ω`.
    pub fn left_mul(&self, a: &Element, w: &Form) -> Form {
        let alg = self.algebra();
        let mut out = Form::zero();
        for (m, b) in w.terms() {
            out.add_term(*m, &alg.mul(a, b));
        }
        out
    }

    /// `ω ∧ a`.
    pub fn right_mul(&self, w: &Form, a: &Element) -> Form {
        let alg = self.algebra();
        let mut out = Form::zero();
        for (m, b) in w.terms() {
            let moved = self.mono_twist(*m).apply(alg, a);
            out.add_term(*m, &alg.mul(b, &moved));
        }
        out
    }

    pub fn wedge(&self, x: &Form, y: &Form) -> Form {
        let alg = self.algebra();
        let mut out = Form::zero();
        for (mx, a) in x.terms() {
            let phi = self.mono_twist(*mx);
            for (my, b) in y.terms() {
                let prod = self.theta.mul(*mx, *my);
                if prod.is_empty() {
                    continue;
                }
                let coeff = alg.mul(a, &phi.apply(alg, b));
                for (m, c) in prod {
                    out.add_term(*m, &coeff.scale(c));
                }
            }
        }
        out
    }

    /// Graded commutator `[x, y] = x y - (-1)^{|x||y|} y x` on homogeneous parts.
    pub fn graded_commutator(&self, x: &Form, y: &Form) -> Form {
        let mut out = Form::zero();
        for i in 0..=x.max_grade() {
            let xi = x.component(i);
            if xi.is_zero() {
                continue;
            }
            for j in 0..=y.max_grade() {
                let yj = y.component(j);
                if yj.is_zero() {
                    continue;
                }
                let sign = if (i * j) % 2 == 1 { 1 } else { -1 };
                out.add_assign(&self.wedge(&xi, &yj));
                out.add_assign(&self.wedge(&yj, &xi).scale(&Coeff::from_integer(sign)));
            }
        }
        out
    }

    /// `da = Σ e_s(a) θ^s`.
    pub fn d_zero(&self, a: &Element) -> Form {
        let mut out = Form::zero();
        for (s, e) in self.derivations.iter().enumerate() {
            out.add_term(Mono::single(s), &e.apply(self.algebra(), a));
        }
        out
    }

    /// `ϑ = Σ a_s θ^s`.
    pub fn mc_form(&self) -> &Form {
        &self.vartheta
    }

    /// `dω = [ϑ, ω]` (graded).
    pub fn d(&self, w: &Form) -> Form {
        self.graded_commutator(&self.vartheta, w)
    }

    /// Differential of a symbol from the given generator differentials,
    /// falling back to `d_zero` where none is given.
    fn letter_differentials(&self) -> Vec<Form> {
        let alg = self.algebra();
        let table = alg.table();
        let given = |g: usize| self.spec.differentials.get(g).cloned().flatten();
        let mut out: Vec<Form> = vec![Form::zero(); table.symbol_count()];
        let loc = alg.localization().map(|l| l.symbol());
        for s in table.symbols() {
            if table.is_inverse(s) || Some(s) == loc {
                continue;
            }
            let g = table.generator_of(s);
            out[s as usize] = given(g).unwrap_or_else(|| self.d_zero(&alg.symbol(s)));
        }
        for s in table.symbols() {
            if table.is_inverse(s) {
                let b = table.inverse(s).expect("base");
                let inv = alg.symbol(s);
                let inner = self.right_mul(&self.left_mul(&inv, &out[b as usize]), &inv);
                out[s as usize] = inner.neg();
            }
        }
        if let (Some(ls), Some(l)) = (loc, alg.localization()) {
            let g = table.generator_of(ls);
            out[ls as usize] = match given(g) {
                Some(f) => f,
                None => {
                    let dn = self.leibniz_with(&out, l.element());
                    let ni = alg.symbol(ls);
                    self.right_mul(&self.left_mul(&ni, &dn), &ni).neg()
                }
            };
        }
        out
    }

    fn leibniz_with(&self, letter_d: &[Form], a: &Element) -> Form {
        let alg = self.algebra();
        let mut out = Form::zero();
        for (w, c) in a.terms() {
            let letters: Vec<Sym> = w.letters().collect();
            for i in 0..letters.len() {
                let prefix = alg.word(&Word::from_letters(letters[..i].iter().copied()));
                let suffix = alg.word(&Word::from_letters(letters[i + 1..].iter().copied()));
                let term = self.right_mul(
                    &self.left_mul(&prefix, &letter_d[letters[i] as usize]),
                    &suffix,
                );
                out.add_assign(&term.scale(c));
            }
        }
        out
    }

    /// `d` on elements through the Leibniz rule from the generator differentials.
    pub fn d_leibniz(&self, a: &Element) -> Form {
        self.leibniz_with(&self.letter_d, a)
    }

    pub fn has_explicit_differentials(&self) -> bool {
        self.spec.differentials.iter().any(Option::is_some)
    }

    /// First failure of `d g = [ϑ, g]` over the generators and then over
    /// `samples` random elements.
    pub fn inner_mismatch(&self, sampler: &mut Sampler, samples: usize) -> Option<Mismatch> {
        let alg = self.algebra();
        let table = alg.table();
        for s in table.symbols() {
            let g = alg.symbol(s);
            let lhs = &self.letter_d[s as usize];
            let rhs = self.d(&self.element(&g));
            if *lhs != rhs {
                return Some(Mismatch {
                    context: format!("d({})", table.symbol_name(s)),
                    lhs: self.render(lhs),
                    rhs: self.render(&rhs),
                });
            }
        }
        for _ in 0..samples {
            let x = sampler.element(alg, 3);
            let lhs = self.d_leibniz(&x);
            let rhs = self.d(&self.element(&x));
            if lhs != rhs {
                return Some(Mismatch {
                    context: format!("d({})", x.display(table)),
                    lhs: self.render(&lhs),
                    rhs: self.render(&rhs),
                });
            }
        }
        None
    }

    pub fn verify_inner(&self, sampler: &mut Sampler, samples: usize) -> bool {
        self.inner_mismatch(sampler, samples).is_none()
    }

    /// `Θ = ϑ∧ϑ` must commute with every generator and every `θ^s`.
    pub fn d_squared_mismatch(&self) -> Option<Mismatch> {
        let big = self.wedge(&self.vartheta, &self.vartheta);
        let alg = self.algebra();
        let mut probes: Vec<(String, Form)> = alg
            .table()
            .base_symbols()
            .map(|s| (alg.table().symbol_name(s), self.element(&alg.symbol(s))))
            .collect();
        for (s, l) in self.spec.labels.iter().enumerate() {
            probes.push((l.clone(), Form::theta(s)));
        }
        for (name, f) in probes {
            let lhs = self.wedge(&big, &f);
            let rhs = self.wedge(&f, &big);
            if lhs != rhs {
                return Some(Mismatch {
                    context: format!("ϑ∧ϑ against {name}"),
                    lhs: self.render(&lhs),
                    rhs: self.render(&rhs),
                });
            }
        }
        None
    }

    pub fn verify_d_squared(&self) -> bool {
        self.d_squared_mismatch().is_none()
    }

    /// Wedge rules whose terms are incompatible with the twists: for
    /// `θ^j θ^i -> Σ c θ^k θ^l`, `φ_j φ_i` must equal `φ_k φ_l` for every term.
    pub fn twist_conflicts(&self) -> Vec<Mismatch> {
        let alg = self.algebra();
        let mut out = Vec::new();
        for ((hi, lo), rhs) in self.theta.rules() {
            let left = self.spec.twists[hi].compose(alg, &self.spec.twists[lo]);
            for (_, (i, j)) in rhs {
                let right = self.spec.twists[*i].compose(alg, &self.spec.twists[*j]);
                for g in alg.generators() {
                    let a = left.apply(alg, &g);
                    let b = right.apply(alg, &g);
                    if a != b {
                        let l = &self.spec.labels;
                        out.push(Mismatch {
                            context: format!(
                                "{}*{} -> {}*{} on {}",
                                l[hi],
                                l[lo],
                                l[*i],
                                l[*j],
                                g.display(alg.table())
                            ),
                            lhs: a.display(alg.table()).to_string(),
                            rhs: b.display(alg.table()).to_string(),
                        });
                    }
                }
            }
        }
        out
    }

    /// Differentials of the symbols, as used by `d_leibniz`.
    pub fn symbol_differential(&self, s: Sym) -> &Form {
        &self.letter_d[s as usize]
    }

    pub fn substitute_form(
        &self,
        w: &Form,
        bindings: &BTreeMap<Param, Coeff>,
    ) -> Result<Form, CoeffError> {
        w.map_scalars(|c| c.substitute(bindings))
    }
}

#[cfg(test)]
mod tests;
