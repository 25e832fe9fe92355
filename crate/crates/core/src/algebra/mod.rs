//! Finitely presented algebras: generators with optional inverses, two-letter
//! rewrite rules, normal forms and a local-confluence checker.

mod confluence;
mod element;
mod localize;
mod rewrite;
mod table;
mod word;

use std::collections::HashMap;
use std::sync::RwLock;

use thiserror::Error;

use crate::coeff::{Coeff, CoeffError, ParameterSet};

pub use confluence::{ConfluenceReport, Overlap};
pub(crate) use element::write_scaled;
pub use element::{Element, ElementDisplay};
pub use localize::Localization;
pub use rewrite::{
    derive_inverse_rules, inverse_pair_rules, orient, FreeSum, Relation, RewriteSystem, Rule,
};
pub use table::GeneratorTable;
pub use word::{Sym, Word, WordDisplay};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("relation reduces to 0 = 0")]
    TrivialRelation,
    #[error("unsupported relation: {0}")]
    UnsupportedRelation(String),
    #[error("rule does not decrease: {0}")]
    NonDecreasingRule(String),
    #[error("`{0}` is not invertible")]
    NotInvertible(String),
    #[error("cannot adjoin inverse: {0}")]
    UnsupportedLocalization(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// A finitely presented associative unital algebra over Q(params).
pub struct Algebra {
    params: ParameterSet,
    table: GeneratorTable,
    relations: Vec<Relation>,
    system: RewriteSystem,
    localization: Option<Localization>,
    // Normal forms of (normal word) * (letter).
    cache: RwLock<HashMap<(Word, Sym), Element>>,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        Algebra {
            params: self.params.clone(),
            table: self.table.clone(),
            relations: self.relations.clone(),
            system: self.system.clone(),
            localization: self.localization.clone(),
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra")
            .field("generators", &self.table.generators())
            .field("rules", &self.system.rules().len())
            .finish()
    }
}

impl Algebra {
    /// Orients every relation into a rule, derives the inverse rules for
    /// invertible generators and adds the inverse-pair rules.
    pub fn new(
        params: ParameterSet,
        table: GeneratorTable,
        relations: Vec<Relation>,
    ) -> Result<Self, AlgebraError> {
        let mut rules = Vec::new();
        for rel in &relations {
            let rule = orient(rel, &table)?;
            let derived = derive_inverse_rules(&rule, &table)?;
            rules.push(rule);
            rules.extend(derived);
        }
        rules.extend(inverse_pair_rules(&table));
        let system = RewriteSystem::new(rules, &table)?;
        Ok(Algebra {
            params,
            table,
            relations,
            system,
            localization: None,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// An algebra driven by an explicit rule list (no relation bookkeeping).
    pub fn from_system(params: ParameterSet, table: GeneratorTable, system: RewriteSystem) -> Self {
        Algebra {
            params,
            table,
            relations: Vec::new(),
            system,
            localization: None,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn table(&self) -> &GeneratorTable {
        &self.table
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn localization(&self) -> Option<&Localization> {
        self.localization.as_ref()
    }

    pub fn symbol(&self, s: Sym) -> Element {
        Element::term(Coeff::one(), Word::letter(s))
    }

    pub fn generator(&self, name: &str) -> Result<Element, AlgebraError> {
        self.table
            .lookup(name)
            .map(|s| self.symbol(s))
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))
    }

    /// Base generators as elements, in declaration order.
    pub fn generators(&self) -> Vec<Element> {
        self.table.base_symbols().map(|s| self.symbol(s)).collect()
    }

    /// Normal form of an arbitrary word.
    pub fn word(&self, w: &Word) -> Element {
        self.mul_word_word(&Word::empty(), w)
    }

    pub fn normal_form(&self, expr: &[(Coeff, Word)]) -> Element {
        let mut out = Element::zero();
        for (c, w) in expr {
            out.add_scaled(c, &self.word(w));
        }
        out
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                let prod = self.mul_word_word(wa, wb);
                out.add_scaled(&ca.mul(cb), &prod);
            }
        }
        out
    }

    pub fn pow(&self, a: &Element, n: u32) -> Element {
        let mut out = Element::one();
        for _ in 0..n {
            out = self.mul(&out, a);
        }
        out
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(&self, a: &Element, b: &Element) -> Element {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// Inverse of `c * w` where every letter of `w` has an adjoined inverse.
    pub fn inverse_monomial(&self, x: &Element) -> Result<Element, AlgebraError> {
        let not_inv = || AlgebraError::NotInvertible(x.display(&self.table).to_string());
        let (w, c) = x.as_single_term().ok_or_else(not_inv)?;
        let mut letters = Vec::new();
        for s in w.letters() {
            letters.push(self.table.inverse(s).ok_or_else(not_inv)?);
        }
        letters.reverse();
        Ok(self.word(&Word::from_letters(letters)).scale(&c.inv()?))
    }

    /// Normal form of `u * v` where `u` is already normal.
    fn mul_word_word(&self, u: &Word, v: &Word) -> Element {
        let mut acc = Element::term(Coeff::one(), u.clone());
        for g in v.letters() {
            let mut next = Element::zero();
            for (w, c) in acc.terms() {
                next.add_scaled(c, &self.mul_word_letter(w, g));
            }
            acc = next;
        }
        acc
    }

    /// Normal form of `w * g` for a normal word `w`: only the new adjacent
    /// pair can form a redex.
    fn mul_word_letter(&self, w: &Word, g: Sym) -> Element {
        let key = (w.clone(), g);
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let out = match w.last().and_then(|last| self.system.get(last, g)) {
            Some(rule) => {
                let prefix = w.without_last();
                let mut out = Element::zero();
                for (c, rw) in &rule.rhs {
                    out.add_scaled(c, &self.mul_word_word(&prefix, rw));
                }
                out
            }
            None => {
                let appended = Element::term(Coeff::one(), w.pushed(g));
                match &self.localization {
                    Some(loc) => loc.reduce(self, appended),
                    None => appended,
                }
            }
        };
        self.cache.write().unwrap().insert(key, out.clone());
        out
    }

    /// Checks `normal_form(L) = normal_form(R)` for every defining relation.
    pub fn unsound_relations(&self) -> Vec<usize> {
        self.relations
            .iter()
            .enumerate()
            .filter(|(_, r)| self.normal_form(&r.lhs) != self.normal_form(&r.rhs))
            .map(|(k, _)| k)
            .collect()
    }

    /// Substitutes parameters in every coefficient of an element.
    pub fn substitute(
        &self,
        x: &Element,
        bindings: &std::collections::BTreeMap<crate::coeff::Param, Coeff>,
    ) -> Result<Element, CoeffError> {
        x.map_coefficients(|c| c.substitute(bindings))
    }
}
