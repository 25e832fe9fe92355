//! Fully wired models built from description files, and their check suites.

mod report;
mod suite;

use std::collections::BTreeMap;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::algebra::{Algebra, Element};
use crate::calculus::{Calculus, Form, Orientation};
use crate::coeff::Coeff;
use crate::dsl::{build_model, parse_expr, BuildOptions, Document, DslError, Scope, Value};
use crate::geometry::{Connection, FormExtension, Geometry, GeometryError, TensorForm};
use crate::morphism::Endomorphism;

pub use report::{CheckResult, Report, ReportFormat, Status};
pub use suite::run_suite;

/// The quantum torus with its two-dimensional calculus.
pub const QUANTUM_TORUS_SRC: &str = include_str!("../../models/quantum_torus.ncd");
/// `GL_{p,q}(2)` with `b`, `c` inverted and the four-dimensional calculus.
pub const GLPQ_SRC: &str = include_str!("../../models/glpq2.ncd");
/// The same model with the wedge rule `t4*t2 = -t2*t4`.
pub const GLPQ_SYM_SRC: &str = include_str!("../../models/glpq2_sym.ncd");

/// Shipped model files by file name.
pub const SHIPPED: &[(&str, &str)] = &[
    ("quantum_torus.ncd", QUANTUM_TORUS_SRC),
    ("glpq2.ncd", GLPQ_SRC),
    ("glpq2_sym.ncd", GLPQ_SYM_SRC),
];

#[derive(Debug, Clone, PartialEq)]
pub enum CheckKind {
    Equal(Form, Form),
    Passes(Form, String),
    Compatible {
        negated: bool,
        connection: String,
        metric: String,
    },
    TorsionFree {
        negated: bool,
        connection: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub anchor: Option<String>,
    /// Source text of the check body.
    pub source: String,
    pub kind: CheckKind,
}

#[derive(Debug, Clone)]
pub struct Derivation {
    pub name: String,
    pub anchor: Option<String>,
    pub forms: Vec<(String, Form)>,
    pub elements: Vec<(String, Element)>,
    pub orientation: Orientation,
    pub expect: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    pub document: Document,
    pub params: Vec<String>,
    pub subst: BTreeMap<String, Coeff>,
    pub algebra: Arc<Algebra>,
    /// Source text of each relation, for diagnostics.
    pub relation_sources: Vec<String>,
    pub elements: IndexMap<String, Element>,
    pub automorphisms: IndexMap<String, Endomorphism>,
    pub calculus: Option<Calculus>,
    /// Automorphism name of each twist.
    pub twist_names: Vec<String>,
    pub forms: IndexMap<String, Form>,
    /// Keyed by automorphism name.
    pub extensions: IndexMap<String, FormExtension>,
    pub metrics: IndexMap<String, TensorForm>,
    pub connections: IndexMap<String, Connection>,
    pub checks: Vec<Check>,
    pub derivations: Vec<Derivation>,
}

impl Model {
    pub fn parse(src: &str) -> Result<Model, DslError> {
        Model::parse_with(src, BuildOptions::default())
    }

    pub fn parse_with(src: &str, opts: BuildOptions) -> Result<Model, DslError> {
        let doc = crate::dsl::parse_document(src)?;
        build_model(doc, opts)
    }

    pub fn scope(&self) -> Scope<'_> {
        Scope {
            params: &self.params,
            subst: &self.subst,
            algebra: Some(&self.algebra),
            elements: &self.elements,
            calc: self.calculus.as_ref(),
            forms: &self.forms,
        }
    }

    /// Evaluates an expression to its normal form.
    pub fn eval(&self, src: &str) -> Result<Value, DslError> {
        let e = parse_expr(src)?;
        self.scope()
            .eval(&e)
            .map_err(|m| DslError::semantic(Default::default(), m))
    }

    pub fn render(&self, v: &Value) -> String {
        v.render(&self.algebra, self.calculus.as_ref())
    }

    /// The geometry over the calculus, when every twist has an extension.
    pub fn geometry(&self) -> Option<Result<Geometry<'_>, GeometryError>> {
        let calc = self.calculus.as_ref()?;
        let ext: Option<Vec<FormExtension>> = self
            .twist_names
            .iter()
            .map(|n| self.extensions.get(n).cloned())
            .collect();
        Some(Geometry::new(calc, ext?))
    }

    pub fn export(&self) -> String {
        crate::dsl::export(&self.document)
    }
}

pub fn build_quantum_torus() -> Model {
    Model::parse(QUANTUM_TORUS_SRC).expect("shipped model")
}

/// With `adjoin_det_inverse` the quantum determinant `D` is inverted as a
/// new generator `Di`.
pub fn build_glpq(adjoin_det_inverse: bool) -> Model {
    let opts = BuildOptions {
        localize: adjoin_det_inverse.then(|| ("D".to_string(), "Di".to_string())),
        ..Default::default()
    };
    Model::parse_with(GLPQ_SRC, opts).expect("shipped model")
}

pub fn build_glpq_sym() -> Model {
    Model::parse(GLPQ_SYM_SRC).expect("shipped model")
}

/// The GL model with `r` left independent of `p` and `q`. Automorphisms
/// that need `r = pq` are kept and reported by the suite.
pub fn build_glpq_r_free() -> Model {
    let opts = BuildOptions {
        skip_subst: true,
        lenient: true,
        ..Default::default()
    };
    let mut m = Model::parse_with(GLPQ_SRC, opts).expect("shipped model");
    m.name = format!("{}-r-free", m.name);
    m
}

#[cfg(test)]
mod tests;
