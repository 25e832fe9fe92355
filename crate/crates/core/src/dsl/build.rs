use std::collections::BTreeMap;
use std::sync::Arc;

use indexmap::IndexMap;

use super::ast::*;
use super::eval::{Scope, Value};
use super::{DslError, Pos};
use crate::algebra::{Algebra, Element, GeneratorTable, Relation, Word};
use crate::calculus::{Calculus, CalculusSpec, Form, Orientation, ThetaRule};
use crate::coeff::{Coeff, Matrix, ParameterSet};
use crate::geometry::{Connection, FormExtension, TensorForm};
use crate::models::{Check, CheckKind, Derivation, Model};
use crate::morphism::Endomorphism;

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Ignore `subst` statements.
    pub skip_subst: bool,
    /// Accept automorphisms that break a relation (the suite reports them).
    pub lenient: bool,
    /// `(element, symbol)`: adjoin an inverse of the named element right
    /// after its definition, as if `localize element as symbol;` followed it.
    pub localize: Option<(String, String)>,
}

#[derive(Default)]
struct Builder {
    opts: BuildOptions,
    name: Option<String>,
    params: Vec<String>,
    subst: BTreeMap<String, Coeff>,
    gens: Vec<String>,
    invertible: Vec<String>,
    relations: Vec<(Pos, Relation)>,
    relation_sources: Vec<String>,
    algebra: Option<Arc<Algebra>>,
    elements: IndexMap<String, Element>,
    automorphisms: IndexMap<String, Endomorphism>,
    calc: Option<Calculus>,
    twist_names: Vec<String>,
    forms: IndexMap<String, Form>,
    diffs: BTreeMap<usize, Form>,
    extensions: IndexMap<String, FormExtension>,
    geometry_pos: Option<Pos>,
    metrics: IndexMap<String, TensorForm>,
    connections: IndexMap<String, Connection>,
    checks: Vec<Check>,
    derivations: Vec<Derivation>,
}

type Res<T> = Result<T, DslError>;

fn err<T>(pos: Pos, msg: impl Into<String>) -> Res<T> {
    Err(DslError::semantic(pos, msg))
}

/// Builds a model, verifying the presentation and automorphisms.
pub fn build_model(doc: Document, opts: BuildOptions) -> Result<Model, DslError> {
    let mut b = Builder {
        opts,
        ..Default::default()
    };
    for item in &doc.items {
        b.statement(item.pos, &item.stmt)?;
    }
    b.finish(doc)
}

impl Builder {
    fn scope(&self) -> Scope<'_> {
        Scope {
            params: &self.params,
            subst: &self.subst,
            algebra: self.algebra.as_deref(),
            elements: &self.elements,
            calc: self.calc.as_ref(),
            forms: &self.forms,
        }
    }

    fn eval(&self, pos: Pos, e: &Expr) -> Res<Value> {
        self.scope()
            .eval(e)
            .map_err(|m| DslError::semantic(pos, format!("in `{e}`: {m}")))
    }

    fn eval_element(&self, pos: Pos, e: &Expr) -> Res<Element> {
        match self.eval(pos, e)?.into_element() {
            Some(x) => Ok(x),
            None => err(pos, format!("`{e}` is a form, expected an algebra element")),
        }
    }

    fn is_taken(&self, name: &str) -> bool {
        self.params.iter().any(|p| p == name)
            || self.gens.iter().any(|g| g == name)
            || self
                .algebra
                .as_ref()
                .is_some_and(|a| a.table().lookup(name).is_some())
            || self.elements.contains_key(name)
            || self.automorphisms.contains_key(name)
            || self
                .calc
                .as_ref()
                .is_some_and(|c| c.label_index(name).is_some())
            || self.forms.contains_key(name)
            || self.metrics.contains_key(name)
            || self.connections.contains_key(name)
    }

    fn fresh(&self, pos: Pos, name: &str) -> Res<()> {
        if self.is_taken(name) {
            return err(pos, format!("`{name}` is already defined"));
        }
        if name == "d" && self.calc.is_some() {
            return err(pos, "`d` is reserved for the differential");
        }
        Ok(())
    }

    fn algebra(&mut self, pos: Pos) -> Res<Arc<Algebra>> {
        if let Some(a) = &self.algebra {
            return Ok(a.clone());
        }
        if self.gens.is_empty() {
            return err(pos, "no generators declared");
        }
        let params = ParameterSet::new(self.params.iter())
            .map_err(|e| DslError::semantic(pos, e.to_string()))?;
        let table = GeneratorTable::new(&self.gens, &self.invertible)
            .map_err(|e| DslError::semantic(pos, e.to_string()))?;
        let rels: Vec<Relation> = self.relations.iter().map(|(_, r)| r.clone()).collect();
        let alg = Algebra::new(params, table, rels).map_err(|e| {
            // point at the offending relation when there is one
            let at = self
                .relations
                .iter()
                .zip(&self.relation_sources)
                .find(|((_, r), _)| {
                    let t = GeneratorTable::new(&self.gens, &self.invertible).expect("checked");
                    crate::algebra::orient(r, &t)
                        .and_then(|rule| crate::algebra::derive_inverse_rules(&rule, &t))
                        .is_err()
                });
            match at {
                Some(((p, _), src)) => DslError::semantic(*p, format!("relation `{src}`: {e}")),
                None => DslError::semantic(pos, e.to_string()),
            }
        })?;
        let alg = Arc::new(alg);
        self.algebra = Some(alg.clone());
        Ok(alg)
    }

    fn before_algebra(&self, pos: Pos, what: &str) -> Res<()> {
        if self.algebra.is_some() {
            return err(
                pos,
                format!("{what} must come before elements, automorphisms and forms"),
            );
        }
        Ok(())
    }

    fn calc(&self, pos: Pos) -> Res<&Calculus> {
        self.calc
            .as_ref()
            .ok_or_else(|| DslError::semantic(pos, "no calc block declared"))
    }

    fn theta_index(&self, pos: Pos, name: &str) -> Res<usize> {
        self.calc(pos)?
            .label_index(name)
            .ok_or_else(|| DslError::semantic(pos, format!("unknown basis form `{name}`")))
    }

    fn statement(&mut self, pos: Pos, stmt: &Stmt) -> Res<()> {
        match stmt {
            Stmt::Model(n) => {
                if self.name.is_some() {
                    return err(pos, "model name given twice");
                }
                self.name = Some(n.clone());
            }
            Stmt::Param(v) => {
                self.before_algebra(pos, "parameters")?;
                for p in v {
                    self.fresh(pos, p)?;
                    self.params.push(p.clone());
                }
            }
            Stmt::Subst(p, e) => {
                if !self.params.contains(p) {
                    return err(pos, format!("unknown parameter `{p}`"));
                }
                if self.subst.contains_key(p) {
                    return err(pos, format!("`{p}` is substituted twice"));
                }
                let v = self.eval(pos, e)?;
                let Some(c) = v.into_scalar() else {
                    return err(pos, format!("`{e}` is not a scalar"));
                };
                if !self.opts.skip_subst {
                    self.subst.insert(p.clone(), c);
                }
            }
            Stmt::Gen(v) => {
                self.before_algebra(pos, "generators")?;
                for g in v {
                    self.fresh(pos, g)?;
                    self.gens.push(g.clone());
                }
            }
            Stmt::Invertible(v) => {
                self.before_algebra(pos, "invertible")?;
                for g in v {
                    if !self.gens.contains(g) {
                        return err(pos, format!("unknown generator `{g}`"));
                    }
                    if self.invertible.contains(g) {
                        return err(pos, format!("`{g}` is declared invertible twice"));
                    }
                    self.invertible.push(g.clone());
                }
            }
            Stmt::Rel(lhs, rhs) => {
                self.before_algebra(pos, "relations")?;
                let src = format!("{lhs} = {rhs}");
                let gens = self.gens.clone();
                let table = GeneratorTable::new(&self.gens, &self.invertible)
                    .map_err(|e| DslError::semantic(pos, e.to_string()))?;
                let letter = |n: &str| {
                    if gens.iter().any(|g| g == n) {
                        table.lookup(n)
                    } else {
                        None
                    }
                };
                let side = |e: &Expr| -> Res<Vec<(Coeff, Word)>> {
                    let poly = self
                        .scope()
                        .eval_free(e, &letter)
                        .map_err(|m| DslError::semantic(pos, format!("relation `{src}`: {m}")))?;
                    Ok(poly
                        .into_iter()
                        .map(|(w, c)| (c, Word::from_letters(w)))
                        .collect())
                };
                let rel = Relation {
                    lhs: side(lhs)?,
                    rhs: side(rhs)?,
                };
                self.relations.push((pos, rel));
                self.relation_sources.push(src);
            }
            Stmt::Element(n, e) => {
                self.algebra(pos)?;
                self.fresh(pos, n)?;
                let x = self.eval_element(pos, e)?;
                self.elements.insert(n.clone(), x);
                if let Some((el, sym)) = self.opts.localize.clone() {
                    if &el == n {
                        self.localize(pos, &el, &sym)?;
                    }
                }
            }
            Stmt::Localize(el, sym) => self.localize(pos, el, sym)?,
            Stmt::Auto(n, maps) => {
                let alg = self.algebra(pos)?;
                self.fresh(pos, n)?;
                let mut images = Vec::new();
                for (g, e) in maps {
                    let s = alg.table().lookup(g);
                    if s.is_none_or(|s| alg.table().is_inverse(s)) {
                        return err(pos, format!("automorphism `{n}`: unknown generator `{g}`"));
                    }
                    images.push((g.as_str(), self.eval_element(pos, e)?));
                }
                let phi = Endomorphism::new(&alg, &images)
                    .map_err(|e| DslError::semantic(pos, format!("automorphism `{n}`: {e}")))?;
                if let Some(i) = phi.broken_relation(&alg).filter(|_| !self.opts.lenient) {
                    let what = self
                        .relation_sources
                        .get(i)
                        .map_or_else(|| format!("rule {i}"), |s| format!("`{s}`"));
                    return err(
                        pos,
                        format!("automorphism `{n}` does not respect the relation {what}"),
                    );
                }
                self.automorphisms.insert(n.clone(), phi);
            }
            Stmt::Calc(items) => self.calc_block(pos, items)?,
            Stmt::Form(n, e) => {
                self.algebra(pos)?;
                self.fresh(pos, n)?;
                let f = self.eval(pos, e)?.into_form();
                self.forms.insert(n.clone(), f);
            }
            Stmt::Diff(g, e) => {
                let alg = self.algebra(pos)?;
                self.calc(pos)?;
                let gi = match alg.table().lookup(g) {
                    Some(s) if !alg.table().is_inverse(s) => alg.table().generator_of(s),
                    _ => return err(pos, format!("unknown generator `{g}`")),
                };
                if self.diffs.contains_key(&gi) {
                    return err(pos, format!("differential of `{g}` given twice"));
                }
                let f = self.eval(pos, e)?.into_form();
                if !f.is_zero() && f.grade() != Some(1) {
                    return err(pos, format!("d({g}) must be a 1-form"));
                }
                self.diffs.insert(gi, f);
            }
            Stmt::Extend(n, maps) => {
                let dim = self.calc(pos)?.dim();
                let Some(base) = self.automorphisms.get(n).cloned() else {
                    return err(pos, format!("unknown automorphism `{n}`"));
                };
                if self.extensions.contains_key(n) {
                    return err(pos, format!("`{n}` is extended twice"));
                }
                let mut m = Matrix::identity(dim);
                for (t, e) in maps {
                    let s = self.theta_index(pos, t)?;
                    for k in 0..dim {
                        m.set(s, k, Coeff::zero());
                    }
                    let f = self.eval(pos, e)?.into_form();
                    for (mono, a) in f.terms() {
                        let c = a.as_scalar();
                        match (mono.grade(), c) {
                            (1, Some(c)) => m.set(s, mono.indices().next().expect("grade 1"), c),
                            _ => {
                                return err(
                                    pos,
                                    format!(
                                    "image of `{t}` must be a constant combination of basis forms"
                                ),
                                )
                            }
                        }
                    }
                }
                self.geometry_pos.get_or_insert(pos);
                self.extensions
                    .insert(n.clone(), FormExtension::new(base, m));
            }
            Stmt::Metric(n, entries) => {
                self.calc(pos)?;
                self.fresh(pos, n)?;
                let mut g = TensorForm::zero();
                for (i, j, e) in entries {
                    let (i, j) = (self.theta_index(pos, i)?, self.theta_index(pos, j)?);
                    g.add_term(i, j, &self.eval_element(pos, e)?);
                }
                self.geometry_pos.get_or_insert(pos);
                self.metrics.insert(n.clone(), g);
            }
            Stmt::Connection(n, entries) => {
                let dim = self.calc(pos)?.dim();
                self.fresh(pos, n)?;
                let mut conn = Connection::trivial(dim);
                for (s, t, e) in entries {
                    let (s, t) = (self.theta_index(pos, s)?, self.theta_index(pos, t)?);
                    let f = self.eval(pos, e)?.into_form();
                    if !f.is_zero() && f.grade() != Some(1) {
                        return err(
                            pos,
                            format!("transport of a basis form must be a 1-form, got `{e}`"),
                        );
                    }
                    conn.transport[s][t] = f;
                }
                self.geometry_pos.get_or_insert(pos);
                self.connections.insert(n.clone(), conn);
            }
            Stmt::Check(c) => {
                self.algebra(pos)?;
                self.check(pos, c, false)?;
                if !c.mirror.is_empty() {
                    self.check(pos, c, true)?;
                }
            }
            Stmt::Derive(d) => self.derive(pos, d)?,
        }
        Ok(())
    }

    fn localize(&mut self, pos: Pos, el: &str, sym: &str) -> Res<()> {
        if !self.automorphisms.is_empty() || self.calc.is_some() || !self.forms.is_empty() {
            return err(pos, "localize must come before automorphisms and forms");
        }
        let alg = self.algebra(pos)?;
        if alg.localization().is_some() {
            return err(pos, "only one element can be inverted");
        }
        let Some(n) = self.elements.get(el) else {
            return err(pos, format!("unknown element `{el}`"));
        };
        self.fresh(pos, sym)?;
        let loc = alg
            .localize(n, sym)
            .map_err(|e| DslError::semantic(pos, format!("cannot invert `{el}`: {e}")))?;
        self.algebra = Some(Arc::new(loc));
        Ok(())
    }

    fn calc_block(&mut self, pos: Pos, items: &[CalcItem]) -> Res<()> {
        let alg = self.algebra(pos)?;
        if self.calc.is_some() {
            return err(pos, "only one calc block is allowed");
        }
        let thetas: Vec<&Vec<String>> = items
            .iter()
            .filter_map(|i| match i {
                CalcItem::Theta(v) => Some(v),
                _ => None,
            })
            .collect();
        let labels = match thetas.as_slice() {
            [v] => (*v).clone(),
            _ => return err(pos, "calc needs exactly one theta declaration"),
        };
        for l in &labels {
            self.fresh(pos, l)?;
            if labels.iter().filter(|m| *m == l).count() > 1 {
                return err(pos, format!("basis form `{l}` declared twice"));
            }
        }
        let index = |name: &str| -> Res<usize> {
            labels
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| DslError::semantic(pos, format!("unknown basis form `{name}`")))
        };
        let n = labels.len();
        let mut twists: Vec<Option<(String, Endomorphism)>> = vec![None; n];
        let mut weights: Vec<Option<Element>> = vec![None; n];
        let mut rules = Vec::new();
        for item in items {
            match item {
                CalcItem::Theta(_) => {}
                CalcItem::Twist(t, a) => {
                    let s = index(t)?;
                    let Some(phi) = self.automorphisms.get(a) else {
                        return err(pos, format!("unknown automorphism `{a}`"));
                    };
                    if twists[s].replace((a.clone(), phi.clone())).is_some() {
                        return err(pos, format!("twist of `{t}` given twice"));
                    }
                }
                CalcItem::Weight(t, e) => {
                    let s = index(t)?;
                    let w = self.eval_element(pos, e)?;
                    if weights[s].replace(w).is_some() {
                        return err(pos, format!("weight of `{t}` given twice"));
                    }
                }
                CalcItem::Wedge { hi, lo, rhs } => {
                    let (h, l) = (index(hi)?, index(lo)?);
                    let letter =
                        |name: &str| labels.iter().position(|x| x == name).map(|i| i as u16);
                    let poly = self.scope().eval_free(rhs, &letter).map_err(|m| {
                        DslError::semantic(pos, format!("wedge rule for `{hi}*{lo}`: {m}"))
                    })?;
                    let mut terms = Vec::new();
                    for (w, c) in poly {
                        match w.as_slice() {
                            [i, j] => terms.push((c, (*i as usize, *j as usize))),
                            _ => {
                                return err(
                                    pos,
                                    format!("wedge rule for `{hi}*{lo}`: every term must be a product of two basis forms"),
                                )
                            }
                        }
                    }
                    rules.push(ThetaRule {
                        lhs: (h, l),
                        rhs: terms,
                    });
                }
            }
        }
        let mut spec_twists = Vec::new();
        let mut spec_weights = Vec::new();
        for (s, (t, w)) in twists.into_iter().zip(weights).enumerate() {
            let Some((name, phi)) = t else {
                return err(pos, format!("no twist for `{}`", labels[s]));
            };
            let Some(w) = w else {
                return err(pos, format!("no weight for `{}`", labels[s]));
            };
            self.twist_names.push(name);
            spec_twists.push(phi);
            spec_weights.push(w);
        }
        let spec = CalculusSpec {
            labels,
            twists: spec_twists,
            weights: spec_weights,
            theta_rules: rules,
            differentials: Vec::new(),
        };
        let calc = Calculus::new(alg, spec).map_err(|e| DslError::semantic(pos, e.to_string()))?;
        self.calc = Some(calc);
        Ok(())
    }

    fn check(&mut self, pos: Pos, c: &CheckStmt, mirrored: bool) -> Res<()> {
        let map = if mirrored {
            c.mirror.clone()
        } else {
            Vec::new()
        };
        let rn = |s: &String| -> String {
            map.iter()
                .find(|(a, _)| a == s)
                .map_or_else(|| s.clone(), |(_, b)| b.clone())
        };
        let name = if mirrored {
            format!("{} (mirrored)", c.name)
        } else {
            c.name.clone()
        };
        if self.checks.iter().any(|k| k.name == name) {
            return err(pos, format!("duplicate check name \"{name}\""));
        }
        let (source, kind) = match &c.body {
            CheckBody::Equal(a, b) => {
                let (a, b) = (a.rename(&map), b.rename(&map));
                let src = format!("{a} == {b}");
                let kind = CheckKind::Equal(
                    self.eval(pos, &a)?.into_form(),
                    self.eval(pos, &b)?.into_form(),
                );
                (src, kind)
            }
            CheckBody::Passes(w, a) => {
                let (w, a) = (rn(w), rn(a));
                let f = self.eval(pos, &Expr::Ident(w.clone()))?.into_form();
                if !self.automorphisms.contains_key(&a) {
                    return err(pos, format!("unknown automorphism `{a}`"));
                }
                (format!("passes({w}, {a})"), CheckKind::Passes(f, a))
            }
            CheckBody::Compatible {
                negated,
                connection,
                metric,
            } => {
                let (conn, g) = (rn(connection), rn(metric));
                if !self.connections.contains_key(&conn) {
                    return err(pos, format!("unknown connection `{conn}`"));
                }
                if !self.metrics.contains_key(&g) {
                    return err(pos, format!("unknown metric `{g}`"));
                }
                let bang = if *negated { "!" } else { "" };
                (
                    format!("{bang}compatible({conn}, {g})"),
                    CheckKind::Compatible {
                        negated: *negated,
                        connection: conn,
                        metric: g,
                    },
                )
            }
            CheckBody::TorsionFree {
                negated,
                connection,
            } => {
                let conn = rn(connection);
                if !self.connections.contains_key(&conn) {
                    return err(pos, format!("unknown connection `{conn}`"));
                }
                let bang = if *negated { "!" } else { "" };
                (
                    format!("{bang}torsion_free({conn})"),
                    CheckKind::TorsionFree {
                        negated: *negated,
                        connection: conn,
                    },
                )
            }
        };
        self.checks.push(Check {
            name,
            anchor: c.anchor.clone(),
            source,
            kind,
        });
        Ok(())
    }

    fn derive(&mut self, pos: Pos, d: &DeriveStmt) -> Res<()> {
        self.calc(pos)?;
        let mut forms = Vec::new();
        for n in &d.forms {
            let f = self.eval(pos, &Expr::Ident(n.clone()))?.into_form();
            if f.grade() != Some(1) {
                return err(pos, format!("`{n}` is not a 1-form"));
            }
            forms.push((n.clone(), f));
        }
        let mut elements = Vec::new();
        for n in &d.elements {
            let e = if n == "1" {
                Element::one()
            } else {
                self.eval_element(pos, &Expr::Ident(n.clone()))?
            };
            elements.push((n.clone(), e));
        }
        self.derivations.push(Derivation {
            name: d.name.clone(),
            anchor: d.anchor.clone(),
            forms,
            elements,
            orientation: match d.order {
                OrderKw::ElementFirst => Orientation::ElementFirst,
                OrderKw::FormFirst => Orientation::FormFirst,
            },
            expect: d.expect.clone(),
        });
        Ok(())
    }

    fn finish(mut self, doc: Document) -> Res<Model> {
        let end = doc.items.last().map(|i| i.pos).unwrap_or_default();
        let algebra = self.algebra(end)?;
        if !self.diffs.is_empty() {
            let calc = self.calc.take().expect("diff requires calc");
            let mut spec = calc.spec().clone();
            let gens = algebra.table().generator_count();
            spec.differentials = (0..gens).map(|g| self.diffs.get(&g).cloned()).collect();
            self.calc = Some(
                Calculus::new(algebra.clone(), spec)
                    .map_err(|e| DslError::semantic(end, e.to_string()))?,
            );
        }
        if let Some(pos) = self.geometry_pos {
            for n in &self.twist_names {
                if !self.extensions.contains_key(n) {
                    return err(pos, format!("geometry needs an `extend {n}` block"));
                }
            }
        }
        Ok(Model {
            name: self.name.unwrap_or_else(|| "model".to_string()),
            document: doc,
            params: self.params,
            subst: self.subst,
            algebra,
            relation_sources: self.relation_sources,
            elements: self.elements,
            automorphisms: self.automorphisms,
            calculus: self.calc,
            twist_names: self.twist_names,
            forms: self.forms,
            extensions: self.extensions,
            metrics: self.metrics,
            connections: self.connections,
            checks: self.checks,
            derivations: self.derivations,
        })
    }
}
