use std::collections::{BTreeMap, HashMap};

use crate::coeff::Coeff;

use super::{AlgebraError, GeneratorTable, Sym, Word};

/// A formal linear combination of words that are not necessarily reduced.
pub type FreeSum = Vec<(Coeff, Word)>;

/// A defining relation `lhs = rhs` in the free algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub lhs: FreeSum,
    pub rhs: FreeSum,
}

/// A two-letter rewrite rule `x*y -> rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub lhs: (Sym, Sym),
    pub rhs: Vec<(Coeff, Word)>,
}

impl Rule {
    pub fn new(lhs: (Sym, Sym), rhs: Vec<(Coeff, Word)>) -> Self {
        Rule { lhs, rhs }
    }

    pub fn lhs_word(&self) -> Word {
        Word::from_letters([self.lhs.0, self.lhs.1])
    }

    pub fn describe(&self, table: &GeneratorTable) -> String {
        let mut s = format!(
            "{}*{} ->",
            table.symbol_name(self.lhs.0),
            table.symbol_name(self.lhs.1)
        );
        if self.rhs.is_empty() {
            s.push_str(" 0");
        }
        for (k, (c, w)) in self.rhs.iter().enumerate() {
            if k > 0 {
                s.push_str(" +");
            }
            s.push_str(&format!(" ({c})*{}", w.display(table)));
        }
        s
    }
}

/// Two-letter rewrite rules, looked up by their left-hand side.
///
/// When several rules share a left-hand side, reduction uses the first one;
/// the confluence checker reports the disagreement.
#[derive(Debug, Clone, Default)]
pub struct RewriteSystem {
    rules: Vec<Rule>,
    index: HashMap<(Sym, Sym), usize>,
}

impl RewriteSystem {
    /// Builds a system, rejecting rules whose right-hand side is not strictly
    /// below the left-hand side in degree-then-lexicographic order.
    pub fn new(rules: Vec<Rule>, table: &GeneratorTable) -> Result<Self, AlgebraError> {
        let mut index = HashMap::new();
        for (k, r) in rules.iter().enumerate() {
            let lhs = r.lhs_word();
            if let Some((_, w)) = r.rhs.iter().find(|(_, w)| *w >= lhs) {
                return Err(AlgebraError::NonDecreasingRule(format!(
                    "{} (term {} is not smaller than the left side)",
                    r.describe(table),
                    w.display(table)
                )));
            }
            index.entry(r.lhs).or_insert(k);
        }
        Ok(RewriteSystem { rules, index })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn get(&self, a: Sym, b: Sym) -> Option<&Rule> {
        self.index.get(&(a, b)).map(|&k| &self.rules[k])
    }

    pub fn is_lhs(&self, a: Sym, b: Sym) -> bool {
        self.index.contains_key(&(a, b))
    }
}

/// Orients a relation into a rule whose left side is the largest word.
pub fn orient(rel: &Relation, table: &GeneratorTable) -> Result<Rule, AlgebraError> {
    let mut diff: BTreeMap<Word, Coeff> = BTreeMap::new();
    let mut acc = |c: &Coeff, w: &Word, sign: i64| {
        let e = diff.entry(w.clone()).or_default();
        *e = e.add(&c.mul(&Coeff::from_integer(sign)));
    };
    for (c, w) in &rel.lhs {
        acc(c, w, 1);
    }
    for (c, w) in &rel.rhs {
        acc(c, w, -1);
    }
    diff.retain(|_, c| !c.is_zero());
    let Some((lead, lc)) = diff.iter().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
        return Err(AlgebraError::TrivialRelation);
    };
    if lead.degree() != 2 {
        return Err(AlgebraError::UnsupportedRelation(format!(
            "leading word {} is not a two-letter word",
            lead.display(table)
        )));
    }
    let mut letters = lead.letters();
    let (x, y) = (letters.next().unwrap(), letters.next().unwrap());
    let inv = lc.inv().expect("nonzero leading coefficient");
    let rhs = diff
        .iter()
        .filter(|(w, _)| **w != lead)
        .map(|(w, c)| (c.mul(&inv).neg(), w.clone()))
        .collect();
    Ok(Rule::new((x, y), rhs))
}

/// Conjugated rules for the inverse symbols touched by a monomial
/// commutation rule `g_j g_i -> c g_i g_j`.
pub fn derive_inverse_rules(
    rule: &Rule,
    table: &GeneratorTable,
) -> Result<Vec<Rule>, AlgebraError> {
    let (j, i) = rule.lhs;
    let inv_j = table.inverse(j);
    let inv_i = table.inverse(i);
    if inv_j.is_none() && inv_i.is_none() {
        return Ok(Vec::new());
    }
    let swapped = Word::from_letters([i, j]);
    let c = match rule.rhs.as_slice() {
        [(c, w)] if *w == swapped && i < j && !table.is_inverse(i) && !table.is_inverse(j) => {
            c.clone()
        }
        _ => {
            return Err(AlgebraError::UnsupportedRelation(format!(
                "cannot invert across {}: only monomial commutation relations admit inverse rules",
                rule.describe(table)
            )))
        }
    };
    let cinv = c.inv().map_err(|_| {
        AlgebraError::UnsupportedRelation(format!(
            "zero commutation factor in {}",
            rule.describe(table)
        ))
    })?;
    let mut out = Vec::new();
    if let Some(jj) = inv_j {
        out.push(Rule::new(
            (jj, i),
            vec![(cinv.clone(), Word::from_letters([i, jj]))],
        ));
    }
    if let Some(ii) = inv_i {
        out.push(Rule::new(
            (j, ii),
            vec![(cinv.clone(), Word::from_letters([ii, j]))],
        ));
    }
    if let (Some(jj), Some(ii)) = (inv_j, inv_i) {
        out.push(Rule::new((jj, ii), vec![(c, Word::from_letters([ii, jj]))]));
    }
    Ok(out)
}

/// `g g^-1 -> 1` and `g^-1 g -> 1` for every invertible generator.
pub fn inverse_pair_rules(table: &GeneratorTable) -> Vec<Rule> {
    let mut out = Vec::new();
    for g in table.invertible_generators() {
        let b = table.base_symbol(g);
        let ib = table.inverse(b).unwrap();
        out.push(Rule::new((b, ib), vec![(Coeff::one(), Word::empty())]));
        out.push(Rule::new((ib, b), vec![(Coeff::one(), Word::empty())]));
    }
    out
}
