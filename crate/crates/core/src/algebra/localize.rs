//! Adjoining the inverse of a normal element `N` (one with `N g = λ_g g N`
//! for every symbol `g`), such as the quantum determinant.
//!
//! The new symbol `Ni` is ordered last and commutes past every other symbol
//! by `Ni g -> λ_g^-1 g Ni`. The relation `N Ni = 1` is not a two-letter rule;
//! it is applied as a word-level reduction: writing `N = c0 lo hi + rest`
//! with `lo` the first and `hi` the last symbol, a normal word
//! `lo^i X hi^j Ni^k` (`i, j, k >= 1`) is rewritten through
//! `lo hi = (N - rest) / c0`. Each step lowers the number of `lo` letters.

use crate::coeff::Coeff;

use super::{Algebra, AlgebraError, Element, RewriteSystem, Rule, Sym, Word};

#[derive(Debug, Clone)]
pub struct Localization {
    element: Element,
    symbol: Sym,
    lo: Sym,
    hi: Sym,
    lead: Coeff,
    rest: Element,
    hi_factor: Coeff,
    factors: Vec<Coeff>,
}

impl Localization {
    /// The adjoined symbol standing for `N^-1`.
    pub fn symbol(&self) -> Sym {
        self.symbol
    }

    /// The element `N` that was inverted.
    pub fn element(&self) -> &Element {
        &self.element
    }

    /// `λ_g` with `N g = λ_g g N`, indexed by symbol of the base algebra.
    pub fn commutation_factors(&self) -> &[Coeff] {
        &self.factors
    }

    fn matches(&self, w: &Word) -> Option<(u32, Word, u32, u32)> {
        let runs = w.runs();
        if runs.len() < 3 {
            return None;
        }
        let (first, n) = runs.len().checked_sub(2).map(|k| (runs[0], k))?;
        let (hi_run, ni_run) = (runs[n], runs[n + 1]);
        if first.0 != self.lo || hi_run.0 != self.hi || ni_run.0 != self.symbol || n == 0 {
            return None;
        }
        let middle = Word::from_letters(
            runs[1..n]
                .iter()
                .flat_map(|&(s, k)| std::iter::repeat_n(s, k as usize)),
        );
        Some((first.1, middle, hi_run.1, ni_run.1))
    }

    pub(crate) fn reduce(&self, alg: &Algebra, x: Element) -> Element {
        if !x.terms().any(|(w, _)| self.matches(w).is_some()) {
            return x;
        }
        let mut out = Element::zero();
        for (w, c) in x.terms() {
            match self.matches(w) {
                None => out.add_term(w.clone(), c.clone()),
                Some((i, middle, j, k)) => out.add_scaled(c, &self.rewrite(alg, i, &middle, j, k)),
            }
        }
        out
    }

    fn rewrite(&self, alg: &Algebra, i: u32, middle: &Word, j: u32, k: u32) -> Element {
        // lo X = t^-1 X lo, read off from X lo = t lo X.
        let moved = alg.word(&middle.pushed(self.lo));
        let lo_x = Word::letter(self.lo).concat(middle);
        let t = moved.coefficient(&lo_x);
        debug_assert!(moved.len() == 1 && !t.is_zero());
        let scale = t.mul(&self.lead).inv().expect("nonzero scale");

        let head = Word::power(self.lo, i - 1).concat(middle);
        let mut out = Element::zero();

        // N hi^(j-1) Ni^k = λ_hi^(j-1) hi^(j-1) Ni^(k-1)
        let first = head
            .concat(&Word::power(self.hi, j - 1))
            .concat(&Word::power(self.symbol, k - 1));
        let lam = self.hi_factor.pow((j - 1) as i32).expect("nonzero factor");
        out.add_scaled(&scale.mul(&lam), &alg.word(&first));

        let tail = Word::power(self.hi, j - 1).concat(&Word::power(self.symbol, k));
        let second = alg.mul(&alg.mul(&alg.word(&head), &self.rest), &alg.word(&tail));
        out.add_scaled(&scale.neg(), &second);
        out
    }
}

impl Algebra {
    /// The algebra with a new generator `name` standing for the inverse of
    /// the normal element `n`.
    pub fn localize(&self, n: &Element, name: &str) -> Result<Algebra, AlgebraError> {
        let table = self.table().with_generator(name)?;
        let count = self.table().symbol_count() as Sym;
        let symbol = count;
        let lo = 0;
        let hi = self.table().base_symbol(self.table().generator_count() - 1);
        let lo_hi = Word::from_letters([lo, hi]);
        let lead = n.coefficient(&lo_hi);
        if lead.is_zero() {
            return Err(AlgebraError::UnsupportedLocalization(
                "element has no term pairing the first and last symbols".into(),
            ));
        }
        let rest = n.sub(&Element::term(lead.clone(), lo_hi));
        if rest.terms().any(|(w, _)| w.contains(lo)) {
            return Err(AlgebraError::UnsupportedLocalization(
                "remaining terms must not involve the first symbol".into(),
            ));
        }

        let mut factors = Vec::new();
        for s in self.table().symbols() {
            let g = self.symbol(s);
            let ng = self.mul(n, &g);
            let gn = self.mul(&g, n);
            let lam = proportionality(&ng, &gn).ok_or_else(|| {
                AlgebraError::UnsupportedLocalization(format!(
                    "element is not normal with respect to `{}`",
                    self.table().symbol_name(s)
                ))
            })?;
            factors.push(lam);
        }

        let mut rules: Vec<Rule> = self.system().rules().to_vec();
        for s in self.table().symbols() {
            let inv = factors[s as usize].inv()?;
            rules.push(Rule::new(
                (symbol, s),
                vec![(inv, Word::from_letters([s, symbol]))],
            ));
        }
        let system = RewriteSystem::new(rules, &table)?;
        let hi_factor = factors[hi as usize].clone();
        let mut out = Algebra::from_system(self.params().clone(), table, system);
        out.relations = self.relations.clone();
        out.localization = Some(Localization {
            element: n.clone(),
            symbol,
            lo,
            hi,
            lead,
            rest,
            hi_factor,
            factors,
        });
        Ok(out)
    }
}

/// `λ` with `a = λ b`, if it exists.
fn proportionality(a: &Element, b: &Element) -> Option<Coeff> {
    if b.is_zero() {
        return a.is_zero().then(Coeff::one);
    }
    let (w, cb) = b.terms().next()?;
    let lam = a.coefficient(w).div(cb).ok()?;
    (a.sub(&b.scale(&lam)).is_zero() && !lam.is_zero()).then_some(lam)
}
