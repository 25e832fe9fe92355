//! The algebra generated by the basis 1-forms `θ^s` modulo quadratic rules.
//!
//! Monomials are strictly ascending index sequences, stored as bit sets.
//! Words are first reduced leftmost-first by the quadratic rules; then, in
//! each degree, the consequences of all rules are collected and row reduced
//! so that monomials that are forced to vanish or to depend on smaller ones
//! are eliminated. This catches relations such as `θ²θ³θ⁴ = 0` that follow
//! from overlaps of the quadratic rules.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::coeff::{Coeff, Matrix};

use super::CalculusError;

pub const MAX_THETA: usize = 16;

/// A strictly ascending product `θ^{i1} ... θ^{ik}`, as a bit set of indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mono(u32);

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn single(s: usize) -> Mono {
        Mono(1 << s)
    }

    pub fn from_indices(idx: &[usize]) -> Option<Mono> {
        let mut m = 0u32;
        for w in idx.windows(2) {
            if w[0] >= w[1] {
                return None;
            }
        }
        for &i in idx {
            m |= 1 << i;
        }
        Some(Mono(m))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0)
    }

    pub fn contains(self, s: usize) -> bool {
        self.0 & (1 << s) != 0
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<usize> = self.indices().map(|i| i + 1).collect();
        write!(f, "θ{idx:?}")
    }
}

/// One term `c θ^k θ^l` of a wedge rule.
pub type WedgeTerm = (Coeff, (usize, usize));
pub type WedgeRhs = Vec<WedgeTerm>;

/// `θ^hi θ^lo -> Σ c θ^i θ^j` with `lo <= hi`; an empty right side kills the pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaRule {
    pub lhs: (usize, usize),
    pub rhs: WedgeRhs,
}

/// Linear combination of monomials.
pub type MonoSum = BTreeMap<Mono, Coeff>;

#[derive(Debug, Clone)]
pub struct ThetaAlgebra {
    n: usize,
    rules: HashMap<(usize, usize), WedgeRhs>,
    // Eliminated monomial -> its value in terms of surviving ones.
    eliminated: HashMap<Mono, MonoSum>,
    products: HashMap<(Mono, Mono), MonoSum>,
}

fn add_to(sum: &mut MonoSum, m: Mono, c: &Coeff) {
    if c.is_zero() {
        return;
    }
    let e = sum.entry(m).or_default();
    *e = e.add(c);
    if e.is_zero() {
        sum.remove(&m);
    }
}

impl ThetaAlgebra {
    pub fn new(n: usize, rules: &[ThetaRule]) -> Result<Self, CalculusError> {
        if n > MAX_THETA {
            return Err(CalculusError::TooManyThetas(n));
        }
        let mut map = HashMap::new();
        for r in rules {
            let (hi, lo) = r.lhs;
            if lo > hi || hi >= n {
                return Err(CalculusError::BadThetaRule(format!(
                    "left side t{}*t{} is not a descending pair",
                    hi + 1,
                    lo + 1
                )));
            }
            for (_, (i, j)) in &r.rhs {
                if !(i < j && *j < n && *i < hi) {
                    return Err(CalculusError::BadThetaRule(format!(
                        "t{}*t{} -> ... t{}*t{}: right side must be ascending and smaller",
                        hi + 1,
                        lo + 1,
                        i + 1,
                        j + 1
                    )));
                }
            }
            if map.insert(r.lhs, r.rhs.clone()).is_some() {
                return Err(CalculusError::BadThetaRule(format!(
                    "duplicate rule for t{}*t{}",
                    hi + 1,
                    lo + 1
                )));
            }
        }
        let mut alg = ThetaAlgebra {
            n,
            rules: map,
            eliminated: HashMap::new(),
            products: HashMap::new(),
        };
        for k in 3..=n {
            alg.complete_degree(k)?;
        }
        let basis = alg.basis();
        for &a in &basis {
            for &b in &basis {
                if a.grade() + b.grade() > n as u32 {
                    continue;
                }
                let word: Vec<usize> = a.indices().chain(b.indices()).collect();
                let prod = alg.reduce(alg.nf_left(&word)?);
                alg.products.insert((a, b), prod);
            }
        }
        Ok(alg)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Surviving monomials, in ascending order.
    pub fn basis(&self) -> Vec<Mono> {
        let mut out: Vec<Mono> = (0..(1u32 << self.n))
            .map(Mono)
            .filter(|m| !self.eliminated.contains_key(m))
            .collect();
        out.sort();
        out
    }

    pub fn rule(&self, hi: usize, lo: usize) -> Option<&[(Coeff, (usize, usize))]> {
        self.rules.get(&(hi, lo)).map(Vec::as_slice)
    }

    pub fn rules(&self) -> impl Iterator<Item = ((usize, usize), &[WedgeTerm])> {
        let mut keys: Vec<_> = self.rules.keys().copied().collect();
        keys.sort();
        keys.into_iter().map(|k| (k, self.rules[&k].as_slice()))
    }

    /// Monomials proved to be dependent, with their values.
    pub fn eliminated(&self) -> impl Iterator<Item = (&Mono, &MonoSum)> {
        self.eliminated.iter()
    }

    /// Leftmost reduction of an arbitrary index word by the quadratic rules.
    pub fn nf_left(&self, word: &[usize]) -> Result<MonoSum, CalculusError> {
        let mut out = MonoSum::new();
        let mut stack: Vec<(Coeff, Vec<usize>)> = vec![(Coeff::one(), word.to_vec())];
        while let Some((c, w)) = stack.pop() {
            match w.windows(2).position(|p| p[0] >= p[1]) {
                None => add_to(&mut out, Mono::from_indices(&w).expect("ascending"), &c),
                Some(i) => {
                    let (hi, lo) = (w[i], w[i + 1]);
                    let rhs = self
                        .rules
                        .get(&(hi, lo))
                        .ok_or(CalculusError::MissingThetaRule(hi, lo))?;
                    for (rc, (a, b)) in rhs {
                        let mut nw = w.clone();
                        nw[i] = *a;
                        nw[i + 1] = *b;
                        stack.push((c.mul(rc), nw));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Replaces eliminated monomials.
    pub fn reduce(&self, sum: MonoSum) -> MonoSum {
        if !sum.keys().any(|m| self.eliminated.contains_key(m)) {
            return sum;
        }
        let mut out = MonoSum::new();
        for (m, c) in sum {
            match self.eliminated.get(&m) {
                None => add_to(&mut out, m, &c),
                Some(val) => {
                    for (m2, c2) in val {
                        add_to(&mut out, *m2, &c.mul(c2));
                    }
                }
            }
        }
        out
    }

    /// Product of two surviving monomials.
    pub fn mul(&self, a: Mono, b: Mono) -> &MonoSum {
        static EMPTY: std::sync::OnceLock<MonoSum> = std::sync::OnceLock::new();
        self.products
            .get(&(a, b))
            .unwrap_or_else(|| EMPTY.get_or_init(MonoSum::new))
    }

    fn complete_degree(&mut self, k: usize) -> Result<(), CalculusError> {
        let mut relations: Vec<MonoSum> = Vec::new();
        let rules: Vec<((usize, usize), WedgeRhs)> =
            self.rules.iter().map(|(k, v)| (*k, v.clone())).collect();
        let outer = k - 2;
        for split in 0..=outer {
            let count = self.n.pow(outer as u32);
            for code in 0..count {
                let mut letters = Vec::with_capacity(outer);
                let mut c = code;
                for _ in 0..outer {
                    letters.push(c % self.n);
                    c /= self.n;
                }
                let (u, v) = letters.split_at(split);
                for ((hi, lo), rhs) in &rules {
                    let mut lw = u.to_vec();
                    lw.extend([*hi, *lo]);
                    lw.extend_from_slice(v);
                    let mut rel = self.nf_left(&lw)?;
                    for (rc, (a, b)) in rhs {
                        let mut rw = u.to_vec();
                        rw.extend([*a, *b]);
                        rw.extend_from_slice(v);
                        for (m, c2) in self.nf_left(&rw)? {
                            add_to(&mut rel, m, &rc.mul(&c2).neg());
                        }
                    }
                    let rel = self.reduce(rel);
                    if !rel.is_empty() && !relations.contains(&rel) {
                        relations.push(rel);
                    }
                }
            }
        }
        if relations.is_empty() {
            return Ok(());
        }
        let mut cols: Vec<Mono> = relations.iter().flat_map(|r| r.keys().copied()).collect();
        cols.sort();
        cols.dedup();
        let mut m = Matrix::zeros(relations.len(), cols.len());
        for (r, rel) in relations.iter().enumerate() {
            for (mono, c) in rel {
                let j = cols.binary_search(mono).expect("column");
                m.set(r, j, c.clone());
            }
        }
        // Pivot on the largest monomials first.
        let order: Vec<usize> = (0..cols.len()).rev().collect();
        let pivots = m.rref_with_order(&order);
        for (r, &pc) in pivots.iter().enumerate() {
            let mut val = MonoSum::new();
            for (j, &mono) in cols.iter().enumerate() {
                if j != pc {
                    add_to(&mut val, mono, &m.get(r, j).neg());
                }
            }
            self.eliminated.insert(cols[pc], val);
        }
        Ok(())
    }
}
