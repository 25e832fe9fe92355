use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::GeneratorTable;

/// Index of a symbol (generator or adjoined inverse) in a [`GeneratorTable`].
/// Symbol indices follow the rewriting order.
pub type Sym = u16;

/// A word in the symbols of a generator table, stored as runs `(symbol, length)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    runs: SmallVec<[(Sym, u32); 4]>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(s: Sym) -> Self {
        Word::power(s, 1)
    }

    pub fn power(s: Sym, n: u32) -> Self {
        let mut w = Word::empty();
        if n > 0 {
            w.runs.push((s, n));
        }
        w
    }

    pub fn from_letters<I: IntoIterator<Item = Sym>>(letters: I) -> Self {
        let mut w = Word::empty();
        for s in letters {
            w.push(s);
        }
        w
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.runs.iter().map(|(_, n)| n).sum()
    }

    pub fn runs(&self) -> &[(Sym, u32)] {
        &self.runs
    }

    pub fn letters(&self) -> impl Iterator<Item = Sym> + '_ {
        self.runs
            .iter()
            .flat_map(|&(s, n)| std::iter::repeat_n(s, n as usize))
    }

    pub fn first(&self) -> Option<Sym> {
        self.runs.first().map(|r| r.0)
    }

    pub fn last(&self) -> Option<Sym> {
        self.runs.last().map(|r| r.0)
    }

    pub fn contains(&self, s: Sym) -> bool {
        self.runs.iter().any(|r| r.0 == s)
    }

    pub fn count(&self, s: Sym) -> u32 {
        self.runs.iter().filter(|r| r.0 == s).map(|r| r.1).sum()
    }

    pub fn push(&mut self, s: Sym) {
        match self.runs.last_mut() {
            Some((t, n)) if *t == s => *n += 1,
            _ => self.runs.push((s, 1)),
        }
    }

    pub fn pushed(&self, s: Sym) -> Word {
        let mut w = self.clone();
        w.push(s);
        w
    }

    /// The word with its final letter removed.
    pub fn without_last(&self) -> Word {
        let mut w = self.clone();
        if let Some((_, n)) = w.runs.last_mut() {
            if *n > 1 {
                *n -= 1;
            } else {
                w.runs.pop();
            }
        }
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(s, n) in &other.runs {
            match w.runs.last_mut() {
                Some((t, m)) if *t == s => *m += n,
                _ => w.runs.push((s, n)),
            }
        }
        w
    }

    /// Removes the first occurrence of `s`.
    pub fn display<'a>(&'a self, table: &'a GeneratorTable) -> WordDisplay<'a> {
        WordDisplay { word: self, table }
    }
}

impl Ord for Word {
    /// Degree first, then lexicographic in symbol order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.letters().cmp(other.letters()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.runs.as_slice())
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    table: &'a GeneratorTable,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (k, &(s, n)) in self.word.runs.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            let name = self.table.generator_name(s);
            let exp = if self.table.is_inverse(s) {
                -(n as i64)
            } else {
                n as i64
            };
            if exp == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_merge_and_split() {
        let w = Word::from_letters([0, 0, 1, 1, 1, 0]);
        assert_eq!(w.runs(), &[(0, 2), (1, 3), (0, 1)]);
        assert_eq!(w.degree(), 6);
        assert_eq!(w.without_last().runs(), &[(0, 2), (1, 3)]);
        assert_eq!(
            Word::power(0, 2).concat(&Word::from_letters([0, 1])).runs(),
            &[(0, 3), (1, 1)]
        );
    }

    #[test]
    fn degree_then_lex() {
        let ad = Word::from_letters([0, 5]);
        let bc = Word::from_letters([1, 3]);
        let da = Word::from_letters([5, 0]);
        assert!(ad < bc && bc < da);
        assert!(Word::letter(5) < ad);
        assert!(Word::empty() < Word::letter(0));
    }
}
