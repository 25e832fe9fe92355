use super::{AlgebraError, Sym};

#[derive(Debug, Clone, PartialEq, Eq)]
struct SymbolInfo {
    generator: usize,
    inverse: bool,
}

/// Ordered generators with optional formal inverses.
///
/// Symbols are numbered in declaration order with each inverse placed
/// immediately after its base generator; this numbering is the letter order
/// used by rewriting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTable {
    generators: Vec<String>,
    invertible: Vec<bool>,
    symbols: Vec<SymbolInfo>,
    base: Vec<Sym>,
}

impl GeneratorTable {
    pub fn new<S: AsRef<str>>(generators: &[S], invertible: &[S]) -> Result<Self, AlgebraError> {
        let mut names: Vec<String> = Vec::new();
        for g in generators {
            let g = g.as_ref();
            if names.iter().any(|n| n == g) {
                return Err(AlgebraError::DuplicateGenerator(g.to_string()));
            }
            names.push(g.to_string());
        }
        let mut inv = vec![false; names.len()];
        for g in invertible {
            let g = g.as_ref();
            let i = names
                .iter()
                .position(|n| n == g)
                .ok_or_else(|| AlgebraError::UnknownSymbol(g.to_string()))?;
            inv[i] = true;
        }
        let mut symbols = Vec::new();
        let mut base = Vec::new();
        for (i, &is_inv) in inv.iter().enumerate() {
            base.push(symbols.len() as Sym);
            symbols.push(SymbolInfo {
                generator: i,
                inverse: false,
            });
            if is_inv {
                symbols.push(SymbolInfo {
                    generator: i,
                    inverse: true,
                });
            }
        }
        Ok(GeneratorTable {
            generators: names,
            invertible: inv,
            symbols,
            base,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> {
        0..self.symbols.len() as Sym
    }

    pub fn is_invertible(&self, generator: usize) -> bool {
        self.invertible[generator]
    }

    pub fn invertible_generators(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.generators.len()).filter(|&i| self.invertible[i])
    }

    /// The symbol of the base generator with index `generator`.
    pub fn base_symbol(&self, generator: usize) -> Sym {
        self.base[generator]
    }

    pub fn base_symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        self.base.iter().copied()
    }

    pub fn generator_of(&self, s: Sym) -> usize {
        self.symbols[s as usize].generator
    }

    pub fn is_inverse(&self, s: Sym) -> bool {
        self.symbols[s as usize].inverse
    }

    /// Name of the generator underlying `s` (without any inverse marker).
    pub fn generator_name(&self, s: Sym) -> &str {
        &self.generators[self.generator_of(s)]
    }

    /// Display name: `x` or `x^-1`.
    pub fn symbol_name(&self, s: Sym) -> String {
        if self.is_inverse(s) {
            format!("{}^-1", self.generator_name(s))
        } else {
            self.generator_name(s).to_string()
        }
    }

    /// The formally inverse symbol, if one is adjoined.
    pub fn inverse(&self, s: Sym) -> Option<Sym> {
        let g = self.generator_of(s);
        if !self.invertible[g] {
            return None;
        }
        let b = self.base[g];
        Some(if self.is_inverse(s) { b } else { b + 1 })
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.generators
            .iter()
            .position(|n| n == name)
            .map(|i| self.base[i])
    }

    /// Extends the table with one more (non-invertible) generator, ordered last.
    pub(crate) fn with_generator(&self, name: &str) -> Result<GeneratorTable, AlgebraError> {
        let mut gens = self.generators.clone();
        gens.push(name.to_string());
        let inv: Vec<&str> = self
            .invertible_generators()
            .map(|i| self.generators[i].as_str())
            .collect();
        let gens_ref: Vec<&str> = gens.iter().map(String::as_str).collect();
        GeneratorTable::new(&gens_ref, &inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_follow_their_base() {
        let t = GeneratorTable::new(&["a", "b", "c", "d"], &["b", "c"]).unwrap();
        let names: Vec<String> = t.symbols().map(|s| t.symbol_name(s)).collect();
        assert_eq!(names, ["a", "b", "b^-1", "c", "c^-1", "d"]);
        assert_eq!(t.inverse(1), Some(2));
        assert_eq!(t.inverse(2), Some(1));
        assert_eq!(t.inverse(0), None);
        assert_eq!(t.lookup("d"), Some(5));
    }

    #[test]
    fn rejects_duplicates_and_unknown_inverses() {
        assert!(GeneratorTable::new(&["x", "x"], &[]).is_err());
        assert!(GeneratorTable::new(&["x"], &["y"]).is_err());
    }
}
