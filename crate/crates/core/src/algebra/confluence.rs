use super::{Algebra, Element, Word};

/// An overlap whose two one-step reductions have different normal forms.
#[derive(Debug, Clone)]
pub struct Overlap {
    pub word: Word,
    pub via_left: Element,
    pub via_right: Element,
}

#[derive(Debug, Clone, Default)]
pub struct ConfluenceReport {
    pub overlaps_checked: usize,
    pub unresolved: Vec<Overlap>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.unresolved.is_empty()
    }
}

impl Algebra {
    /// Diamond check over all critical pairs of the two-letter rule set:
    /// every word `xyz` with both `xy` and `yz` rule left sides, plus any
    /// two rules sharing a left side.
    pub fn check_confluence(&self) -> ConfluenceReport {
        let rules = self.system().rules();
        let mut report = ConfluenceReport::default();

        for (i, r1) in rules.iter().enumerate() {
            for r2 in &rules[i + 1..] {
                if r1.lhs != r2.lhs {
                    continue;
                }
                report.overlaps_checked += 1;
                let a = self.normal_form(&r1.rhs);
                let b = self.normal_form(&r2.rhs);
                if a != b {
                    report.unresolved.push(Overlap {
                        word: r1.lhs_word(),
                        via_left: a,
                        via_right: b,
                    });
                }
            }
        }

        let mut seen = std::collections::HashSet::new();
        for r1 in rules {
            for r2 in rules {
                if r1.lhs.1 != r2.lhs.0 {
                    continue;
                }
                let (x, y, z) = (r1.lhs.0, r1.lhs.1, r2.lhs.1);
                if !seen.insert((x, y, z)) {
                    continue;
                }
                report.overlaps_checked += 1;
                let zw = Word::letter(z);
                let xw = Word::letter(x);
                let mut left = Element::zero();
                for (c, w) in &r1.rhs {
                    left.add_scaled(c, &self.word(&w.concat(&zw)));
                }
                let mut right = Element::zero();
                for (c, w) in &r2.rhs {
                    right.add_scaled(c, &self.word(&xw.concat(w)));
                }
                if left != right {
                    report.unresolved.push(Overlap {
                        word: Word::from_letters([x, y, z]),
                        via_left: left,
                        via_right: right,
                    });
                }
            }
        }
        report
    }
}
