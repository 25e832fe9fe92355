//! Exact coefficient field: rational functions in named commuting parameters.

mod linalg;
mod poly;
mod ratfunc;

use thiserror::Error;

pub use linalg::{solve_linear, Matrix};
pub use poly::{Monomial, Param, Polynomial};
pub use ratfunc::RationalFunction;

/// Shorthand used throughout the crate.
pub type Coeff = RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at evaluation point")]
    Pole,
    #[error("parameter `{0}` has no value at the evaluation point")]
    Unbound(String),
    #[error("duplicate parameter `{0}`")]
    DuplicateParam(String),
}

/// The declared deformation parameters of a model, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParameterSet {
    names: Vec<Param>,
}

impl ParameterSet {
    pub fn new<I, S>(names: I) -> Result<Self, CoeffError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = ParameterSet::default();
        for n in names {
            out.push(n.as_ref())?;
        }
        Ok(out)
    }

    pub fn push(&mut self, name: &str) -> Result<(), CoeffError> {
        if self.contains(name) {
            return Err(CoeffError::DuplicateParam(name.to_string()));
        }
        self.names.push(Param::new(name));
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|p| p.name() == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Param> {
        self.names.iter()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use num_rational::BigRational;

    use super::*;

    fn rf(name: &str) -> Coeff {
        Coeff::param(name)
    }

    fn int(n: i64) -> Coeff {
        Coeff::from_integer(n)
    }

    fn point(vals: &[(&str, i64, i64)]) -> BTreeMap<Param, BigRational> {
        vals.iter()
            .map(|(p, n, d)| (Param::new(p), BigRational::new((*n).into(), (*d).into())))
            .collect()
    }

    fn one_minus_r() -> Coeff {
        int(1).sub(&rf("r"))
    }

    #[test]
    fn additive_identity() {
        let a = one_minus_r().inv().unwrap();
        assert_eq!(a.add(&Coeff::zero()), a);
    }

    #[test]
    fn cancellation_to_laurent_monomial() {
        let rinv = rf("r").inv().unwrap();
        let s = rinv.sub(&int(1)).add(&int(1));
        assert_eq!(s, rinv);
        assert_eq!(s.to_string(), "r^-1");
    }

    #[test]
    fn opposite_fractions_sum_to_one() {
        // 1/(1-r) + r/(r-1)
        let a = one_minus_r().inv().unwrap();
        let b = rf("r").div(&rf("r").sub(&int(1))).unwrap();
        let s = a.add(&b);
        assert!(s.sub(&int(1)).is_zero());
        assert!(s.is_one());
    }

    #[test]
    fn ratio_times_denominator() {
        let p = rf("r").div(&rf("q")).unwrap();
        assert_eq!(p.mul(&rf("q")), rf("r"));
    }

    #[test]
    fn inverse_law_and_division_by_zero() {
        let a = one_minus_r();
        assert!(a.inv().unwrap().mul(&a).is_one());
        assert_eq!(Coeff::zero().inv(), Err(CoeffError::DivisionByZero));
    }

    #[test]
    fn inverse_of_p_minus_q_inverse() {
        // (p - 1/q)^-1 = q/(pq - 1)
        let a = rf("p").sub(&rf("q").inv().unwrap());
        let inv = a.inv().unwrap();
        let expected = rf("q").div(&rf("p").mul(&rf("q")).sub(&int(1))).unwrap();
        assert_eq!(inv, expected);
        assert!(inv.mul(&a).is_one());
    }

    #[test]
    fn zero_tests() {
        assert!(Coeff::zero().is_zero());
        let e = rf("p").mul(&rf("q")).sub(&rf("r"));
        assert!(!e.is_zero());
        let bind: BTreeMap<_, _> = [(Param::new("r"), rf("p").mul(&rf("q")))].into();
        assert!(e.substitute(&bind).unwrap().is_zero());
    }

    #[test]
    fn substitution_examples() {
        let bind: BTreeMap<_, _> = [(Param::new("p"), rf("r").div(&rf("q")).unwrap())].into();
        assert_eq!(
            rf("p").substitute(&bind).unwrap(),
            rf("r").div(&rf("q")).unwrap()
        );

        let a = one_minus_r().inv().unwrap();
        assert_eq!(a.substitute(&BTreeMap::new()).unwrap(), a);

        let bind: BTreeMap<_, _> = [(Param::new("r"), rf("p").mul(&rf("q")))].into();
        let s = a.substitute(&bind).unwrap();
        let expected = int(1).sub(&rf("p").mul(&rf("q"))).inv().unwrap();
        assert_eq!(s, expected);
        // Cross-check at p=2, q=3: 1/(1-6) = -1/5.
        let pt = point(&[("p", 2, 1), ("q", 3, 1)]);
        assert_eq!(
            s.eval(&pt).unwrap(),
            BigRational::new((-1).into(), 5.into())
        );
    }

    #[test]
    fn substitution_into_vanishing_denominator_fails() {
        let a = one_minus_r().inv().unwrap();
        let bind: BTreeMap<_, _> = [(Param::new("r"), int(1))].into();
        assert_eq!(a.substitute(&bind), Err(CoeffError::DivisionByZero));
    }

    #[test]
    fn evaluation_examples() {
        let a = one_minus_r().inv().unwrap();
        assert_eq!(
            a.eval(&point(&[("r", 2, 1)])).unwrap(),
            BigRational::from_integer((-1).into())
        );
        let b = rf("p").sub(&rf("q").inv().unwrap());
        assert_eq!(
            b.eval(&point(&[("p", 3, 1), ("q", 2, 1)])).unwrap(),
            BigRational::new(5.into(), 2.into())
        );
        assert_eq!(a.eval(&point(&[("r", 1, 1)])), Err(CoeffError::Pole));
        assert!(matches!(a.eval(&point(&[])), Err(CoeffError::Unbound(_))));
    }

    #[test]
    fn self_difference_is_stored_zero() {
        let a = rf("p")
            .mul(&rf("q"))
            .sub(&int(1))
            .div(&rf("q").mul(&one_minus_r()))
            .unwrap();
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert!(z.numerator().is_zero());
        assert!(z.denominator().is_one());
    }

    #[test]
    fn rendering() {
        let a = rf("p")
            .mul(&rf("q"))
            .sub(&int(1))
            .div(&rf("q").mul(&one_minus_r()))
            .unwrap();
        assert_eq!(a.to_string(), "-(p*q - 1)/(q*r - q)");
        assert_eq!(rf("q").pow(-2).unwrap().to_string(), "q^-2");
        assert_eq!(Coeff::ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(
            rf("q").div(&one_minus_r()).unwrap().to_string(),
            "-q/(r - 1)"
        );
    }

    #[test]
    fn parameter_set_rejects_duplicates() {
        assert!(ParameterSet::new(["p", "q"]).is_ok());
        assert_eq!(
            ParameterSet::new(["p", "p"]),
            Err(CoeffError::DuplicateParam("p".into()))
        );
    }
}
