use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{write_rational, write_term, Monomial, Param, Polynomial};
use super::CoeffError;

/// An element of the field Q(p, q, r, ...) of rational functions.
///
/// Stored as numerator/denominator with non-negative exponents, no common
/// monomial factor, and a denominator whose graded-lex leading coefficient
/// is `+1`. Polynomial common factors are cancelled opportunistically (by
/// exact division); equality is decided by cross-multiplication, so the
/// representation need not be fully reduced.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        RationalFunction::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        RationalFunction {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        RationalFunction::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn param(name: &str) -> Self {
        RationalFunction::from_polynomial(Polynomial::var(Param::new(name)))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction::normalized(p, Polynomial::one())
    }

    /// Builds `num / den`, failing when `den` is the zero polynomial.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(RationalFunction::normalized(num, den))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RationalFunction::zero();
        }
        // Clear the common Laurent-monomial factor so both sides are genuine
        // polynomials sharing no monomial factor.
        let shift = num
            .monomial_content()
            .unwrap()
            .gcd_exponents(&den.monomial_content().unwrap());
        let (mut num, mut den) = if shift.is_one() {
            (num, den)
        } else {
            let inv = Monomial::one().div(&shift);
            (num.mul_monomial(&inv), den.mul_monomial(&inv))
        };
        if den.len() > 1 {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = Polynomial::one();
            } else if num.len() > 1 {
                if let Some(q) = den.div_exact(&num) {
                    num = Polynomial::one();
                    den = q;
                }
            }
        }
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The rational value when no parameter occurs.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// True when this is `c * m` for a rational `c` and Laurent monomial `m`.
    pub fn as_monomial(&self) -> Option<(BigRational, Monomial)> {
        let (nm, nc) = self.num.as_single_term()?;
        let (dm, dc) = self.den.as_single_term()?;
        Some((nc / dc, nm.div(dm)))
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RationalFunction::normalized(self.num.add(&other.num), self.den.clone());
        }
        if self.den.len() > 1 {
            if let Some(k) = self.den.div_exact(&other.den) {
                return RationalFunction::normalized(
                    self.num.add(&other.num.mul(&k)),
                    self.den.clone(),
                );
            }
        }
        if other.den.len() > 1 {
            if let Some(k) = other.den.div_exact(&self.den) {
                return RationalFunction::normalized(
                    self.num.mul(&k).add(&other.num),
                    other.den.clone(),
                );
            }
        }
        RationalFunction::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RationalFunction::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (other.num.clone(), other.den.clone());
        cancel(&mut n1, &mut d2);
        cancel(&mut n2, &mut d1);
        RationalFunction::normalized(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(RationalFunction::normalized(
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self, CoeffError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i32) -> Result<Self, CoeffError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs();
        Ok(RationalFunction::normalized(
            base.num.pow(k),
            base.den.pow(k),
        ))
    }

    /// Exact value at a rational point.
    pub fn eval(&self, point: &BTreeMap<Param, BigRational>) -> Result<BigRational, CoeffError> {
        let d = eval_poly(&self.den, point)?;
        if d.is_zero() {
            return Err(CoeffError::Pole);
        }
        Ok(eval_poly(&self.num, point)? / d)
    }

    /// Simultaneous substitution of parameters by rational functions.
    /// Parameters without a binding are left unchanged.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<Param, RationalFunction>,
    ) -> Result<Self, CoeffError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, bindings)?;
        let d = subst_poly(&self.den, bindings)?;
        n.div(&d)
    }

    pub fn params(&self) -> std::collections::BTreeSet<Param> {
        self.num
            .params()
            .chain(self.den.params())
            .cloned()
            .collect()
    }

    /// Laurent-polynomial view when the denominator is a bare monomial.
    fn as_laurent(&self) -> Option<Polynomial> {
        let (dm, dc) = self.den.as_single_term()?;
        let inv = Monomial::one().div(dm);
        Some(self.num.mul_monomial(&inv).scale(&dc.recip()))
    }

    /// True when the rendered form needs parentheses inside a product.
    pub fn is_compound(&self) -> bool {
        match self.as_laurent() {
            Some(p) => p.len() > 1,
            None => true,
        }
    }

    /// True when the rendering starts with a minus sign.
    pub fn is_negative_looking(&self) -> bool {
        match self.as_laurent() {
            Some(p) => p.sign_of_leading() < 0,
            None => self.num.sign_of_leading() < 0,
        }
    }
}

fn cancel(num: &mut Polynomial, den: &mut Polynomial) {
    if den.len() > 1 {
        if let Some(q) = num.div_exact(den) {
            *num = q;
            *den = Polynomial::one();
        }
    }
}

fn eval_poly(
    p: &Polynomial,
    point: &BTreeMap<Param, BigRational>,
) -> Result<BigRational, CoeffError> {
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (param, e) in m.factors() {
            let v = point
                .get(param)
                .ok_or_else(|| CoeffError::Unbound(param.name().to_string()))?;
            if e < 0 && v.is_zero() {
                return Err(CoeffError::Pole);
            }
            t *= num_traits::pow::Pow::pow(v, e);
        }
        acc += t;
    }
    Ok(acc)
}

fn subst_poly(
    p: &Polynomial,
    bindings: &BTreeMap<Param, RationalFunction>,
) -> Result<RationalFunction, CoeffError> {
    let mut acc = RationalFunction::zero();
    for (m, c) in p.terms() {
        let mut t = RationalFunction::from_rational(c.clone());
        let mut rest = Monomial::one();
        for (param, e) in m.factors() {
            match bindings.get(param) {
                Some(v) => t = t.mul(&v.pow(e)?),
                None => rest = rest.mul(&Monomial::var(param.clone(), e)),
            }
        }
        let t = t.mul(&RationalFunction::from_polynomial(Polynomial::term(
            rest,
            BigRational::one(),
        )));
        acc = acc.add(&t);
    }
    Ok(acc)
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RationalFunction {}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl From<i64> for RationalFunction {
    fn from(n: i64) -> Self {
        RationalFunction::from_integer(n)
    }
}

impl From<BigRational> for RationalFunction {
    fn from(c: BigRational) -> Self {
        RationalFunction::from_rational(c)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: Self) -> RationalFunction {
        RationalFunction::add(self, rhs)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: Self) -> RationalFunction {
        RationalFunction::sub(self, rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: Self) -> RationalFunction {
        RationalFunction::mul(self, rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(self)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalFunction {
    /// Renders in the model-file expression syntax, e.g. `q^-1`,
    /// `p*q - 1` or `(p*q - 1)/(q*r - q)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_laurent() {
            return write!(f, "{p}");
        }
        let wrap = |p: &Polynomial| -> String {
            if p.len() > 1 {
                format!("({p})")
            } else {
                format!("{p}")
            }
        };
        if let Some((m, c)) = self.num.as_single_term() {
            if c.is_negative() {
                f.write_str("-")?;
            }
            let abs = c.abs();
            if m.is_one() {
                write_rational(f, &abs)?;
            } else {
                write_term(f, &abs, m, true)?;
            }
            return write!(f, "/{}", wrap(&self.den));
        }
        if self.num.sign_of_leading() < 0 {
            return write!(f, "-({})/{}", self.num.neg(), wrap(&self.den));
        }
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}
