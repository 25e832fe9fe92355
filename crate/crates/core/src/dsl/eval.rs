use std::collections::BTreeMap;

use indexmap::IndexMap;

use super::ast::{BinOp, Expr};
use crate::algebra::{Algebra, Element, Sym};
use crate::calculus::{Calculus, Form};
use crate::coeff::Coeff;

/// The value of an expression: a scalar, an algebra element or a form.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(Coeff),
    Elem(Element),
    Form(Form),
}

impl Value {
    pub fn into_element(self) -> Option<Element> {
        match self {
            Value::Scalar(c) => Some(Element::scalar(c)),
            Value::Elem(e) => Some(e),
            Value::Form(f) => f.as_element(),
        }
    }

    pub fn into_form(self) -> Form {
        match self {
            Value::Scalar(c) => Form::from_element(Element::scalar(c)),
            Value::Elem(e) => Form::from_element(e),
            Value::Form(f) => f,
        }
    }

    pub fn into_scalar(self) -> Option<Coeff> {
        match self {
            Value::Scalar(c) => Some(c),
            other => other.into_element()?.as_scalar(),
        }
    }

    pub fn render(&self, alg: &Algebra, calc: Option<&Calculus>) -> String {
        match self {
            Value::Scalar(c) => c.to_string(),
            Value::Elem(e) => e.display(alg.table()).to_string(),
            Value::Form(f) => match calc {
                Some(calc) => calc.render(f),
                None => f.as_element().map_or_else(
                    || "<form>".to_string(),
                    |e| e.display(alg.table()).to_string(),
                ),
            },
        }
    }
}

/// Name resolution for expression evaluation.
pub struct Scope<'a> {
    pub params: &'a [String],
    pub subst: &'a BTreeMap<String, Coeff>,
    pub algebra: Option<&'a Algebra>,
    pub elements: &'a IndexMap<String, Element>,
    pub calc: Option<&'a Calculus>,
    pub forms: &'a IndexMap<String, Form>,
}

pub(crate) enum Atom {
    Scalar(Coeff),
    Letter(Sym),
}

impl Scope<'_> {
    pub fn param(&self, name: &str) -> Option<Coeff> {
        if !self.params.iter().any(|p| p == name) {
            return None;
        }
        Some(
            self.subst
                .get(name)
                .cloned()
                .unwrap_or_else(|| Coeff::param(name)),
        )
    }

    fn lookup(&self, name: &str) -> Result<Value, String> {
        if let Some(c) = self.param(name) {
            return Ok(Value::Scalar(c));
        }
        if let Some(alg) = self.algebra {
            if let Ok(g) = alg.generator(name) {
                return Ok(Value::Elem(g));
            }
        }
        if let Some(e) = self.elements.get(name) {
            return Ok(Value::Elem(e.clone()));
        }
        if let Some(calc) = self.calc {
            if let Some(s) = calc.label_index(name) {
                return Ok(Value::Form(Form::theta(s)));
            }
        }
        if let Some(f) = self.forms.get(name) {
            return Ok(Value::Form(f.clone()));
        }
        Err(format!("unknown symbol `{name}`"))
    }

    fn calc(&self, what: &str) -> Result<&Calculus, String> {
        self.calc
            .ok_or_else(|| format!("{what} needs a calc block"))
    }

    fn alg(&self) -> Result<&Algebra, String> {
        self.algebra
            .ok_or_else(|| "generators are not declared yet".to_string())
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, String> {
        match e {
            Expr::Int(n) => {
                let n = i64::try_from(*n).map_err(|_| format!("integer {n} is too large"))?;
                Ok(Value::Scalar(Coeff::from_integer(n)))
            }
            Expr::Ident(s) => self.lookup(s),
            Expr::Neg(a) => Ok(match self.eval(a)? {
                Value::Scalar(c) => Value::Scalar(c.neg()),
                Value::Elem(x) => Value::Elem(x.neg()),
                Value::Form(f) => Value::Form(f.neg()),
            }),
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Add => self.add(x, y, false),
                    BinOp::Sub => self.add(x, y, true),
                    BinOp::Mul => self.mul(x, y),
                    BinOp::Div => {
                        let d = y
                            .into_scalar()
                            .ok_or("only division by scalars is supported")?;
                        let inv = d.inv().map_err(|_| "division by zero".to_string())?;
                        self.mul(x, Value::Scalar(inv))
                    }
                }
            }
            Expr::Pow(a, n) => self.pow(self.eval(a)?, *n),
            Expr::Call(f, args) => match (f.as_str(), args.as_slice()) {
                ("d", [x]) => {
                    let calc = self.calc("d")?;
                    Ok(Value::Form(calc.d(&self.eval(x)?.into_form())))
                }
                ("mc", []) => Ok(Value::Form(self.calc("mc")?.mc_form().clone())),
                _ => Err(format!(
                    "unknown function `{f}` with {} argument(s)",
                    args.len()
                )),
            },
        }
    }

    fn add(&self, x: Value, y: Value, sub: bool) -> Result<Value, String> {
        Ok(match (x, y) {
            (Value::Scalar(a), Value::Scalar(b)) => {
                Value::Scalar(if sub { a.sub(&b) } else { a.add(&b) })
            }
            (x @ Value::Form(_), y) | (x, y @ Value::Form(_)) => {
                let (a, b) = (x.into_form(), y.into_form());
                Value::Form(if sub { a.sub(&b) } else { a.add(&b) })
            }
            (x, y) => {
                let (a, b) = (
                    x.into_element().expect("element"),
                    y.into_element().expect("element"),
                );
                Value::Elem(if sub { a.sub(&b) } else { a.add(&b) })
            }
        })
    }

    fn mul(&self, x: Value, y: Value) -> Result<Value, String> {
        Ok(match (x, y) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a.mul(&b)),
            (Value::Scalar(c), Value::Elem(e)) | (Value::Elem(e), Value::Scalar(c)) => {
                Value::Elem(e.scale(&c))
            }
            (Value::Scalar(c), Value::Form(f)) | (Value::Form(f), Value::Scalar(c)) => {
                Value::Form(f.scale(&c))
            }
            (Value::Elem(a), Value::Elem(b)) => Value::Elem(self.alg()?.mul(&a, &b)),
            (Value::Elem(a), Value::Form(f)) => {
                Value::Form(self.calc("a form product")?.left_mul(&a, &f))
            }
            (Value::Form(f), Value::Elem(a)) => {
                Value::Form(self.calc("a form product")?.right_mul(&f, &a))
            }
            (Value::Form(f), Value::Form(g)) => {
                Value::Form(self.calc("a form product")?.wedge(&f, &g))
            }
        })
    }

    fn pow(&self, x: Value, n: i32) -> Result<Value, String> {
        match x {
            Value::Scalar(c) => c
                .pow(n)
                .map(Value::Scalar)
                .map_err(|_| "zero to a negative power".to_string()),
            Value::Elem(e) => {
                let alg = self.alg()?;
                let base = if n < 0 {
                    alg.inverse_monomial(&e).map_err(|err| err.to_string())?
                } else {
                    e
                };
                Ok(Value::Elem(alg.pow(&base, n.unsigned_abs())))
            }
            Value::Form(f) => {
                if n < 0 {
                    return Err("negative powers of forms are undefined".into());
                }
                let calc = self.calc("a form power")?;
                let mut acc = Form::from_element(Element::one());
                for _ in 0..n {
                    acc = calc.wedge(&acc, &f);
                }
                Ok(Value::Form(acc))
            }
        }
    }

    /// Evaluation in the free algebra on `letter`, with parameters as
    /// scalars. Used for presentations and wedge rules.
    pub(crate) fn eval_free(
        &self,
        e: &Expr,
        letter: &dyn Fn(&str) -> Option<Sym>,
    ) -> Result<BTreeMap<Vec<Sym>, Coeff>, String> {
        type Poly = BTreeMap<Vec<Sym>, Coeff>;
        fn add_into(out: &mut Poly, w: Vec<Sym>, c: Coeff) {
            let e = out.entry(w.clone()).or_insert_with(Coeff::zero);
            *e = e.add(&c);
            if e.is_zero() {
                out.remove(&w);
            }
        }
        fn product(a: &Poly, b: &Poly) -> Poly {
            let mut out = Poly::new();
            for (wa, ca) in a {
                for (wb, cb) in b {
                    let mut w = wa.clone();
                    w.extend(wb);
                    add_into(&mut out, w, ca.mul(cb));
                }
            }
            out
        }
        let scalar = |c: Coeff| -> Poly {
            let mut p = Poly::new();
            add_into(&mut p, Vec::new(), c);
            p
        };
        Ok(match e {
            Expr::Int(n) => scalar(Coeff::from_integer(
                i64::try_from(*n).map_err(|_| "integer too large")?,
            )),
            Expr::Ident(s) => match self.atom(s, letter) {
                Some(Atom::Scalar(c)) => scalar(c),
                Some(Atom::Letter(l)) => {
                    let mut p = Poly::new();
                    p.insert(vec![l], Coeff::one());
                    p
                }
                None => return Err(format!("unknown symbol `{s}`")),
            },
            Expr::Neg(a) => self
                .eval_free(a, letter)?
                .into_iter()
                .map(|(w, c)| (w, c.neg()))
                .collect(),
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.eval_free(a, letter)?, self.eval_free(b, letter)?);
                match op {
                    BinOp::Add | BinOp::Sub => {
                        let mut out = x;
                        for (w, c) in y {
                            add_into(&mut out, w, if *op == BinOp::Sub { c.neg() } else { c });
                        }
                        out
                    }
                    BinOp::Mul => product(&x, &y),
                    BinOp::Div => {
                        let d = match y.len() {
                            0 => return Err("division by zero".into()),
                            1 => match y.get(&Vec::new()) {
                                Some(c) => c.clone(),
                                None => return Err("only division by scalars is supported".into()),
                            },
                            _ => return Err("only division by scalars is supported".into()),
                        };
                        let inv = d.inv().map_err(|_| "division by zero".to_string())?;
                        product(&x, &scalar(inv))
                    }
                }
            }
            Expr::Pow(a, n) => {
                let x = self.eval_free(a, letter)?;
                if *n < 0 {
                    match (x.len(), x.get(&Vec::new())) {
                        (1, Some(c)) => scalar(
                            c.pow(*n)
                                .map_err(|_| "zero to a negative power".to_string())?,
                        ),
                        _ => return Err("negative powers are only allowed for scalars here".into()),
                    }
                } else {
                    let mut acc = scalar(Coeff::one());
                    for _ in 0..*n {
                        acc = product(&acc, &x);
                    }
                    acc
                }
            }
            Expr::Call(f, _) => return Err(format!("`{f}(...)` is not allowed here")),
        })
    }

    fn atom(&self, name: &str, letter: &dyn Fn(&str) -> Option<Sym>) -> Option<Atom> {
        if let Some(c) = self.param(name) {
            return Some(Atom::Scalar(c));
        }
        letter(name).map(Atom::Letter)
    }
}
