use std::fmt;

use super::Pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Ident(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Ident(_) | Expr::Call(..) => 5,
        }
    }

    /// Replaces identifiers according to `map`.
    pub fn rename(&self, map: &[(String, String)]) -> Expr {
        match self {
            Expr::Int(n) => Expr::Int(*n),
            Expr::Ident(s) => Expr::Ident(
                map.iter()
                    .find(|(from, _)| from == s)
                    .map_or_else(|| s.clone(), |(_, to)| to.clone()),
            ),
            Expr::Neg(a) => Expr::Neg(Box::new(a.rename(map))),
            Expr::Bin(op, a, b) => Expr::bin(*op, a.rename(map), b.rename(map)),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.rename(map)), *n),
            Expr::Call(f, args) => {
                Expr::Call(f.clone(), args.iter().map(|a| a.rename(map)).collect())
            }
        }
    }

    /// Minimal parenthesization; re-parses to the same tree.
    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| -> fmt::Result {
            if e.prec() < min {
                f.write_str("(")?;
                e.write(f)?;
                f.write_str(")")
            } else {
                e.write(f)
            }
        };
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Ident(s) => f.write_str(s),
            Expr::Neg(a) => {
                f.write_str("-")?;
                sub(f, a, 3)
            }
            Expr::Bin(op, a, b) => {
                let (p, sym) = match op {
                    BinOp::Add => (1, " + "),
                    BinOp::Sub => (1, " - "),
                    BinOp::Mul => (2, "*"),
                    BinOp::Div => (2, "/"),
                };
                sub(f, a, p)?;
                f.write_str(sym)?;
                sub(f, b, p + 1)
            }
            Expr::Pow(a, n) => {
                sub(f, a, 5)?;
                write!(f, "^{n}")
            }
            Expr::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.write(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CalcItem {
    Theta(Vec<String>),
    Twist(String, String),
    Weight(String, Expr),
    Wedge { hi: String, lo: String, rhs: Expr },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKw {
    ElementFirst,
    FormFirst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckBody {
    Equal(Expr, Expr),
    /// `passes(form, auto)`: `ω g = φ(g) ω` for every generator.
    Passes(String, String),
    Compatible {
        negated: bool,
        connection: String,
        metric: String,
    },
    TorsionFree {
        negated: bool,
        connection: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckStmt {
    pub name: String,
    pub anchor: Option<String>,
    pub mirror: Vec<(String, String)>,
    pub body: CheckBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeriveStmt {
    pub name: String,
    pub anchor: Option<String>,
    pub forms: Vec<String>,
    pub elements: Vec<String>,
    pub order: OrderKw,
    pub expect: Vec<String>,
}

/// `(left index label, right index label, value)`.
pub type IndexedEntry = (String, String, Expr);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Model(String),
    Param(Vec<String>),
    Subst(String, Expr),
    Gen(Vec<String>),
    Invertible(Vec<String>),
    Rel(Expr, Expr),
    Element(String, Expr),
    Localize(String, String),
    Auto(String, Vec<(String, Expr)>),
    Calc(Vec<CalcItem>),
    Form(String, Expr),
    Diff(String, Expr),
    Extend(String, Vec<(String, Expr)>),
    Metric(String, Vec<IndexedEntry>),
    Connection(String, Vec<IndexedEntry>),
    Check(CheckStmt),
    Derive(DeriveStmt),
}

#[derive(Debug, Clone)]
pub struct Item {
    pub pos: Pos,
    pub stmt: Stmt,
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.stmt == other.stmt
    }
}

/// A parsed model file. Equality ignores source positions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub items: Vec<Item>,
}

fn list(names: &[String]) -> String {
    names.join(", ")
}

fn quoted(s: &str) -> String {
    format!("\"{s}\"")
}

fn label_opts(f: &mut fmt::Formatter<'_>, anchor: &Option<String>) -> fmt::Result {
    if let Some(a) = anchor {
        write!(f, " anchor {}", quoted(a))?;
    }
    Ok(())
}

fn block(f: &mut fmt::Formatter<'_>, head: &str, lines: &[String]) -> fmt::Result {
    writeln!(f, "{head} {{")?;
    for l in lines {
        writeln!(f, "    {l}")?;
    }
    writeln!(f, "}}")
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Model(n) => writeln!(f, "model {};", quoted(n)),
            Stmt::Param(v) => writeln!(f, "param {};", list(v)),
            Stmt::Subst(p, e) => writeln!(f, "subst {p} = {e};"),
            Stmt::Gen(v) => writeln!(f, "gen {};", list(v)),
            Stmt::Invertible(v) => writeln!(f, "invertible {};", list(v)),
            Stmt::Rel(a, b) => writeln!(f, "rel {a} = {b};"),
            Stmt::Element(n, e) => writeln!(f, "element {n} = {e};"),
            Stmt::Localize(e, s) => writeln!(f, "localize {e} as {s};"),
            Stmt::Auto(n, maps) | Stmt::Extend(n, maps) => {
                let kw = if matches!(self, Stmt::Auto(..)) {
                    "auto"
                } else {
                    "extend"
                };
                let lines: Vec<String> = maps.iter().map(|(g, e)| format!("{g} -> {e};")).collect();
                block(f, &format!("{kw} {n}"), &lines)
            }
            Stmt::Calc(items) => {
                let lines: Vec<String> = items
                    .iter()
                    .map(|it| match it {
                        CalcItem::Theta(v) => format!("theta {};", list(v)),
                        CalcItem::Twist(t, a) => format!("twist {t} = {a};"),
                        CalcItem::Weight(t, e) => format!("weight {t} = {e};"),
                        CalcItem::Wedge { hi, lo, rhs } => format!("wedge {hi}*{lo} = {rhs};"),
                    })
                    .collect();
                block(f, "calc", &lines)
            }
            Stmt::Form(n, e) => writeln!(f, "form {n} = {e};"),
            Stmt::Diff(g, e) => writeln!(f, "diff {g} = {e};"),
            Stmt::Metric(n, entries) | Stmt::Connection(n, entries) => {
                let kw = if matches!(self, Stmt::Metric(..)) {
                    "metric"
                } else {
                    "connection"
                };
                let lines: Vec<String> = entries
                    .iter()
                    .map(|(i, j, e)| format!("{n}[{i}, {j}] = {e};"))
                    .collect();
                block(f, &format!("{kw} {n}"), &lines)
            }
            Stmt::Check(c) => {
                write!(f, "check {}", quoted(&c.name))?;
                label_opts(f, &c.anchor)?;
                if !c.mirror.is_empty() {
                    let m: Vec<String> = c
                        .mirror
                        .iter()
                        .map(|(a, b)| format!("{a} -> {b}"))
                        .collect();
                    write!(f, " mirror({})", m.join(", "))?;
                }
                let bang = |n: bool| if n { "!" } else { "" };
                match &c.body {
                    CheckBody::Equal(a, b) => writeln!(f, ": {a} == {b};"),
                    CheckBody::Passes(w, a) => writeln!(f, ": passes({w}, {a});"),
                    CheckBody::Compatible {
                        negated,
                        connection,
                        metric,
                    } => writeln!(f, ": {}compatible({connection}, {metric});", bang(*negated)),
                    CheckBody::TorsionFree {
                        negated,
                        connection,
                    } => {
                        writeln!(f, ": {}torsion_free({connection});", bang(*negated))
                    }
                }
            }
            Stmt::Derive(d) => {
                write!(f, "derive {}", quoted(&d.name))?;
                label_opts(f, &d.anchor)?;
                writeln!(f, " {{")?;
                writeln!(f, "    forms {};", list(&d.forms))?;
                writeln!(f, "    elements {};", list(&d.elements))?;
                let order = match d.order {
                    OrderKw::ElementFirst => "element_first",
                    OrderKw::FormFirst => "form_first",
                };
                writeln!(f, "    order {order};")?;
                for e in &d.expect {
                    writeln!(f, "    expect {};", quoted(e))?;
                }
                writeln!(f, "}}")
            }
        }
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            write!(f, "{}", item.stmt)?;
        }
        Ok(())
    }
}
