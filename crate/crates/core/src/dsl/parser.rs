use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, Pos};

pub struct Parser {
    toks: Vec<Token>,
    i: usize,
}

pub fn parse_document(src: &str) -> Result<Document, ParseError> {
    let mut p = Parser::new(src)?;
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        let pos = p.pos();
        let stmt = p.statement()?;
        items.push(Item { pos, stmt });
    }
    Ok(Document { items })
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(src)?,
            i: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::new(self.pos(), &self.peek().text(), msg))
    }

    fn is(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.error(&format!("expected `{p}`"))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("expected `{kw}`"))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.error("unexpected token")
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("expected a name"),
        }
    }

    fn string(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("expected a string"),
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if self.eat(";") {
            Ok(())
        } else {
            self.error("expected `;`")
        }
    }

    fn names(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = vec![self.ident()?];
        while self.eat(",") {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    /// Names with `t1..t4` ranges expanded.
    fn name_ranges(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = Vec::new();
        loop {
            let pos = self.pos();
            let first = self.ident()?;
            if self.eat("..") {
                let last = self.ident()?;
                let split = |s: &str| {
                    let k = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
                    (s[..k].to_string(), s[k..].parse::<u32>().ok())
                };
                match (split(&first), split(&last)) {
                    ((a, Some(i)), (b, Some(j))) if a == b && i <= j => {
                        out.extend((i..=j).map(|n| format!("{a}{n}")));
                    }
                    _ => {
                        return Err(ParseError::new(
                            pos,
                            &format!("{first}..{last}"),
                            "invalid range",
                        ))
                    }
                }
            } else {
                out.push(first);
            }
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.error("expected a statement"),
        };
        self.bump();
        let stmt = match kw.as_str() {
            "model" => {
                let n = self.string()?;
                self.end()?;
                Stmt::Model(n)
            }
            "param" => {
                let v = self.names()?;
                self.end()?;
                Stmt::Param(v)
            }
            "gen" => {
                let v = self.names()?;
                self.end()?;
                Stmt::Gen(v)
            }
            "invertible" => {
                let v = self.names()?;
                self.end()?;
                Stmt::Invertible(v)
            }
            "subst" => {
                let (n, e) = self.binding()?;
                Stmt::Subst(n, e)
            }
            "element" => {
                let (n, e) = self.binding()?;
                Stmt::Element(n, e)
            }
            "form" => {
                let (n, e) = self.binding()?;
                Stmt::Form(n, e)
            }
            "diff" => {
                let (n, e) = self.binding()?;
                Stmt::Diff(n, e)
            }
            "rel" => {
                let a = self.expr()?;
                self.expect("=")?;
                let b = self.expr()?;
                self.end()?;
                Stmt::Rel(a, b)
            }
            "localize" => {
                let e = self.ident()?;
                self.expect_kw("as")?;
                let s = self.ident()?;
                self.end()?;
                Stmt::Localize(e, s)
            }
            "auto" | "extend" => {
                let n = self.ident()?;
                let maps = self.map_block()?;
                if kw == "auto" {
                    Stmt::Auto(n, maps)
                } else {
                    Stmt::Extend(n, maps)
                }
            }
            "calc" => Stmt::Calc(self.calc_block()?),
            "metric" | "connection" => {
                let n = self.ident()?;
                let entries = self.indexed_block(&n)?;
                if kw == "metric" {
                    Stmt::Metric(n, entries)
                } else {
                    Stmt::Connection(n, entries)
                }
            }
            "check" => Stmt::Check(self.check()?),
            "derive" => Stmt::Derive(self.derive()?),
            _ => {
                self.i -= 1;
                return self.error("unknown statement");
            }
        };
        Ok(stmt)
    }

    fn binding(&mut self) -> Result<(String, Expr), ParseError> {
        let n = self.ident()?;
        self.expect("=")?;
        let e = self.expr()?;
        self.end()?;
        Ok((n, e))
    }

    fn map_block(&mut self) -> Result<Vec<(String, Expr)>, ParseError> {
        self.expect("{")?;
        let mut out = Vec::new();
        while !self.eat("}") {
            let g = self.ident()?;
            self.expect("->")?;
            let e = self.expr()?;
            self.end()?;
            out.push((g, e));
        }
        Ok(out)
    }

    fn calc_block(&mut self) -> Result<Vec<CalcItem>, ParseError> {
        self.expect("{")?;
        let mut out = Vec::new();
        while !self.eat("}") {
            let kw = self.ident()?;
            let item = match kw.as_str() {
                "theta" => CalcItem::Theta(self.name_ranges()?),
                "twist" => {
                    let t = self.ident()?;
                    self.expect("=")?;
                    CalcItem::Twist(t, self.ident()?)
                }
                "weight" => {
                    let t = self.ident()?;
                    self.expect("=")?;
                    CalcItem::Weight(t, self.expr()?)
                }
                "wedge" => {
                    let hi = self.ident()?;
                    self.expect("*")?;
                    let lo = self.ident()?;
                    self.expect("=")?;
                    CalcItem::Wedge {
                        hi,
                        lo,
                        rhs: self.expr()?,
                    }
                }
                _ => {
                    self.i -= 1;
                    return self.error("expected theta, twist, weight or wedge");
                }
            };
            self.end()?;
            out.push(item);
        }
        Ok(out)
    }

    fn indexed_block(&mut self, name: &str) -> Result<Vec<IndexedEntry>, ParseError> {
        self.expect("{")?;
        let mut out = Vec::new();
        while !self.eat("}") {
            let pos = self.pos();
            let n = self.ident()?;
            if n != name {
                return Err(ParseError::new(pos, &n, &format!("expected `{name}`")));
            }
            self.expect("[")?;
            let i = self.ident()?;
            self.expect(",")?;
            let j = self.ident()?;
            self.expect("]")?;
            self.expect("=")?;
            let e = self.expr()?;
            self.end()?;
            out.push((i, j, e));
        }
        Ok(out)
    }

    fn anchor(&mut self) -> Result<Option<String>, ParseError> {
        if self.is_kw("anchor") {
            self.bump();
            Ok(Some(self.string()?))
        } else {
            Ok(None)
        }
    }

    fn check(&mut self) -> Result<CheckStmt, ParseError> {
        let name = self.string()?;
        let anchor = self.anchor()?;
        let mut mirror = Vec::new();
        if self.is_kw("mirror") {
            self.bump();
            self.expect("(")?;
            loop {
                let a = self.ident()?;
                self.expect("->")?;
                mirror.push((a, self.ident()?));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
        }
        self.expect(":")?;
        let negated = self.eat("!");
        let body = match self.peek().clone() {
            Tok::Ident(k) if ["passes", "compatible", "torsion_free"].contains(&k.as_str()) => {
                let at = self.i;
                self.bump();
                if !self.eat("(") {
                    self.i = at;
                    self.equal_body(negated)?
                } else {
                    let args = self.names()?;
                    self.expect(")")?;
                    let want = if k == "torsion_free" { 1 } else { 2 };
                    if args.len() != want {
                        return self.error(&format!("`{k}` takes {want} argument(s)"));
                    }
                    match k.as_str() {
                        "passes" if !negated => CheckBody::Passes(args[0].clone(), args[1].clone()),
                        "passes" => return self.error("`passes` cannot be negated"),
                        "compatible" => CheckBody::Compatible {
                            negated,
                            connection: args[0].clone(),
                            metric: args[1].clone(),
                        },
                        _ => CheckBody::TorsionFree {
                            negated,
                            connection: args[0].clone(),
                        },
                    }
                }
            }
            _ => self.equal_body(negated)?,
        };
        self.end()?;
        Ok(CheckStmt {
            name,
            anchor,
            mirror,
            body,
        })
    }

    fn equal_body(&mut self, negated: bool) -> Result<CheckBody, ParseError> {
        if negated {
            return self.error("only predicates can be negated");
        }
        let a = self.expr()?;
        self.expect("==")?;
        let b = self.expr()?;
        Ok(CheckBody::Equal(a, b))
    }

    fn derive(&mut self) -> Result<DeriveStmt, ParseError> {
        let name = self.string()?;
        let anchor = self.anchor()?;
        self.expect("{")?;
        let (mut forms, mut elements, mut order, mut expect) =
            (None, None, OrderKw::ElementFirst, Vec::new());
        while !self.eat("}") {
            let kw = self.ident()?;
            match kw.as_str() {
                "forms" => forms = Some(self.names()?),
                "elements" => elements = Some(self.names()?),
                "order" => {
                    order = match self.ident()?.as_str() {
                        "element_first" => OrderKw::ElementFirst,
                        "form_first" => OrderKw::FormFirst,
                        _ => {
                            self.i -= 1;
                            return self.error("expected element_first or form_first");
                        }
                    }
                }
                "expect" => expect.push(self.string()?),
                _ => {
                    self.i -= 1;
                    return self.error("expected forms, elements, order or expect");
                }
            }
            self.end()?;
        }
        let (Some(forms), Some(elements)) = (forms, elements) else {
            self.i -= 1;
            return self.error("derive needs both `forms` and `elements`");
        };
        Ok(DeriveStmt {
            name,
            anchor,
            forms,
            elements,
            order,
            expect,
        })
    }

    // sum := term (("+" | "-") term)*
    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.is("+") {
                BinOp::Add
            } else if self.is("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    // term := unary (("*" | "/") unary)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.is("*") {
                BinOp::Mul
            } else if self.is("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while self.eat("^") {
            let neg = self.eat("-");
            let n = match self.peek() {
                Tok::Int(n) if *n <= i32::MAX as u64 => *n as i32,
                _ => return self.error("expected an integer exponent"),
            };
            self.bump();
            base = Expr::Pow(Box::new(base), if neg { -n } else { n });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.bump();
                if self.eat("(") {
                    let mut args = Vec::new();
                    if !self.eat(")") {
                        loop {
                            args.push(self.expr()?);
                            if self.eat(")") {
                                break;
                            }
                            self.expect(",")?;
                        }
                    }
                    Ok(Expr::Call(s, args))
                } else {
                    Ok(Expr::Ident(s))
                }
            }
            Tok::Punct("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => self.error("expected an expression"),
        }
    }
}
