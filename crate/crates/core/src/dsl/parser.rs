use super::ast::*;
use super::lexer::{lex, Tok};
use super::Span;
use crate::error::{Error, Result};
use crate::special::HeckeRegion;

const RESERVED: &[&str] = &[
    "q", "z", "poch", "theta", "qbinom", "sum", "altsum", "appell", "hecke", "binom", "in", "Z", "full", "half",
    "identity", "param", "scale", "order", "lhs", "rhs",
];

/// Order used when an identity does not state one.
pub const DEFAULT_ORDER: i64 = 40;

/// Parses a file of one or more identities.
pub fn parse_file(src: &str) -> Result<Vec<IdentitySpec>> {
    let mut p = Parser { toks: lex(src)?, pos: 0, scope: Vec::new() };
    let mut out = Vec::new();
    while p.peek() != &Tok::Eof {
        out.push(p.identity()?);
    }
    if out.is_empty() {
        return Err(p.error("expected `identity`"));
    }
    Ok(out)
}

/// Parses exactly one identity.
pub fn parse(src: &str) -> Result<IdentitySpec> {
    let mut all = parse_file(src)?;
    if all.len() != 1 {
        return Err(Error::Parse { line: 1, col: 1, msg: format!("expected one identity, found {}", all.len()) });
    }
    Ok(all.remove(0))
}

/// Parses a lone expression in which `names` may appear as integer constants.
pub fn parse_expr(src: &str, names: &[String]) -> Result<Expr> {
    let mut p = Parser { toks: lex(src)?, pos: 0, scope: names.to_vec() };
    let e = p.expr()?;
    if p.peek() != &Tok::Eof {
        return Err(p.error(format!("unexpected {}", p.peek().describe())));
    }
    Ok(e)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].1
    }

    fn next(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let s = self.span();
        Error::Parse { line: s.line, col: s.col, msg: msg.into() }
    }

    fn expect(&mut self, t: Tok) -> Result<Span> {
        if *self.peek() == t {
            Ok(self.next().1)
        } else {
            Err(self.error(format!("expected {}, found {}", t.describe(), self.peek().describe())))
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Span> {
        if self.is_kw(kw) {
            Ok(self.next().1)
        } else {
            Err(self.error(format!("expected `{kw}`, found {}", self.peek().describe())))
        }
    }

    fn name(&mut self) -> Result<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                let sp = self.next().1;
                Ok((s, sp))
            }
            t => Err(self.error(format!("expected a name, found {}", t.describe()))),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(if neg { -n } else { n })
            }
            t => Err(self.error(format!("expected an integer, found {}", t.describe()))),
        }
    }

    fn identity(&mut self) -> Result<IdentitySpec> {
        let start = self.keyword("identity")?;
        let (name, _) = self.name()?;
        self.expect(Tok::LBrace)?;
        self.scope.clear();
        let mut params = Vec::new();
        while self.is_kw("param") {
            self.next();
            let (pname, psp) = self.name()?;
            if self.scope.contains(&pname) {
                return Err(Error::Parse {
                    line: psp.line,
                    col: psp.col,
                    msg: format!("parameter {pname} declared twice"),
                });
            }
            self.keyword("in")?;
            let lo = self.iexpr()?;
            self.expect(Tok::DotDot)?;
            let hi = self.iexpr()?;
            self.scope.push(pname.clone());
            params.push(Param { name: pname, lo, hi });
        }
        let mut scale = 1;
        if self.is_kw("scale") {
            self.next();
            scale = self.int()?;
            if scale < 1 {
                let s = self.prev_span();
                return Err(Error::Parse { line: s.line, col: s.col, msg: "scale must be positive".into() });
            }
        }
        let mut order = DEFAULT_ORDER;
        if self.is_kw("order") {
            self.next();
            order = self.int()?;
            if order < 0 {
                let s = self.prev_span();
                return Err(Error::Parse { line: s.line, col: s.col, msg: "order must be non-negative".into() });
            }
        }
        let mut z = ZBinding::Formal;
        if self.is_kw("z") && self.peek_at(1) == &Tok::Eq {
            self.next();
            self.next();
            let sign = if self.eat(&Tok::Minus) { -1 } else { 1 };
            self.keyword("q")?;
            let exp = if self.eat(&Tok::Caret) { self.pow_exponent()? } else { IntExpr::lit(1) };
            z = ZBinding::Monomial { sign, exp };
        }
        self.keyword("lhs")?;
        let lhs = self.expr()?;
        self.keyword("rhs")?;
        let rhs = self.expr()?;
        let end = self.expect(Tok::RBrace)?;
        Ok(IdentitySpec { name, params, scale, order, z, lhs, rhs, span: start.join(end) })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ExprKind::Add as fn(Box<Expr>, Box<Expr>) -> ExprKind,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(op(Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ExprKind::Mul as fn(Box<Expr>, Box<Expr>) -> ExprKind,
                Tok::Slash => ExprKind::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(op(Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == &Tok::Minus {
            let sp = self.next().1;
            let inner = self.unary()?;
            let span = sp.join(inner.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let e = self.pow_exponent()?;
            let span = base.span.join(self.prev_span());
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), e), span));
        }
        Ok(base)
    }

    /// `INT`, `NAME`, or `( intexpr )` after a caret.
    fn pow_exponent(&mut self) -> Result<IntExpr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let sp = self.next().1;
                Ok(IntExpr::new(IntKind::Lit(n), sp))
            }
            Tok::LParen => {
                self.open_paren()?;
                let e = self.iexpr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(_) if self.is_kw("binom") => self.iatom(),
            Tok::Ident(_) => {
                let (v, sp) = self.name()?;
                self.check_scope(&v, sp)?;
                Ok(IntExpr::new(IntKind::Var(v), sp))
            }
            t => Err(self.error(format!("expected an exponent, found {}", t.describe()))),
        }
    }

    /// Consumes `(`, rejecting it on the spot when nothing can follow.
    fn open_paren(&mut self) -> Result<()> {
        let at = self.span();
        self.next();
        if matches!(self.peek(), Tok::RParen | Tok::RBrace | Tok::Eof) {
            return Err(Error::Parse { line: at.line, col: at.col, msg: "unclosed or empty parenthesis".into() });
        }
        Ok(())
    }

    fn check_scope(&self, v: &str, sp: Span) -> Result<()> {
        if self.scope.iter().any(|s| s == v) {
            Ok(())
        } else {
            Err(Error::Parse { line: sp.line, col: sp.col, msg: format!("unknown identifier `{v}`") })
        }
    }

    fn with_bound<T>(&mut self, names: &[(String, Span)], f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        for (n, sp) in names {
            if self.scope.contains(n) {
                return Err(Error::Parse { line: sp.line, col: sp.col, msg: format!("`{n}` shadows an outer name") });
            }
        }
        let depth = self.scope.len();
        self.scope.extend(names.iter().map(|(n, _)| n.clone()));
        let out = f(self);
        self.scope.truncate(depth);
        out
    }

    fn atom(&mut self) -> Result<Expr> {
        let sp = self.span();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Expr::new(ExprKind::Int(n), sp))
            }
            Tok::LParen => {
                self.open_paren()?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(id) => match id.as_str() {
                "q" => {
                    self.next();
                    Ok(Expr::new(ExprKind::Q, sp))
                }
                "z" => {
                    self.next();
                    Ok(Expr::new(ExprKind::Z, sp))
                }
                "poch" | "theta" => self.poch(&id),
                "qbinom" => {
                    self.next();
                    self.expect(Tok::LParen)?;
                    let n = self.iexpr()?;
                    self.expect(Tok::Comma)?;
                    let k = self.iexpr()?;
                    let end = self.expect(Tok::RParen)?;
                    Ok(Expr::new(ExprKind::QBinom(n, k), sp.join(end)))
                }
                "sum" | "altsum" => self.sum(&id),
                "appell" => {
                    self.next();
                    self.expect(Tok::LParen)?;
                    let v = self.name()?;
                    self.expect(Tok::Comma)?;
                    let body = self.with_bound(std::slice::from_ref(&v), |p| p.expr())?;
                    let end = self.expect(Tok::RParen)?;
                    Ok(Expr::new(ExprKind::Appell { var: v.0, body: Box::new(body) }, sp.join(end)))
                }
                "hecke" => {
                    self.next();
                    self.expect(Tok::LParen)?;
                    let n = self.name()?;
                    self.expect(Tok::Comma)?;
                    let j = self.name()?;
                    if n.0 == j.0 {
                        return Err(Error::Parse {
                            line: j.1.line,
                            col: j.1.col,
                            msg: "hecke indices must differ".into(),
                        });
                    }
                    self.expect(Tok::Comma)?;
                    let region = if self.is_kw("full") {
                        HeckeRegion::Full
                    } else if self.is_kw("half") {
                        HeckeRegion::Half
                    } else {
                        return Err(self.error(format!("expected `full` or `half`, found {}", self.peek().describe())));
                    };
                    self.next();
                    self.expect(Tok::Comma)?;
                    let body = self.with_bound(&[n.clone(), j.clone()], |p| p.expr())?;
                    let end = self.expect(Tok::RParen)?;
                    Ok(Expr::new(ExprKind::Hecke { n: n.0, j: j.0, region, body: Box::new(body) }, sp.join(end)))
                }
                _ => {
                    let (v, sp) = self.name()?;
                    self.check_scope(&v, sp)?;
                    Ok(Expr::new(ExprKind::Var(v), sp))
                }
            },
            t => Err(self.error(format!("expected an expression, found {}", t.describe()))),
        }
    }

    fn poch(&mut self, kw: &str) -> Result<Expr> {
        let sp = self.next().1;
        self.expect(Tok::LParen)?;
        let mut bases = vec![self.expr()?];
        while self.eat(&Tok::Comma) {
            bases.push(self.expr()?);
        }
        self.expect(Tok::Semi)?;
        self.keyword("q")?;
        let step = if self.eat(&Tok::Caret) {
            let s = self.pow_exponent()?;
            if let IntKind::Lit(v) = s.kind {
                if v < 1 {
                    return Err(Error::Parse {
                        line: s.span.line,
                        col: s.span.col,
                        msg: "product step must be positive".into(),
                    });
                }
            }
            s
        } else {
            IntExpr::new(IntKind::Lit(1), self.prev_span())
        };
        let len = if kw == "poch" && self.eat(&Tok::Comma) { Some(self.iexpr()?) } else { None };
        let end = self.expect(Tok::RParen)?;
        let kind = if kw == "theta" { ExprKind::Theta { bases, step } } else { ExprKind::Poch { bases, step, len } };
        Ok(Expr::new(kind, sp.join(end)))
    }

    fn sum(&mut self, kw: &str) -> Result<Expr> {
        let sp = self.next().1;
        self.expect(Tok::LParen)?;
        let first = self.name()?;
        let (index, names) = if self.is_kw("in") {
            if kw == "altsum" {
                return Err(self.error("altsum runs over a chain ending in `>= 0`"));
            }
            self.next();
            self.keyword("Z")?;
            (SumIndex::Bilateral(first.0.clone()), vec![first])
        } else {
            let mut names = vec![first];
            loop {
                self.expect(Tok::Ge)?;
                if let Tok::Int(0) = self.peek() {
                    self.next();
                    break;
                }
                let n = self.name()?;
                if names.iter().any(|(m, _)| *m == n.0) {
                    return Err(Error::Parse { line: n.1.line, col: n.1.col, msg: format!("index {} repeated", n.0) });
                }
                names.push(n);
            }
            (SumIndex::Chain(names.iter().map(|n| n.0.clone()).collect()), names)
        };
        self.expect(Tok::Comma)?;
        let body = self.with_bound(&names, |p| p.expr())?;
        let end = self.expect(Tok::RParen)?;
        let kind = match (kw, index) {
            ("altsum", SumIndex::Chain(chain)) => ExprKind::AltSum { chain, body: Box::new(body) },
            (_, index) => ExprKind::Sum { index, body: Box::new(body) },
        };
        Ok(Expr::new(kind, sp.join(end)))
    }

    fn iexpr(&mut self) -> Result<IntExpr> {
        let mut lhs = self.iterm()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => IntKind::Add as fn(Box<IntExpr>, Box<IntExpr>) -> IntKind,
                Tok::Minus => IntKind::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.iterm()?;
            let span = lhs.span.join(rhs.span);
            lhs = IntExpr::new(op(Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn iterm(&mut self) -> Result<IntExpr> {
        let mut lhs = self.iunary()?;
        while self.eat(&Tok::Star) {
            let rhs = self.iunary()?;
            let span = lhs.span.join(rhs.span);
            lhs = IntExpr::new(IntKind::Mul(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn iunary(&mut self) -> Result<IntExpr> {
        if self.peek() == &Tok::Minus {
            let sp = self.next().1;
            let inner = self.iunary()?;
            let span = sp.join(inner.span);
            return Ok(IntExpr::new(IntKind::Neg(Box::new(inner)), span));
        }
        let base = self.iatom()?;
        if self.eat(&Tok::Caret) {
            let at = self.span();
            let k = self.int()?;
            if !(0..=16).contains(&k) {
                return Err(Error::Parse {
                    line: at.line,
                    col: at.col,
                    msg: "integer powers must lie in 0..=16".into(),
                });
            }
            let span = base.span.join(self.prev_span());
            return Ok(IntExpr::new(IntKind::Pow(Box::new(base), k as u32), span));
        }
        Ok(base)
    }

    fn iatom(&mut self) -> Result<IntExpr> {
        let sp = self.span();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(IntExpr::new(IntKind::Lit(n), sp))
            }
            Tok::LParen => {
                self.open_paren()?;
                let e = self.iexpr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(id) if id == "binom" => {
                self.next();
                self.expect(Tok::LParen)?;
                let e = self.iexpr()?;
                self.expect(Tok::Comma)?;
                let at = self.span();
                let k = self.int()?;
                if !(0..=8).contains(&k) {
                    return Err(Error::Parse {
                        line: at.line,
                        col: at.col,
                        msg: "binom needs a literal in 0..=8".into(),
                    });
                }
                let end = self.expect(Tok::RParen)?;
                Ok(IntExpr::new(IntKind::Binom(Box::new(e), k as u32), sp.join(end)))
            }
            Tok::Ident(_) => {
                let (v, sp) = self.name()?;
                self.check_scope(&v, sp)?;
                Ok(IntExpr::new(IntKind::Var(v), sp))
            }
            t => Err(self.error(format!("expected an integer expression, found {}", t.describe()))),
        }
    }
}
