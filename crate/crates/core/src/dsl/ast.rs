use super::Span;
use crate::special::HeckeRegion;

/// Integer polynomial over indices and parameters. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct IntExpr {
    pub kind: IntKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntKind {
    Lit(i64),
    Var(String),
    Neg(Box<IntExpr>),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    Pow(Box<IntExpr>, u32),
    /// `binom(e, k)` for a literal `k`
    Binom(Box<IntExpr>, u32),
}

impl PartialEq for IntExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl IntExpr {
    pub fn new(kind: IntKind, span: Span) -> Self {
        IntExpr { kind, span }
    }

    pub fn lit(n: i64) -> Self {
        IntExpr::new(IntKind::Lit(n), Span::default())
    }

    pub fn var(name: &str) -> Self {
        IntExpr::new(IntKind::Var(name.into()), Span::default())
    }

    pub fn vars(&self, out: &mut Vec<String>) {
        match &self.kind {
            IntKind::Lit(_) => {}
            IntKind::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            IntKind::Neg(a) | IntKind::Pow(a, _) | IntKind::Binom(a, _) => a.vars(out),
            IntKind::Add(a, b) | IntKind::Sub(a, b) | IntKind::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }
}

/// Index set of a sum.
#[derive(Clone, Debug, PartialEq)]
pub enum SumIndex {
    /// `n1 >= n2 >= ... >= nk >= 0`
    Chain(Vec<String>),
    /// `n in Z`
    Bilateral(String),
}

/// A q-series expression. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(i64),
    /// An integer parameter or index used as a constant.
    Var(String),
    Q,
    Z,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, IntExpr),
    /// `(a, b, ...; q^step)_len`, infinite without a length
    Poch {
        bases: Vec<Expr>,
        step: IntExpr,
        len: Option<IntExpr>,
    },
    /// `(a, b, ...; q^step)_∞`
    Theta {
        bases: Vec<Expr>,
        step: IntExpr,
    },
    QBinom(IntExpr, IntExpr),
    Sum {
        index: SumIndex,
        body: Box<Expr>,
    },
    /// Abel-regularised `Σ (-1)^{n_1} body` over a chain
    AltSum {
        chain: Vec<String>,
        body: Box<Expr>,
    },
    /// `Σ_{n∈Z} body` for a body of monomials and binomials `1 ± m`
    Appell {
        var: String,
        body: Box<Expr>,
    },
    /// `Σ_{n>=0} Σ_{j in region} body`
    Hecke {
        n: String,
        j: String,
        region: HeckeRegion,
        body: Box<Expr>,
    },
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    /// Direct subexpressions, in source order.
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Int(_) | ExprKind::Var(_) | ExprKind::Q | ExprKind::Z | ExprKind::QBinom(..) => vec![],
            ExprKind::Neg(a) | ExprKind::Pow(a, _) => vec![a],
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) => vec![a, b],
            ExprKind::Poch { bases, .. } | ExprKind::Theta { bases, .. } => bases.iter().collect(),
            ExprKind::Sum { body, .. }
            | ExprKind::AltSum { body, .. }
            | ExprKind::Appell { body, .. }
            | ExprKind::Hecke { body, .. } => vec![body],
        }
    }

    /// Integer expressions held directly by this node.
    pub fn int_exprs(&self) -> Vec<&IntExpr> {
        match &self.kind {
            ExprKind::Pow(_, e) => vec![e],
            ExprKind::Poch { step, len: Some(l), .. } => vec![step, l],
            ExprKind::Poch { step, .. } | ExprKind::Theta { step, .. } => vec![step],
            ExprKind::QBinom(a, b) => vec![a, b],
            _ => vec![],
        }
    }

    /// Whether a summation node occurs anywhere below (or at) this node.
    pub fn has_sum(&self) -> bool {
        matches!(
            self.kind,
            ExprKind::Sum { .. } | ExprKind::AltSum { .. } | ExprKind::Appell { .. } | ExprKind::Hecke { .. }
        ) || self.children().iter().any(|c| c.has_sum())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub lo: IntExpr,
    pub hi: IntExpr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZBinding {
    Formal,
    /// `z = sign * q^exp`
    Monomial {
        sign: i8,
        exp: IntExpr,
    },
}

#[derive(Clone, Debug)]
pub struct IdentitySpec {
    pub name: String,
    pub params: Vec<Param>,
    pub scale: i64,
    pub order: i64,
    pub z: ZBinding,
    pub lhs: Expr,
    pub rhs: Expr,
    pub span: Span,
}

impl PartialEq for IdentitySpec {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name
            && self.params == o.params
            && self.scale == o.scale
            && self.order == o.order
            && self.z == o.z
            && self.lhs == o.lhs
            && self.rhs == o.rhs
    }
}

/// Which side of an identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Lhs,
    Rhs,
}

impl IdentitySpec {
    pub fn side(&self, s: Side) -> &Expr {
        match s {
            Side::Lhs => &self.lhs,
            Side::Rhs => &self.rhs,
        }
    }
}
