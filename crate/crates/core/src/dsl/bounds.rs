use std::collections::HashMap;

use super::ast::{Expr, ExprKind, IntExpr, IntKind};
use super::poly::Poly;
use crate::engine::sums::index_cap;
use crate::error::{Error, Result};
use crate::series::{EvalContext, Rational, ZInterp};

pub type Env = HashMap<String, i64>;

fn eval_err(span: super::Span, msg: impl Into<String>) -> Error {
    Error::Eval { span, msg: msg.into() }
}

/// An integer expression as a polynomial; bound names become constants.
pub fn int_poly(e: &IntExpr, env: &Env) -> Result<Poly> {
    Ok(match &e.kind {
        IntKind::Lit(n) => Poly::int(*n),
        IntKind::Var(v) => match env.get(v) {
            Some(x) => Poly::int(*x),
            None => Poly::var(v),
        },
        IntKind::Neg(a) => int_poly(a, env)?.neg(),
        IntKind::Add(a, b) => int_poly(a, env)?.add(&int_poly(b, env)?),
        IntKind::Sub(a, b) => int_poly(a, env)?.sub(&int_poly(b, env)?),
        IntKind::Mul(a, b) => int_poly(a, env)?.mul(&int_poly(b, env)?),
        IntKind::Pow(a, k) => int_poly(a, env)?.pow(*k),
        IntKind::Binom(a, k) => int_poly(a, env)?.binom(*k),
    })
}

/// Value of an integer expression with every name bound.
pub fn int_value(e: &IntExpr, env: &Env) -> Result<i64> {
    let p = int_poly(e, env)?;
    let v = p.as_constant().ok_or_else(|| eval_err(e.span, format!("unbound name in {p}")))?;
    v.to_i64().ok_or_else(|| eval_err(e.span, format!("integer expression evaluates to {v}")))
}

/// A product step: a positive integer fixed by the parameters.
pub fn step_value(e: &IntExpr, env: &Env) -> Result<i64> {
    let v = int_value(e, env)?;
    if v < 1 {
        return Err(eval_err(e.span, format!("product step must be positive, got {v}")));
    }
    Ok(v)
}

/// Bounds on the leading q-exponent of an expression as polynomials in the
/// free summation indices: the exponent is at least the minimum over `lb`,
/// and (when nonzero) at most `ub`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    pub lb: Vec<Poly>,
    pub ub: Option<Poly>,
}

impl Bound {
    fn exact(p: Poly) -> Self {
        Bound { lb: vec![p.clone()], ub: Some(p) }
    }

    fn zero_series() -> Self {
        Bound { lb: Vec::new(), ub: None }
    }

    fn times(&self, o: &Bound) -> Self {
        let mut lb = Vec::new();
        for a in &self.lb {
            for b in &o.lb {
                push_unique(&mut lb, a.add(b));
            }
        }
        let ub = match (&self.ub, &o.ub) {
            (Some(a), Some(b)) => Some(a.add(b)),
            _ => None,
        };
        Bound { lb: collapse(lb), ub }
    }

    /// Minimum of the lower bounds at a full binding.
    pub fn min_at(&self, env: &Env) -> Option<i64> {
        self.lb.iter().filter_map(|p| p.eval(env)).filter_map(|r| r.floor_i64()).min()
    }
}

fn push_unique(v: &mut Vec<Poly>, p: Poly) {
    if !v.contains(&p) {
        v.push(p);
    }
}

/// Keeps only the smallest constant bound.
fn collapse(v: Vec<Poly>) -> Vec<Poly> {
    let mut consts: Option<Rational> = None;
    let mut out = Vec::new();
    for p in v {
        match p.as_constant() {
            Some(c) => consts = Some(consts.map_or(c.clone(), |d| d.min(c))),
            None => out.push(p),
        }
    }
    if let Some(c) = consts {
        out.push(Poly::constant(c));
    }
    out
}

fn z_shift(ctx: &EvalContext) -> i64 {
    match ctx.z() {
        ZInterp::Formal => 0,
        ZInterp::Monomial { qexp, .. } => qexp,
    }
}

/// Sum of the negative parts of `e, e + s, e + 2s, ...`.
fn negative_tail(e: i64, s: i64) -> i64 {
    let mut total = 0;
    let mut x = e;
    while x < 0 {
        total += x;
        x += s;
    }
    total
}

/// Bounds for a summation body. `nonneg` records that every free index is
/// known to be non-negative.
pub fn bound(e: &Expr, env: &Env, ctx: &EvalContext, nonneg: bool) -> Result<Bound> {
    Ok(match &e.kind {
        ExprKind::Int(0) => Bound::zero_series(),
        ExprKind::Int(_) | ExprKind::Var(_) | ExprKind::QBinom(..) => Bound::exact(Poly::int(0)),
        ExprKind::Q => Bound::exact(Poly::int(1)),
        ExprKind::Z => Bound::exact(Poly::int(z_shift(ctx))),
        ExprKind::Neg(a) => bound(a, env, ctx, nonneg)?,
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
            let (x, y) = (bound(a, env, ctx, nonneg)?, bound(b, env, ctx, nonneg)?);
            let mut lb = x.lb.clone();
            for p in y.lb {
                push_unique(&mut lb, p);
            }
            Bound { lb: collapse(lb), ub: x.ub.or(y.ub) }
        }
        ExprKind::Mul(a, b) => bound(a, env, ctx, nonneg)?.times(&bound(b, env, ctx, nonneg)?),
        ExprKind::Div(a, b) => {
            let den = bound(b, env, ctx, nonneg)?;
            let ub = den.ub.clone().ok_or_else(|| eval_err(b.span, "denominator has no certified leading term"))?;
            let num = bound(a, env, ctx, nonneg)?;
            let out_ub = match (&num.ub, den.lb.as_slice()) {
                (Some(u), [l]) => Some(u.sub(l)),
                _ => None,
            };
            Bound { lb: num.lb.iter().map(|p| p.sub(&ub)).collect(), ub: out_ub }
        }
        ExprKind::Pow(base, k) => {
            let kp = int_poly(k, env)?;
            let b = bound(base, env, ctx, nonneg)?;
            match (&b.lb[..], &b.ub) {
                ([l], Some(u)) if l == u && l.as_constant().is_some() => Bound::exact(l.mul(&kp)),
                _ => {
                    let kc = kp
                        .as_constant()
                        .and_then(|c| c.to_i64())
                        .ok_or_else(|| eval_err(e.span, "a power of a non-monomial needs a constant exponent"))?;
                    if kc < 0 {
                        return Err(eval_err(
                            e.span,
                            "negative powers of non-monomials are not bounded; divide instead",
                        ));
                    }
                    (0..kc).fold(Bound::exact(Poly::int(0)), |acc, _| acc.times(&b))
                }
            }
        }
        ExprKind::Poch { bases, step, len } => {
            let step = step_value(step, env)?;
            let mut tail = 0i64;
            for b in bases {
                tail += base_tail(b, step, env, ctx, nonneg)?;
            }
            let t = Poly::int(tail);
            match len {
                Some(_) => Bound { lb: vec![t], ub: Some(Poly::int(0)) },
                None => Bound::exact(t),
            }
        }
        ExprKind::Theta { bases, step } => {
            let step = step_value(step, env)?;
            let mut tail = 0i64;
            for b in bases {
                tail += base_tail(b, step, env, ctx, nonneg)?;
            }
            Bound::exact(Poly::int(tail))
        }
        ExprKind::Sum { .. } | ExprKind::AltSum { .. } | ExprKind::Appell { .. } | ExprKind::Hecke { .. } => {
            return Err(eval_err(e.span, "nested summation is not supported"));
        }
    })
}

/// Lowest total exponent a run of factors `1 - b q^{ks}` can contribute.
fn base_tail(b: &Expr, step: i64, env: &Env, ctx: &EvalContext, nonneg: bool) -> Result<i64> {
    let bb = bound(b, env, ctx, nonneg)?;
    let e = match (&bb.lb[..], &bb.ub) {
        ([l], Some(u)) if l == u => l.clone(),
        _ => return Err(eval_err(b.span, "pochhammer base must be a monomial")),
    };
    if let Some(c) = e.as_constant() {
        let c = c.floor_i64().ok_or_else(|| eval_err(b.span, "exponent out of range"))?;
        return Ok(negative_tail(c, step));
    }
    let nonneg_coeffs = e.vars().is_empty() || (nonneg && e.coefficients_nonneg());
    if nonneg_coeffs {
        Ok(0)
    } else {
        Err(eval_err(b.span, format!("cannot bound the pochhammer base exponent {e}")))
    }
}

/// Indices to enumerate for `n >= 0` (`dir = 1`) or `n < 0` (`dir = -1`) so
/// that every skipped index has all lower bounds above `order`.
pub fn index_limit(lbs: &[Poly], var: &str, order: i64, dir: i64, span: super::Span) -> Result<i64> {
    let mut top = 0;
    for p in lbs {
        let p = if dir < 0 { p.reflect(var) } else { p.clone() };
        let n = p.exceeds_from(var, order).ok_or_else(|| {
            Error::UncertifiedTermination(format!("at {span}: exponent bound {p} does not grow in {var}"))
        })?;
        top = top.max(n);
    }
    let cap = index_cap(order);
    if top > cap {
        return Err(Error::UncertifiedTermination(format!(
            "at {span}: index {var} would run to {top}, past the cap {cap}"
        )));
    }
    Ok(top)
}
