use std::fmt;

use super::ast::*;
use super::bounds::{bound, index_limit, int_value, Env};
use super::eval::{context_for, mono_of};
use super::Span;
use crate::error::{Error, Result};
use crate::series::{EvalContext, ZInterp};

/// Largest number of parameter bindings a validation pass visits.
const MAX_BINDINGS: usize = 512;

/// A static problem with a spec.
#[derive(Clone, Debug, PartialEq)]
pub struct Finding {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

/// Every parameter binding allowed by the declared ranges, in order.
pub fn bindings(spec: &IdentitySpec) -> Result<Vec<Env>> {
    let mut out = vec![Env::new()];
    for p in &spec.params {
        let mut next = Vec::new();
        for env in &out {
            let (lo, hi) = (int_value(&p.lo, env)?, int_value(&p.hi, env)?);
            for v in lo..=hi {
                let mut e = env.clone();
                e.insert(p.name.clone(), v);
                next.push(e);
                if next.len() > 100 * MAX_BINDINGS {
                    return Err(Error::ResourceCap(format!("parameter ranges of {} are too large", spec.name)));
                }
            }
        }
        out = next;
    }
    Ok(out)
}

/// Checks that every summation of the spec has a certified stopping point
/// and every denominator a monomial leading term, under every binding (up
/// to a cap). Returns no findings iff the spec evaluates soundly.
pub fn validate(spec: &IdentitySpec) -> Vec<Finding> {
    let mut out = Vec::new();
    let whole = |msg: String| Finding { span: spec.span, message: msg };
    let all = match bindings(spec) {
        Ok(b) => b,
        Err(e) => return vec![whole(e.to_string())],
    };
    if all.is_empty() {
        return vec![whole("parameter ranges admit no binding".into())];
    }
    for env in all.iter().take(MAX_BINDINGS) {
        let ctx = match context_for(spec, env, None) {
            Ok(c) => c,
            Err(e) => {
                out.push(whole(e.to_string()));
                continue;
            }
        };
        for side in [&spec.lhs, &spec.rhs] {
            walk(side, env, &ctx, &mut out);
        }
        if !out.is_empty() {
            break;
        }
    }
    out.dedup();
    out
}

fn finding(out: &mut Vec<Finding>, span: Span, msg: impl Into<String>) {
    out.push(Finding { span, message: msg.into() });
}

fn from_error(out: &mut Vec<Finding>, span: Span, e: Error) {
    match e {
        Error::Eval { span, msg } => finding(out, span, msg),
        e => finding(out, span, e.to_string()),
    }
}

fn uses(e: &Expr, name: &str) -> bool {
    if matches!(&e.kind, ExprKind::Var(v) if v == name) {
        return true;
    }
    let in_ints = e.int_exprs().iter().any(|i| {
        let mut v = Vec::new();
        i.vars(&mut v);
        v.iter().any(|x| x == name)
    });
    in_ints || e.children().iter().any(|c| uses(c, name))
}

fn walk(e: &Expr, env: &Env, ctx: &EvalContext, out: &mut Vec<Finding>) {
    match &e.kind {
        ExprKind::Sum { index, body } => {
            let names = match index {
                SumIndex::Chain(c) => c.clone(),
                SumIndex::Bilateral(n) => vec![n.clone()],
            };
            for n in &names {
                if !uses(body, n) {
                    finding(out, e.span, format!("summation index {n} does not occur in the summand"));
                }
            }
            let nonneg = matches!(index, SumIndex::Chain(_));
            let b = match bound(body, env, ctx, nonneg) {
                Ok(b) => b,
                Err(err) => return from_error(out, body.span, err),
            };
            if b.lb.is_empty() {
                return;
            }
            let head = &names[0];
            let lvl: Vec<_> = b.lb.iter().map(|p| p.lower_in(head)).collect();
            let dirs: &[i64] = if nonneg { &[1] } else { &[1, -1] };
            for &d in dirs {
                if let Err(err) = index_limit(&lvl, head, ctx.order(), d, e.span) {
                    let side = if d > 0 { "" } else { " as the index decreases" };
                    finding(
                        out,
                        e.span,
                        format!("no exponent growth in {head}{side}; the sum cannot be certified ({err})"),
                    );
                }
            }
            nested(body, out);
        }
        ExprKind::AltSum { chain, body } => {
            for n in chain {
                if !uses(body, n) {
                    finding(out, e.span, format!("summation index {n} does not occur in the summand"));
                }
            }
            nested(body, out);
        }
        ExprKind::Appell { var, body } => {
            closed(body, env, &[(var, 0), (var, 1), (var, -1)], out);
            let b = match bound(body, env, ctx, false) {
                Ok(b) => b,
                Err(err) => return from_error(out, body.span, err),
            };
            let growing = b.lb.iter().all(|p| {
                let u = p.univariate(var);
                matches!(u, Some(c) if c.len() == 3 && !c[2].is_negative() && !c[2].is_zero())
            });
            if !growing {
                finding(out, e.span, format!("Appell-Lerch summand needs a positive quadratic exponent in {var}"));
            }
        }
        ExprKind::Hecke { n, j, body, .. } => {
            closed(body, env, &[(n, 0), (j, 0)], out);
            nested(body, out);
        }
        ExprKind::Div(_, d) => {
            denominator(d, env, ctx, out);
            for c in e.children() {
                walk(c, env, ctx, out);
            }
        }
        _ => {
            for c in e.children() {
                walk(c, env, ctx, out);
            }
        }
    }
}

fn nested(body: &Expr, out: &mut Vec<Finding>) {
    for c in body.children() {
        if c.has_sum() {
            finding(out, c.span, "nested summation is not supported");
            return;
        }
    }
    if body.has_sum() {
        finding(out, body.span, "nested summation is not supported");
    }
}

/// The summand must flatten to closed factors; probed with the given index values.
fn closed(body: &Expr, env: &Env, probe: &[(&String, i64)], out: &mut Vec<Finding>) {
    let mut env = env.clone();
    for (k, v) in probe {
        env.insert((*k).clone(), *v);
    }
    let mut bad = None;
    visit_products(body, &env, &mut bad);
    if let Some(span) = bad {
        finding(out, span, "summand must be a product of monomials, pochhammers and binomials");
    }
}

fn visit_products(e: &Expr, env: &Env, bad: &mut Option<Span>) {
    match &e.kind {
        ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
            visit_products(a, env, bad);
            visit_products(b, env, bad);
        }
        ExprKind::Neg(a) => visit_products(a, env, bad),
        ExprKind::Pow(a, _) => {
            if !matches!(mono_of(a, env), Ok(Some(_))) {
                visit_products(a, env, bad)
            }
        }
        ExprKind::Poch { .. } | ExprKind::Theta { .. } => {}
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
            let one = matches!(a.kind, ExprKind::Int(1)) || matches!(b.kind, ExprKind::Int(1));
            let other = if matches!(a.kind, ExprKind::Int(1)) { b } else { a };
            if !(one && matches!(mono_of(other, env), Ok(Some(_)))) && bad.is_none() {
                *bad = Some(e.span);
            }
        }
        _ => {
            if !matches!(mono_of(e, env), Ok(Some(_))) && bad.is_none() {
                *bad = Some(e.span);
            }
        }
    }
}

/// Flags `1 ± c z^k` denominators with no q-power under a formal `z`.
fn denominator(d: &Expr, env: &Env, ctx: &EvalContext, out: &mut Vec<Finding>) {
    if !matches!(ctx.z(), ZInterp::Formal) {
        return;
    }
    let (a, b) = match &d.kind {
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) => (a, b),
        _ => return,
    };
    let other = match (&a.kind, &b.kind) {
        (ExprKind::Int(1), _) => b,
        (_, ExprKind::Int(1)) => a,
        _ => return,
    };
    if let Ok(Some(m)) = mono_of(other, env) {
        if m.qexp == 0 && m.zexp != 0 {
            finding(out, d.span, "denominator has a non-monomial leading term in z");
        }
    }
}
