use rayon::prelude::*;

use super::ast::*;
use super::bounds::{bound, index_limit, int_value, step_value, Bound, Env};
use super::poly::Poly;
use super::Span;
use crate::engine::sums::abel_alternating;
use crate::error::{Error, Result};
use crate::series::{poch_factors, qbinomial_in, EvalContext, FactorProduct, Mono, QSeries, Rational, ZInterp};
use crate::special::appell::bilateral_convex;
use crate::special::hecke::hecke_products;

/// Largest power of a non-monomial expanded by repeated multiplication.
const MAX_REPEAT: i64 = 64;

/// The evaluation context of a spec under a parameter binding.
pub fn context_for(spec: &IdentitySpec, bindings: &Env, order: Option<i64>) -> Result<EvalContext> {
    let mut env = Env::new();
    for p in &spec.params {
        let v = *bindings
            .get(&p.name)
            .ok_or_else(|| Error::InvalidArgument(format!("parameter {} is not bound", p.name)))?;
        let (lo, hi) = (int_value(&p.lo, &env)?, int_value(&p.hi, &env)?);
        if v < lo || v > hi {
            return Err(Error::InvalidArgument(format!("{} = {v} lies outside {lo}..{hi}", p.name)));
        }
        env.insert(p.name.clone(), v);
    }
    if let Some(extra) = bindings.keys().find(|k| !spec.params.iter().any(|p| &p.name == *k)) {
        return Err(Error::InvalidArgument(format!("{} is not a parameter of {}", extra, spec.name)));
    }
    let z = match &spec.z {
        ZBinding::Formal => ZInterp::Formal,
        ZBinding::Monomial { sign, exp } => ZInterp::Monomial { sign: *sign, qexp: int_value(exp, &env)? },
    };
    let order = order.unwrap_or(spec.order);
    if order < 0 {
        return Err(Error::InvalidArgument(format!("order {order} is negative")));
    }
    Ok(EvalContext::new(spec.scale, order, z))
}

/// One side of an identity under a parameter binding.
pub fn evaluate(spec: &IdentitySpec, bindings: &Env, side: Side, order: Option<i64>) -> Result<QSeries> {
    let ctx = context_for(spec, bindings, order)?;
    eval(spec.side(side), bindings, &ctx, ctx.order())
}

/// Both sides, evaluated in parallel.
pub fn evaluate_both(spec: &IdentitySpec, bindings: &Env, order: Option<i64>) -> Result<(QSeries, QSeries)> {
    let ctx = context_for(spec, bindings, order)?;
    let (l, r) =
        rayon::join(|| eval(&spec.lhs, bindings, &ctx, ctx.order()), || eval(&spec.rhs, bindings, &ctx, ctx.order()));
    Ok((l?, r?))
}

/// `e` exact through `order`, in the frame of `ctx`.
pub fn eval(e: &Expr, env: &Env, ctx: &EvalContext, order: i64) -> Result<QSeries> {
    eval_inner(e, env, ctx, order).map_err(|err| err.at(e.span))
}

fn eval_inner(e: &Expr, env: &Env, ctx: &EvalContext, order: i64) -> Result<QSeries> {
    let c = ctx.with_order(order);
    match &e.kind {
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) if binomial(e, env)?.is_none() => {
            let mut x = eval(a, env, ctx, order)?;
            let y = eval(b, env, ctx, order)?;
            let sign = if matches!(e.kind, ExprKind::Add(..)) { 1 } else { -1 };
            x.add_scaled_unchecked(&y, &Rational::from_int(sign));
            Ok(x)
        }
        ExprKind::QBinom(n, k) => qbinomial_in(c, int_value(n, env)?, int_value(k, env)?, 1),
        ExprKind::Sum { index: SumIndex::Chain(chain), body } => chain_sum(chain, body, env, ctx, order),
        ExprKind::Sum { index: SumIndex::Bilateral(n), body } => bilateral_sum(n, body, env, ctx, order, e.span),
        ExprKind::AltSum { chain, body } => {
            let (head, rest) = chain.split_first().expect("parser gives a nonempty chain");
            let b = bound(body, env, ctx, true).ok();
            abel_alternating(c, |n1| {
                let mut env = env.clone();
                env.insert(head.clone(), n1);
                let mut acc = QSeries::zero(c);
                enumerate(rest, n1, body, &env, ctx, order, b.as_ref(), &mut acc)?;
                Ok(acc)
            })
        }
        ExprKind::Appell { var, body } => bilateral_convex(c, |n| {
            let mut env = env.clone();
            env.insert(var.clone(), n);
            closed_product(body, &env)
        }),
        ExprKind::Hecke { n, j, region, body } => hecke_products(c, *region, |nv, jv| {
            let mut env = env.clone();
            env.insert(n.clone(), nv);
            env.insert(j.clone(), jv);
            closed_product(body, &env)
        }),
        _ => product(e, env, ctx, order),
    }
}

/// A body that must flatten to monomials, pochhammers and binomials.
fn closed_product(e: &Expr, env: &Env) -> Result<FactorProduct> {
    let mut fp = FactorProduct::new();
    let mut gens = Vec::new();
    flatten(e, env, false, &mut fp, &mut gens)?;
    if let Some((_, g)) = gens.first() {
        return Err(Error::Eval {
            span: g.span,
            msg: "summand must be a product of monomials, pochhammers and binomials".into(),
        });
    }
    Ok(fp)
}

/// The monomial value of `e`, if it is one.
pub fn mono_of(e: &Expr, env: &Env) -> Result<Option<Mono>> {
    Ok(match &e.kind {
        ExprKind::Int(c) => Some(Mono::new(Rational::from_int(*c), 0, 0)),
        ExprKind::Var(v) => {
            let x = env.get(v).ok_or_else(|| Error::Eval { span: e.span, msg: format!("unbound name {v}") })?;
            Some(Mono::new(Rational::from_int(*x), 0, 0))
        }
        ExprKind::Q => Some(Mono::q(1)),
        ExprKind::Z => Some(Mono::new(Rational::one(), 1, 0)),
        ExprKind::Neg(a) => mono_of(a, env)?.map(|m| m.mul(&Mono::signed_q(-1, 0))),
        ExprKind::Mul(a, b) => match (mono_of(a, env)?, mono_of(b, env)?) {
            (Some(x), Some(y)) => Some(x.mul(&y)),
            _ => None,
        },
        ExprKind::Div(a, b) => match (mono_of(a, env)?, mono_of(b, env)?) {
            (Some(x), Some(y)) => {
                if y.is_zero() {
                    return Err(Error::Eval { span: b.span, msg: "division by zero".into() });
                }
                Some(x.mul(&y.recip()))
            }
            _ => None,
        },
        ExprKind::Pow(a, k) => match mono_of(a, env)? {
            Some(m) => {
                let k = int_value(k, env)?;
                if m.is_zero() && k < 0 {
                    return Err(Error::Eval { span: e.span, msg: "zero to a negative power".into() });
                }
                Some(m.pow(k))
            }
            None => None,
        },
        _ => None,
    })
}

/// `1 + m` or `1 - m` with `m` a monomial, as the `m'` of `1 - m'`.
fn binomial(e: &Expr, env: &Env) -> Result<Option<Mono>> {
    let (a, b, plus) = match &e.kind {
        ExprKind::Add(a, b) => (a, b, true),
        ExprKind::Sub(a, b) => (a, b, false),
        _ => return Ok(None),
    };
    let (one, other) = match (&a.kind, &b.kind) {
        (ExprKind::Int(1), _) => (true, b),
        (_, ExprKind::Int(1)) if plus => (true, a),
        _ => (false, a),
    };
    if !one {
        return Ok(None);
    }
    Ok(mono_of(other, env)?.map(|m| if plus { m.mul(&Mono::signed_q(-1, 0)) } else { m }))
}

/// Splits a product into closed-form factors and general (inverted or not) ones.
fn flatten<'a>(
    e: &'a Expr,
    env: &Env,
    inv: bool,
    fp: &mut FactorProduct,
    gens: &mut Vec<(bool, &'a Expr)>,
) -> Result<()> {
    let err = |msg: &str| Error::Eval { span: e.span, msg: msg.into() };
    if let Some(m) = mono_of(e, env)? {
        if inv {
            if m.is_zero() {
                return Err(err("division by zero"));
            }
            fp.mul_mono(&m.recip());
        } else {
            fp.mul_mono(&m);
        }
        return Ok(());
    }
    match &e.kind {
        ExprKind::Neg(a) => {
            fp.scale(&Rational::from_int(-1));
            flatten(a, env, inv, fp, gens)
        }
        ExprKind::Mul(a, b) => {
            flatten(a, env, inv, fp, gens)?;
            flatten(b, env, inv, fp, gens)
        }
        ExprKind::Div(a, b) => {
            flatten(a, env, inv, fp, gens)?;
            flatten(b, env, !inv, fp, gens)
        }
        ExprKind::Pow(b, k) => {
            let k = int_value(k, env)?;
            if k.abs() > MAX_REPEAT {
                return Err(err("power of a non-monomial is too large"));
            }
            for _ in 0..k.abs() {
                flatten(b, env, inv ^ (k < 0), fp, gens)?;
            }
            Ok(())
        }
        ExprKind::Poch { bases, step, len } => {
            let len = len.as_ref().map(|l| int_value(l, env)).transpose()?;
            poch_into(bases, step_value(step, env)?, len, env, inv, fp)
        }
        ExprKind::Theta { bases, step } => poch_into(bases, step_value(step, env)?, None, env, inv, fp),
        ExprKind::Add(..) | ExprKind::Sub(..) => match binomial(e, env)? {
            Some(m) if inv => {
                fp.push_den(m);
                Ok(())
            }
            Some(m) => {
                fp.push_num(m);
                Ok(())
            }
            None => {
                gens.push((inv, e));
                Ok(())
            }
        },
        _ => {
            gens.push((inv, e));
            Ok(())
        }
    }
}

fn poch_into(bases: &[Expr], step: i64, len: Option<i64>, env: &Env, inv: bool, fp: &mut FactorProduct) -> Result<()> {
    for b in bases {
        let m = mono_of(b, env)?
            .ok_or_else(|| Error::Eval { span: b.span, msg: "pochhammer base must be a monomial".into() })?;
        match len {
            Some(n) => {
                let f = poch_factors(&m, step, n);
                fp.mul(&if inv { f.recip()? } else { f });
            }
            None if inv => fp.push_den_run(m, step)?,
            None => fp.push_num_run(m, step)?,
        }
    }
    Ok(())
}

fn product(e: &Expr, env: &Env, ctx: &EvalContext, order: i64) -> Result<QSeries> {
    let c = ctx.with_order(order);
    let mut fp = FactorProduct::new();
    let mut gens = Vec::new();
    flatten(e, env, false, &mut fp, &mut gens)?;
    if gens.is_empty() {
        return fp.eval(c);
    }
    let Some(lead) = fp.lead_exponent(ctx)? else { return Ok(QSeries::zero(c)) };
    let g = general_product(&gens, env, ctx, order - lead)?;
    fp.apply_to(&g, order)
}

struct Factor<'a> {
    inv: bool,
    e: &'a Expr,
    val: QSeries,
    /// lower bound on the valuation (numerators) or exact valuation (denominators)
    lead: i64,
}

impl Factor<'_> {
    fn contribution(&self) -> i64 {
        if self.inv {
            -self.lead
        } else {
            self.lead
        }
    }

    /// Order to which `val` must be exact for its contribution to be exact through `need`.
    fn required(&self, need: i64) -> i64 {
        if self.inv && !is_monomial(&self.val) {
            need + 2 * self.lead
        } else if self.inv {
            i64::MIN
        } else {
            need
        }
    }
}

fn is_monomial(s: &QSeries) -> bool {
    s.len() == 1 && s.terms().values().next().is_some_and(|l| l.len() == 1)
}

/// Product of general factors, exact through `order`: each factor is refined
/// until it is exact through `order` minus the other factors' valuations.
fn general_product(gens: &[(bool, &Expr)], env: &Env, ctx: &EvalContext, order: i64) -> Result<QSeries> {
    let c = ctx.with_order(order);
    let mut fs = Vec::with_capacity(gens.len());
    for (inv, e) in gens {
        let mut val = eval(e, env, ctx, order)?;
        let lead = if *inv {
            let mut tries = 0;
            while val.min_q_exp().is_none() && tries < 3 {
                let more = val.order() + 2 * (val.order().abs() + 8);
                val = eval(e, env, ctx, more)?;
                tries += 1;
            }
            val.min_q_exp().ok_or_else(|| Error::Eval {
                span: e.span,
                msg: format!("denominator vanishes through q-exponent {}", val.order()),
            })?
        } else {
            val.min_q_exp().unwrap_or(order + 1)
        };
        fs.push(Factor { inv: *inv, e, val, lead });
    }
    for _ in 0..16 {
        let total: i64 = fs.iter().map(Factor::contribution).sum();
        let mut changed = false;
        for f in fs.iter_mut() {
            let need = order - (total - f.contribution());
            let req = f.required(need);
            if req > f.val.order() {
                f.val = eval(f.e, env, ctx, req)?;
                if !f.inv {
                    f.lead = f.val.min_q_exp().unwrap_or(req + 1);
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if fs.iter().any(|f| !f.inv && f.val.is_zero()) {
        return Ok(QSeries::zero(c));
    }
    let total: i64 = fs.iter().map(Factor::contribution).sum();
    let top = order - total;
    if top < 0 {
        return Ok(QSeries::zero(c));
    }
    let inner = ctx.with_order(top);
    let mut acc = QSeries::one(inner);
    for f in &fs {
        let need = top + f.contribution();
        let v = if f.inv { f.val.invert_to(need).map_err(|e| e.at(f.e.span))? } else { f.val.truncate(need)? };
        let shifted = v.mul_mono_into(&Mono::q(-f.contribution()), inner);
        acc = acc.mul(&shifted)?;
    }
    Ok(acc.mul_mono_into(&Mono::q(total), c))
}

fn check_bound(term: &QSeries, b: &Bound, env: &Env, span: Span) -> Result<()> {
    if let (Some(m), Some(lb)) = (term.min_q_exp(), b.min_at(env)) {
        if m < lb {
            return Err(Error::UncertifiedTermination(format!(
                "at {span}: summand has exponent {m} below its certified bound {lb}"
            )));
        }
    }
    Ok(())
}

/// Lower bounds at one chain level, as univariate polynomials in `var`.
fn level_bounds(b: &Bound, env: &Env, var: &str) -> Vec<Poly> {
    b.lb.iter()
        .map(|p| {
            let mut p = p.clone();
            for (k, v) in env {
                p = p.subst(k, *v);
            }
            p.lower_in(var)
        })
        .collect()
}

fn skip(bounds: &[Poly], var: &str, v: i64, order: i64) -> bool {
    let env = Env::from([(var.to_string(), v)]);
    bounds.iter().all(|p| p.eval(&env).is_some_and(|x| x > Rational::from_int(order)))
}

/// Adds the body over `chain[0] <= top`, `chain[0] >= chain[1] >= ... >= 0`.
#[allow(clippy::too_many_arguments)]
fn enumerate(
    chain: &[String],
    top: i64,
    body: &Expr,
    env: &Env,
    ctx: &EvalContext,
    order: i64,
    b: Option<&Bound>,
    acc: &mut QSeries,
) -> Result<()> {
    let Some((var, rest)) = chain.split_first() else {
        let t = eval(body, env, ctx, order)?;
        if let Some(b) = b {
            check_bound(&t, b, env, body.span)?;
        }
        acc.add_assign_unchecked(&t);
        return Ok(());
    };
    let lvl = b.map(|b| level_bounds(b, env, var));
    let mut env = env.clone();
    for v in 0..=top {
        if lvl.as_ref().is_some_and(|l| skip(l, var, v, order)) {
            continue;
        }
        env.insert(var.clone(), v);
        enumerate(rest, v, body, &env, ctx, order, b, acc)?;
    }
    Ok(())
}

fn chain_sum(chain: &[String], body: &Expr, env: &Env, ctx: &EvalContext, order: i64) -> Result<QSeries> {
    let c = ctx.with_order(order);
    let b = bound(body, env, ctx, true)?;
    if b.lb.is_empty() {
        return Ok(QSeries::zero(c));
    }
    let (head, rest) = chain.split_first().expect("parser gives a nonempty chain");
    let lvl = level_bounds(&b, env, head);
    let top = index_limit(&lvl, head, order, 1, body.span)?;
    let heads: Vec<i64> = (0..=top).filter(|v| !skip(&lvl, head, *v, order)).collect();
    let parts: Vec<Result<QSeries>> = heads
        .par_iter()
        .map(|v| {
            let mut env = env.clone();
            env.insert(head.clone(), *v);
            let mut acc = QSeries::zero(c);
            enumerate(rest, *v, body, &env, ctx, order, Some(&b), &mut acc)?;
            Ok(acc)
        })
        .collect();
    let mut acc = QSeries::zero(c);
    for p in parts {
        acc.add_assign_unchecked(&p?);
    }
    Ok(acc)
}

fn bilateral_sum(var: &str, body: &Expr, env: &Env, ctx: &EvalContext, order: i64, span: Span) -> Result<QSeries> {
    let c = ctx.with_order(order);
    let b = bound(body, env, ctx, false)?;
    if b.lb.is_empty() {
        return Ok(QSeries::zero(c));
    }
    let lvl = level_bounds(&b, env, var);
    let up = index_limit(&lvl, var, order, 1, span)?;
    let down = index_limit(&lvl, var, order, -1, span)?;
    let idx: Vec<i64> = (-down..=up).filter(|v| !skip(&lvl, var, *v, order)).collect();
    let parts: Vec<Result<QSeries>> = idx
        .par_iter()
        .map(|v| {
            let mut env = env.clone();
            env.insert(var.to_string(), *v);
            let t = eval(body, &env, ctx, order)?;
            check_bound(&t, &b, &env, body.span)?;
            Ok(t)
        })
        .collect();
    let mut acc = QSeries::zero(c);
    for p in parts {
        acc.add_assign_unchecked(&p?);
    }
    Ok(acc)
}
