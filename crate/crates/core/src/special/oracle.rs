//! A deliberately naive second evaluator for identity sides.
//!
//! Series are plain hash maps from `(q, z)` exponents to coefficients,
//! multiplied by direct convolution and inverted by the textbook
//! recurrence. Only the summation stop rules are shared with the main
//! evaluator; no series arithmetic is.

use std::collections::HashMap;

use crate::dsl::bounds::{bound, index_limit, int_value, step_value, Env};
use crate::dsl::{context_for, Expr, ExprKind, IdentitySpec, Side, SumIndex};
use crate::engine::sums::{index_cap, ABEL_WINDOW};
use crate::error::{Error, Result};
use crate::series::{EvalContext, QSeries, Rational, ZInterp};
use crate::special::HeckeRegion;

const DEFAULT_CAP: usize = 2_000_000;

fn cap() -> usize {
    std::env::var("BAILEY_FORGE_MAX_TERMS").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

#[derive(Clone, Debug, Default)]
struct Terms(HashMap<(i64, i64), Rational>);

impl Terms {
    fn mono(c: Rational, q: i64, z: i64) -> Self {
        let mut t = Terms::default();
        if !c.is_zero() {
            t.0.insert((q, z), c);
        }
        t
    }

    fn one() -> Self {
        Terms::mono(Rational::one(), 0, 0)
    }

    fn add(&mut self, o: &Terms, c: &Rational) {
        for (k, v) in &o.0 {
            let e = self.0.entry(*k).or_insert_with(Rational::zero);
            *e += &(v * c);
            if e.is_zero() {
                self.0.remove(k);
            }
        }
    }

    fn mul(&self, o: &Terms, n: i64) -> Result<Terms> {
        let mut out: HashMap<(i64, i64), Rational> = HashMap::new();
        for ((qa, za), ca) in &self.0 {
            for ((qb, zb), cb) in &o.0 {
                if qa + qb > n {
                    continue;
                }
                *out.entry((qa + qb, za + zb)).or_insert_with(Rational::zero) += &(ca * cb);
            }
            if out.len() > cap() {
                return Err(Error::ResourceCap(format!("oracle product exceeds {} terms", cap())));
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(Terms(out))
    }

    fn shift(&self, c: &Rational, q: i64, z: i64) -> Terms {
        Terms(self.0.iter().map(|((a, b), v)| ((a + q, b + z), v * c)).collect())
    }

    fn truncate(mut self, n: i64) -> Terms {
        self.0.retain(|(q, _), _| *q <= n);
        self
    }

    fn min_q(&self) -> Option<i64> {
        self.0.keys().map(|k| k.0).min()
    }

    fn slice(&self, q: i64) -> HashMap<i64, Rational> {
        self.0.iter().filter(|(k, _)| k.0 == q).map(|(k, v)| (k.1, v.clone())).collect()
    }

    /// `1/self` through `n`; `self` must be exact through `n + 2v` where `v`
    /// is its valuation.
    fn inverse(&self, n: i64) -> Result<Terms> {
        let v = self.min_q().ok_or_else(|| Error::DivisionByZero("oracle division by zero".into()))?;
        let lead = self.slice(v);
        if lead.len() != 1 {
            return Err(Error::NonMonomialLeading { q_exp: v });
        }
        let (&k, c) = lead.iter().next().expect("one entry");
        let ci = c.recip().expect("nonzero");
        let m = n + v;
        if m < 0 {
            return Ok(Terms::default());
        }
        // u = self / (c z^k q^v) = 1 + u_1 q + ...
        let u: Vec<HashMap<i64, Rational>> =
            (0..=m).map(|d| self.slice(v + d).into_iter().map(|(z, x)| (z - k, &x * &ci)).collect()).collect();
        let mut w: Vec<HashMap<i64, Rational>> = vec![HashMap::from([(0, Rational::one())])];
        for d in 1..=m as usize {
            let mut wd: HashMap<i64, Rational> = HashMap::new();
            for e in 1..=d {
                for (za, ca) in &u[e] {
                    for (zb, cb) in &w[d - e] {
                        *wd.entry(za + zb).or_insert_with(Rational::zero) -= &(ca * cb);
                    }
                }
            }
            wd.retain(|_, x| !x.is_zero());
            w.push(wd);
        }
        let mut out = Terms::default();
        for (d, wd) in w.into_iter().enumerate() {
            for (z, x) in wd {
                out.0.insert((d as i64 - v, z - k), &x * &ci);
            }
        }
        Ok(out.truncate(n))
    }

    fn into_series(self, ctx: EvalContext) -> Result<QSeries> {
        Ok(QSeries::from_terms(ctx, self.0.into_iter().map(|((q, z), c)| (q, z, c))))
    }
}

/// Evaluates one side of a spec through the naive path.
pub fn brute_force_expand(spec: &IdentitySpec, side: Side, env: &Env, order: Option<i64>) -> Result<QSeries> {
    let ctx = context_for(spec, env, order)?;
    brute_force_expr(spec.side(side), env, &ctx)
}

/// Evaluates an expression through the naive path, exact through the
/// context's order.
pub fn brute_force_expr(e: &Expr, env: &Env, ctx: &EvalContext) -> Result<QSeries> {
    let n = ctx.order();
    eval(e, env, ctx, n).map_err(|err| err.at(e.span))?.truncate(n).into_series(*ctx)
}

/// A lower bound on the valuation of `e` that is valid when `e` is used
/// through order `n`: sums are evaluated and report `n + 1` when nothing
/// survives. `None` means `e` is identically zero.
fn floor(e: &Expr, env: &Env, ctx: &EvalContext, n: i64) -> Result<Option<i64>> {
    if !e.has_sum() {
        return Ok(bound(e, env, ctx, false)?.min_at(env));
    }
    Ok(match &e.kind {
        ExprKind::Neg(a) => floor(a, env, ctx, n)?,
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) => match (floor(a, env, ctx, n)?, floor(b, env, ctx, n)?) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) | (None, x) => x,
        },
        ExprKind::Mul(a, b) => match (floor(a, env, ctx, n)?, floor(b, env, ctx, n)?) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        },
        ExprKind::Div(a, b) => floor(a, env, ctx, n)?.map(|x| x - valuation(b, env, ctx, n).unwrap_or(0)),
        _ => Some(eval(e, env, ctx, n)?.min_q().unwrap_or(n + 1)),
    })
}

/// The exact valuation of a denominator.
fn valuation(b: &Expr, env: &Env, ctx: &EvalContext, n: i64) -> Result<i64> {
    let probe_at = if b.has_sum() {
        n
    } else {
        bound(b, env, ctx, false)?
            .ub
            .as_ref()
            .and_then(|u| u.eval(env))
            .and_then(|r| r.floor_i64())
            .ok_or_else(|| Error::InvalidArgument("denominator has no valuation bound".into()))?
    };
    eval(b, env, ctx, probe_at)?
        .min_q()
        .ok_or_else(|| Error::DivisionByZero("oracle denominator vanishes through the order".into()))
}

fn eval(e: &Expr, env: &Env, ctx: &EvalContext, n: i64) -> Result<Terms> {
    if let Some((c, q, z)) = mono(e, env, ctx)? {
        return Ok(Terms::mono(c, q, z).truncate(n));
    }
    let one = Rational::one();
    Ok(match &e.kind {
        ExprKind::Int(_) | ExprKind::Var(_) | ExprKind::Q | ExprKind::Z => unreachable!("leaves are monomials"),
        ExprKind::Neg(a) => {
            let mut t = Terms::default();
            t.add(&eval(a, env, ctx, n)?, &Rational::from_int(-1));
            t
        }
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
            let mut t = eval(a, env, ctx, n)?;
            let s = if matches!(e.kind, ExprKind::Add(..)) { 1 } else { -1 };
            t.add(&eval(b, env, ctx, n)?, &Rational::from_int(s));
            t
        }
        ExprKind::Mul(a, b) => {
            let (Some(la), Some(lb)) = (floor(a, env, ctx, n)?, floor(b, env, ctx, n)?) else {
                return Ok(Terms::default());
            };
            let ta = eval(a, env, ctx, n - lb)?;
            let tb = eval(b, env, ctx, n - la)?;
            ta.mul(&tb, n)?
        }
        ExprKind::Div(a, b) => {
            let v = valuation(b, env, ctx, n)?;
            let Some(la) = floor(a, env, ctx, n + v)? else {
                return Ok(Terms::default());
            };
            let m = n - la;
            if m + v < 0 {
                return Ok(Terms::default());
            }
            let inv = eval(b, env, ctx, m + 2 * v)?.inverse(m)?;
            eval(a, env, ctx, n + v)?.mul(&inv, n)?
        }
        ExprKind::Pow(a, k) => {
            let k = int_value(k, env)?;
            let kk = k.abs();
            let Some(la) = floor(a, env, ctx, n)? else {
                if k < 0 {
                    return Err(Error::DivisionByZero("zero to a negative power".into()));
                }
                return Ok(if k == 0 { Terms::one() } else { Terms::default() });
            };
            let target = if k >= 0 { n } else { n + 2 * kk * valuation(a, env, ctx, n)? };
            let base = eval(a, env, ctx, target - (kk - 1).max(0) * la)?;
            let mut p = Terms::one();
            for _ in 0..kk {
                p = p.mul(&base, target)?;
            }
            if k < 0 {
                p.inverse(n)?
            } else {
                p
            }
        }
        ExprKind::Poch { bases, step, len } => {
            let s = step_value(step, env)?;
            let len = len.as_ref().map(|l| int_value(l, env)).transpose()?;
            pochs(bases, s, len, env, ctx, n)?
        }
        ExprKind::Theta { bases, step } => pochs(bases, step_value(step, env)?, None, env, ctx, n)?,
        ExprKind::QBinom(a, b) => qbinom(int_value(a, env)?, int_value(b, env)?, n),
        ExprKind::Sum { index: SumIndex::Chain(chain), body } => {
            let b = bound(body, env, ctx, true)?;
            if b.lb.is_empty() {
                return Ok(Terms::default());
            }
            let head = &chain[0];
            let lvl = lowered(&b.lb, env, head);
            let top = index_limit(&lvl, head, n, 1, body.span)?;
            let mut acc = Terms::default();
            tuples(chain, top, &mut env.clone(), &mut |env| {
                if b.min_at(env).is_some_and(|m| m > n) {
                    return Ok(());
                }
                acc.add(&eval(body, env, ctx, n)?, &Rational::one());
                Ok(())
            })?;
            acc
        }
        ExprKind::Sum { index: SumIndex::Bilateral(var), body } => {
            let b = bound(body, env, ctx, false)?;
            if b.lb.is_empty() {
                return Ok(Terms::default());
            }
            let lvl = lowered(&b.lb, env, var);
            let up = index_limit(&lvl, var, n, 1, body.span)?;
            let down = index_limit(&lvl, var, n, -1, body.span)?;
            let mut acc = Terms::default();
            for v in -down..=up {
                let mut env = env.clone();
                env.insert(var.clone(), v);
                acc.add(&eval(body, &env, ctx, n)?, &Rational::one());
            }
            acc
        }
        ExprKind::AltSum { chain, body } => {
            let b = bound(body, env, ctx, true).ok();
            let limit = index_cap(n);
            let mut acc = Terms::default();
            let mut prev: Option<Terms> = None;
            let mut same = 0;
            for h in 0..=limit {
                let mut c = Terms::default();
                let mut env = env.clone();
                env.insert(chain[0].clone(), h);
                tuples(&chain[1..], h, &mut env, &mut |env| {
                    if b.as_ref().and_then(|b| b.min_at(env)).is_some_and(|m| m > n) {
                        return Ok(());
                    }
                    c.add(&eval(body, env, ctx, n)?, &Rational::one());
                    Ok(())
                })?;
                let sign = Rational::from_int(if h % 2 == 0 { 1 } else { -1 });
                if prev.as_ref().is_some_and(|p| same_terms(p, &c)) {
                    same += 1;
                } else {
                    same = 0;
                }
                if same + 1 >= ABEL_WINDOW {
                    acc.add(&c, &(&sign * &Rational::new(1, 2)));
                    return Ok(acc);
                }
                acc.add(&c, &sign);
                prev = Some(c);
            }
            return Err(Error::UncertifiedTermination("alternating terms did not stabilise".into()));
        }
        ExprKind::Appell { var, body } => {
            let b = bound(body, env, ctx, false)?;
            let lvl = lowered(&b.lb, env, var);
            let up = index_limit(&lvl, var, n, 1, body.span)?;
            let down = index_limit(&lvl, var, n, -1, body.span)?;
            let mut acc = Terms::default();
            for v in -down..=up {
                let mut env = env.clone();
                env.insert(var.clone(), v);
                acc.add(&eval(body, &env, ctx, n)?, &Rational::one());
            }
            acc
        }
        ExprKind::Hecke { n: nv, j: jv, region, body } => {
            let b = bound(body, env, ctx, false)?;
            let mut acc = Terms::default();
            let mut clear = 0;
            for i in 0..=index_cap(n) {
                let w = match region {
                    HeckeRegion::Full => i,
                    HeckeRegion::Half => i / 2,
                };
                let mut env = env.clone();
                env.insert(nv.clone(), i);
                let mut low = i64::MAX;
                for j in -w..=w {
                    env.insert(jv.clone(), j);
                    let m = b.min_at(&env).unwrap_or(i64::MAX);
                    low = low.min(m);
                    if m <= n {
                        acc.add(&eval(body, &env, ctx, n)?, &one);
                    }
                }
                clear = if low > n { clear + 1 } else { 0 };
                if clear >= 3 && i >= 2 {
                    return Ok(acc);
                }
            }
            return Err(Error::UncertifiedTermination("Hecke sum did not clear the order".into()));
        }
    })
}

fn same_terms(a: &Terms, b: &Terms) -> bool {
    a.0 == b.0
}

fn lowered(lbs: &[crate::dsl::poly::Poly], env: &Env, var: &str) -> Vec<crate::dsl::poly::Poly> {
    lbs.iter()
        .map(|p| {
            let mut p = p.clone();
            for (k, v) in env {
                p = p.subst(k, *v);
            }
            p.lower_in(var)
        })
        .collect()
}

/// Calls `f` on every `top >= c[0] >= c[1] >= ... >= 0`.
fn tuples(c: &[String], top: i64, env: &mut Env, f: &mut dyn FnMut(&Env) -> Result<()>) -> Result<()> {
    let Some((v, rest)) = c.split_first() else {
        return f(env);
    };
    for x in 0..=top {
        env.insert(v.clone(), x);
        tuples(rest, x, env, f)?;
    }
    env.remove(v);
    Ok(())
}

/// `(c, q, z)` when the expression is built from monomials alone.
fn mono(e: &Expr, env: &Env, ctx: &EvalContext) -> Result<Option<(Rational, i64, i64)>> {
    let pair = |a: &Expr, b: &Expr| -> Result<Option<_>> {
        Ok(match (mono(a, env, ctx)?, mono(b, env, ctx)?) {
            (Some(x), Some(y)) => Some((x, y)),
            _ => None,
        })
    };
    Ok(match &e.kind {
        ExprKind::Int(c) => Some((Rational::from_int(*c), 0, 0)),
        ExprKind::Var(v) => {
            let x = env.get(v).ok_or_else(|| Error::InvalidArgument(format!("unbound {v}")))?;
            Some((Rational::from_int(*x), 0, 0))
        }
        ExprKind::Q => Some((Rational::one(), 1, 0)),
        ExprKind::Z => match ctx.z() {
            ZInterp::Formal => Some((Rational::one(), 0, 1)),
            ZInterp::Monomial { sign, qexp } => Some((Rational::from_int(sign as i64), qexp, 0)),
        },
        ExprKind::Neg(a) => mono(a, env, ctx)?.map(|(c, q, z)| (-c, q, z)),
        ExprKind::Mul(a, b) => pair(a, b)?.map(|((c, q, z), (d, r, w))| (&c * &d, q + r, z + w)),
        ExprKind::Div(a, b) => match pair(a, b)? {
            Some((_, (d, ..))) if d.is_zero() => return Err(Error::DivisionByZero("division by zero".into())),
            Some(((c, q, z), (d, r, w))) => Some((&c / &d, q - r, z - w)),
            None => None,
        },
        ExprKind::Pow(a, k) => match mono(a, env, ctx)? {
            Some((c, q, z)) => {
                let k = int_value(k, env)?;
                if c.is_zero() && k < 0 {
                    return Err(Error::DivisionByZero("zero to a negative power".into()));
                }
                Some((c.pow(k), q * k, z * k))
            }
            None => None,
        },
        _ => None,
    })
}

/// Product of pochhammers over several bases, exact through `n`.
fn pochs(bases: &[Expr], s: i64, len: Option<i64>, env: &Env, ctx: &EvalContext, n: i64) -> Result<Terms> {
    let mut ms = Vec::new();
    for b in bases {
        let m =
            mono(b, env, ctx)?.ok_or_else(|| Error::InvalidArgument("pochhammer base must be a monomial".into()))?;
        ms.push(m);
    }
    let mut vals = Vec::new();
    for m in &ms {
        match poch_valuation(m, s, len) {
            Some(v) => vals.push(v),
            None => return Ok(Terms::default()),
        }
    }
    let total: i64 = vals.iter().sum();
    let mut acc = Terms::one();
    for (m, v) in ms.into_iter().zip(vals) {
        acc = acc.mul(&poch(m, s, len, n - (total - v))?, n)?;
    }
    Ok(acc)
}

/// Valuation of a single-base pochhammer, `None` when it vanishes.
fn poch_valuation(m: &(Rational, i64, i64), s: i64, len: Option<i64>) -> Option<i64> {
    let (c, b, a) = m;
    if c.is_zero() {
        return Some(0);
    }
    let mut v = 0;
    let mut i = 0;
    while b + i * s <= 0 && len.is_none_or(|l| i < l) {
        let e = b + i * s;
        if e == 0 && *a == 0 && c.is_one() {
            return None;
        }
        if e < 0 {
            v += e;
        }
        i += 1;
    }
    Some(v)
}

/// `Π (1 - c z^a q^{b + i s})` over `0 <= i < len` (all `i` when infinite),
/// exact through `n`.
fn poch(m: (Rational, i64, i64), s: i64, len: Option<i64>, n: i64) -> Result<Terms> {
    let (c, b, a) = m;
    if c.is_zero() {
        return Ok(Terms::one());
    }
    // factors with negative q-exponent are rewritten as monomial * (1 - ...)
    let mut pre = (Rational::one(), 0i64, 0i64);
    let mut factors: Vec<(Rational, i64, i64)> = Vec::new();
    let mut i = 0i64;
    loop {
        if len.is_some_and(|l| i >= l) {
            break;
        }
        let e = b + i * s;
        if e >= 0 && len.is_none() && e > n - pre.1 {
            break;
        }
        if e < 0 {
            pre = (&pre.0 * &(-&c), pre.1 + e, pre.2 + a);
            factors.push((c.recip().expect("nonzero"), -e, -a));
        } else {
            if e == 0 && a == 0 && c.is_one() {
                return Ok(Terms::default());
            }
            factors.push((c.clone(), e, a));
        }
        i += 1;
    }
    let limit = n - pre.1;
    let mut acc = Terms::one();
    for (c, e, a) in factors {
        if e > limit {
            continue;
        }
        let mut f = Terms::one();
        f.add(&Terms::mono(c, e, a), &Rational::from_int(-1));
        acc = acc.mul(&f, limit)?;
    }
    Ok(acc.shift(&pre.0, pre.1, pre.2).truncate(n))
}

/// Gaussian binomial by the Pascal recurrence on coefficient vectors.
fn qbinom(n: i64, k: i64, order: i64) -> Terms {
    if k < 0 || n < 0 || k > n {
        return Terms::default();
    }
    // row[j] = [n choose j]_q for the current n
    let mut row: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for m in 1..=n {
        let mut next: Vec<Vec<Rational>> = Vec::with_capacity(m as usize + 1);
        for j in 0..=m {
            let mut p: Vec<Rational> = Vec::new();
            let mut add = |src: &[Rational], shift: usize| {
                if p.len() < src.len() + shift {
                    p.resize(src.len() + shift, Rational::zero());
                }
                for (i, x) in src.iter().enumerate() {
                    p[i + shift] += x;
                }
            };
            if j >= 1 {
                add(&row[j as usize - 1], 0);
            }
            if j < m {
                add(&row[j as usize], j as usize);
            }
            next.push(p);
        }
        row = next;
    }
    let mut t = Terms::default();
    for (i, x) in row[k as usize].iter().enumerate() {
        if (i as i64) <= order && !x.is_zero() {
            t.0.insert((i as i64, 0), x.clone());
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn expand(src: &str, order: i64) -> QSeries {
        let spec = parse(&format!("identity t {{ order {order} lhs {src} rhs 0 }}")).unwrap();
        brute_force_expand(&spec, Side::Lhs, &Env::new(), None).unwrap()
    }

    fn coeffs(s: &QSeries, n: i64) -> Vec<String> {
        (0..=n).map(|i| s.coeff(i, 0).to_string()).collect()
    }

    #[test]
    fn partitions() {
        assert_eq!(coeffs(&expand("1 / theta(q; q)", 5), 5), ["1", "1", "2", "3", "5", "7"]);
    }

    #[test]
    fn gaussian_binomial() {
        assert_eq!(coeffs(&expand("qbinom(4, 2)", 6), 6), ["1", "1", "2", "1", "1", "0", "0"]);
    }

    #[test]
    fn negative_exponent_bases() {
        // (q^-1; q)_2 = (1 - q^-1)(1 - 1) = 0 and (q^-1; q)_1 = 1 - q^-1
        assert!(expand("poch(q^(-1); q, 2)", 4).is_zero());
        let s = expand("q * poch(q^(-1); q, 1)", 4);
        assert_eq!(coeffs(&s, 1), ["-1", "1"]);
    }
}
