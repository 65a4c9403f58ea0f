use super::limit::LimitParam;
use super::pair::BilateralPair;
use super::sums;
use crate::error::{Error, Result};
use crate::series::{poch_factors, EvalContext, FactorProduct, Mono, QSeries, Rational};

/// The five weak forms of the bilateral Bailey lemma at `a = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeakVariant {
    /// `Σ q^{n²} β_n = 1/(q)_∞ Σ q^{n²} α_n`
    V1,
    /// `Σ q^{n²/2} (-q^{1/2})_n β_n = (-q^{1/2})_∞/(q)_∞ Σ q^{n²/2} α_n`
    V2,
    /// `2 Σ (-1)^n (q;q²)_n β_n = (q;q²)_∞/(q²;q²)_∞ Σ (-1)^n α_n`
    V3,
    /// `Σ q^{binom(n,2)} (-q)_n β_n = (-q)_∞/(q)_∞ Σ (1+q^n) q^{binom(n,2)} α_n`
    V4,
    /// `Σ q^{binom(n+1,2)} (-1)_n β_n = 2(-q)_∞/(q)_∞ Σ q^{binom(n+1,2)}/(1+q^n) α_n`
    V5,
}

impl WeakVariant {
    pub const ALL: [WeakVariant; 5] =
        [WeakVariant::V1, WeakVariant::V2, WeakVariant::V3, WeakVariant::V4, WeakVariant::V5];

    /// The `(x, y)` specialisation of the general lemma that yields this form,
    /// for a pair with scaled unit `u`.
    pub fn limit_params(self, u: i64) -> Result<(LimitParam, LimitParam)> {
        let half = || half_unit(u);
        Ok(match self {
            WeakVariant::V1 => (LimitParam::Infinite, LimitParam::Infinite),
            WeakVariant::V2 => (LimitParam::Infinite, LimitParam::finite(-1, half()?)),
            WeakVariant::V3 => (LimitParam::finite(1, half()?), LimitParam::finite(-1, half()?)),
            WeakVariant::V4 => (LimitParam::Infinite, LimitParam::finite(-1, u)),
            WeakVariant::V5 => (LimitParam::Infinite, LimitParam::finite(-1, 0)),
        })
    }

    /// Factor relating the printed weak form to the general lemma's sides.
    pub fn normalisation(self) -> i64 {
        if self == WeakVariant::V3 {
            2
        } else {
            1
        }
    }
}

fn half_unit(u: i64) -> Result<i64> {
    if u % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "half-integer powers of q^{u} need an even scaled unit (use scale 2)"
        )));
    }
    Ok(u / 2)
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

fn lead(p: &FactorProduct, ctx: &EvalContext) -> Result<Option<i64>> {
    p.lead_exponent(ctx)
}

/// `Σ_{n>=0} w(n) β_n` through the pair's order.
pub(crate) fn beta_sum<W>(p: &BilateralPair, w: W) -> Result<QSeries>
where
    W: Fn(i64) -> Result<FactorProduct>,
{
    let ctx = *p.ctx();
    let start = p.beta_low_support().max(0);
    weighted_sum(ctx, start, 1, &w, |n| p.beta_min_order(n), |n, o| p.beta_at(n, o))
}

/// `Σ_{n∈Z} w(n) α_n` through the pair's order.
pub(crate) fn alpha_sum<W>(p: &BilateralPair, w: W) -> Result<QSeries>
where
    W: Fn(i64) -> Result<FactorProduct>,
{
    let ctx = *p.ctx();
    let mut up = weighted_sum(ctx, 0, 1, &w, |n| p.alpha_min_order(n), |n, o| p.alpha_at(n, o))?;
    let down = weighted_sum(ctx, -1, -1, &w, |n| p.alpha_min_order(n), |n, o| p.alpha_at(n, o))?;
    up.add_assign_unchecked(&down);
    Ok(up)
}

fn weighted_sum<W, B, S>(ctx: EvalContext, start: i64, dir: i64, w: &W, bound: B, seq: S) -> Result<QSeries>
where
    W: Fn(i64) -> Result<FactorProduct>,
    B: Fn(i64) -> i64,
    S: Fn(i64, i64) -> Result<QSeries>,
{
    let order = ctx.order();
    let lower = |n: i64| match w(n).and_then(|f| lead(&f, &ctx)) {
        Ok(Some(l)) => l.saturating_add(bound(n)),
        Ok(None) => i64::MAX / 4,
        Err(_) => i64::MIN / 4,
    };
    sums::one_sided(ctx, start, dir, lower, |n| {
        let f = w(n)?;
        let Some(l) = lead(&f, &ctx)? else { return Ok(None) };
        let need = order - l;
        let s = seq(n, need.max(order))?;
        Ok(Some(f.apply_to(&s, order)?))
    })
}

/// Both sides of a weak form for the given pair.
pub fn weak_lemma_eval(p: &BilateralPair, v: WeakVariant) -> Result<(QSeries, QSeries)> {
    let ctx = *p.ctx();
    let u = p.unit();
    let order = ctx.order();
    let qq = Mono::q(u);
    let mut pre = FactorProduct::new();
    pre.push_den_run(qq.clone(), u)?;
    let (lhs, alpha) = match v {
        WeakVariant::V1 => {
            let lhs = beta_sum(p, |n| Ok(FactorProduct::monomial(Mono::q(u * n * n))))?;
            let rhs = alpha_sum(p, |n| Ok(FactorProduct::monomial(Mono::q(u * n * n))))?;
            (lhs, rhs)
        }
        WeakVariant::V2 => {
            let h = half_unit(u)?;
            let base = Mono::signed_q(-1, h);
            pre.push_num_run(base.clone(), u)?;
            let lhs = beta_sum(p, |n| {
                let mut f = poch_factors(&base, u, n);
                f.mul_mono(&Mono::q(h * n * n));
                Ok(f)
            })?;
            let rhs = alpha_sum(p, |n| Ok(FactorProduct::monomial(Mono::q(h * n * n))))?;
            (lhs, rhs)
        }
        WeakVariant::V3 => {
            pre = FactorProduct::new();
            pre.push_num_run(qq.clone(), 2 * u)?;
            pre.push_den_run(Mono::q(2 * u), 2 * u)?;
            let lhs = sums::abel_alternating(ctx, |n| {
                let f = poch_factors(&qq, 2 * u, n);
                f.apply_to(&p.beta_at(n, order)?, order)
            })?
            .scale(&Rational::from_int(2));
            let rhs = alpha_sum(p, |n| Ok(FactorProduct::monomial(Mono::signed_q(sign(n), 0))))?;
            (lhs, rhs)
        }
        WeakVariant::V4 => {
            pre.push_num_run(Mono::signed_q(-1, u), u)?;
            let lhs = beta_sum(p, |n| {
                let mut f = poch_factors(&Mono::signed_q(-1, u), u, n);
                f.mul_mono(&Mono::q(u * binom2(n)));
                Ok(f)
            })?;
            let rhs = alpha_sum(p, |n| {
                let mut f = FactorProduct::monomial(Mono::q(u * binom2(n)));
                f.push_num(Mono::signed_q(-1, u * n));
                Ok(f)
            })?;
            (lhs, rhs)
        }
        WeakVariant::V5 => {
            pre.push_num_run(Mono::signed_q(-1, u), u)?;
            pre.scale(&Rational::from_int(2));
            let lhs = beta_sum(p, |n| {
                let mut f = poch_factors(&Mono::signed_q(-1, 0), u, n);
                f.mul_mono(&Mono::q(u * binom2(n + 1)));
                Ok(f)
            })?;
            let rhs = alpha_sum(p, |n| {
                let mut f = FactorProduct::monomial(Mono::q(u * binom2(n + 1)));
                f.push_den(Mono::signed_q(-1, u * n));
                Ok(f)
            })?;
            (lhs, rhs)
        }
    };
    let rhs = pre.apply_to(&alpha, order)?;
    Ok((lhs, rhs))
}

fn sign(n: i64) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Both sides of the general bilateral Bailey lemma at `a = 1`:
/// `Σ (x,y)_n (Q/xy)^n β_n = (Q/x,Q/y)_∞/((Q)_∞(Q/xy)_∞) Σ (x,y)_n/(Q/x,Q/y)_n (Q/xy)^n α_n`.
pub fn bms_general_eval(p: &BilateralPair, x: LimitParam, y: LimitParam) -> Result<(QSeries, QSeries)> {
    let ctx = *p.ctx();
    let u = p.unit();
    let order = ctx.order();
    let mut pre = x.dual_infinite(u)?;
    pre.mul(&y.dual_infinite(u)?);
    pre.push_den_run(Mono::q(u), u)?;
    let ratio = match (x.as_mono(), y.as_mono()) {
        (Some(a), Some(b)) => {
            let r = Mono::q(u).mul(&a.recip()).mul(&b.recip());
            pre.push_den_run(r.clone(), u)?;
            Some(r)
        }
        _ => None,
    };
    let lhs_weight = |n: i64| -> Result<FactorProduct> {
        let mut f = x.sum_factor(n, u);
        f.mul(&y.sum_factor(n, u));
        f.mul_mono(&Mono::q(u * n));
        Ok(f)
    };
    let lhs = match &ratio {
        Some(r) if r.qexp < 0 || (r.qexp == 0 && r.coeff != Rational::from_int(-1)) => {
            return Err(Error::UncertifiedTermination(format!(
                "β-side ratio Q/xy = {}·q^{} does not decay",
                r.coeff, r.qexp
            )))
        }
        Some(r) if r.qexp == 0 => sums::abel_alternating(ctx, |n| {
            let mut f = lhs_weight(n)?;
            f.scale(&Rational::from_int(sign(n)));
            f.apply_to(&p.beta_at(n, order)?, order)
        })?,
        _ => beta_sum(p, lhs_weight)?,
    };
    let alpha = alpha_sum(p, |n| {
        let mut f = x.weight_factor(n, u)?;
        f.mul(&y.weight_factor(n, u)?);
        f.mul_mono(&Mono::q(u * n));
        Ok(f)
    })?;
    let rhs = pre.apply_to(&alpha, order)?;
    Ok((lhs, rhs))
}
