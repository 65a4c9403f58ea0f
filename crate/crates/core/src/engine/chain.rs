use std::sync::Arc;

use super::limit::LimitParam;
use super::pair::{key_pair, negative_tail, BilateralPair, BoundFn, SeriesFn};
use super::weak::{alpha_sum, beta_sum};
use crate::error::{Error, Result};
use crate::series::{poch_factors, EvalContext, FactorProduct, Mono, QSeries};

/// One step of the bilateral Bailey chain with both parameters at infinity:
/// `α'_n = Q^{n²} α_n`, `β'_n = Σ_{j=0}^{n} Q^{j²} β_j / (Q)_{n-j}`.
pub fn chain_step(p: &BilateralPair) -> BilateralPair {
    general_chain_step(p, LimitParam::Infinite, LimitParam::Infinite)
        .expect("the infinite chain step has no vanishing denominators")
}

/// The general bilateral Bailey chain at `a = 1`:
/// `α'_n = (x,y)_n/(Q/x,Q/y)_n (Q/xy)^n α_n`,
/// `β'_n = 1/(Q/x,Q/y)_n Σ_{j<=n} (x,y)_j (Q/xy)_{n-j}/(Q)_{n-j} (Q/xy)^j β_j`.
pub fn general_chain_step(p: &BilateralPair, x: LimitParam, y: LimitParam) -> Result<BilateralPair> {
    let ctx = *p.ctx();
    let u = p.unit();
    let ratio = match (x.as_mono(), y.as_mono()) {
        (Some(a), Some(b)) => Some(Mono::q(u).mul(&a.recip()).mul(&b.recip())),
        _ => None,
    };
    let alpha_weight = move |n: i64| -> Result<FactorProduct> {
        let mut f = x.weight_factor(n, u)?;
        f.mul(&y.weight_factor(n, u)?);
        f.mul_mono(&Mono::q(u * n));
        Ok(f)
    };
    let beta_weight = move |n: i64, j: i64| -> Result<FactorProduct> {
        let mut f = x.sum_factor(j, u);
        f.mul(&y.sum_factor(j, u));
        f.mul_mono(&Mono::q(u * j));
        if let Some(r) = &ratio {
            f.mul(&poch_factors(r, u, n - j));
        }
        f.mul(&poch_factors(&Mono::q(u), u, n - j).recip()?);
        f.mul(&x.dual_poch(n, u).recip()?);
        f.mul(&y.dual_poch(n, u).recip()?);
        Ok(f)
    };
    for n in 0..=8 {
        alpha_weight(n)?.lead_exponent(&ctx)?;
        alpha_weight(-n)?.lead_exponent(&ctx)?;
        beta_weight(n, 0)?.lead_exponent(&ctx)?;
    }
    let label = format!("chain[{x:?},{y:?}]({})", p.label());
    Ok(transform(p, p.base(), label, alpha_weight, beta_weight))
}

/// The pair `α'_n = w(n) α_n`, `β'_n = Σ_{j=low}^{n} v(n, j) β_j` in base
/// `base`, with bounds derived from the weights' exact leading exponents.
pub(crate) fn transform<A, B>(
    p: &BilateralPair,
    base: i64,
    label: String,
    alpha_weight: A,
    beta_weight: B,
) -> BilateralPair
where
    A: Fn(i64) -> Result<FactorProduct> + Send + Sync + Clone + 'static,
    B: Fn(i64, i64) -> Result<FactorProduct> + Send + Sync + Clone + 'static,
{
    let ctx = *p.ctx();
    let lead_or = move |f: Result<FactorProduct>| -> i64 {
        match f.and_then(|f| f.lead_exponent(&ctx)) {
            Ok(Some(l)) => l,
            Ok(None) => i64::MAX / 4,
            Err(_) => i64::MIN / 4,
        }
    };
    let inner = p.clone();
    let aw = alpha_weight.clone();
    let alpha: Arc<SeriesFn> = Arc::new(move |n, order| {
        let f = aw(n)?;
        let Some(l) = f.lead_exponent(&ctx)? else { return Ok(QSeries::zero(ctx.with_order(order))) };
        let a = inner.alpha_at(n, (order - l).max(order))?;
        f.apply_to(&a, order)
    });
    let inner = p.clone();
    let alpha_min: Arc<BoundFn> = Arc::new(move |n| lead_or(alpha_weight(n)).saturating_add(inner.alpha_min_order(n)));
    let inner = p.clone();
    let low = p.beta_low_support().max(0);
    let bw = beta_weight.clone();
    let beta: Arc<SeriesFn> = Arc::new(move |n, order| {
        let mut acc = QSeries::zero(ctx.with_order(order));
        for j in low..=n {
            let f = bw(n, j)?;
            let Some(l) = f.lead_exponent(&ctx)? else { continue };
            if l.saturating_add(inner.beta_min_order(j)) > order {
                continue;
            }
            let b = inner.beta_at(j, (order - l).max(order))?;
            acc.add_assign_unchecked(&f.apply_to(&b, order)?);
        }
        Ok(acc)
    });
    let inner = p.clone();
    let beta_min: Arc<BoundFn> = Arc::new(move |n| {
        (low..=n.max(low))
            .map(|j| lead_or(beta_weight(n, j)).saturating_add(inner.beta_min_order(j)))
            .min()
            .unwrap_or(i64::MAX / 4)
    });
    BilateralPair::new(ctx, base, label, alpha, beta, alpha_min, beta_min, 0)
}

/// Shapes of ordered multisums `n_1 >= ... >= n_k >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MultisumKind {
    /// `q^{n_1²+...+n_k²} (z,q/z)_{n_k} / ((q)_{n_1-n_2}...(q)_{2n_k})`
    Ag1,
    /// `q^{n_1²+...+n_k²} (-q,z,q²/z;q²)_{n_k} / ((q²;q²)_{n_1-n_2}...(q²;q²)_{2n_k})`
    Ag2,
    /// `q^{n_1²+...+n_k²} β_{n_k} / ((q)_{n_1-n_2}...(q)_{n_{k-1}-n_k})`
    PairQuadratic,
    /// `q^{(n_1²+...+n_k²)/2} (-q^{1/2})_{n_k} β_{n_k} / ((q)_{n_1-n_2}...)`; needs scale 2
    PairHalf,
}

/// Direct enumeration of a multisum; the pair kinds use the key pair.
pub fn multisum_lhs(kind: MultisumKind, k: usize, ctx: EvalContext) -> Result<QSeries> {
    multisum_lhs_for(&key_pair(ctx), kind, k)
}

/// Direct enumeration of a multisum over the given pair's `β`.
pub fn multisum_lhs_for(p: &BilateralPair, kind: MultisumKind, k: usize) -> Result<QSeries> {
    if k == 0 {
        return Err(Error::InvalidArgument("multisum depth must be at least 1".into()));
    }
    let ctx = *p.ctx();
    let order = ctx.order();
    let s = ctx.scale();
    // (quadratic weight per unit n², step of the difference pochhammers)
    let (quad, step) = match kind {
        MultisumKind::Ag1 | MultisumKind::PairQuadratic => (s, s),
        MultisumKind::Ag2 => (s, 2 * s),
        MultisumKind::PairHalf => {
            if s % 2 != 0 {
                return Err(Error::InvalidArgument("half-integer weights need scale 2".into()));
            }
            (s / 2, s)
        }
    };
    let tail = |nk: i64| -> Result<Option<(FactorProduct, i64)>> {
        Ok(match kind {
            MultisumKind::Ag1 => Some((super::pair::key_beta_factors(s, nk), 0)),
            MultisumKind::Ag2 => {
                let mut f = super::pair::key_beta_factors(2 * s, nk);
                f.mul(&poch_factors(&Mono::signed_q(-1, s), 2 * s, nk));
                Some((f, 0))
            }
            MultisumKind::PairQuadratic => Some((FactorProduct::new(), p.beta_min_order(nk))),
            MultisumKind::PairHalf => Some((poch_factors(&Mono::signed_q(-1, s / 2), s, nk), p.beta_min_order(nk))),
        })
    };
    let uses_beta = matches!(kind, MultisumKind::PairQuadratic | MultisumKind::PairHalf);
    let zq = super::pair::z_shift(&ctx);
    let tail_floor = match kind {
        MultisumKind::Ag1 => negative_tail(zq, s) + negative_tail(s - zq, s),
        MultisumKind::Ag2 => negative_tail(zq, 2 * s) + negative_tail(2 * s - zq, 2 * s),
        _ => (0..=order.max(0)).map(|n| p.beta_min_order(n)).min().unwrap_or(0).min(0),
    };
    let mut acc = QSeries::zero(ctx);
    let mut idx = vec![0i64; k];
    // depth-first over n_1 >= n_2 >= ... >= n_k >= 0, pruning on the quadratic weight
    fn walk(
        depth: usize,
        idx: &mut Vec<i64>,
        weight: i64,
        limit: i64,
        visit: &mut dyn FnMut(&[i64]) -> Result<()>,
        quad: i64,
    ) -> Result<()> {
        let k = idx.len();
        if depth == k {
            return visit(idx);
        }
        let top = if depth == 0 { i64::MAX } else { idx[depth - 1] };
        let mut n = 0;
        while n <= top {
            let w = weight + quad * n * n;
            if w > limit {
                break;
            }
            idx[depth] = n;
            walk(depth + 1, idx, w, limit, visit, quad)?;
            n += 1;
        }
        Ok(())
    }
    let mut visit = |t: &[i64]| -> Result<()> {
        let nk = t[k - 1];
        let Some((mut f, extra)) = tail(nk)? else { return Ok(()) };
        let w: i64 = t.iter().map(|n| quad * n * n).sum();
        f.mul_mono(&Mono::q(w));
        for i in 0..k - 1 {
            f.mul(&poch_factors(&Mono::q(step), step, t[i] - t[i + 1]).recip()?);
        }
        let Some(l) = f.lead_exponent(&ctx)? else { return Ok(()) };
        if l.saturating_add(extra) > order {
            return Ok(());
        }
        let term = if uses_beta { f.apply_to(&p.beta_at(nk, (order - l).max(order))?, order)? } else { f.eval(ctx)? };
        acc.add_assign_unchecked(&term);
        Ok(())
    };
    walk(0, &mut idx, 0, order - tail_floor, &mut visit, quad)?;
    Ok(acc)
}

/// Right side of a pair multisum: `1/(q)_∞ Σ q^{k n²} α_n`, or the half-weight
/// analogue `(-q^{1/2})_∞/(q)_∞ Σ q^{k n²/2} α_n`.
pub fn multisum_pair_rhs(p: &BilateralPair, kind: MultisumKind, k: usize) -> Result<QSeries> {
    let ctx = *p.ctx();
    let u = p.unit();
    let k = k as i64;
    let mut pre = FactorProduct::new();
    pre.push_den_run(Mono::q(u), u)?;
    let quad = match kind {
        MultisumKind::PairQuadratic => u * k,
        MultisumKind::PairHalf => {
            if u % 2 != 0 {
                return Err(Error::InvalidArgument("half-integer weights need scale 2".into()));
            }
            pre.push_num_run(Mono::signed_q(-1, u / 2), u)?;
            u * k / 2
        }
        _ => return Err(Error::InvalidArgument("product sides of AG forms are catalog identities".into())),
    };
    if (u * k) % 2 != 0 && kind == MultisumKind::PairHalf {
        return Err(Error::InvalidArgument("half-integer weights need scale 2".into()));
    }
    let alpha = alpha_sum(p, |n| Ok(FactorProduct::monomial(Mono::q(quad * n * n))))?;
    pre.apply_to(&alpha, ctx.order())
}

/// Left side of the `k`-fold chain pipeline: apply [`chain_step`] `k - 1`
/// times, then the first weak form's β-side.
pub fn chained_lhs(p: &BilateralPair, k: usize) -> Result<QSeries> {
    let mut q = p.clone();
    for _ in 1..k {
        q = chain_step(&q);
    }
    let u = q.unit();
    beta_sum(&q, |n| Ok(FactorProduct::monomial(Mono::q(u * n * n))))
}
