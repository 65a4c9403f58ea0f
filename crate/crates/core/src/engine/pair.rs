use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::series::{poch_factors, EvalContext, FactorProduct, Mismatch, Mono, QSeries, ZInterp};

pub type SeriesFn = dyn Fn(i64, i64) -> Result<QSeries> + Send + Sync;
pub type BoundFn = dyn Fn(i64) -> i64 + Send + Sync;

#[derive(Default)]
struct Memo {
    alpha: Mutex<HashMap<(i64, i64), QSeries>>,
    beta: Mutex<HashMap<(i64, i64), QSeries>>,
}

/// A bilateral Bailey pair relative to `a = 1` in the variable `Q = q^base`.
///
/// `alpha(n, order)` and `beta(n, order)` return series exact through the
/// given scaled order. The bound functions give proven lower bounds on the
/// minimal q-exponent (scaled units) of `α_n` and `β_n`.
#[derive(Clone)]
pub struct BilateralPair {
    ctx: EvalContext,
    base: i64,
    label: String,
    alpha: Arc<SeriesFn>,
    beta: Arc<SeriesFn>,
    alpha_min: Arc<BoundFn>,
    beta_min: Arc<BoundFn>,
    beta_low_support: i64,
    memo: Arc<Memo>,
}

impl fmt::Debug for BilateralPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BilateralPair")
            .field("label", &self.label)
            .field("ctx", &self.ctx)
            .field("base", &self.base)
            .finish()
    }
}

impl BilateralPair {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ctx: EvalContext,
        base: i64,
        label: impl Into<String>,
        alpha: Arc<SeriesFn>,
        beta: Arc<SeriesFn>,
        alpha_min: Arc<BoundFn>,
        beta_min: Arc<BoundFn>,
        beta_low_support: i64,
    ) -> Self {
        assert!(base >= 1, "pair base must be positive");
        BilateralPair {
            ctx,
            base,
            label: label.into(),
            alpha,
            beta,
            alpha_min,
            beta_min,
            beta_low_support,
            memo: Arc::new(Memo::default()),
        }
    }

    pub fn ctx(&self) -> &EvalContext {
        &self.ctx
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    /// Scaled exponent of `Q`.
    pub fn unit(&self) -> i64 {
        self.base * self.ctx.scale()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn beta_low_support(&self) -> i64 {
        self.beta_low_support
    }

    pub fn alpha_min_order(&self, n: i64) -> i64 {
        (self.alpha_min)(n)
    }

    pub fn beta_min_order(&self, n: i64) -> i64 {
        if n < self.beta_low_support {
            return i64::MAX / 4;
        }
        (self.beta_min)(n)
    }

    pub fn alpha(&self, n: i64) -> Result<QSeries> {
        self.alpha_at(n, self.ctx.order())
    }

    pub fn beta(&self, n: i64) -> Result<QSeries> {
        self.beta_at(n, self.ctx.order())
    }

    pub fn alpha_at(&self, n: i64, order: i64) -> Result<QSeries> {
        if self.alpha_min_order(n) > order {
            return Ok(QSeries::zero(self.ctx.with_order(order)));
        }
        memoized(&self.memo.alpha, n, order, || (self.alpha)(n, order))
    }

    pub fn beta_at(&self, n: i64, order: i64) -> Result<QSeries> {
        if n < self.beta_low_support || self.beta_min_order(n) > order {
            return Ok(QSeries::zero(self.ctx.with_order(order)));
        }
        memoized(&self.memo.beta, n, order, || (self.beta)(n, order))
    }

    /// The same pair with `β_n` replaced by `f(n, β_n)`; bounds are kept, so
    /// `f` must not lower the minimal exponent.
    pub fn map_beta<F>(&self, label: impl Into<String>, f: F) -> BilateralPair
    where
        F: Fn(i64, QSeries) -> Result<QSeries> + Send + Sync + 'static,
    {
        let inner = self.clone();
        let beta: Arc<SeriesFn> = Arc::new(move |n, order| f(n, inner.beta_at(n, order)?));
        let mut out = self.clone();
        out.label = label.into();
        out.beta = beta;
        out.memo = Arc::new(Memo::default());
        out
    }
}

fn memoized<F>(map: &Mutex<HashMap<(i64, i64), QSeries>>, n: i64, order: i64, f: F) -> Result<QSeries>
where
    F: FnOnce() -> Result<QSeries>,
{
    if let Some(s) = map.lock().expect("memo lock").get(&(n, order)) {
        return Ok(s.clone());
    }
    let s = f()?;
    map.lock().expect("memo lock").insert((n, order), s.clone());
    Ok(s)
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// q-exponent carried by one power of `z` under the context's reading.
pub(crate) fn z_shift(ctx: &EvalContext) -> i64 {
    match ctx.z() {
        ZInterp::Formal => 0,
        ZInterp::Monomial { qexp, .. } => qexp,
    }
}

/// Sum of the negative parts of `e, e + u, e + 2u, ...`.
pub(crate) fn negative_tail(e: i64, u: i64) -> i64 {
    let mut total = 0;
    let mut x = e;
    while x < 0 {
        total += x;
        x += u;
    }
    total
}

/// The key pair `α_n = (-1)^n z^n q^binom(n,2)`, `β_n = (z, q/z)_n / (q)_2n`.
pub fn key_pair(ctx: EvalContext) -> BilateralPair {
    key_pair_with_base(ctx, 1)
}

/// The key pair written in `Q = q^base`.
pub fn key_pair_with_base(ctx: EvalContext, base: i64) -> BilateralPair {
    let u = base * ctx.scale();
    let zq = z_shift(&ctx);
    let alpha: Arc<SeriesFn> = Arc::new(move |n, order| {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let m = Mono::new(sign.into(), n, u * binom2(n));
        Ok(QSeries::from_mono(ctx.with_order(order), &m))
    });
    let beta: Arc<SeriesFn> = Arc::new(move |n, order| key_beta_factors(u, n).eval(ctx.with_order(order)));
    let alpha_min: Arc<BoundFn> = Arc::new(move |n| u * binom2(n) + n * zq);
    let beta_min: Arc<BoundFn> = Arc::new(move |_| negative_tail(zq, u) + negative_tail(u - zq, u));
    BilateralPair::new(ctx, base, format!("key(q^{base})"), alpha, beta, alpha_min, beta_min, 0)
}

/// `(z, Q/z; Q)_n / (Q; Q)_2n` as a factor product.
pub(crate) fn key_beta_factors(u: i64, n: i64) -> FactorProduct {
    let mut p = poch_factors(&Mono::new(1.into(), 1, 0), u, n);
    p.mul(&poch_factors(&Mono::new(1.into(), -1, u), u, n));
    p.mul(&poch_factors(&Mono::q(u), u, 2 * n).recip().expect("nonzero prefactor"));
    p
}

/// Result of checking `β_n = Σ_{|j|<=n} α_j / ((Q)_{n-j} (Q)_{n+j})`.
#[derive(Clone, Debug, PartialEq)]
pub struct DefinitionCheck {
    pub label: String,
    pub n_max: i64,
    pub order: i64,
    pub first_failure: Option<(i64, Mismatch)>,
}

impl DefinitionCheck {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks the defining relation of a bilateral pair for `0 <= n <= n_max`.
pub fn verify_pair_definition(p: &BilateralPair, n_max: i64) -> Result<DefinitionCheck> {
    let ctx = *p.ctx();
    let u = p.unit();
    let qq = Mono::q(u);
    let mut first_failure = None;
    for n in 0..=n_max {
        let mut rhs = QSeries::zero(ctx);
        for j in -n..=n {
            if p.alpha_min_order(j) > ctx.order() {
                continue;
            }
            let mut w = poch_factors(&qq, u, n - j).recip()?;
            w.mul(&poch_factors(&qq, u, n + j).recip()?);
            let a = p.alpha(j)?;
            rhs.add_assign_unchecked(&w.apply_to(&a, ctx.order())?);
        }
        let lhs = p.beta(n)?;
        if let Some(m) = lhs.equal_up_to(&rhs)? {
            first_failure = Some((n, m));
            break;
        }
    }
    Ok(DefinitionCheck { label: p.label().to_string(), n_max, order: ctx.order(), first_failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Rational;

    #[test]
    fn key_pair_small_values() {
        let ctx = EvalContext::formal(1, 10);
        let p = key_pair(ctx);
        assert_eq!(p.beta(0).unwrap(), QSeries::one(ctx));
        assert_eq!(p.alpha(-1).unwrap(), QSeries::monomial(ctx, Rational::from_int(-1), -1, 1));
        assert!(p.beta(-3).unwrap().is_zero());
    }

    #[test]
    fn z_equal_q_gives_unit_pair() {
        let ctx = EvalContext::new(1, 12, ZInterp::Monomial { sign: 1, qexp: 1 });
        let p = key_pair(ctx);
        assert_eq!(p.beta(0).unwrap(), QSeries::one(ctx));
        for n in 1..5 {
            assert!(p.beta(n).unwrap().is_zero());
        }
        assert!(verify_pair_definition(&p, 5).unwrap().passed());
    }

    #[test]
    fn definition_holds_and_fault_is_caught() {
        let ctx = EvalContext::formal(1, 12);
        let p = key_pair(ctx);
        assert!(verify_pair_definition(&p, 6).unwrap().passed());
        let bad = p.map_beta("perturbed", move |n, b| {
            if n == 1 {
                b.add(&QSeries::monomial(*b.ctx(), Rational::one(), 0, 1))
            } else {
                Ok(b)
            }
        });
        let check = verify_pair_definition(&bad, 6).unwrap();
        assert_eq!(check.first_failure.map(|(n, _)| n), Some(1));
    }
}
