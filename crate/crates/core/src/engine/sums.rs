use crate::error::{Error, Result};
use crate::series::{EvalContext, QSeries, Rational};

/// Consecutive indices that must clear the order before a one-sided scan stops.
const STOP_WINDOW: i64 = 3;

/// Hard cap on `|n|` for a sum truncated at `order`.
pub fn index_cap(order: i64) -> i64 {
    4 * (order.max(0) + 1)
}

/// Sums `term(n)` over `n >= start` in direction `dir` (`1` or `-1`), stopping
/// once `lower(n)` exceeds `order` for a window of consecutive indices.
/// `lower(n)` must bound the minimal q-exponent of `term(n)` from below.
pub fn one_sided<L, T>(ctx: EvalContext, start: i64, dir: i64, lower: L, mut term: T) -> Result<QSeries>
where
    L: Fn(i64) -> i64,
    T: FnMut(i64) -> Result<Option<QSeries>>,
{
    let order = ctx.order();
    let cap = index_cap(order);
    let mut acc = QSeries::zero(ctx);
    let mut clear = 0;
    let mut n = start;
    loop {
        if n.abs() > cap {
            return Err(Error::UncertifiedTermination(format!(
                "index {n} passed the cap {cap} without the lower bound clearing order {order}"
            )));
        }
        if lower(n) > order {
            clear += 1;
            if clear >= STOP_WINDOW {
                return Ok(acc);
            }
        } else {
            clear = 0;
            if let Some(t) = term(n)? {
                acc.add_assign_unchecked(&t.into_ctx(ctx)?);
            }
        }
        n += dir;
    }
}

/// Sums `term(n)` over all integers.
pub fn bilateral<L, T>(ctx: EvalContext, lower: L, mut term: T) -> Result<QSeries>
where
    L: Fn(i64) -> i64,
    T: FnMut(i64) -> Result<Option<QSeries>>,
{
    let mut up = one_sided(ctx, 0, 1, &lower, &mut term)?;
    let down = one_sided(ctx, -1, -1, &lower, &mut term)?;
    up.add_assign_unchecked(&down);
    Ok(up)
}

/// Number of consecutive equal partial terms that certifies a stabilised tail.
pub const ABEL_WINDOW: usize = 4;

/// Abel value of `Σ_{n>=0} (-1)^n c_n` for terms `c_n` that converge
/// coefficientwise: once `c_n` has stopped changing through the order,
/// the tail `Σ_{n>=M} (-1)^n c` contributes `(-1)^M c / 2`.
pub fn abel_alternating<T>(ctx: EvalContext, mut c: T) -> Result<QSeries>
where
    T: FnMut(i64) -> Result<QSeries>,
{
    let cap = index_cap(ctx.order());
    let mut acc = QSeries::zero(ctx);
    let mut prev: Option<QSeries> = None;
    let mut same = 0usize;
    let mut n = 0i64;
    loop {
        if n > cap {
            return Err(Error::UncertifiedTermination(format!(
                "alternating terms did not stabilise within {cap} steps"
            )));
        }
        let cn = c(n)?.into_ctx(ctx)?;
        if prev.as_ref() == Some(&cn) {
            same += 1;
        } else {
            same = 0;
        }
        if same + 1 >= ABEL_WINDOW {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            acc.add_scaled_unchecked(&cn, &Rational::new(sign, 2));
            return Ok(acc);
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        acc.add_scaled_unchecked(&cn, &Rational::from_int(sign));
        prev = Some(cn);
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Mono;

    #[test]
    fn abel_of_constant_terms_is_half() {
        let ctx = EvalContext::formal(1, 3);
        let s = abel_alternating(ctx, |_| Ok(QSeries::one(ctx))).unwrap();
        assert_eq!(s, QSeries::constant(ctx, Rational::new(1, 2)));
    }

    #[test]
    fn bilateral_theta_sum() {
        // Σ q^{n^2} to order 9: 1 + 2q + 2q^4 + 2q^9
        let ctx = EvalContext::formal(1, 9);
        let s = bilateral(ctx, |n| n * n, |n| Ok(Some(QSeries::from_mono(ctx, &Mono::q(n * n))))).unwrap();
        let r = |k| Rational::from_int(k);
        assert_eq!(s, QSeries::from_terms(ctx, [(0, 0, r(1)), (1, 0, r(2)), (4, 0, r(2)), (9, 0, r(2))]));
    }

    #[test]
    fn cap_trips_on_flat_bound() {
        let ctx = EvalContext::formal(1, 2);
        let e = bilateral(ctx, |_| 0, |_| Ok(None));
        assert!(matches!(e, Err(Error::UncertifiedTermination(_))));
    }
}
