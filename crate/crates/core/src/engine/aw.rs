use super::pair::BilateralPair;
use super::sums;
use super::weak::beta_sum;
use crate::error::{Error, Result};
use crate::series::{poch_factors, FactorProduct, Mono, QSeries};

/// The two bilateral lemmas producing Hecke-type double sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AwLemma {
    /// `Σ (Q²;Q²)_{2n} Q^n β_n/(-Q;Q)_{2n+1} = Σ_n Q^{n(n+1)} Σ_{|j|<=n} Q^{-j²} α_j`
    I,
    /// `Σ (Q;Q)_{2n} Q^n β_n = Σ_n Q^{binom(n+1,2)} Σ_{|j|<=n/2} Q^{-2j²} α_j`
    II,
}

/// Both sides of the lemma for a pair at `(1, Q²)`, in the variable `Q`.
pub fn aw_lemma_eval(p2: &BilateralPair, which: AwLemma) -> Result<(QSeries, QSeries)> {
    if p2.base() % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "the Hecke-type lemmas need a pair in an even power of q, got q^{}",
            p2.base()
        )));
    }
    let ctx = *p2.ctx();
    let order = ctx.order();
    let u = p2.unit() / 2;
    let qq = Mono::q(u);
    let lhs = beta_sum(p2, |n| {
        let mut f = FactorProduct::monomial(Mono::q(u * n));
        match which {
            AwLemma::I => {
                f.mul(&poch_factors(&Mono::q(2 * u), 2 * u, 2 * n));
                f.mul(&poch_factors(&Mono::signed_q(-1, u), u, 2 * n + 1).recip()?);
            }
            AwLemma::II => f.mul(&poch_factors(&qq, u, 2 * n)),
        }
        Ok(f)
    })?;
    // (outer exponent of n, inner exponent of j, inner range)
    let outer = move |n: i64| match which {
        AwLemma::I => u * n * (n + 1),
        AwLemma::II => u * n * (n + 1) / 2,
    };
    let inner = move |j: i64| match which {
        AwLemma::I => -u * j * j,
        AwLemma::II => -2 * u * j * j,
    };
    let width = move |n: i64| match which {
        AwLemma::I => n,
        AwLemma::II => n / 2,
    };
    let lower = |n: i64| {
        let w = width(n);
        (-w..=w).map(|j| outer(n) + inner(j) + p2.alpha_min_order(j)).min().unwrap_or(i64::MAX / 4)
    };
    let mut floor = i64::MAX;
    let rhs = sums::one_sided(ctx, 0, 1, lower, |n| {
        floor = floor.min(lower(n));
        let w = width(n);
        let mut acc = QSeries::zero(ctx);
        for j in -w..=w {
            let shift = outer(n) + inner(j);
            if shift < 0 {
                return Err(Error::NegativeFloor(shift));
            }
            if shift + p2.alpha_min_order(j) > order {
                continue;
            }
            let a = p2.alpha_at(j, order - shift)?;
            acc.add_assign_unchecked(&a.mul_mono_into(&Mono::q(shift), ctx));
        }
        Ok(Some(acc))
    })?;
    for side in [&lhs, &rhs] {
        if let Some(m) = side.min_q_exp() {
            if m < floor.min(0) {
                return Err(Error::NegativeFloor(m));
            }
        }
    }
    Ok((lhs, rhs))
}
