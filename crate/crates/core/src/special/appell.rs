use super::form::QuadForm;
use crate::engine::sums;
use crate::error::{Error, Result};
use crate::series::{EvalContext, FactorProduct, Mono, QSeries};

/// `Σ_{n∈Z} (-1)^{εn} z^{kn} q^{e(n)} / (1 - m q^{Cn})`; the classical
/// denominator `1 + q^{Cn+D}` is `m = -q^D`.
#[derive(Clone, Debug, PartialEq)]
pub struct AppellLerchSpec {
    pub alternating: bool,
    pub z_power: i64,
    pub exponent: QuadForm,
    pub den: Option<(Mono, i64)>,
}

impl AppellLerchSpec {
    fn term(&self, n: i64) -> Result<FactorProduct> {
        let sign = if self.alternating && n % 2 != 0 { -1 } else { 1 };
        let mut f = FactorProduct::monomial(Mono::new(sign.into(), self.z_power * n, self.exponent.at(n, 0)?));
        if let Some((m, c)) = &self.den {
            f.push_den(m.mul(&Mono::q(c * n)));
        }
        Ok(f)
    }

    /// The same series summed over `-n`.
    pub fn reflected(&self) -> Self {
        let mut s = self.clone();
        s.z_power = -s.z_power;
        s.exponent.n1 = -s.exponent.n1;
        if let Some((_, c)) = &mut s.den {
            *c = -*c;
        }
        s
    }
}

pub fn appell_lerch_sum(spec: &AppellLerchSpec, ctx: EvalContext) -> Result<QSeries> {
    if spec.exponent.nn * spec.exponent.den <= 0 {
        return Err(Error::UncertifiedTermination("Appell-Lerch sums need a positive quadratic exponent".into()));
    }
    bilateral_convex(ctx, |n| spec.term(n))
}

/// `Σ_{n∈Z} term(n)` for terms whose leading exponent is convex in `n`: each
/// direction stops once the exponent has passed the order while strictly
/// increasing over three steps.
pub(crate) fn bilateral_convex<T>(ctx: EvalContext, term: T) -> Result<QSeries>
where
    T: Fn(i64) -> Result<FactorProduct>,
{
    let order = ctx.order();
    let cap = sums::index_cap(order);
    let mut acc = QSeries::zero(ctx);
    for (start, dir) in [(0i64, 1i64), (-1, -1)] {
        let mut trail: Vec<i64> = Vec::new();
        let mut n = start;
        loop {
            if n.abs() > cap {
                return Err(Error::UncertifiedTermination(format!(
                    "bilateral sum reached index {n} without leaving the order {order}"
                )));
            }
            let f = term(n)?;
            let lead = f.lead_exponent(&ctx).map_err(|e| match e {
                Error::DivisionByZero(_) => Error::Pole(n),
                e => e,
            })?;
            if let Some(l) = lead {
                if l <= order {
                    acc.add_assign_unchecked(&f.eval(ctx)?);
                }
                trail.push(l);
                let k = trail.len();
                if k >= 3 && l > order && trail[k - 3] < trail[k - 2] && trail[k - 2] < l {
                    break;
                }
            }
            n += dir;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Rational;

    fn weak_rhs_spec() -> AppellLerchSpec {
        AppellLerchSpec {
            alternating: true,
            z_power: 1,
            exponent: QuadForm::in_n(1, 0, 1),
            den: Some((Mono::signed_q(-1, 0), 1)),
        }
    }

    #[test]
    fn zero_index_is_half() {
        let ctx = EvalContext::formal(1, 0);
        let s = appell_lerch_sum(&weak_rhs_spec(), ctx).unwrap();
        assert_eq!(s, QSeries::constant(ctx, Rational::new(1, 2)));
    }

    #[test]
    fn reflection_is_consistent() {
        let ctx = EvalContext::formal(1, 40);
        let a = appell_lerch_sum(&weak_rhs_spec(), ctx).unwrap();
        let b = appell_lerch_sum(&weak_rhs_spec().reflected(), ctx).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pole_is_reported() {
        let spec = AppellLerchSpec {
            alternating: false,
            z_power: 0,
            exponent: QuadForm::in_n(1, 1, 2),
            den: Some((Mono::q(2), 1)),
        };
        let e = appell_lerch_sum(&spec, EvalContext::formal(1, 10));
        assert!(matches!(e, Err(Error::Pole(-2))), "{e:?}");
    }
}
