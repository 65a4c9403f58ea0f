use crate::engine::sums;
use crate::error::{Error, Result};
use crate::series::{EvalContext, FactorProduct, Mono, QSeries, ZInterp};

/// A quotient of infinite pochhammers `Π (a; q^s)_∞ / Π (b; q^t)_∞`, with
/// bases and steps in scaled units.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ThetaProductSpec {
    pub num: Vec<(Mono, i64)>,
    pub den: Vec<(Mono, i64)>,
}

impl ThetaProductSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, base: Mono, step: i64) -> Self {
        self.num.push((base, step));
        self
    }

    pub fn den(mut self, base: Mono, step: i64) -> Self {
        self.den.push((base, step));
        self
    }

    pub fn factors(&self) -> Result<FactorProduct> {
        let mut f = FactorProduct::new();
        for (list, is_num) in [(&self.num, true), (&self.den, false)] {
            for (b, s) in list {
                if *s < 1 {
                    return Err(Error::InvalidArgument(format!("infinite product step {s} must be positive")));
                }
                if is_num {
                    f.push_num_run(b.clone(), *s)?;
                } else {
                    f.push_den_run(b.clone(), *s)?;
                }
            }
        }
        Ok(f)
    }
}

pub fn theta_product(spec: &ThetaProductSpec, ctx: EvalContext) -> Result<QSeries> {
    spec.factors()?.eval(ctx)
}

/// `Σ_{n∈Z} (-1)^n q^binom(n,2) z^n`.
pub fn jtp_sum(ctx: EvalContext) -> Result<QSeries> {
    let s = ctx.scale();
    let zq = match ctx.z() {
        ZInterp::Formal => 0,
        ZInterp::Monomial { qexp, .. } => qexp,
    };
    let e = move |n: i64| s * n * (n - 1) / 2;
    sums::bilateral(
        ctx,
        |n| e(n) + n * zq,
        |n| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            Ok(Some(QSeries::from_mono(ctx, &Mono::new(sign.into(), n, e(n)))))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Rational;

    #[test]
    fn jtp_small_order() {
        let ctx = EvalContext::formal(1, 5);
        let r = |k| Rational::from_int(k);
        let expect = QSeries::from_terms(
            ctx,
            [(0, 0, r(1)), (0, 1, r(-1)), (1, -1, r(-1)), (1, 2, r(1)), (3, -2, r(1)), (3, 3, r(-1))],
        );
        assert_eq!(jtp_sum(ctx).unwrap(), expect);
    }

    #[test]
    fn single_product_is_one_below_its_step() {
        let ctx = EvalContext::formal(1, 2);
        let spec = ThetaProductSpec::new().num(Mono::q(3), 3);
        assert_eq!(theta_product(&spec, ctx).unwrap(), QSeries::one(ctx));
    }

    #[test]
    fn z_equal_q_kills_theta() {
        let ctx = EvalContext::new(1, 12, ZInterp::Monomial { sign: 1, qexp: 1 });
        assert!(jtp_sum(ctx).unwrap().is_zero());
    }
}
