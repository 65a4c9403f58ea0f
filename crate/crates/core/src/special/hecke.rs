use super::form::QuadForm;
use crate::engine::sums::index_cap;
use crate::error::{Error, Result};
use crate::series::{EvalContext, FactorProduct, Mono, QSeries};

/// Summation region of the inner index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeckeRegion {
    /// `|j| <= n`
    Full,
    /// `|j| <= floor(n/2)`
    Half,
}

impl HeckeRegion {
    pub fn width(self, n: i64) -> i64 {
        match self {
            HeckeRegion::Full => n,
            HeckeRegion::Half => n / 2,
        }
    }
}

/// `Σ_{n>=0} Σ_{(n,j) in region} (-1)^{H(n,j)} z^{kj} q^{e(n,j)} / (1 - m q^{cj})`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeSpec {
    pub exponent: QuadForm,
    /// `H(n, j) = sign.0·n + sign.1·j`
    pub sign: (i64, i64),
    pub z_power: i64,
    pub region: HeckeRegion,
    pub inner_den: Option<(Mono, i64)>,
}

impl HeckeSpec {
    fn term(&self, n: i64, j: i64) -> Result<FactorProduct> {
        let h = self.sign.0 * n + self.sign.1 * j;
        let sign = if h.rem_euclid(2) == 0 { 1 } else { -1 };
        let mut f = FactorProduct::monomial(Mono::new(sign.into(), self.z_power * j, self.exponent.at(n, j)?));
        if let Some((m, c)) = &self.inner_den {
            f.push_den(m.mul(&Mono::q(c * j)));
        }
        Ok(f)
    }
}

pub fn hecke_sum(spec: &HeckeSpec, ctx: EvalContext) -> Result<QSeries> {
    hecke_products(ctx, spec.region, |n, j| spec.term(n, j))
}

/// `Σ_{n>=0} Σ_{j in region} term(n, j)`, stopping once the minimal leading
/// exponent over the region stays above the order; that minimum must be
/// non-decreasing from `n = 2` on.
pub(crate) fn hecke_products<T>(ctx: EvalContext, region: HeckeRegion, term: T) -> Result<QSeries>
where
    T: Fn(i64, i64) -> Result<FactorProduct>,
{
    let order = ctx.order();
    let cap = index_cap(order);
    let mut acc = QSeries::zero(ctx);
    let mut prev_min = i64::MIN;
    let mut clear = 0;
    for n in 0..=cap {
        let w = region.width(n);
        let mut terms = Vec::with_capacity((2 * w + 1) as usize);
        let mut min = i64::MAX;
        for j in -w..=w {
            let f = term(n, j)?;
            let lead = f.lead_exponent(&ctx).map_err(|e| match e {
                Error::DivisionByZero(_) => Error::Pole(j),
                e => e,
            })?;
            if let Some(l) = lead {
                min = min.min(l);
                terms.push((f, l));
            }
        }
        if n >= 2 && min < prev_min {
            return Err(Error::UncertifiedTermination(format!(
                "minimal exponent over the region fell from {prev_min} to {min} at n = {n}"
            )));
        }
        prev_min = min;
        if min > order {
            clear += 1;
            if clear >= 3 {
                return Ok(acc);
            }
            continue;
        }
        clear = 0;
        for (f, l) in terms {
            if l <= order {
                acc.add_assign_unchecked(&f.eval(ctx)?);
            }
        }
    }
    Err(Error::UncertifiedTermination(format!("outer index passed the cap {cap}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Rational, ZInterp};

    /// `Σ_n Σ_{|j|<=n} (-1)^j z^j q^{n(n+1)-j}`
    fn first_kind() -> HeckeSpec {
        HeckeSpec {
            exponent: QuadForm { nn: 1, n1: 1, jj: 0, j1: -1, nj: 0, c: 0, den: 1 },
            sign: (0, 1),
            z_power: 1,
            region: HeckeRegion::Full,
            inner_den: None,
        }
    }

    #[test]
    fn odd_weights_at_minus_q() {
        let ctx = EvalContext::new(1, 13, ZInterp::Monomial { sign: -1, qexp: 1 });
        let s = hecke_sum(&first_kind(), ctx).unwrap();
        let r = |k| Rational::from_int(k);
        assert_eq!(s, QSeries::from_terms(ctx, [(0, 0, r(1)), (2, 0, r(3)), (6, 0, r(5)), (12, 0, r(7))]));
    }

    #[test]
    fn first_term_is_one() {
        let ctx = EvalContext::formal(1, 0);
        let mut spec = first_kind();
        spec.region = HeckeRegion::Half;
        assert_eq!(hecke_sum(&spec, ctx).unwrap(), QSeries::one(ctx));
    }

    #[test]
    fn decreasing_region_trips_guard() {
        let mut spec = first_kind();
        spec.exponent = QuadForm { nn: 0, n1: 0, jj: 0, j1: 1, nj: 0, c: 0, den: 1 };
        assert!(matches!(hecke_sum(&spec, EvalContext::formal(1, 5)), Err(Error::UncertifiedTermination(_))));
    }
}
