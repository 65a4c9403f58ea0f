use super::{EvalContext, FactorProduct, Mono, QSeries, Rational};
use crate::error::{Error, Result};

/// Factors of `(base; q^step)_n` for any integer `n`; negative lengths give
/// the reciprocal product `1 / (base q^(n*step); q^step)_(-n)`.
pub fn poch_factors(base: &Mono, step: i64, n: i64) -> FactorProduct {
    let mut p = FactorProduct::new();
    if n >= 0 {
        for k in 0..n {
            p.push_num(base.mul(&Mono::q(k * step)));
        }
    } else {
        for k in n..0 {
            p.push_den(base.mul(&Mono::q(k * step)));
        }
    }
    p
}

/// `(base; q^step)_n = Π_{k<n} (1 - base q^(k*step))`; `n = 0` gives 1.
pub fn poch_finite(ctx: EvalContext, base: &Mono, step: i64, n: i64) -> Result<QSeries> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("finite pochhammer length {n} is negative")));
    }
    poch_factors(base, step, n).eval(ctx)
}

/// Pochhammer symbol extended to negative lengths.
pub fn poch_signed(ctx: EvalContext, base: &Mono, step: i64, n: i64) -> Result<QSeries> {
    poch_factors(base, step, n).eval(ctx)
}

/// `(base; q^step)_∞` truncated at the context order.
///
/// Finitely many factors may have exponent `<= 0`; they are expanded
/// exactly (a factor equal to `1 - 1` makes the product vanish).
pub fn poch_infinite(ctx: EvalContext, base: &Mono, step: i64) -> Result<QSeries> {
    let mut p = FactorProduct::new();
    p.push_num_run(base.clone(), step)?;
    p.eval(ctx)
}

/// Gaussian binomial `[n, k]` in the variable `q^(unit/scale)`.
///
/// Zero outside `0 <= k <= n`; errors for `n < 0`.
pub fn qbinomial_in(ctx: EvalContext, n: i64, k: i64, unit: i64) -> Result<QSeries> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("q-binomial top {n} is negative")));
    }
    if unit < 1 {
        return Err(Error::InvalidStep(unit));
    }
    if k < 0 || k > n {
        return Ok(QSeries::zero(ctx));
    }
    let coeffs = gaussian_coeffs(n as usize, k as usize);
    Ok(QSeries::from_terms(ctx, coeffs.into_iter().enumerate().map(|(e, c)| (e as i64 * unit, 0, c))))
}

/// Gaussian binomial `[n, k]` in `q`.
pub fn qbinomial(ctx: EvalContext, n: i64, k: i64) -> Result<QSeries> {
    qbinomial_in(ctx, n, k, ctx.scale())
}

/// Coefficients of `[n, k]` via `[n, k] = [n-1, k-1] + q^k [n-1, k]`.
fn gaussian_coeffs(n: usize, k: usize) -> Vec<Rational> {
    // row[j] holds [m, j] for the current m
    let mut row: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for m in 1..=n {
        let mut next: Vec<Vec<Rational>> = Vec::with_capacity(m.min(k) + 1);
        for j in 0..=m.min(k) {
            let deg = j * (m - j);
            let mut c = vec![Rational::zero(); deg + 1];
            if j >= 1 {
                for (e, v) in row[j - 1].iter().enumerate() {
                    c[e] += v;
                }
            }
            if j < m && j < row.len() {
                for (e, v) in row[j].iter().enumerate() {
                    c[e + j] += v;
                }
            }
            next.push(c);
        }
        row = next;
    }
    row.swap_remove(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn qbinomial_examples() {
        let ctx = EvalContext::formal(1, 20);
        let b = qbinomial(ctx, 4, 2).unwrap();
        let want = QSeries::from_terms(ctx, [(0, 0, r(1)), (1, 0, r(1)), (2, 0, r(2)), (3, 0, r(1)), (4, 0, r(1))]);
        assert_eq!(b, want);
        assert_eq!(qbinomial(ctx, 7, 0).unwrap(), QSeries::one(ctx));
        assert!(qbinomial(ctx, 2, 3).unwrap().is_zero());
        assert!(qbinomial(ctx, -1, 0).is_err());
    }

    #[test]
    fn qbinomial_is_pochhammer_ratio() {
        let ctx = EvalContext::formal(1, 20);
        let q = Mono::q(1);
        let num = poch_finite(ctx, &q, 1, 4).unwrap();
        let den = poch_finite(ctx, &q, 1, 2).unwrap();
        let ratio = num.mul(&den.invert().unwrap()).unwrap().mul(&den.invert().unwrap()).unwrap();
        assert_eq!(ratio, qbinomial(ctx, 4, 2).unwrap());
    }

    #[test]
    fn finite_examples() {
        let ctx = EvalContext::formal(1, 10);
        let z = Mono::new(r(1), 1, 0);
        let qz = Mono::new(r(1), -1, 1);
        let p = poch_finite(ctx, &z, 1, 1).unwrap().mul(&poch_finite(ctx, &qz, 1, 1).unwrap()).unwrap();
        let want = QSeries::from_terms(ctx, [(0, 0, r(1)), (1, 0, r(1)), (0, 1, r(-1)), (1, -1, r(-1))]);
        assert_eq!(p, want);
        assert!(poch_finite(ctx, &Mono::one(), 1, 2).unwrap().is_zero());
        assert_eq!(poch_finite(ctx, &Mono::one(), 1, 0).unwrap(), QSeries::one(ctx));
    }

    #[test]
    fn negative_length_is_reciprocal() {
        // (a;q)_{-1} = 1/(1 - a/q)
        let ctx = EvalContext::formal(1, 8);
        let a = Mono::q(3);
        let got = poch_signed(ctx, &a, 1, -1).unwrap();
        let want = QSeries::one(ctx).div_one_minus(&Mono::q(2)).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn euler_pentagonal() {
        let ctx = EvalContext::formal(1, 5);
        let e = poch_infinite(ctx, &Mono::q(1), 1).unwrap();
        let want = QSeries::from_terms(ctx, [(0, 0, r(1)), (1, 0, r(-1)), (2, 0, r(-1)), (5, 0, r(1))]);
        assert_eq!(e, want);
        let small = EvalContext::formal(1, 2);
        assert_eq!(poch_infinite(small, &Mono::q(3), 3).unwrap(), QSeries::one(small));
        assert_eq!(poch_infinite(ctx, &Mono::q(1), 0), Err(Error::InvalidStep(0)));
    }

    #[test]
    fn partitions_from_inverse() {
        let ctx = EvalContext::formal(1, 5);
        let inv = poch_infinite(ctx, &Mono::q(1), 1).unwrap().invert().unwrap();
        let p: Vec<Rational> = (0..=5).map(|k| inv.coeff(k, 0)).collect();
        assert_eq!(p, [1, 1, 2, 3, 5, 7].map(r).to_vec());
        let wide = EvalContext::formal(1, 4);
        let d = inv.truncate(2).unwrap().dilate(2, wide).unwrap();
        assert_eq!(d, QSeries::from_terms(wide, [(0, 0, r(1)), (2, 0, r(1)), (4, 0, r(2))]));
    }
}
