use super::{EvalContext, Mono, QSeries, Rational};
use crate::error::{Error, Result};

/// `prefactor * Π (1 - num) / Π (1 - den)`, including infinite runs
/// `(1 - m)(1 - m q^s)(1 - m q^2s)...`.
///
/// Every factor is rewritten so that its constant term is 1 before
/// expansion: `1 - m = -m (1 - 1/m)` when `m` has a negative exponent, and
/// constant factors move into the prefactor. The expansion is then exact to
/// any requested order.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorProduct {
    prefactor: Mono,
    num: Vec<Mono>,
    den: Vec<Mono>,
    num_runs: Vec<(Mono, i64)>,
    den_runs: Vec<(Mono, i64)>,
}

impl Default for FactorProduct {
    fn default() -> Self {
        FactorProduct::new()
    }
}

/// The rewritten form: all factors carry a positive (or, for numerator
/// z-factors, zero) exponent.
struct Normalized {
    prefactor: Mono,
    num: Vec<Mono>,
    den: Vec<Mono>,
    num_runs: Vec<(Mono, i64)>,
    den_runs: Vec<(Mono, i64)>,
}

impl FactorProduct {
    pub fn new() -> Self {
        FactorProduct {
            prefactor: Mono::one(),
            num: Vec::new(),
            den: Vec::new(),
            num_runs: Vec::new(),
            den_runs: Vec::new(),
        }
    }

    pub fn monomial(m: Mono) -> Self {
        let mut p = FactorProduct::new();
        p.prefactor = m;
        p
    }

    pub fn prefactor(&self) -> &Mono {
        &self.prefactor
    }

    pub fn mul_mono(&mut self, m: &Mono) {
        self.prefactor = self.prefactor.mul(m);
    }

    pub fn scale(&mut self, c: &Rational) {
        self.prefactor.coeff = &self.prefactor.coeff * c;
    }

    /// Multiplies by `1 - m`.
    pub fn push_num(&mut self, m: Mono) {
        self.num.push(m);
    }

    /// Divides by `1 - m`.
    pub fn push_den(&mut self, m: Mono) {
        self.den.push(m);
    }

    /// Multiplies by `(m; q^step)_∞`.
    pub fn push_num_run(&mut self, m: Mono, step: i64) -> Result<()> {
        if step <= 0 {
            return Err(Error::InvalidStep(step));
        }
        self.num_runs.push((m, step));
        Ok(())
    }

    /// Divides by `(m; q^step)_∞`.
    pub fn push_den_run(&mut self, m: Mono, step: i64) -> Result<()> {
        if step <= 0 {
            return Err(Error::InvalidStep(step));
        }
        self.den_runs.push((m, step));
        Ok(())
    }

    pub fn mul(&mut self, other: &FactorProduct) {
        self.prefactor = self.prefactor.mul(&other.prefactor);
        self.num.extend(other.num.iter().cloned());
        self.den.extend(other.den.iter().cloned());
        self.num_runs.extend(other.num_runs.iter().cloned());
        self.den_runs.extend(other.den_runs.iter().cloned());
    }

    /// The reciprocal product. Errors on a zero prefactor.
    pub fn recip(&self) -> Result<FactorProduct> {
        if self.prefactor.is_zero() {
            return Err(Error::DivisionByZero("zero monomial".into()));
        }
        Ok(FactorProduct {
            prefactor: self.prefactor.recip(),
            num: self.den.clone(),
            den: self.num.clone(),
            num_runs: self.den_runs.clone(),
            den_runs: self.num_runs.clone(),
        })
    }

    pub fn is_monomial(&self) -> bool {
        self.num.is_empty() && self.den.is_empty() && self.num_runs.is_empty() && self.den_runs.is_empty()
    }

    fn normalize(&self, ctx: &EvalContext) -> Result<Normalized> {
        let z = ctx.z();
        let mut pre = self.prefactor.fold(z);
        let mut num = Vec::new();
        let mut den = Vec::new();
        let mut num_runs = Vec::new();
        let mut den_runs = Vec::new();
        for m in &self.num {
            if !absorb_num(&mut pre, &mut num, m.fold(z)) {
                return Ok(zero_product(pre));
            }
        }
        for m in &self.den {
            absorb_den(&mut pre, &mut den, m.fold(z))?;
        }
        for (m, step) in &self.num_runs {
            let mut m = m.fold(z);
            while m.qexp <= 0 {
                if !absorb_num(&mut pre, &mut num, m.clone()) {
                    return Ok(zero_product(pre));
                }
                m = m.mul(&Mono::q(*step));
            }
            num_runs.push((m, *step));
        }
        for (m, step) in &self.den_runs {
            let mut m = m.fold(z);
            while m.qexp <= 0 {
                absorb_den(&mut pre, &mut den, m.clone())?;
                m = m.mul(&Mono::q(*step));
            }
            den_runs.push((m, *step));
        }
        Ok(Normalized { prefactor: pre, num, den, num_runs, den_runs })
    }

    /// Exact leading q-exponent, or `None` when the product vanishes.
    pub fn lead_exponent(&self, ctx: &EvalContext) -> Result<Option<i64>> {
        let n = self.normalize(ctx)?;
        Ok(if n.prefactor.is_zero() { None } else { Some(n.prefactor.qexp) })
    }

    /// Expands the product, exact through `ctx.order()`.
    pub fn eval(&self, ctx: EvalContext) -> Result<QSeries> {
        let n = self.normalize(&ctx)?;
        if n.prefactor.is_zero() {
            return Ok(QSeries::zero(ctx));
        }
        let inner = ctx.with_order(ctx.order() - n.prefactor.qexp);
        let body = n.expand(QSeries::one(inner))?;
        Ok(body.mul_mono_into(&n.prefactor, ctx))
    }

    /// `s * self`, exact through `target` provided `s` is exact through
    /// `target - lead`, where `lead` is this product's leading exponent.
    pub fn apply_to(&self, s: &QSeries, target: i64) -> Result<QSeries> {
        let out_ctx = s.ctx().with_order(target);
        let n = self.normalize(s.ctx())?;
        if n.prefactor.is_zero() || s.is_zero() {
            return Ok(QSeries::zero(out_ctx));
        }
        let need = target - n.prefactor.qexp;
        let base = s.truncate(need)?;
        let body = n.expand(base)?;
        Ok(body.mul_mono_into(&n.prefactor, out_ctx))
    }
}

impl Normalized {
    fn expand(&self, mut acc: QSeries) -> Result<QSeries> {
        let order = acc.order();
        if order < 0 {
            return Ok(acc);
        }
        for m in &self.num {
            if m.qexp <= order {
                acc = acc.mul_one_minus(m)?;
            }
        }
        for (start, step) in &self.num_runs {
            let mut m = start.clone();
            while m.qexp <= order {
                acc = acc.mul_one_minus(&m)?;
                m = m.mul(&Mono::q(*step));
            }
        }
        for m in &self.den {
            if m.qexp <= order {
                acc = acc.div_one_minus(m)?;
            }
        }
        for (start, step) in &self.den_runs {
            let mut m = start.clone();
            while m.qexp <= order {
                acc = acc.div_one_minus(&m)?;
                m = m.mul(&Mono::q(*step));
            }
        }
        Ok(acc)
    }
}

fn zero_product(pre: Mono) -> Normalized {
    Normalized {
        prefactor: Mono::new(Rational::zero(), 0, pre.qexp),
        num: Vec::new(),
        den: Vec::new(),
        num_runs: Vec::new(),
        den_runs: Vec::new(),
    }
}

/// Returns false when the factor is identically zero.
fn absorb_num(pre: &mut Mono, num: &mut Vec<Mono>, m: Mono) -> bool {
    if m.is_zero() {
        return true;
    }
    if m.qexp < 0 {
        *pre = pre.mul(&Mono::new(-&m.coeff, m.zexp, m.qexp));
        num.push(m.recip());
    } else if m.qexp == 0 && m.zexp == 0 {
        let c = &Rational::one() - &m.coeff;
        if c.is_zero() {
            return false;
        }
        pre.coeff = &pre.coeff * &c;
    } else {
        num.push(m);
    }
    true
}

fn absorb_den(pre: &mut Mono, den: &mut Vec<Mono>, m: Mono) -> Result<()> {
    if m.is_zero() {
        return Ok(());
    }
    if m.qexp < 0 {
        let inv = m.recip();
        *pre = pre.mul(&Mono::new(-&inv.coeff, inv.zexp, inv.qexp));
        den.push(inv);
    } else if m.qexp == 0 {
        if m.zexp != 0 {
            return Err(Error::NonMonomialLeading { q_exp: 0 });
        }
        let c = &Rational::one() - &m.coeff;
        let inv = c.recip().ok_or_else(|| Error::DivisionByZero("factor (1 - 1) in a denominator".into()))?;
        pre.coeff = &pre.coeff * &inv;
    } else {
        den.push(m);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn negative_exponent_factor_is_rewritten() {
        // (1 - q^-1)(1 - q) = -q^-1 (1 - q)^2
        let ctx = EvalContext::formal(1, 4);
        let mut p = FactorProduct::new();
        p.push_num(Mono::q(-1));
        p.push_num(Mono::q(1));
        let got = p.eval(ctx).unwrap();
        assert_eq!(got, QSeries::from_terms(ctx, [(-1, 0, r(-1)), (0, 0, r(2)), (1, 0, r(-1))]));
        assert_eq!(p.lead_exponent(&ctx).unwrap(), Some(-1));
    }

    #[test]
    fn zero_and_constant_factors() {
        let ctx = EvalContext::formal(1, 4);
        let mut p = FactorProduct::new();
        p.push_num(Mono::one());
        assert!(p.eval(ctx).unwrap().is_zero());
        let mut h = FactorProduct::new();
        h.push_den(Mono::signed_q(-1, 0));
        assert_eq!(h.eval(ctx).unwrap(), QSeries::constant(ctx, Rational::new(1, 2)));
        let mut bad = FactorProduct::new();
        bad.push_den(Mono::one());
        assert!(matches!(bad.eval(ctx), Err(Error::DivisionByZero(_))));
        let mut zden = FactorProduct::new();
        zden.push_den(Mono::new(r(1), 1, 0));
        assert_eq!(zden.eval(ctx), Err(Error::NonMonomialLeading { q_exp: 0 }));
    }

    #[test]
    fn runs_with_nonpositive_start() {
        // (q^-1; q)_inf = (1 - q^-1)(1 - 1)... = 0
        let ctx = EvalContext::formal(1, 6);
        let mut p = FactorProduct::new();
        p.push_num_run(Mono::q(-1), 1).unwrap();
        assert!(p.eval(ctx).unwrap().is_zero());
        assert_eq!(p.push_num_run(Mono::q(1), 0), Err(Error::InvalidStep(0)));
    }

    #[test]
    fn apply_to_matches_eval_then_mul() {
        let ctx = EvalContext::formal(1, 10);
        let s = QSeries::from_terms(ctx, [(0, 1, r(1)), (2, 0, r(3)), (5, -1, r(-2))]);
        let mut p = FactorProduct::monomial(Mono::q(-2));
        p.push_num(Mono::new(r(1), 1, 1));
        p.push_den_run(Mono::q(1), 1).unwrap();
        let direct = {
            let big = ctx.with_order(12);
            let sb = QSeries::from_terms(big, s.iter().map(|(q, z, c)| (q, z, c.clone())));
            let pb = p.eval(big).unwrap();
            sb.mul(&pb).unwrap().truncate(10).unwrap()
        };
        let wide = QSeries::from_terms(ctx.with_order(12), s.iter().map(|(q, z, c)| (q, z, c.clone())));
        assert_eq!(p.apply_to(&wide, 10).unwrap(), direct);
    }
}
