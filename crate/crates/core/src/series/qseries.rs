use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use super::{EvalContext, Mono, Rational, ZInterp};
use crate::error::{Error, Result};

/// Laurent polynomial in `z` with exact coefficients. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZLaurent {
    coeffs: BTreeMap<i64, Rational>,
}

impl ZLaurent {
    pub fn new() -> Self {
        ZLaurent::default()
    }

    pub fn monomial(c: Rational, zexp: i64) -> Self {
        let mut l = ZLaurent::new();
        l.add_term(zexp, &c);
        l
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn get(&self, zexp: i64) -> Rational {
        self.coeffs.get(&zexp).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn add_term(&mut self, zexp: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&zexp) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.coeffs.remove(&zexp);
                }
            }
            None => {
                self.coeffs.insert(zexp, c.clone());
            }
        }
    }

    /// `self += c * z^shift * other`.
    pub fn add_scaled(&mut self, other: &ZLaurent, c: &Rational, shift: i64) {
        for (z, v) in &other.coeffs {
            self.add_term(z + shift, &(v * c));
        }
    }

    pub fn mul(&self, other: &ZLaurent) -> ZLaurent {
        let mut out = ZLaurent::new();
        for (za, ca) in &self.coeffs {
            out.add_scaled(other, ca, *za);
        }
        out
    }

    /// The single `(zexp, coeff)` entry, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(i64, &Rational)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(k, v)| (*k, v))
        } else {
            None
        }
    }

    pub fn z_range(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }
}

/// A first coefficient at which two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub q_exp: i64,
    pub z_exp: i64,
    pub lhs: Rational,
    pub rhs: Rational,
}

fn max_terms() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("BAILEY_FORGE_MAX_TERMS").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(20_000_000)
    })
}

/// Truncated bivariate series: q-exponents in units of `1/scale`, each carrying
/// a Laurent polynomial in `z`. Every stored exponent is `<= ctx.order()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    ctx: EvalContext,
    terms: BTreeMap<i64, ZLaurent>,
}

impl QSeries {
    pub fn zero(ctx: EvalContext) -> Self {
        QSeries { ctx, terms: BTreeMap::new() }
    }

    pub fn one(ctx: EvalContext) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: EvalContext, c: Rational) -> Self {
        Self::monomial(ctx, c, 0, 0)
    }

    /// `c * z^zexp * q^(qexp/scale)`, truncated; z is folded under a monomial reading.
    pub fn monomial(ctx: EvalContext, c: Rational, zexp: i64, qexp: i64) -> Self {
        Self::from_mono(ctx, &Mono::new(c, zexp, qexp))
    }

    pub fn from_mono(ctx: EvalContext, m: &Mono) -> Self {
        let m = m.fold(ctx.z());
        let mut s = QSeries::zero(ctx);
        if !m.coeff.is_zero() && m.qexp <= ctx.order() {
            s.terms.insert(m.qexp, ZLaurent::monomial(m.coeff, m.zexp));
        }
        s
    }

    /// Builds a series from `(qexp, zexp, coeff)` triples; entries are summed,
    /// folded under the context's z reading and truncated.
    pub fn from_terms<I>(ctx: EvalContext, items: I) -> Self
    where
        I: IntoIterator<Item = (i64, i64, Rational)>,
    {
        let mut s = QSeries::zero(ctx);
        for (q, z, c) in items {
            let m = Mono::new(c, z, q).fold(ctx.z());
            s.add_term(m.qexp, m.zexp, &m.coeff);
        }
        s
    }

    pub fn ctx(&self) -> &EvalContext {
        &self.ctx
    }

    pub fn order(&self) -> i64 {
        self.ctx.order()
    }

    pub fn terms(&self) -> &BTreeMap<i64, ZLaurent> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_q_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_q_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, qexp: i64, zexp: i64) -> Rational {
        self.terms.get(&qexp).map(|l| l.get(zexp)).unwrap_or_default()
    }

    pub fn at_q(&self, qexp: i64) -> Option<&ZLaurent> {
        self.terms.get(&qexp)
    }

    /// Number of stored coefficients.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.values().map(ZLaurent::len).sum()
    }

    /// `(qexp, zexp, coeff)` in ascending q then z order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, &Rational)> {
        self.terms.iter().flat_map(|(q, l)| l.iter().map(move |(z, c)| (*q, z, c)))
    }

    /// Largest |z-exponent| present.
    pub fn max_abs_z(&self) -> i64 {
        self.terms.values().filter_map(ZLaurent::z_range).map(|(lo, hi)| lo.abs().max(hi.abs())).max().unwrap_or(0)
    }

    fn add_term(&mut self, qexp: i64, zexp: i64, c: &Rational) {
        if c.is_zero() || qexp > self.ctx.order() {
            return;
        }
        let entry = self.terms.entry(qexp).or_default();
        entry.add_term(zexp, c);
        if entry.is_zero() {
            self.terms.remove(&qexp);
        }
    }

    fn add_laurent(&mut self, qexp: i64, l: &ZLaurent, c: &Rational, zshift: i64) {
        if qexp > self.ctx.order() || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(qexp).or_default();
        entry.add_scaled(l, c, zshift);
        if entry.is_zero() {
            self.terms.remove(&qexp);
        }
    }

    fn check_same(&self, other: &QSeries) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    fn guard(&self) -> Result<()> {
        let n = self.len();
        if n > max_terms() {
            return Err(Error::ResourceCap(format!(
                "series holds {n} coefficients (BAILEY_FORGE_MAX_TERMS = {})",
                max_terms()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_scaled_unchecked(other, &Rational::from_int(-1));
        Ok(out)
    }

    pub fn neg(&self) -> QSeries {
        self.scale(&Rational::from_int(-1))
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        if c.is_zero() {
            return QSeries::zero(self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(q, l)| {
                let mut out = ZLaurent::new();
                out.add_scaled(l, c, 0);
                (*q, out)
            })
            .collect();
        QSeries { ctx: self.ctx, terms }
    }

    /// In-place `self += other`; the caller guarantees matching contexts.
    pub fn add_assign_unchecked(&mut self, other: &QSeries) {
        self.add_scaled_unchecked(other, &Rational::one());
    }

    /// In-place `self += c * other` for series in the same frame; terms of
    /// `other` beyond `self`'s order are dropped.
    pub fn add_scaled_unchecked(&mut self, other: &QSeries, c: &Rational) {
        debug_assert!(self.ctx.same_frame(&other.ctx));
        for (q, l) in &other.terms {
            self.add_laurent(*q, l, c, 0);
        }
    }

    /// Cauchy product; exponents above the order are discarded.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.check_same(other)?;
        let mut out = QSeries::zero(self.ctx);
        let order = self.ctx.order();
        for (qa, la) in &self.terms {
            for (qb, lb) in &other.terms {
                if qa + qb > order {
                    break;
                }
                let prod = la.mul(lb);
                let entry = out.terms.entry(qa + qb).or_default();
                entry.add_scaled(&prod, &Rational::one(), 0);
                if entry.is_zero() {
                    out.terms.remove(&(qa + qb));
                }
            }
        }
        out.guard()?;
        Ok(out)
    }

    /// `self * m`. Shifting down by a negative exponent leaves the top of the
    /// window inexact; callers account for that in their order budget.
    pub fn mul_mono(&self, m: &Mono) -> QSeries {
        let m = m.fold(self.ctx.z());
        if m.coeff.is_zero() {
            return QSeries::zero(self.ctx);
        }
        let mut out = QSeries::zero(self.ctx);
        for (q, l) in &self.terms {
            let e = q + m.qexp;
            if e > self.ctx.order() {
                break;
            }
            let mut nl = ZLaurent::new();
            nl.add_scaled(l, &m.coeff, m.zexp);
            out.terms.insert(e, nl);
        }
        out
    }

    /// `self * m`, relabelled into `target` (same frame, any order).
    pub fn mul_mono_into(&self, m: &Mono, target: EvalContext) -> QSeries {
        debug_assert!(self.ctx.same_frame(&target));
        let widened = QSeries { ctx: target.with_order(i64::MAX / 4), terms: self.terms.clone() };
        let mut out = widened.mul_mono(m);
        out.ctx = target;
        out.terms.retain(|q, _| *q <= target.order());
        out
    }

    /// `self * (1 - m)` with the folded exponent of `m` non-negative.
    pub fn mul_one_minus(&self, m: &Mono) -> Result<QSeries> {
        let m = m.fold(self.ctx.z());
        if m.qexp < 0 {
            return Err(Error::InvalidArgument(format!("factor exponent {} must be non-negative", m.qexp)));
        }
        let mut out = self.clone();
        let neg = -&m.coeff;
        for (q, l) in &self.terms {
            let e = q + m.qexp;
            if e > self.ctx.order() {
                break;
            }
            out.add_laurent(e, l, &neg, m.zexp);
        }
        out.guard()?;
        Ok(out)
    }

    /// `self / (1 - m)`. The folded exponent must be positive, or zero with no
    /// z-dependence and `m != 1` (a constant factor).
    pub fn div_one_minus(&self, m: &Mono) -> Result<QSeries> {
        let m = m.fold(self.ctx.z());
        if m.qexp == 0 {
            if m.zexp != 0 {
                return Err(Error::NonMonomialLeading { q_exp: 0 });
            }
            let d = &Rational::one() - &m.coeff;
            let inv = d.recip().ok_or_else(|| Error::DivisionByZero("factor (1 - 1)".into()))?;
            return Ok(self.scale(&inv));
        }
        if m.qexp < 0 {
            return Err(Error::InvalidArgument(format!("divisor exponent {} must be positive", m.qexp)));
        }
        let Some(start) = self.min_q_exp() else {
            return Ok(self.clone());
        };
        let order = self.ctx.order();
        let mut out = QSeries::zero(self.ctx);
        let mut e = start;
        while e <= order {
            let mut acc = self.terms.get(&e).cloned().unwrap_or_default();
            if let Some(prev) = out.terms.get(&(e - m.qexp)) {
                acc.add_scaled(prev, &m.coeff, m.zexp);
            }
            if !acc.is_zero() {
                out.terms.insert(e, acc);
            }
            e += 1;
        }
        out.guard()?;
        Ok(out)
    }

    /// Multiplicative inverse, exact through the same order.
    ///
    /// Requires a single-monomial leading coefficient. A positive leading
    /// exponent `L` costs `2L` of exactness, so it is rejected unless the input
    /// is itself a monomial; see [`QSeries::invert_to`].
    pub fn invert(&self) -> Result<QSeries> {
        self.invert_to(self.order())
    }

    /// Inverse exact through `target`, which may be at most `order - 2L` for
    /// leading exponent `L` (monomials invert exactly to any target).
    pub fn invert_to(&self, target: i64) -> Result<QSeries> {
        let lead_q = self.min_q_exp().ok_or(Error::ZeroSeries)?;
        let lead = &self.terms[&lead_q];
        let (lead_z, lead_c) = lead.as_monomial().ok_or(Error::NonMonomialLeading { q_exp: lead_q })?;
        let inv_c = lead_c.recip().expect("nonzero");
        let out_ctx = self.ctx.with_order(target);
        if self.terms.len() == 1 && lead.len() == 1 {
            return Ok(QSeries::monomial(out_ctx, inv_c, -lead_z, -lead_q));
        }
        let limit = self.order() - 2 * lead_q;
        if target > limit {
            return Err(Error::OrderTooLarge { target, limit });
        }
        // u = self / (c z^e q^L) has constant term 1 and is known through order - L
        let span = target + lead_q;
        let u: BTreeMap<i64, ZLaurent> = self
            .terms
            .range(..=lead_q + span)
            .map(|(q, l)| {
                let mut nl = ZLaurent::new();
                nl.add_scaled(l, &inv_c, -lead_z);
                (q - lead_q, nl)
            })
            .collect();
        let mut v: BTreeMap<i64, ZLaurent> = BTreeMap::new();
        v.insert(0, ZLaurent::monomial(Rational::one(), 0));
        let minus_one = Rational::from_int(-1);
        for k in 1..=span {
            let mut acc = ZLaurent::new();
            for (i, ui) in u.range(1..=k) {
                if let Some(vk) = v.get(&(k - i)) {
                    acc.add_scaled(&ui.mul(vk), &minus_one, 0);
                }
            }
            if !acc.is_zero() {
                v.insert(k, acc);
            }
        }
        let mut out = QSeries::zero(out_ctx);
        for (k, l) in v {
            out.add_laurent(k - lead_q, &l, &inv_c, -lead_z);
        }
        out.guard()?;
        Ok(out)
    }

    /// Drops everything above `order`; `order` may not exceed the current one.
    pub fn truncate(&self, order: i64) -> Result<QSeries> {
        if order > self.order() {
            return Err(Error::OrderTooLarge { target: order, limit: self.order() });
        }
        let mut out = self.clone();
        out.ctx = self.ctx.with_order(order);
        out.terms.retain(|q, _| *q <= order);
        Ok(out)
    }

    /// Moves the series into another context of the same frame, keeping
    /// coefficients up to `target.order()`; errors if that exceeds what this
    /// series knows.
    pub fn into_ctx(&self, target: EvalContext) -> Result<QSeries> {
        if !self.ctx.same_frame(&target) {
            return Err(Error::ContextMismatch);
        }
        let mut s = self.truncate(target.order())?;
        s.ctx = target;
        Ok(s)
    }

    /// Compares every coefficient up to the common order. Returns the first
    /// mismatch in ascending (q, z) order, or `None` when they agree.
    pub fn equal_up_to(&self, other: &QSeries) -> Result<Option<Mismatch>> {
        self.check_same(other)?;
        Ok(first_mismatch(self, other))
    }

    /// `q -> q^m`: every exponent multiplied by `m`, relabelled into `target`.
    pub fn dilate(&self, m: i64, target: EvalContext) -> Result<QSeries> {
        if m < 1 {
            return Err(Error::InvalidArgument(format!("dilation factor {m} must be positive")));
        }
        if target.scale() != self.ctx.scale() {
            return Err(Error::ContextMismatch);
        }
        let z_ok = match (self.ctx.z(), target.z()) {
            (ZInterp::Formal, ZInterp::Formal) => true,
            (ZInterp::Monomial { sign: s1, qexp: a1 }, ZInterp::Monomial { sign: s2, qexp: a2 }) => {
                s1 == s2 && a2 == m * a1
            }
            _ => false,
        };
        if !z_ok {
            return Err(Error::ContextMismatch);
        }
        let limit = m.saturating_mul(self.order());
        if target.order() > limit {
            return Err(Error::OrderTooLarge { target: target.order(), limit });
        }
        let mut out = QSeries::zero(target);
        for (q, l) in &self.terms {
            let e = q * m;
            if e > target.order() {
                break;
            }
            out.terms.insert(e, l.clone());
        }
        Ok(out)
    }

    /// Debug rendering: one `q^{e/d} : [zexp -> num/den, ...]` line per exponent.
    pub fn render(&self) -> String {
        let d = self.ctx.scale();
        let mut s = String::new();
        for (q, l) in &self.terms {
            let entries: Vec<String> = l.iter().map(|(z, c)| format!("{z} -> {c}")).collect();
            let _ = writeln!(s, "q^{{{q}/{d}}} : [{}]", entries.join(", "));
        }
        s
    }
}

fn first_mismatch(a: &QSeries, b: &QSeries) -> Option<Mismatch> {
    let order = a.order().min(b.order());
    let mut qs: Vec<i64> = a.terms.keys().chain(b.terms.keys()).copied().filter(|q| *q <= order).collect();
    qs.sort_unstable();
    qs.dedup();
    let empty = ZLaurent::new();
    for q in qs {
        let la = a.terms.get(&q).unwrap_or(&empty);
        let lb = b.terms.get(&q).unwrap_or(&empty);
        if la == lb {
            continue;
        }
        let mut zs: Vec<i64> = la.iter().map(|(z, _)| z).chain(lb.iter().map(|(z, _)| z)).collect();
        zs.sort_unstable();
        zs.dedup();
        for z in zs {
            let (ca, cb) = (la.get(z), lb.get(z));
            if ca != cb {
                return Some(Mismatch { q_exp: q, z_exp: z, lhs: ca, rhs: cb });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: i64) -> EvalContext {
        EvalContext::formal(1, n)
    }

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn monomial_examples() {
        let c = ctx(10);
        let one = QSeries::monomial(c, r(1), 0, 0);
        assert_eq!(one, QSeries::one(c));
        let m = QSeries::monomial(c, r(-1), -1, 1);
        assert_eq!(m.coeff(1, -1), r(-1));
        let folded = EvalContext::new(1, 5, ZInterp::Monomial { sign: 1, qexp: 2 });
        assert!(QSeries::monomial(folded, r(1), 3, 0).is_zero());
        let kept = QSeries::monomial(folded.with_order(6), r(1), 3, 0);
        assert_eq!(kept.coeff(6, 0), r(1));
    }

    #[test]
    fn add_cancels_and_doubles() {
        let c = ctx(10);
        let a = QSeries::from_terms(c, [(0, 0, r(1)), (0, 1, r(-1))]);
        let b = QSeries::from_terms(c, [(0, 1, r(1)), (1, 0, r(-1))]);
        assert_eq!(a.add(&b).unwrap(), QSeries::from_terms(c, [(0, 0, r(1)), (1, 0, r(-1))]));
        let s = QSeries::from_terms(c, [(0, 0, r(1)), (1, 0, r(1))]);
        assert_eq!(s.add(&QSeries::zero(c)).unwrap(), s);
        assert_eq!(s.add(&s).unwrap(), QSeries::from_terms(c, [(0, 0, r(2)), (1, 0, r(2))]));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = QSeries::one(ctx(3));
        let b = QSeries::one(ctx(4));
        assert_eq!(a.add(&b), Err(Error::ContextMismatch));
        assert_eq!(a.mul(&b), Err(Error::ContextMismatch));
    }

    #[test]
    fn mul_expands_small_product() {
        let c = ctx(10);
        let a = QSeries::from_terms(c, [(0, 0, r(1)), (0, 1, r(-1))]);
        let b = QSeries::from_terms(c, [(0, 0, r(1)), (1, -1, r(-1))]);
        let p = a.mul(&b).unwrap();
        let want = QSeries::from_terms(c, [(0, 0, r(1)), (1, 0, r(1)), (0, 1, r(-1)), (1, -1, r(-1))]);
        assert_eq!(p, want);
        assert_eq!(p.mul(&QSeries::one(c)).unwrap(), p);
    }

    #[test]
    fn geometric_series_times_one_minus_q() {
        let c = ctx(12);
        let geo = QSeries::from_terms(c, (0..=12).map(|k| (k, 0, r(1))));
        let prod = geo.mul_one_minus(&Mono::q(1)).unwrap();
        assert_eq!(prod, QSeries::one(c));
    }

    #[test]
    fn invert_examples() {
        let c = ctx(8);
        let s = QSeries::from_terms(c, [(0, 0, r(1)), (1, 0, r(1))]);
        let inv = s.invert().unwrap();
        for k in 0..=8 {
            assert_eq!(inv.coeff(k, 0), r(if k % 2 == 0 { 1 } else { -1 }));
        }
        let t = QSeries::from_terms(c, [(0, 0, r(1)), (1, 1, r(-1))]);
        let inv = t.invert().unwrap();
        for k in 0..=8 {
            assert_eq!(inv.coeff(k, k), r(1));
        }
        assert_eq!(QSeries::zero(c).invert(), Err(Error::ZeroSeries));
        let bad = QSeries::from_terms(c, [(0, 0, r(1)), (0, 1, r(1))]);
        assert_eq!(bad.invert(), Err(Error::NonMonomialLeading { q_exp: 0 }));
    }

    #[test]
    fn invert_negative_leading_exponent() {
        // 1 / (q^-2 + 1) = q^2 / (1 + q^2)
        let c = ctx(9);
        let s = QSeries::from_terms(c, [(-2, 0, r(1)), (0, 0, r(1))]);
        let inv = s.invert().unwrap();
        let want = QSeries::from_terms(c, [(2, 0, r(1)), (4, 0, r(-1)), (6, 0, r(1)), (8, 0, r(-1))]);
        assert_eq!(inv, want);
    }

    #[test]
    fn div_one_minus_matches_invert() {
        let c = ctx(15);
        let s = QSeries::from_terms(c, [(0, 0, r(2)), (3, 1, r(-1)), (4, -2, r(5))]);
        let m = Mono::new(r(3), 1, 2);
        let d1 = s.div_one_minus(&m).unwrap();
        let den = QSeries::one(c).mul_one_minus(&m).unwrap();
        let d2 = s.mul(&den.invert().unwrap()).unwrap();
        assert_eq!(d1, d2);
        let half = QSeries::one(c).div_one_minus(&Mono::signed_q(-1, 0)).unwrap();
        assert_eq!(half, QSeries::constant(c, Rational::new(1, 2)));
    }

    #[test]
    fn equal_up_to_reports_first_mismatch() {
        let c = ctx(5);
        let a = QSeries::from_terms(c, [(0, 0, r(1)), (1, 0, r(1))]);
        let b = QSeries::from_terms(c, [(0, 0, r(1)), (1, 0, r(2))]);
        assert_eq!(a.equal_up_to(&a).unwrap(), None);
        assert_eq!(a.equal_up_to(&b).unwrap(), Some(Mismatch { q_exp: 1, z_exp: 0, lhs: r(1), rhs: r(2) }));
    }

    #[test]
    fn dilate_examples() {
        let c = ctx(4);
        let s = QSeries::from_terms(c, [(0, 0, r(1)), (1, 0, r(-1))]);
        let d = s.dilate(3, ctx(12)).unwrap();
        assert_eq!(d, QSeries::from_terms(ctx(12), [(0, 0, r(1)), (3, 0, r(-1))]));
        assert!(QSeries::zero(c).dilate(2, ctx(8)).unwrap().is_zero());
        assert!(matches!(s.dilate(2, ctx(9)), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn render_is_sorted() {
        let c = EvalContext::formal(2, 4);
        let s = QSeries::from_terms(c, [(3, 1, Rational::new(1, 2)), (0, -1, r(2)), (0, 2, r(-1))]);
        assert_eq!(s.render(), "q^{0/2} : [-1 -> 2, 2 -> -1]\nq^{3/2} : [1 -> 1/2]\n");
    }
}
