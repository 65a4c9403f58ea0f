use crate::error::Result;
use crate::series::{poch_factors, FactorProduct, Mono};

/// A parameter `x` or `y` of the bilateral Bailey lemma: either taken to
/// infinity, or the monomial `sign * q^(qexp/scale)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LimitParam {
    Infinite,
    Finite { sign: i8, qexp: i64 },
}

impl LimitParam {
    pub fn finite(sign: i8, qexp: i64) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        LimitParam::Finite { sign, qexp }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LimitParam::Infinite)
    }

    fn mono(&self) -> Option<Mono> {
        match *self {
            LimitParam::Infinite => None,
            LimitParam::Finite { sign, qexp } => Some(Mono::signed_q(sign as i64, qexp)),
        }
    }

    /// `(x; Q)_n x^{-n}`; at infinity the limit `(-1)^n Q^binom(n,2)`.
    pub fn sum_factor(&self, n: i64, u: i64) -> FactorProduct {
        match self.mono() {
            None => {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                FactorProduct::monomial(Mono::signed_q(sign, u * n * (n - 1) / 2))
            }
            Some(x) => {
                let mut p = poch_factors(&x, u, n);
                p.mul_mono(&x.pow(-n));
                p
            }
        }
    }

    /// `(Q/x; Q)_n`, which is 1 at infinity.
    pub fn dual_poch(&self, n: i64, u: i64) -> FactorProduct {
        match self.mono() {
            None => FactorProduct::new(),
            Some(x) => poch_factors(&Mono::q(u).mul(&x.recip()), u, n),
        }
    }

    /// `(x; Q)_n x^{-n} / (Q/x; Q)_n`.
    pub fn weight_factor(&self, n: i64, u: i64) -> Result<FactorProduct> {
        let mut p = self.sum_factor(n, u);
        p.mul(&self.dual_poch(n, u).recip()?);
        Ok(p)
    }

    /// `(Q/x; Q)_∞` (1 at infinity).
    pub(crate) fn dual_infinite(&self, u: i64) -> Result<FactorProduct> {
        let mut p = FactorProduct::new();
        if let Some(x) = self.mono() {
            p.push_num_run(Mono::q(u).mul(&x.recip()), u)?;
        }
        Ok(p)
    }

    pub(crate) fn as_mono(&self) -> Option<Mono> {
        self.mono()
    }
}
