use std::fmt;

use super::Rational;

/// How the second variable `z` is read while building a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZInterp {
    Formal,
    /// `z = sign * q^(qexp / scale)`.
    Monomial {
        sign: i8,
        qexp: i64,
    },
}

/// Global evaluation parameters shared by every series of one evaluation.
///
/// q-exponents are stored as integers in units of `1/scale`; `order` is the
/// largest stored (scaled) exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EvalContext {
    scale: i64,
    order: i64,
    z: ZInterp,
}

impl EvalContext {
    pub fn new(scale: i64, order: i64, z: ZInterp) -> Self {
        assert!(scale >= 1, "scale must be at least 1");
        assert!(order >= 0, "order must be non-negative");
        if let ZInterp::Monomial { sign, .. } = z {
            assert!(sign == 1 || sign == -1, "z sign must be +1 or -1");
        }
        EvalContext { scale, order, z }
    }

    pub fn formal(scale: i64, order: i64) -> Self {
        Self::new(scale, order, ZInterp::Formal)
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn z(&self) -> ZInterp {
        self.z
    }

    pub fn is_formal(&self) -> bool {
        self.z == ZInterp::Formal
    }

    /// Same scale and z reading, different truncation order. Negative orders
    /// are allowed internally and yield contexts in which only negative
    /// exponents survive.
    pub fn with_order(&self, order: i64) -> Self {
        EvalContext { order, ..*self }
    }

    pub fn with_z(&self, z: ZInterp) -> Self {
        EvalContext { z, ..*self }
    }

    /// Compatible for arithmetic: same scale and z reading (order may differ).
    pub fn same_frame(&self, other: &EvalContext) -> bool {
        self.scale == other.scale && self.z == other.z
    }
}

impl fmt::Display for EvalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scale={} order={}", self.scale, self.order)?;
        match self.z {
            ZInterp::Formal => write!(f, " z=formal"),
            ZInterp::Monomial { sign, qexp } => {
                let s = if sign < 0 { "-" } else { "" };
                write!(f, " z={s}q^({qexp}/{})", self.scale)
            }
        }
    }
}

/// `coeff * z^zexp * q^(qexp/scale)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub coeff: Rational,
    pub zexp: i64,
    pub qexp: i64,
}

impl Mono {
    pub fn new(coeff: Rational, zexp: i64, qexp: i64) -> Self {
        Mono { coeff, zexp, qexp }
    }

    pub fn one() -> Self {
        Mono::new(Rational::one(), 0, 0)
    }

    /// `q^qexp`.
    pub fn q(qexp: i64) -> Self {
        Mono::new(Rational::one(), 0, qexp)
    }

    /// `sign * q^qexp`.
    pub fn signed_q(sign: i64, qexp: i64) -> Self {
        Mono::new(Rational::from_int(sign), 0, qexp)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Substitutes a monomial `z` so the result carries no z-exponent.
    pub fn fold(&self, z: ZInterp) -> Mono {
        match z {
            ZInterp::Formal => self.clone(),
            ZInterp::Monomial { sign, qexp } => {
                let mut c = self.coeff.clone();
                if sign < 0 && self.zexp.rem_euclid(2) == 1 {
                    c = -c;
                }
                Mono::new(c, 0, self.qexp + self.zexp * qexp)
            }
        }
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono::new(&self.coeff * &other.coeff, self.zexp + other.zexp, self.qexp + other.qexp)
    }

    /// Panics on the zero monomial.
    pub fn recip(&self) -> Mono {
        Mono::new(self.coeff.recip().expect("inverse of zero monomial"), -self.zexp, -self.qexp)
    }

    pub fn pow(&self, k: i64) -> Mono {
        Mono::new(self.coeff.pow(k), self.zexp * k, self.qexp * k)
    }

    /// True when `1 - self` is the zero factor.
    pub fn is_unit_one(&self) -> bool {
        self.zexp == 0 && self.qexp == 0 && self.coeff.is_one()
    }
}
