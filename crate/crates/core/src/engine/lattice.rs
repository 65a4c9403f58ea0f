use super::chain::transform;
use super::limit::LimitParam;
use super::pair::{key_pair_with_base, BilateralPair};
use super::weak::bms_general_eval;
use crate::error::{Error, Result};
use crate::series::{poch_factors, EvalContext, FactorProduct, Mono, QSeries, Rational};

/// The two lattice steps from a pair in `Q²` to a pair in `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    /// `α'_n = 2 Q^n α_n/(1+Q^{2n})`, `β'_n = Σ (-1;Q)_{2j} Q^j β_j/(Q²;Q²)_{n-j}`
    Djk,
    /// `α'_n = α_n`, `β'_n = Σ (-Q;Q)_{2j} Q^{n-j} β_j/(Q²;Q²)_{n-j}`
    Jouhet,
}

fn halved_base(p2: &BilateralPair) -> Result<i64> {
    if p2.base() % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "a lattice step needs a pair in an even power of q, got q^{}",
            p2.base()
        )));
    }
    Ok(p2.base() / 2)
}

/// Lattice step taking `(α, β)` at `(1, Q²)` to a pair at `(1, Q)`.
pub fn lattice_step(p2: &BilateralPair, kind: LatticeKind) -> Result<BilateralPair> {
    let base = halved_base(p2)?;
    let u = base * p2.ctx().scale();
    let label = format!("{kind:?}({})", p2.label());
    let inv_even = move |m: i64| poch_factors(&Mono::q(2 * u), 2 * u, m).recip();
    Ok(match kind {
        LatticeKind::Djk => transform(
            p2,
            base,
            label,
            move |n| {
                let mut f = FactorProduct::monomial(Mono::q(u * n));
                f.scale(&Rational::from_int(2));
                f.push_den(Mono::signed_q(-1, 2 * u * n));
                Ok(f)
            },
            move |n, j| {
                let mut f = poch_factors(&Mono::signed_q(-1, 0), u, 2 * j);
                f.mul_mono(&Mono::q(u * j));
                f.mul(&inv_even(n - j)?);
                Ok(f)
            },
        ),
        LatticeKind::Jouhet => transform(
            p2,
            base,
            label,
            |_| Ok(FactorProduct::new()),
            move |n, j| {
                let mut f = poch_factors(&Mono::signed_q(-1, u), u, 2 * j);
                f.mul_mono(&Mono::q(u * (n - j)));
                f.mul(&inv_even(n - j)?);
                Ok(f)
            },
        ),
    })
}

pub fn lattice_djk(p2: &BilateralPair) -> Result<BilateralPair> {
    lattice_step(p2, LatticeKind::Djk)
}

pub fn lattice_jouhet(p2: &BilateralPair) -> Result<BilateralPair> {
    lattice_step(p2, LatticeKind::Jouhet)
}

/// The key pair in `q^{2^{k-1}}`, lowered to `q` by `k - 1` lattice steps.
pub fn iterated_lattice_pair(kind: LatticeKind, k: u32, ctx: EvalContext) -> Result<BilateralPair> {
    if !(1..=20).contains(&k) {
        return Err(Error::InvalidArgument(format!("lattice depth {k} out of range 1..=20")));
    }
    let mut p = key_pair_with_base(ctx, 1 << (k - 1));
    for _ in 1..k {
        p = lattice_step(&p, kind)?;
    }
    Ok(p)
}

/// Both sides of the `k`-fold lattice identity: the general lemma at `(x, y)`
/// applied to [`iterated_lattice_pair`].
pub fn iterated_lattice_eval(
    kind: LatticeKind,
    k: u32,
    x: LimitParam,
    y: LimitParam,
    ctx: EvalContext,
) -> Result<(QSeries, QSeries)> {
    if k < 2 {
        return Err(Error::InvalidArgument("iterated lattice identities need k >= 2".into()));
    }
    bms_general_eval(&iterated_lattice_pair(kind, k, ctx)?, x, y)
}
