//! Exact truncated series in `q` (exponents in `(1/d)Z`) and `z`.

mod context;
mod poch;
mod product;
mod qseries;
mod rational;

pub use context::{EvalContext, Mono, ZInterp};
pub use poch::{poch_factors, poch_finite, poch_infinite, poch_signed, qbinomial, qbinomial_in};
pub use product::FactorProduct;
pub use qseries::{Mismatch, QSeries, ZLaurent};
pub use rational::Rational;

use crate::error::{Error, Result};

/// Smallest `j >= 0` with `binom(j, 2) > order / scale`.
pub fn z_degree_bound(ctx: &EvalContext) -> i64 {
    let mut j = 0i64;
    while j * (j - 1) * ctx.scale() <= 2 * ctx.order() {
        j += 1;
    }
    j
}

/// Resource guard on the z-degree of a finished identity side: every
/// identity in the catalog keeps `|zexp| <= z_degree_bound`.
pub fn check_z_degree(s: &QSeries) -> Result<()> {
    let bound = z_degree_bound(s.ctx());
    let got = s.max_abs_z();
    if got > bound {
        return Err(Error::ResourceCap(format!("z-degree {got} exceeds the structural bound {bound} at {}", s.ctx())));
    }
    Ok(())
}
