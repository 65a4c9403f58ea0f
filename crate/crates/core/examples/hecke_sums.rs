//! Indefinite double sums over |j| <= n, evaluated with z formal and at z = -q.

use bailey_forge::series::{EvalContext, ZInterp};
use bailey_forge::special::{hecke_sum, HeckeRegion, HeckeSpec, QuadForm};

fn main() -> bailey_forge::Result<()> {
    let spec = HeckeSpec {
        exponent: QuadForm { nn: 1, n1: 1, jj: 0, j1: -1, nj: 0, c: 0, den: 1 },
        sign: (0, 1),
        z_power: 1,
        region: HeckeRegion::Full,
        inner_den: None,
    };
    println!("formal z:\n{}", hecke_sum(&spec, EvalContext::formal(1, 4))?.render());
    let at = EvalContext::new(1, 20, ZInterp::Monomial { sign: -1, qexp: 1 });
    println!("z = -q gives sum (2n+1) q^(n(n+1)):\n{}", hecke_sum(&spec, at)?.render());
    Ok(())
}
