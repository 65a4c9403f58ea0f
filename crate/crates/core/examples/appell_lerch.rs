//! Bilateral sums with a 1/(1 + q^n) denominator, where negative n expands
//! with a unit leading term.

use bailey_forge::series::{EvalContext, Mono};
use bailey_forge::special::{appell_lerch_sum, AppellLerchSpec, QuadForm};

fn main() -> bailey_forge::Result<()> {
    let spec = AppellLerchSpec {
        alternating: true,
        z_power: 1,
        exponent: QuadForm::in_n(1, 0, 1),
        den: Some((Mono::signed_q(-1, 0), 1)),
    };
    let s = appell_lerch_sum(&spec, EvalContext::formal(1, 4))?;
    println!("sum (-1)^n z^n q^(n^2) / (1 + q^n):\n{}", s.render());
    let back = appell_lerch_sum(&spec.reflected(), EvalContext::formal(1, 4))?;
    println!("summing over -n gives the same series: {}", s == back);
    Ok(())
}
