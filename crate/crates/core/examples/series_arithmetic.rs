//! Truncated series in q and z: products, inverses and partition numbers.

use bailey_forge::series::{poch_infinite, EvalContext, Mono, QSeries, Rational};

fn main() -> bailey_forge::Result<()> {
    let ctx = EvalContext::formal(1, 10);
    let z = QSeries::monomial(ctx, Rational::one(), 1, 0);
    let q_over_z = QSeries::monomial(ctx, Rational::one(), -1, 1);
    let one = QSeries::one(ctx);
    let f = one.sub(&z)?.mul(&one.sub(&q_over_z)?)?;
    println!("(1 - z)(1 - q/z):\n{}", f.render());

    let euler = poch_infinite(ctx, &Mono::q(1), 1)?;
    let p = euler.invert()?;
    let counts: Vec<String> = (0..=10).map(|n| p.coeff(n, 0).to_string()).collect();
    println!("1/(q;q)_inf: {}", counts.join(", "));

    let half = EvalContext::formal(2, 6);
    let s = QSeries::monomial(half, Rational::new(1, 2), 0, 1);
    println!("at scale 2 the unit exponent is q^(1/2):\n{}", s.render());
    Ok(())
}
