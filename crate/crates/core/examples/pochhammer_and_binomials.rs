//! Finite and infinite q-Pochhammer products and Gaussian binomials.

use bailey_forge::series::{poch_finite, poch_infinite, qbinomial, EvalContext, Mono};

fn main() -> bailey_forge::Result<()> {
    let ctx = EvalContext::formal(1, 20);
    let q = Mono::q(1);
    for k in 0..=4 {
        println!("[4 choose {k}]_q = {}", qbinomial(ctx, 4, k)?.render().replace('\n', "  "));
    }
    let q4 = poch_finite(ctx, &q, 1, 4)?;
    let split = qbinomial(ctx, 4, 2)?.mul(&poch_finite(ctx, &q, 1, 2)?)?.mul(&poch_finite(ctx, &q, 1, 2)?)?;
    println!("(q;q)_4 = [4,2](q;q)_2(q;q)_2: {}", q4 == split);

    let euler = poch_infinite(ctx, &q, 1)?;
    let exps: Vec<i64> = euler.iter().map(|(e, _, _)| e).collect();
    println!("(q;q)_inf is supported on pentagonal numbers: {exps:?}");
    Ok(())
}
