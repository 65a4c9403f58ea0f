//! The bilateral pair with alpha_n = (-1)^n z^n q^binom(n,2): its first terms
//! and its defining relation.

use bailey_forge::engine::{key_pair, verify_pair_definition};
use bailey_forge::series::EvalContext;

fn main() -> bailey_forge::Result<()> {
    let p = key_pair(EvalContext::formal(1, 8));
    for n in -2..=2 {
        println!("alpha_{n}: {}", p.alpha(n)?.render().trim_end());
    }
    println!("beta_1:\n{}", p.beta(1)?.render());

    let check = verify_pair_definition(&key_pair(EvalContext::formal(1, 40)), 10)?;
    match check.first_failure {
        None => println!("{}: relation holds for n <= 10 at order 40", check.label),
        Some((n, m)) => println!("{}: fails at n = {n}: {m:?}", check.label),
    }
    Ok(())
}
