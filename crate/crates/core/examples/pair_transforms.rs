//! Chain and lattice steps applied to the key pair; every output is again a
//! pair.

use bailey_forge::catalog::closure_params;
use bailey_forge::engine::*;
use bailey_forge::series::EvalContext;

fn report(p: &BilateralPair) -> bailey_forge::Result<()> {
    let c = verify_pair_definition(p, 6)?;
    println!("{:40} {}", c.label, if c.passed() { "pair" } else { "NOT a pair" });
    Ok(())
}

fn main() -> bailey_forge::Result<()> {
    let ctx = EvalContext::formal(2, 20);
    let p = key_pair(ctx);
    report(&chain_step(&p))?;
    for (x, y) in closure_params(p.unit()) {
        report(&general_chain_step(&p, x, y)?)?;
    }
    let p2 = key_pair_with_base(ctx, 2);
    report(&lattice_djk(&p2)?)?;
    report(&lattice_jouhet(&p2)?)?;
    Ok(())
}
