//! Writing an identity as text, checking it statically and comparing both sides.

use std::collections::HashMap;

use bailey_forge::dsl::{evaluate_both, parse, pretty_print, validate};

const SRC: &str = "
identity rogers_ramanujan {
  order 60
  lhs sum(n >= 0, q^(n^2) / poch(q; q, n))
  rhs 1 / theta(q, q^4; q^5)
}";

fn main() -> bailey_forge::Result<()> {
    let spec = parse(SRC)?;
    println!("{}", pretty_print(&spec));
    println!("findings: {:?}", validate(&spec));
    let (l, r) = evaluate_both(&spec, &HashMap::new(), None)?;
    println!("equal through q^{}: {}", l.order(), l.equal_up_to(&r)?.is_none());

    let bad = parse("identity geometric { lhs sum(n >= 0, z^n) rhs 0 }")?;
    for f in validate(&bad) {
        println!("rejected: {f}");
    }
    match parse("identity bad { lhs q^( }") {
        Err(e) => println!("syntax error: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
