use bailey_forge::dsl::{evaluate_both, parse, parse_file, pretty_print, validate};
use bailey_forge::Error;
use std::collections::HashMap;

const WEAK: &str = "
identity quintuple_weak {
  order 50
  lhs sum(n >= 0, poch(z, q/z; q, n) * q^(n^2) / poch(q; q, 2*n))
  rhs poch(z*q, q^2/z, q^3; q^3) / poch(q; q)
}";

fn agrees(src: &str) {
    for spec in parse_file(src).unwrap() {
        assert!(validate(&spec).is_empty(), "{}: {:?}", spec.name, validate(&spec));
        let (l, r) = evaluate_both(&spec, &HashMap::new(), None).unwrap();
        assert_eq!(l.equal_up_to(&r).unwrap(), None, "{}", spec.name);
    }
}

#[test]
fn weak_identity_holds_at_order_50() {
    agrees(WEAK);
}

#[test]
fn syntax_error_points_at_the_paren() {
    match parse("identity bad { lhs q^( }") {
        Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (1, 22)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn pretty_print_round_trips() {
    let spec = parse(WEAK).unwrap();
    let again = parse(&pretty_print(&spec)).unwrap();
    assert_eq!(spec, again);
}

#[test]
fn divergent_sum_is_rejected() {
    let spec = parse("identity d { lhs sum(n in Z, z^n) rhs 0 }").unwrap();
    assert!(!validate(&spec).is_empty());
    let spec = parse("identity d { lhs sum(n >= 0, q^n / poch(q; q, n)^2 * q^(-n)) rhs 0 }").unwrap();
    assert!(!validate(&spec).is_empty());
}

#[test]
fn further_weak_forms() {
    agrees(
        "
identity scaled {
  scale 2
  lhs sum(n >= 0, poch(z, q^2/z, -q; q^2, n) * q^(n^2) / poch(q^2; q^2, 2*n))
  rhs poch(-q; q^2) * poch(z*q, q^3/z, q^4; q^4) / poch(q^2; q^2)
}
identity two_thetas {
  lhs sum(n >= 0, poch(z, q/z, -q; q, n) * q^binom(n, 2) / poch(q; q, 2*n))
  rhs poch(-q; q) / poch(q; q) * (poch(z, q^2/z, q^2; q^2) + poch(z*q, q/z, q^2; q^2))
}
identity appell_side {
  order 30
  lhs sum(n >= 0, poch(-1, z, q/z; q, n) * q^binom(n + 1, 2) / poch(q; q, 2*n))
  rhs 2 * poch(-q; q) / poch(q; q) * appell(n, (-1)^n * z^n * q^(n^2) / (1 + q^n))
}
",
    );
}
