use std::collections::HashMap;

use bailey_forge::catalog::{entry_jobs, find};
use bailey_forge::dsl::{evaluate, evaluate_both, parse, Side};
use bailey_forge::series::{EvalContext, QSeries};
use bailey_forge::special::{brute_force_expand, jtp_sum};

fn both(src: &str) -> (QSeries, QSeries) {
    evaluate_both(&parse(src).unwrap(), &HashMap::new(), None).unwrap()
}

#[test]
fn modulus_three_product_collapses_to_one() {
    let (l, r) = both("identity t { order 60 lhs theta(q, q^2, q^3; q^3) / theta(q; q) rhs 1 }");
    assert_eq!(l, r);
}

#[test]
fn triple_product_matches_the_bilateral_sum() {
    let (l, r) = both("identity t { order 40 lhs theta(z, q/z, q; q) rhs sum(n in Z, (-1)^n * z^n * q^binom(n, 2)) }");
    assert_eq!(l, r);
    assert_eq!(jtp_sum(EvalContext::formal(1, 40)).unwrap(), r);
}

#[test]
fn oracle_expands_the_finite_identity_exactly() {
    let e = find("basic_b").unwrap();
    let fixed = [("n".to_string(), 3)].into_iter().collect();
    let j = &entry_jobs(e, &fixed).unwrap()[0];
    let l = brute_force_expand(&j.spec, Side::Lhs, &j.env, None).unwrap();
    let r = brute_force_expand(&j.spec, Side::Rhs, &j.env, None).unwrap();
    assert_eq!(l.equal_up_to(&r).unwrap(), None);
    assert!(l.max_q_exp().unwrap() < l.order());
    assert_eq!(l.coeff(0, 0).to_string(), "1");
}

#[test]
fn oracle_matches_the_quadratic_weak_form_to_twenty() {
    let e = find("weak1").unwrap();
    let j = &entry_jobs(e, &Default::default()).unwrap()[0];
    let a = evaluate(&j.spec, &j.env, Side::Lhs, Some(20)).unwrap();
    let b = brute_force_expand(&j.spec, Side::Lhs, &j.env, Some(20)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn odd_weights_at_minus_q() {
    let e = find("odd_weights").unwrap();
    let j = &entry_jobs(e, &Default::default()).unwrap()[0];
    let r = evaluate(&j.spec, &j.env, Side::Rhs, Some(12)).unwrap();
    let want: Vec<(i64, i64)> = vec![(0, 1), (2, 3), (6, 5), (12, 7)];
    let got: Vec<(i64, i64)> = r.iter().map(|(q, _, c)| (q, c.to_i64().unwrap())).collect();
    assert_eq!(got, want);
}
