use std::collections::HashMap;

use bailey_forge::dsl::{evaluate, parse, pretty_print, Side};
use bailey_forge::series::{poch_finite, poch_infinite, qbinomial, EvalContext, Mono, QSeries, Rational};
use bailey_forge::special::brute_force_expand;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const ORDER: i64 = 12;

fn ctx() -> EvalContext {
    EvalContext::formal(1, ORDER)
}

fn series() -> impl Strategy<Value = QSeries> {
    prop::collection::vec((0..=ORDER, -3i64..=3, -5i64..=5), 0..12)
        .prop_map(|ts| QSeries::from_terms(ctx(), ts.into_iter().map(|(q, z, c)| (q, z, Rational::from_int(c)))))
}

/// A series with constant term `±1` and no other `q^0` coefficient.
fn unit_series() -> impl Strategy<Value = QSeries> {
    (series(), prop::bool::ANY).prop_map(|(s, neg)| {
        let tail = QSeries::from_terms(ctx(), s.iter().filter(|(q, _, _)| *q > 0).map(|(q, z, c)| (q, z, c.clone())));
        let c = Rational::from_int(if neg { -1 } else { 1 });
        tail.add(&QSeries::constant(ctx(), c)).unwrap()
    })
}

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #[test]
    fn rational_agrees_with_bigrational(a in any::<i64>(), b in 1i64..=i64::MAX, c in any::<i64>(), d in 1i64..=i64::MAX) {
        let (x, y) = (Rational::new(a, b), Rational::new(c, d));
        let (bx, by) = (big(a, b), big(c, d));
        prop_assert_eq!((&x + &y).to_big(), &bx + &by);
        prop_assert_eq!((&x - &y).to_big(), &bx - &by);
        prop_assert_eq!((&x * &y).to_big(), &bx * &by);
        if c != 0 {
            prop_assert_eq!((&x / &y).to_big(), &bx / &by);
        }
    }

    #[test]
    fn multiplication_is_a_commutative_ring(a in series(), b in series(), c in series()) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, ab.add(&a.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn inverse_is_two_sided(u in unit_series()) {
        let v = u.invert().unwrap();
        prop_assert_eq!(u.mul(&v).unwrap(), QSeries::one(ctx()));
        prop_assert_eq!(v.invert().unwrap(), u);
    }

    #[test]
    fn truncation_commutes_with_products(a in series(), b in series(), n in 0..=ORDER) {
        let full = a.mul(&b).unwrap().truncate(n).unwrap();
        let cut = a.truncate(n).unwrap().mul(&b.truncate(n).unwrap()).unwrap();
        prop_assert_eq!(full, cut);
    }

    #[test]
    fn first_mismatch_is_the_smallest_coordinate(a in series(), bumps in prop::collection::vec((0..=ORDER, -3i64..=3), 1..4)) {
        let b = a.add(&QSeries::from_terms(ctx(), bumps.iter().map(|&(q, z)| (q, z, Rational::one())))).unwrap();
        let mut hit: Vec<(i64, i64)> = bumps.clone();
        hit.sort();
        hit.dedup();
        let counts: HashMap<(i64, i64), usize> = bumps.iter().fold(HashMap::new(), |mut m, k| {
            *m.entry(*k).or_default() += 1;
            m
        });
        let m = a.equal_up_to(&b).unwrap().expect("a bump changes the series");
        prop_assert_eq!((m.q_exp, m.z_exp), hit[0]);
        prop_assert_eq!(&m.rhs - &m.lhs, Rational::from_int(counts[&hit[0]] as i64));
    }

    #[test]
    fn gaussian_binomials_obey_pascal(n in 1i64..10, k in 0i64..10) {
        let c = EvalContext::formal(1, 60);
        let lhs = qbinomial(c, n, k).unwrap();
        let rhs = qbinomial(c, n - 1, k - 1).unwrap().add(&qbinomial(c, n - 1, k).unwrap().mul_mono(&Mono::q(k))).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(&lhs, &qbinomial(c, n, n - k).unwrap());
        if (0..=n).contains(&k) {
            let q = Mono::q(1);
            let split = lhs
                .mul(&poch_finite(c, &q, 1, k).unwrap())
                .unwrap()
                .mul(&poch_finite(c, &q, 1, n - k).unwrap())
                .unwrap();
            prop_assert_eq!(split, poch_finite(c, &q, 1, n).unwrap());
        }
    }

    #[test]
    fn oracle_matches_random_one_sided_sums(a in 1i64..4, b in 0i64..4, c in -2i64..3, s in 1i64..4) {
        let src = format!("identity r {{ order 25 lhs sum(n >= 0, z^({c}) * q^({a}*n^2 + {b}*n) / poch(q; q^{s}, n)) rhs 0 }}");
        let spec = parse(&src).unwrap();
        prop_assert_eq!(parse(&pretty_print(&spec)).unwrap(), spec.clone());
        let env = HashMap::new();
        let main = evaluate(&spec, &env, Side::Lhs, None).unwrap();
        let naive = brute_force_expand(&spec, Side::Lhs, &env, None).unwrap();
        prop_assert_eq!(main.equal_up_to(&naive).unwrap(), None);
    }

    #[test]
    fn oracle_matches_random_bilateral_sums(a in 1i64..4, b in -4i64..5, sign in prop::bool::ANY) {
        let s = if sign { "(-1)^n * " } else { "" };
        let src = format!("identity r {{ order 25 lhs sum(n in Z, {s}z^n * q^({a}*n^2 + {b}*n)) rhs 0 }}");
        let spec = parse(&src).unwrap();
        let env = HashMap::new();
        let main = evaluate(&spec, &env, Side::Lhs, None).unwrap();
        let naive = brute_force_expand(&spec, Side::Lhs, &env, None).unwrap();
        prop_assert_eq!(main.equal_up_to(&naive).unwrap(), None);
    }
}

/// Euler's pentagonal number theorem, expanded independently.
#[test]
fn euler_product_is_pentagonal() {
    let c = EvalContext::formal(1, 200);
    let prod = poch_infinite(c, &Mono::q(1), 1).unwrap();
    let mut want = vec![0i64; 201];
    for k in -20i64..=20 {
        let e = k * (3 * k - 1) / 2;
        if e <= 200 {
            want[e as usize] += if k % 2 == 0 { 1 } else { -1 };
        }
    }
    let want = QSeries::from_terms(c, want.iter().enumerate().map(|(q, &x)| (q as i64, 0, Rational::from_int(x))));
    assert_eq!(prod, want);
}

/// Partition numbers by the standard recurrence on divisors.
#[test]
fn partitions_from_the_reciprocal_product() {
    let n = 60usize;
    let mut sigma = vec![0i64; n + 1];
    for d in 1..=n {
        for m in (d..=n).step_by(d) {
            sigma[m] += d as i64;
        }
    }
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        p[m] = (1..=m).map(|k| sigma[k] * p[m - k]).sum::<i64>() / m as i64;
    }
    let c = EvalContext::formal(1, n as i64);
    let inv = poch_infinite(c, &Mono::q(1), 1).unwrap().invert().unwrap();
    for (m, &pm) in p.iter().enumerate() {
        assert_eq!(inv.coeff(m as i64, 0), Rational::from_int(pm), "p({m})");
    }
    assert_eq!(p[60], 966467);
}
