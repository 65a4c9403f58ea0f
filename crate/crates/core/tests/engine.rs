use bailey_forge::engine::*;
use bailey_forge::series::{EvalContext, QSeries, ZInterp};

fn assert_equal(label: &str, l: &QSeries, r: &QSeries) {
    if let Some(m) = l.equal_up_to(r).unwrap() {
        panic!("{label}: {m:?}");
    }
}

#[test]
fn weak_forms_hold_on_key_pair() {
    let ctx = EvalContext::formal(2, 24);
    let p = key_pair(ctx);
    for v in WeakVariant::ALL {
        let (l, r) = weak_lemma_eval(&p, v).unwrap();
        assert_equal(&format!("{v:?}"), &l, &r);
    }
}

#[test]
fn general_lemma_matches_weak_forms() {
    let ctx = EvalContext::formal(2, 20);
    let p = key_pair(ctx);
    for v in WeakVariant::ALL {
        let (wl, wr) = weak_lemma_eval(&p, v).unwrap();
        let (x, y) = v.limit_params(p.unit()).unwrap();
        let (gl, gr) = bms_general_eval(&p, x, y).unwrap();
        let k = bailey_forge::series::Rational::from_int(v.normalisation());
        assert_equal(&format!("{v:?} lhs"), &wl, &gl.scale(&k));
        assert_equal(&format!("{v:?} rhs"), &wr, &gr.scale(&k));
    }
}

#[test]
fn unit_pair_collapses() {
    let ctx = EvalContext::new(2, 16, ZInterp::Monomial { sign: 1, qexp: 2 });
    let p = key_pair(ctx);
    for v in WeakVariant::ALL {
        let (l, r) = weak_lemma_eval(&p, v).unwrap();
        assert_equal(&format!("{v:?}"), &l, &r);
    }
}

#[test]
fn transforms_preserve_pairs() {
    let ctx = EvalContext::formal(2, 14);
    let p = key_pair(ctx);
    let mut outs = vec![chain_step(&p)];
    for v in WeakVariant::ALL {
        let (x, y) = v.limit_params(p.unit()).unwrap();
        outs.push(general_chain_step(&p, x, y).unwrap());
    }
    let p2 = key_pair_with_base(ctx, 2);
    outs.push(lattice_djk(&p2).unwrap());
    outs.push(lattice_jouhet(&p2).unwrap());
    for o in outs {
        let c = verify_pair_definition(&o, 6).unwrap();
        assert!(c.passed(), "{}: {:?}", c.label, c.first_failure);
    }
}

#[test]
fn chained_pipeline_matches_direct_multisum() {
    let ctx = EvalContext::formal(1, 16);
    let p = key_pair(ctx);
    for k in 1..=4 {
        let direct = multisum_lhs(MultisumKind::Ag1, k, ctx).unwrap();
        let chained = chained_lhs(&p, k).unwrap();
        assert_equal(&format!("k={k}"), &direct, &chained);
        let rhs = multisum_pair_rhs(&p, MultisumKind::PairQuadratic, k).unwrap();
        assert_equal(&format!("pair k={k}"), &direct, &rhs);
    }
}

#[test]
fn iterated_lattices_balance() {
    let ctx = EvalContext::formal(1, 16);
    for kind in [LatticeKind::Djk, LatticeKind::Jouhet] {
        for k in 2..=3 {
            let (l, r) = iterated_lattice_eval(kind, k, LimitParam::Infinite, LimitParam::Infinite, ctx).unwrap();
            assert_equal(&format!("{kind:?} k={k}"), &l, &r);
        }
    }
}

#[test]
fn hecke_lemmas_balance() {
    let ctx = EvalContext::formal(1, 20);
    let p2 = key_pair_with_base(ctx, 2);
    for w in [AwLemma::I, AwLemma::II] {
        let (l, r) = aw_lemma_eval(&p2, w).unwrap();
        assert_equal(&format!("{w:?}"), &l, &r);
    }
}

#[test]
fn hecke_lemma_at_minus_q() {
    let ctx = EvalContext::new(1, 20, ZInterp::Monomial { sign: -1, qexp: 1 });
    let (_, r) = aw_lemma_eval(&key_pair_with_base(ctx, 2), AwLemma::I).unwrap();
    let expect = QSeries::from_terms(
        ctx,
        (0..5).map(|n: i64| (n * (n + 1), 0, bailey_forge::series::Rational::from_int(2 * n + 1))),
    );
    assert_equal("odd weights", &r, &expect);
}
