//! Catalog targets checked directly by the pair engine rather than through
//! identity source text.

use crate::engine::*;
use crate::error::Result;
use crate::series::{EvalContext, Mismatch, QSeries, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// The key pair satisfies the defining relation for `n <= 10`.
    KeyPair,
    /// Chain, general chain and both lattice steps map the key pair to pairs.
    Closure,
    /// The general lemma at the five limit points reproduces the weak forms.
    Coherence,
    /// Repeated chain steps agree with the direct multisum enumeration.
    Pipeline,
    /// Both sides of the iterated lattice identities for `k = 2, 3`.
    IteratedLattices,
    /// The two Hecke-type lemmas applied to the key pair in base `q^2`.
    HeckeLemmas,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::KeyPair,
        Builtin::Closure,
        Builtin::Coherence,
        Builtin::Pipeline,
        Builtin::IteratedLattices,
        Builtin::HeckeLemmas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::KeyPair => "key_pair",
            Builtin::Closure => "transform_closure",
            Builtin::Coherence => "weak_coherence",
            Builtin::Pipeline => "chain_pipeline",
            Builtin::IteratedLattices => "iterated_lattices",
            Builtin::HeckeLemmas => "hecke_lemmas",
        }
    }

    pub fn scale(self) -> i64 {
        match self {
            Builtin::Pipeline | Builtin::IteratedLattices | Builtin::KeyPair => 1,
            _ => 2,
        }
    }

    pub fn default_order(self) -> i64 {
        match self {
            Builtin::KeyPair | Builtin::Coherence | Builtin::IteratedLattices => 40,
            Builtin::Closure => 20,
            Builtin::Pipeline => 30,
            Builtin::HeckeLemmas => 50,
        }
    }

    /// Runs every comparison and returns the first mismatch, labelled.
    pub fn run(self, order: i64) -> Result<Option<(String, Mismatch)>> {
        let ctx = EvalContext::formal(self.scale(), order);
        match self {
            Builtin::KeyPair => definition(&key_pair(ctx), 10),
            Builtin::Closure => {
                let p = key_pair(ctx);
                let mut outs = vec![chain_step(&p)];
                for (x, y) in closure_params(p.unit()) {
                    outs.push(general_chain_step(&p, x, y)?);
                }
                let p2 = key_pair_with_base(ctx, 2);
                outs.push(lattice_djk(&p2)?);
                outs.push(lattice_jouhet(&p2)?);
                for o in &outs {
                    if let Some(m) = definition(o, 6)? {
                        return Ok(Some(m));
                    }
                }
                Ok(None)
            }
            Builtin::Coherence => {
                let p = key_pair(ctx);
                for v in WeakVariant::ALL {
                    let (wl, wr) = weak_lemma_eval(&p, v)?;
                    let (x, y) = v.limit_params(p.unit())?;
                    let (gl, gr) = bms_general_eval(&p, x, y)?;
                    let k = Rational::from_int(v.normalisation());
                    let label = format!("{v:?}");
                    for (a, b, side) in [(&wl, gl.scale(&k), "lhs"), (&wr, gr.scale(&k), "rhs")] {
                        if let Some(m) = a.equal_up_to(&b)? {
                            return Ok(Some((format!("{label} {side}"), m)));
                        }
                    }
                }
                Ok(None)
            }
            Builtin::Pipeline => {
                let p = key_pair(ctx);
                for k in 1..=4 {
                    let direct = multisum_lhs(MultisumKind::Ag1, k, ctx)?;
                    if let Some(m) = first(&format!("chain k={k}"), &direct, &chained_lhs(&p, k)?)? {
                        return Ok(Some(m));
                    }
                    let rhs = multisum_pair_rhs(&p, MultisumKind::PairQuadratic, k)?;
                    if let Some(m) = first(&format!("pair k={k}"), &direct, &rhs)? {
                        return Ok(Some(m));
                    }
                }
                Ok(None)
            }
            Builtin::IteratedLattices => {
                for kind in [LatticeKind::Djk, LatticeKind::Jouhet] {
                    for k in 2..=3 {
                        let (l, r) = iterated_lattice_eval(kind, k, LimitParam::Infinite, LimitParam::Infinite, ctx)?;
                        if let Some(m) = first(&format!("{kind:?} k={k}"), &l, &r)? {
                            return Ok(Some(m));
                        }
                    }
                }
                Ok(None)
            }
            Builtin::HeckeLemmas => {
                let p2 = key_pair_with_base(ctx, 2);
                for which in [AwLemma::I, AwLemma::II] {
                    let (l, r) = aw_lemma_eval(&p2, which)?;
                    if let Some(m) = first(&format!("{which:?}"), &l, &r)? {
                        return Ok(Some(m));
                    }
                }
                Ok(None)
            }
        }
    }
}

/// Five limit settings of the general chain step: the weak-form limits.
pub fn closure_params(u: i64) -> Vec<(LimitParam, LimitParam)> {
    WeakVariant::ALL.iter().filter_map(|v| v.limit_params(u).ok()).collect()
}

fn first(label: &str, a: &QSeries, b: &QSeries) -> Result<Option<(String, Mismatch)>> {
    Ok(a.equal_up_to(b)?.map(|m| (label.to_string(), m)))
}

fn definition(p: &BilateralPair, n_max: i64) -> Result<Option<(String, Mismatch)>> {
    let c = verify_pair_definition(p, n_max)?;
    Ok(c.first_failure.map(|(n, m)| (format!("{} at n={n}", c.label), m)))
}
