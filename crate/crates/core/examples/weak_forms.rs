//! The five weak forms on the key pair, and the general lemma at the matching
//! limits of its two parameters.

use bailey_forge::engine::{bms_general_eval, key_pair, weak_lemma_eval, WeakVariant};
use bailey_forge::series::{EvalContext, Rational};

fn main() -> bailey_forge::Result<()> {
    let p = key_pair(EvalContext::formal(2, 40));
    for v in WeakVariant::ALL {
        let (l, r) = weak_lemma_eval(&p, v)?;
        let (x, y) = v.limit_params(p.unit())?;
        let (gl, _) = bms_general_eval(&p, x, y)?;
        let k = Rational::from_int(v.normalisation());
        println!(
            "{v:?}: sides agree {}, general lemma agrees {}",
            l.equal_up_to(&r)?.is_none(),
            l.equal_up_to(&gl.scale(&k))?.is_none()
        );
    }
    Ok(())
}
