//! The naive term-list expander against the main evaluator.

use std::collections::BTreeMap;
use std::time::Instant;

use bailey_forge::catalog::{entry_jobs, find};
use bailey_forge::dsl::{evaluate, Side};
use bailey_forge::special::brute_force_expand;

fn main() -> bailey_forge::Result<()> {
    for name in ["weak1", "Appell1", "hecktype1"] {
        let job = entry_jobs(find(name).expect("shipped"), &BTreeMap::new())?.remove(0);
        for side in [Side::Lhs, Side::Rhs] {
            let t = Instant::now();
            let main = evaluate(&job.spec, &job.env, side, Some(30))?;
            let t_main = t.elapsed();
            let t = Instant::now();
            let naive = brute_force_expand(&job.spec, side, &job.env, Some(30))?;
            let t_naive = t.elapsed();
            let same = main.equal_up_to(&naive)?.is_none();
            println!("{name:10} {side:?}: agree {same}  main {t_main:.1?}, naive {t_naive:.1?}");
        }
    }
    Ok(())
}
