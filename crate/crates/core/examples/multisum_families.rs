//! Depth-k multisums generated per k, and their specialisations at
//! z = q^(i-k), which give the Andrews-Gordon products.

use std::collections::BTreeMap;

use bailey_forge::catalog::{find, Target};
use bailey_forge::report::{entry_work, run_all, RunOptions};

fn main() -> bailey_forge::Result<()> {
    let Target::Family(f) = find("AG1").expect("shipped").target else { unreachable!() };
    println!("{}", f.source(2)?);
    for name in ["AG1", "AG1_i", "AG2", "AG2_i"] {
        let k: BTreeMap<String, i64> = [("k".to_string(), 3)].into();
        let reports = run_all(&entry_work(find(name).expect("shipped"), &k)?, RunOptions::default(), 4)?;
        for r in reports {
            println!("{r}");
        }
    }
    Ok(())
}
