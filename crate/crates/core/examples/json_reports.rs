//! Machine-readable reports, including a deliberate failure.

use std::collections::BTreeMap;
use std::sync::Arc;

use bailey_forge::catalog::{spec_jobs, Builtin};
use bailey_forge::dsl::parse;
use bailey_forge::report::{run_builtin, run_job, RunOptions};

fn main() -> bailey_forge::Result<()> {
    let broken = parse(
        "identity broken {
  lhs sum(n >= 0, q^(n^2) / poch(q; q, n))
  rhs 1 / theta(q, q^4; q^5) + q^9
}",
    )?;
    let job = spec_jobs(&Arc::new(broken), &BTreeMap::new(), &[])?.remove(0);
    let r = run_job(&job, RunOptions::default());
    println!("{}", serde_json::to_string_pretty(&r).expect("serialisable"));
    let b = run_builtin(Builtin::KeyPair, None);
    println!("{}", serde_json::to_string(&b.without_timing()).expect("serialisable"));
    Ok(())
}
