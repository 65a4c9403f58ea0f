//! A parameter family over its whole grid, run in parallel, with the order
//! raised to four periods of the largest product.

use std::collections::BTreeMap;

use bailey_forge::catalog::find;
use bailey_forge::report::{entry_work, exit_code, run_all, RunOptions, Status};

fn main() -> bailey_forge::Result<()> {
    let entry = find("bbpi4").expect("shipped");
    let work = entry_work(entry, &BTreeMap::new())?;
    let opts = RunOptions { order_rule: true, ..Default::default() };
    let reports = run_all(&work, opts, 4)?;
    for r in reports.iter().filter(|r| r.params["a"] == 1) {
        println!("{r}");
    }
    let pass = reports.iter().filter(|r| r.status == Status::Pass).count();
    println!("{pass}/{} pass, exit code {}", reports.len(), exit_code(&reports));
    Ok(())
}
