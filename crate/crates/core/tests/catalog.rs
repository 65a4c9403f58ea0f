use std::collections::{BTreeMap, BTreeSet};

use bailey_forge::catalog::{catalog, entry_jobs, find, manifest, Target};
use bailey_forge::dsl::{evaluate, parse, pretty_print, validate, IdentitySpec, Side};
use bailey_forge::report::{entry_work, exit_code, run_all, RunOptions, Status};
use bailey_forge::special::brute_force_expand;

fn all_specs() -> Vec<IdentitySpec> {
    let mut out = Vec::new();
    for e in catalog() {
        match &e.target {
            Target::Spec(s) => out.push((**s).clone()),
            Target::Family(f) => out.extend((f.lo..=f.hi).map(|k| f.instance(k).unwrap())),
            Target::Builtin(_) => {}
        }
    }
    out
}

#[test]
fn manifest_covers_the_catalog() {
    let listed: Vec<String> = manifest().into_iter().map(|(n, _)| n).collect();
    let unique: BTreeSet<&String> = listed.iter().collect();
    assert_eq!(unique.len(), listed.len(), "duplicate manifest line");
    let shipped: Vec<String> = catalog().iter().map(|e| e.name.clone()).collect();
    assert_eq!(listed, shipped);
    assert!(catalog().iter().all(|e| !e.summary.is_empty()));
}

#[test]
fn names_accept_dashes() {
    assert_eq!(find("bbpi5-2").unwrap().name, "bbpi5_2");
    assert!(find("no_such_identity").is_none());
}

#[test]
fn every_spec_validates() {
    for s in all_specs() {
        let findings = validate(&s);
        assert!(findings.is_empty(), "{}: {:?}", s.name, findings);
    }
}

#[test]
fn every_spec_round_trips() {
    for s in all_specs() {
        let text = pretty_print(&s);
        let back = parse(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", s.name));
        assert_eq!(back, s, "{text}");
        assert_eq!(pretty_print(&back), text);
    }
}

#[test]
fn every_target_passes() {
    let mut work = Vec::new();
    for e in catalog() {
        work.extend(entry_work(e, &BTreeMap::new()).unwrap());
    }
    let reports = run_all(&work, RunOptions::default(), 8).unwrap();
    let bad: Vec<String> = reports.iter().filter(|r| r.status != Status::Pass).map(|r| r.to_string()).collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
    assert_eq!(exit_code(&reports), 0);
}

#[test]
fn oracle_agrees_on_one_binding_of_each_target() {
    for e in catalog() {
        if let Target::Builtin(_) = e.target {
            continue;
        }
        let jobs = entry_jobs(e, &BTreeMap::new()).unwrap();
        let j = &jobs[jobs.len() / 2];
        for side in [Side::Lhs, Side::Rhs] {
            let a = evaluate(&j.spec, &j.env, side, Some(20)).unwrap();
            let b = brute_force_expand(&j.spec, side, &j.env, Some(20)).unwrap();
            assert_eq!(a.equal_up_to(&b).unwrap(), None, "{} {:?} {side:?}", e.name, j.params);
        }
    }
}
