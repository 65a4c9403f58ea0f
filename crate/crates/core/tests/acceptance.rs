use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use bailey_forge::catalog::{catalog, closure_params, entry_jobs, find, Builtin, Target};
use bailey_forge::dsl::{evaluate, evaluate_both, parse, pretty_print, validate, IdentitySpec, Side};
use bailey_forge::engine::{key_pair, verify_pair_definition};
use bailey_forge::report::{entry_work, run_all, run_builtin, RunOptions, Status, VerificationReport};
use bailey_forge::series::EvalContext;
use bailey_forge::special::brute_force_expand;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

/// Runtime limits only bind optimised builds.
fn within(t: Duration, limit: Duration) -> bool {
    cfg!(debug_assertions) || t <= limit
}

fn fixed(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn run_named(names: &[&str], params: &BTreeMap<String, i64>, opts: RunOptions) -> Vec<VerificationReport> {
    let mut work = Vec::new();
    for n in names {
        let e = find(n).unwrap_or_else(|| panic!("{n} missing"));
        work.extend(entry_work(e, params).unwrap());
    }
    run_all(&work, opts, 8).unwrap()
}

fn all_pass(reports: &[VerificationReport]) -> Outcome {
    if let Some(r) = reports.iter().find(|r| r.status != Status::Pass) {
        return Err(r.to_string());
    }
    Ok(format!("{} checks", reports.len()))
}

fn basic_finite_identity() -> Outcome {
    let t = Instant::now();
    let e = find("basic_b").unwrap();
    let jobs = entry_jobs(e, &BTreeMap::new()).unwrap();
    let ns: Vec<i64> = jobs.iter().map(|j| j.params["n"]).collect();
    if ns != (0..=12).collect::<Vec<_>>() {
        return Err(format!("bindings {ns:?}"));
    }
    for j in &jobs {
        let (l, r) = evaluate_both(&j.spec, &j.env, None).map_err(|e| e.to_string())?;
        let top = l.max_q_exp().max(r.max_q_exp()).unwrap_or(0);
        if top >= l.order() {
            return Err(format!("n = {}: degree {top} reaches the truncation {}", j.params["n"], l.order()));
        }
        if let Some(m) = l.equal_up_to(&r).map_err(|e| e.to_string())? {
            return Err(format!("n = {}: {m:?}", j.params["n"]));
        }
    }
    let t = t.elapsed();
    if !within(t, Duration::from_secs(5)) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("n = 0..12, untruncated, {t:.2?}"))
}

fn key_pair_definition() -> Outcome {
    let c = verify_pair_definition(&key_pair(EvalContext::formal(1, 40)), 10).map_err(|e| e.to_string())?;
    match c.first_failure {
        None => Ok("n <= 10 at order 40".into()),
        Some((n, m)) => Err(format!("n = {n}: {m:?}")),
    }
}

fn weak_forms() -> Outcome {
    let names = ["weak1", "weak4", "weak5", "weak3", "weak2"];
    let reports = run_named(&names, &BTreeMap::new(), RunOptions { order: Some(50), ..Default::default() });
    all_pass(&reports)?;
    let weak4 = reports.iter().find(|r| r.name == "weak4").unwrap();
    if weak4.scale != 2 {
        return Err(format!("weak4 ran at scale {}", weak4.scale));
    }
    if let Some(r) =
        reports.iter().find(|r| !within(Duration::from_secs_f64(r.duration_ms / 1e3), Duration::from_secs(30)))
    {
        return Err(format!("{} took {} ms", r.name, r.duration_ms));
    }
    Ok("five forms at order 50, weak4 at scale 2".into())
}

fn parameter_families() -> Outcome {
    let t = Instant::now();
    let opts = RunOptions { order_rule: true, ..Default::default() };
    let grid = run_named(&["bbpi4", "bbpi1", "bbpi5_2", "bbpi2_2"], &BTreeMap::new(), opts);
    all_pass(&grid)?;
    let count = |n: &str| grid.iter().filter(|r| r.name == n).count();
    let three_m: usize = (1..=13).map(|m| m + 1).sum();
    let two_m: usize = (1..=10).map(|m| m + 1).sum();
    if (count("bbpi4"), count("bbpi1"), count("bbpi5_2"), count("bbpi2_2")) != (three_m, three_m, two_m, two_m) {
        return Err("grid does not cover 1 <= m <= 13 and 1 <= m <= 10".into());
    }
    for r in grid.iter().filter(|r| r.name.starts_with("bbpi4") || r.name.starts_with("bbpi1")) {
        if r.order < 12 * r.params["m"] {
            return Err(format!("{} ran at order {}", r.name, r.order));
        }
    }
    if grid.iter().filter(|r| r.name.ends_with("_2")).any(|r| r.scale != 2) {
        return Err("a modulus-2m member ran without scale 2".into());
    }
    let printed = ["mod6", "RRmod21", "RRmod24", "RRmod36", "RRmod39", "mod4_even", "RRmod16", "RRmod20"];
    let inst = run_named(&printed, &BTreeMap::new(), opts);
    all_pass(&inst)?;
    let instances =
        [("bbpi4", 7, 1), ("bbpi1", 8, 3), ("bbpi4", 12, 5), ("bbpi1", 13, 2), ("bbpi5_2", 8, 1), ("bbpi2_2", 10, 4)];
    for (n, m, a) in instances {
        if !grid.iter().any(|r| r.name == n && r.params["m"] == m && r.params["a"] == a) {
            return Err(format!("{n} at m = {m}, a = {a} was not run"));
        }
    }
    let t = t.elapsed();
    if !within(t, Duration::from_secs(300)) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("{} grid points and {} printed instances, {t:.2?}", grid.len(), inst.len()))
}

/// The multisum of a specialised family against a product written out by hand.
fn against_product(src: &str, rhs: &str) -> Result<(), String> {
    let text: String = src
        .lines()
        .map(|l| if l.trim_start().starts_with("rhs") { format!("  rhs {rhs}") } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    let spec = parse(&text).map_err(|e| format!("{e}\n{text}"))?;
    for env in bailey_forge::dsl::bindings(&spec).map_err(|e| e.to_string())? {
        let (l, r) = evaluate_both(&spec, &env, Some(50)).map_err(|e| e.to_string())?;
        if let Some(m) = l.equal_up_to(&r).map_err(|e| e.to_string())? {
            return Err(format!("{} {env:?}: {m:?}", spec.name));
        }
    }
    Ok(())
}

fn multisum_families() -> Outcome {
    let opts = RunOptions { order: Some(50), ..Default::default() };
    let mut n = 0;
    for (name, ks) in [("AG1", 1..=4), ("AG2", 1..=4), ("AG1_i", 1..=4), ("AG2_i", 1..=3)] {
        for k in ks {
            let reports = run_named(&[name], &fixed(&[("k", k)]), opts);
            all_pass(&reports)?;
            let want = match name {
                "AG1_i" => k as usize,
                "AG2_i" => k as usize + 1,
                _ => 1,
            };
            if reports.len() != want {
                return Err(format!("{name} k = {k}: {} bindings", reports.len()));
            }
            n += reports.len();
        }
    }
    for k in 1..=4 {
        let Target::Family(f) = find("AG1_i").unwrap().target else { unreachable!() };
        let m = 2 * k + 1;
        against_product(&f.source(k).unwrap(), &format!("theta(q^i, q^({m} - i), q^{m}; q^{m}) / theta(q; q)"))?;
    }
    for k in 1..=3 {
        let Target::Family(f) = find("AG2_i").unwrap().target else { unreachable!() };
        let m = 2 * k + 2;
        against_product(
            &f.source(k).unwrap(),
            &format!("theta(-q; q^2) * theta(q^i, q^({m} - i), q^{m}; q^{m}) / theta(q^2; q^2)"),
        )?;
    }
    Ok(format!("{n} checks at order 50, specialisations match the classical products"))
}

fn lattice_results() -> Outcome {
    let names = ["lattice1", "Appell1", "Appell2", "Appell3", "euler", "new1", "new2", "new3", "new4", "new5"];
    let reports = run_named(&names, &BTreeMap::new(), RunOptions { order: Some(40), ..Default::default() });
    all_pass(&reports).map(|s| format!("{s} at order 40"))
}

fn hecke_results() -> Outcome {
    let names = [
        "hecktype1",
        "hecktype2",
        "hecktypeite11",
        "hecktypeite12",
        "hecktypeite21",
        "hecktypeite22",
        "odd_weights",
        "hecktype2_plus",
        "hecktype2_minus",
        "hecktypeite11_unit",
        "hecktypeite12_unit",
        "hecktypeite21_unit",
        "hecktypeite22_unit",
        "odd_weights_doubled",
    ];
    let reports = run_named(&names, &BTreeMap::new(), RunOptions { order: Some(50), ..Default::default() });
    all_pass(&reports).map(|s| format!("{s} at order 50"))
}

fn transform_closure() -> Outcome {
    let settings = closure_params(Builtin::Closure.scale()).len();
    if settings != 5 {
        return Err(format!("{settings} general chain settings"));
    }
    let r = run_builtin(Builtin::Closure, None);
    if r.status != Status::Pass {
        return Err(r.to_string());
    }
    Ok("chain, 5 general chain settings and both lattices, n <= 6".into())
}

fn oracle_equivalence() -> Outcome {
    for name in ["weak1", "Appell1", "hecktype1"] {
        let e = find(name).unwrap();
        let j = &entry_jobs(e, &BTreeMap::new()).unwrap()[0];
        for side in [Side::Lhs, Side::Rhs] {
            let a = evaluate(&j.spec, &j.env, side, Some(30)).map_err(|e| e.to_string())?;
            let b = brute_force_expand(&j.spec, side, &j.env, Some(30)).map_err(|e| e.to_string())?;
            if a.is_zero() {
                return Err(format!("{name} {side:?} is empty"));
            }
            if let Some(m) = a.equal_up_to(&b).map_err(|e| e.to_string())? {
                return Err(format!("{name} {side:?}: {m:?}"));
            }
        }
    }
    Ok("weak1, Appell1, hecktype1, both sides to order 30".into())
}

fn specialisation_coherence() -> Outcome {
    let r = run_builtin(Builtin::Coherence, Some(40));
    if r.status != Status::Pass {
        return Err(r.to_string());
    }
    Ok("five limits at order 40".into())
}

fn catalog_specs() -> Vec<IdentitySpec> {
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

fn exit_code(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_bailey-forge"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .output()
        .ok()?
        .status
        .code()
}

fn dsl_contract() -> Outcome {
    let specs = catalog_specs();
    for s in &specs {
        let text = pretty_print(s);
        if parse(&text).map_err(|e| format!("{}: {e}", s.name))? != *s {
            return Err(format!("{} does not round-trip", s.name));
        }
    }
    for src in ["identity d { lhs sum(n in Z, z^n) rhs 0 }", "identity d { lhs sum(n >= 0, z^n) rhs 1 / (1 - z) }"] {
        if validate(&parse(src).unwrap()).is_empty() {
            return Err(format!("accepted {src}"));
        }
    }
    let codes = [
        exit_code(&["verify", "weak1"]),
        exit_code(&["verify", "tests/fixtures/weak1_broken.idn"]),
        exit_code(&["verify", "tests/fixtures/divergent.idn"]),
    ];
    if codes != [Some(0), Some(1), Some(2)] {
        return Err(format!("exit codes {codes:?}"));
    }
    Ok(format!("{} specs round-trip, 2 divergent specimens rejected, exit codes 0/1/2", specs.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check); 11] = [
        ("finite identity for n <= 12", basic_finite_identity),
        ("key pair definition", key_pair_definition),
        ("weak-form identities", weak_forms),
        ("parameter families", parameter_families),
        ("multisum families and specialisations", multisum_families),
        ("lattice double sums", lattice_results),
        ("Hecke-type double sums", hecke_results),
        ("transform closure", transform_closure),
        ("oracle equivalence", oracle_equivalence),
        ("specialisation coherence", specialisation_coherence),
        ("DSL round trip, validator, exit codes", dsl_contract),
    ];
    let mut failed = Vec::new();
    for (i, (label, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let t = t.elapsed();
        match &outcome {
            Ok(detail) => println!("criterion {:2} PASS  {label}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                println!("criterion {:2} FAIL  {label}: {why} [{t:.2?}]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
