use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bailey-forge"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, err) = run(&a);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}")))
}

fn coefficients(v: &Value) -> Vec<String> {
    v["terms"].as_array().unwrap().iter().map(|t| t["coeff"].as_str().unwrap().to_string()).collect()
}

#[test]
fn verify_passes_a_catalog_identity() {
    let (code, out, _) = run(&["verify", "weak1", "--order", "50"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS  weak1"), "{out}");
}

#[test]
fn verify_fixed_parameters() {
    let (code, v) = json(&["verify", "bbpi1", "--params", "m=13,a=2", "--order", "78"]);
    assert_eq!(code, 0);
    let r = &v.as_array().unwrap()[0];
    assert_eq!(r["params"]["m"], 13);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["path"], "dsl");
}

#[test]
fn injected_fault_exits_one_with_coordinates() {
    let (code, v) = json(&["verify", "tests/fixtures/weak1_broken.idn"]);
    assert_eq!(code, 1);
    let m = &v[0]["mismatch"];
    assert_eq!(v[0]["status"], "fail");
    assert_eq!((m["q_exp_num"].as_i64(), m["q_exp_den"].as_i64(), m["z_exp"].as_i64()), (Some(7), Some(1), Some(0)));
    assert_eq!((m["lhs"].as_str(), m["rhs"].as_str()), (Some("15"), Some("16")));
}

#[test]
fn a_failure_among_passes_still_exits_one() {
    let (code, out, _) =
        run(&["verify", "weak1", "tests/fixtures/weak1_broken.idn", "tests/fixtures/euler_pentagonal.idn"]);
    assert_eq!(code, 1);
    assert!(out.contains("12 checked: 11 pass, 1 fail, 0 error"), "{out}");
}

#[test]
fn bad_specs_exit_two() {
    let (code, _, err) = run(&["verify", "tests/fixtures/divergent.idn"]);
    assert_eq!(code, 2);
    assert!(err.contains("divergent.idn:2:7"), "{err}");
    let (code, _, err) = run(&["verify", "tests/fixtures/syntax_error.idn"]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax_error.idn:3:3"), "{err}");
    assert_eq!(run(&["verify", "no_such_identity"]).0, 2);
    assert_eq!(run(&["verify", "bbpi1", "--params", "m=99"]).0, 2);
    assert_eq!(run(&["verify", "weak1", "--frobnicate"]).0, 2);
    assert_eq!(run(&["expand", "sum(n >= 0, z^n)"]).0, 2);
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["verify", "bbpi4", "--params", "m=3", "--jobs", "4"];
    let strip = |mut v: Value| {
        for r in v.as_array_mut().unwrap() {
            r["duration_ms"] = Value::Null;
        }
        serde_json::to_string(&v).unwrap()
    };
    let a = strip(json(&args).1);
    let b = strip(json(&args).1);
    assert_eq!(a, b);
    let (_, v) = json(&args);
    let r = v[0].as_object().unwrap();
    for k in ["name", "params", "scale", "order", "status", "mismatch", "duration_ms", "path"] {
        assert!(r.contains_key(k), "missing {k}");
    }
}

#[test]
fn sweep_applies_the_order_rule() {
    let (code, v) = json(&["sweep", "bbpi5-2", "--grid", "m=2..10,a=0..m", "--order", "60"]);
    assert_eq!(code, 0);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), (2..=10).map(|m| m + 1).sum::<usize>());
    assert_eq!(v["summary"]["pass"], reports.len());
    for r in reports {
        assert_eq!(r["scale"], 2);
        let m = r["params"]["m"].as_i64().unwrap();
        assert!(r["order"].as_i64().unwrap() >= 60.max(4 * 2 * m), "{r}");
    }
}

#[test]
fn sweep_over_depth() {
    let (code, out, _) = run(&["sweep", "AG1", "--grid", "k=1..4", "--order", "50", "--jobs", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    for (i, k) in (1..=4).enumerate() {
        assert!(lines[i].starts_with(&format!("PASS  AG1 [k={k}]")), "{out}");
    }
}

#[test]
fn expand_partitions() {
    let (code, out, _) = run(&["expand", "1/theta(q;q)", "--order", "5"]);
    assert_eq!(code, 0);
    let cs: Vec<&str> = out.lines().take(6).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(cs, ["1", "1", "2", "3", "5", "7"]);
}

#[test]
fn expand_gaussian_binomial() {
    let (code, v) = json(&["expand", "qbinom(4,2)"]);
    assert_eq!(code, 0);
    assert_eq!(coefficients(&v), ["1", "1", "2", "1", "1"]);
}

#[test]
fn expand_raw_sum_keeps_the_half() {
    let (code, out, _) = run(&["expand", "weak2", "--side", "rhs", "--order", "4", "--raw-sum"]);
    assert_eq!(code, 0);
    assert!(out.lines().next().unwrap().ends_with("1/2"), "{out}");
    let (_, full, _) = run(&["expand", "weak2", "--side", "rhs", "--order", "4"]);
    assert!(!full.contains("1/2"), "{full}");
}

#[test]
fn expand_oracle_matches() {
    for input in ["weak1", "Appell1", "hecktype1"] {
        for side in ["lhs", "rhs"] {
            let (c1, a) = json(&["expand", input, "--side", side, "--order", "25"]);
            let (c2, b) = json(&["expand", input, "--side", side, "--order", "25", "--oracle"]);
            assert_eq!((c1, c2), (0, 0));
            assert_eq!(a, b, "{input} {side}");
        }
    }
}

#[test]
fn verify_through_the_oracle() {
    let (code, v) = json(&["verify", "weak1", "--order", "30", "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(v[0]["path"], "oracle");
}

#[test]
fn builtin_checks_report_their_path() {
    let (code, v) = json(&["verify", "key_pair"]);
    assert_eq!(code, 0);
    assert_eq!(v[0]["path"], "builtin-engine");
}

#[test]
fn list_shows_every_target() {
    let (code, v) = json(&["list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    let want: Vec<String> = bailey_forge::catalog::manifest().into_iter().map(|(n, _)| n).collect();
    assert_eq!(names, want);
}
