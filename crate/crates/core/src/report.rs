//! Running catalog jobs and recording the outcome.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{entry_jobs, Builtin, Entry, Job, Target};
use crate::dsl::bounds::step_value;
use crate::dsl::{context_for, evaluate_both, Env, Expr, ExprKind, IdentitySpec, Side};
use crate::error::{Error, Result};
use crate::series::{Mismatch, QSeries};
use crate::special::brute_force_expand;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Path {
    Dsl,
    BuiltinEngine,
    Oracle,
}

/// First disagreeing coefficient. The q-exponent is `q_exp_num / q_exp_den`
/// in lowest terms, so scaled identities report true exponents.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MismatchReport {
    pub q_exp_num: i64,
    pub q_exp_den: i64,
    pub z_exp: i64,
    pub lhs: String,
    pub rhs: String,
}

impl MismatchReport {
    pub fn new(m: &Mismatch, scale: i64) -> Self {
        let g = m.q_exp.gcd(&scale).max(1);
        MismatchReport {
            q_exp_num: m.q_exp / g,
            q_exp_den: scale / g,
            z_exp: m.z_exp,
            lhs: m.lhs.to_string(),
            rhs: m.rhs.to_string(),
        }
    }
}

impl fmt::Display for MismatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q_exp_den == 1 {
            write!(f, "q^{}", self.q_exp_num)?;
        } else {
            write!(f, "q^({}/{})", self.q_exp_num, self.q_exp_den)?;
        }
        write!(f, " z^{}: lhs {}, rhs {}", self.z_exp, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: BTreeMap<String, i64>,
    pub scale: i64,
    pub order: i64,
    pub status: Status,
    pub mismatch: Option<MismatchReport>,
    pub duration_ms: f64,
    pub path: Path,
    /// Which comparison of a built-in check failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl VerificationReport {
    /// The JSON line with `duration_ms` zeroed, for determinism checks.
    pub fn without_timing(&self) -> VerificationReport {
        VerificationReport { duration_ms: 0.0, ..self.clone() }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        write!(f, "{status:5} {}", self.name)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, " [{}]", ps.join(","))?;
        }
        write!(f, "  scale {} order {}  {:.1} ms", self.scale, self.order, self.duration_ms)?;
        if self.path == Path::Oracle {
            write!(f, "  (oracle)")?;
        }
        if let Some(c) = &self.check {
            write!(f, "\n      in {c}")?;
        }
        if let Some(m) = &self.mismatch {
            write!(f, "\n      first mismatch at {m}")?;
        }
        if let Some(e) = &self.error {
            write!(f, "\n      {e}")?;
        }
        Ok(())
    }
}

/// How a job is evaluated.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Overrides the declared order.
    pub order: Option<i64>,
    /// Evaluates both sides with the brute-force expander.
    pub oracle: bool,
    /// Raises the order to four times the largest product step on the right.
    pub order_rule: bool,
}

/// A unit of verification work.
#[derive(Clone, Debug)]
pub enum Work {
    Spec(Job),
    Builtin(Builtin),
}

/// Everything a catalog entry checks, with parameters restricted to `fixed`.
pub fn entry_work(entry: &Entry, fixed: &BTreeMap<String, i64>) -> Result<Vec<Work>> {
    if let Target::Builtin(b) = entry.target {
        entry_jobs(entry, fixed)?;
        return Ok(vec![Work::Builtin(b)]);
    }
    Ok(entry_jobs(entry, fixed)?.into_iter().map(Work::Spec).collect())
}

/// Largest step of a product on `e` that does not depend on a summation index.
pub fn max_product_step(e: &Expr, env: &Env) -> i64 {
    let own = match &e.kind {
        ExprKind::Poch { step, .. } | ExprKind::Theta { step, .. } => step_value(step, env).unwrap_or(0),
        _ => 0,
    };
    e.children().into_iter().map(|c| max_product_step(c, env)).fold(own, i64::max)
}

/// The order a sweep uses: at least four product periods on the right.
pub fn rule_order(spec: &IdentitySpec, env: &Env, order: Option<i64>) -> i64 {
    order.unwrap_or(spec.order).max(4 * max_product_step(&spec.rhs, env))
}

fn both_sides(spec: &IdentitySpec, env: &Env, order: i64, oracle: bool) -> Result<(QSeries, QSeries)> {
    if oracle {
        let l = brute_force_expand(spec, Side::Lhs, env, Some(order))?;
        let r = brute_force_expand(spec, Side::Rhs, env, Some(order))?;
        Ok((l, r))
    } else {
        evaluate_both(spec, env, Some(order))
    }
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e4).round() / 10.0
}

pub fn run_job(job: &Job, opts: RunOptions) -> VerificationReport {
    let t = Instant::now();
    let spec = &job.spec;
    let order = if opts.order_rule { rule_order(spec, &job.env, opts.order) } else { opts.order.unwrap_or(spec.order) };
    let outcome = context_for(spec, &job.env, Some(order))
        .and_then(|_| both_sides(spec, &job.env, order, opts.oracle))
        .and_then(|(l, r)| l.equal_up_to(&r));
    let mut rep = VerificationReport {
        name: spec.name.clone(),
        params: job.params.clone(),
        scale: spec.scale,
        order,
        status: Status::Pass,
        mismatch: None,
        duration_ms: 0.0,
        path: if opts.oracle { Path::Oracle } else { Path::Dsl },
        check: None,
        error: None,
    };
    match outcome {
        Ok(None) => {}
        Ok(Some(m)) => {
            rep.status = Status::Fail;
            rep.mismatch = Some(MismatchReport::new(&m, spec.scale));
        }
        Err(e) => {
            rep.status = Status::Error;
            rep.error = Some(e.to_string());
        }
    }
    rep.duration_ms = ms(t);
    rep
}

pub fn run_builtin(b: Builtin, order: Option<i64>) -> VerificationReport {
    let t = Instant::now();
    let order = order.unwrap_or(b.default_order());
    let mut rep = VerificationReport {
        name: b.name().to_string(),
        params: BTreeMap::new(),
        scale: b.scale(),
        order,
        status: Status::Pass,
        mismatch: None,
        duration_ms: 0.0,
        path: Path::BuiltinEngine,
        check: None,
        error: None,
    };
    match b.run(order) {
        Ok(None) => {}
        Ok(Some((label, m))) => {
            rep.status = Status::Fail;
            rep.check = Some(label);
            rep.mismatch = Some(MismatchReport::new(&m, b.scale()));
        }
        Err(e) => {
            rep.status = Status::Error;
            rep.error = Some(e.to_string());
        }
    }
    rep.duration_ms = ms(t);
    rep
}

pub fn run(work: &Work, opts: RunOptions) -> VerificationReport {
    match work {
        Work::Spec(j) => run_job(j, opts),
        Work::Builtin(b) => run_builtin(*b, opts.order),
    }
}

/// Runs every item on up to `threads` workers; reports keep the input order.
pub fn run_all(work: &[Work], opts: RunOptions, threads: usize) -> Result<Vec<VerificationReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(pool.install(|| work.par_iter().map(|w| run(w, opts)).collect()))
}

/// 0 when everything passes, 2 on any error, otherwise 1.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Error) {
        2
    } else if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}
