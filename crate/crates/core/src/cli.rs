//! The `bailey-forge` command line: `verify`, `sweep`, `expand`, `list`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_integer::Integer;
use serde::Serialize;

use crate::catalog::{catalog, entry_jobs, find, spec_jobs, Entry, Target};
use crate::dsl::{
    self, context_for, parse_expr, parse_file, validate, Env, Expr, ExprKind, IdentitySpec, IntExpr, Param, Side,
    ZBinding, DEFAULT_ORDER,
};
use crate::error::{Error, Result};
use crate::report::{entry_work, exit_code, run_all, RunOptions, Status, VerificationReport, Work};
use crate::series::QSeries;
use crate::special::brute_force_expr;

#[derive(Parser, Debug)]
#[command(name = "bailey-forge", version, about = "Exact coefficient checks of q-series identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify catalog identities or `.idn` files.
    Verify {
        /// Catalog names or paths to `.idn` files.
        #[arg(required = true)]
        targets: Vec<String>,
        /// Truncation order in scaled units; defaults to each identity's own.
        #[arg(long)]
        order: Option<i64>,
        /// Fixed parameters, e.g. `m=13,a=2`. Unfixed parameters run over their ranges.
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Verify one target over a parameter grid.
    Sweep {
        target: String,
        /// Grid such as `m=1..13,a=0..m`; defaults to the declared ranges.
        #[arg(long)]
        grid: Option<String>,
        /// Minimum order; raised to four periods of the largest product on the right.
        #[arg(long)]
        order: Option<i64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the coefficient table of an expression or of one side of a target.
    Expand {
        /// An expression such as `1/theta(q;q)`, a catalog name or an `.idn` file.
        input: String,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        params: Option<String>,
        #[arg(long, value_enum, default_value_t = SideArg::Lhs)]
        side: SideArg,
        /// Expand only the outermost summation of the side, without its prefactor.
        #[arg(long)]
        raw_sum: bool,
        /// Expand with the brute-force term enumerator.
        #[arg(long)]
        oracle: bool,
        /// Scale of a bare expression: source `q` is `q^(1/scale)`.
        #[arg(long)]
        scale: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the catalog.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Evaluate both sides with the brute-force term enumerator.
    #[arg(long)]
    oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Lhs,
    Rhs,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = match cli.cmd {
        Command::Verify { targets, order, params, run } => verify(&targets, order, params.as_deref(), &run),
        Command::Sweep { target, grid, order, run } => sweep(&target, grid.as_deref(), order, &run),
        Command::Expand { input, order, params, side, raw_sum, oracle, scale, format } => {
            let side = if side == SideArg::Lhs { Side::Lhs } else { Side::Rhs };
            expand(&input, order, params.as_deref(), side, raw_sum, oracle, scale, format)
        }
        Command::List { format } => list(format),
    };
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn threads(run: &RunArgs) -> usize {
    run.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// `a=1,b=-2` as a map.
fn parse_params(s: &str) -> Result<BTreeMap<String, i64>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected name=value, found `{part}`")))?;
        let v: i64 =
            v.trim().parse().map_err(|_| Error::InvalidArgument(format!("`{}` is not an integer", v.trim())))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// An integer such as `m`, `2*m-1` or `-3`, over names bound earlier in the grid.
fn grid_value(s: &str, env: &BTreeMap<String, i64>) -> Result<i64> {
    let bad = || Error::InvalidArgument(format!("cannot read grid bound `{s}`"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut total = 0i64;
    let mut sign = 1;
    let mut i = 0;
    let b = t.as_bytes();
    if b.is_empty() {
        return Err(bad());
    }
    while i < b.len() {
        if b[i] == b'+' || b[i] == b'-' {
            sign = if b[i] == b'-' { -sign } else { sign };
            i += 1;
            continue;
        }
        let end = b[i..].iter().position(|&c| c == b'+' || c == b'-').map_or(b.len(), |p| i + p);
        let mut prod = 1i64;
        for f in t[i..end].split('*') {
            prod *= match f.parse::<i64>() {
                Ok(n) => n,
                Err(_) => *env.get(f).ok_or_else(bad)?,
            };
        }
        total += sign * prod;
        sign = 1;
        i = end;
    }
    Ok(total)
}

/// Every point of a grid like `m=1..13,a=0..m`, in lexicographic order.
fn parse_grid(s: &str) -> Result<Vec<BTreeMap<String, i64>>> {
    let mut axes = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, r) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected name=lo..hi, found `{part}`")))?;
        let (lo, hi) = r.split_once("..").unwrap_or((r, r));
        axes.push((k.trim().to_string(), lo.to_string(), hi.to_string()));
    }
    let mut points = vec![BTreeMap::new()];
    for (k, lo, hi) in &axes {
        let mut next = Vec::new();
        for p in &points {
            let (a, b) = (grid_value(lo, p)?, grid_value(hi, p)?);
            for v in a..=b {
                let mut q = p.clone();
                q.insert(k.clone(), v);
                next.push(q);
            }
        }
        points = next;
    }
    Ok(points)
}

fn is_file(t: &str) -> bool {
    t.ends_with(".idn") || std::path::Path::new(t).is_file()
}

/// The validated identities of a `.idn` file.
fn load_file(path: &str) -> Result<Vec<Arc<IdentitySpec>>> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    let specs = parse_file(&src).map_err(|e| Error::Io(format!("{path}:{e}")))?;
    let mut out = Vec::new();
    for s in specs {
        let findings = validate(&s);
        if let Some(f) = findings.first() {
            return Err(Error::Io(format!("{path}:{f} (in {})", s.name)));
        }
        out.push(Arc::new(s));
    }
    Ok(out)
}

fn lookup(name: &str) -> Result<&'static Entry> {
    find(name).ok_or_else(|| Error::UnknownTarget(name.to_string()))
}

fn target_work(t: &str, fixed: &BTreeMap<String, i64>) -> Result<Vec<Work>> {
    if is_file(t) {
        let mut out = Vec::new();
        for s in load_file(t)? {
            out.extend(spec_jobs(&s, fixed, &[])?.into_iter().map(Work::Spec));
        }
        Ok(out)
    } else {
        entry_work(lookup(t)?, fixed)
    }
}

fn print_reports(reports: &[VerificationReport], format: Format, summary: bool) -> Result<()> {
    let mut out = String::new();
    match format {
        Format::Json => {
            let body = if summary {
                serde_json::to_string_pretty(&SweepJson { reports, summary: Summary::of(reports) })
            } else {
                serde_json::to_string_pretty(reports)
            };
            let _ = writeln!(out, "{}", body.map_err(|e| Error::Io(e.to_string()))?);
        }
        Format::Text => {
            for r in reports {
                let _ = writeln!(out, "{r}");
            }
            if summary || reports.len() > 1 {
                let _ = writeln!(out, "{}", Summary::of(reports));
            }
        }
    }
    emit(&out);
    Ok(())
}

#[derive(Serialize)]
struct SweepJson<'a> {
    reports: &'a [VerificationReport],
    summary: Summary,
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    pass: usize,
    fail: usize,
    error: usize,
    slowest: Option<Slowest>,
}

#[derive(Serialize)]
struct Slowest {
    name: String,
    params: BTreeMap<String, i64>,
    duration_ms: f64,
}

impl Summary {
    fn of(reports: &[VerificationReport]) -> Summary {
        let count = |s| reports.iter().filter(|r| r.status == s).count();
        let slowest = reports.iter().max_by(|a, b| a.duration_ms.total_cmp(&b.duration_ms)).map(|r| Slowest {
            name: r.name.clone(),
            params: r.params.clone(),
            duration_ms: r.duration_ms,
        });
        Summary {
            total: reports.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            error: count(Status::Error),
            slowest,
        }
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} checked: {} pass, {} fail, {} error", self.total, self.pass, self.fail, self.error)?;
        if let Some(s) = &self.slowest {
            let ps: Vec<String> = s.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "; slowest {}", s.name)?;
            if !ps.is_empty() {
                write!(f, " [{}]", ps.join(","))?;
            }
            write!(f, " {:.1} ms", s.duration_ms)?;
        }
        Ok(())
    }
}

fn verify(targets: &[String], order: Option<i64>, params: Option<&str>, run: &RunArgs) -> Result<i32> {
    let fixed = params.map(parse_params).transpose()?.unwrap_or_default();
    let mut work = Vec::new();
    for t in targets {
        work.extend(target_work(t, &fixed)?);
    }
    let opts = RunOptions { order, oracle: run.oracle, order_rule: false };
    let reports = run_all(&work, opts, threads(run))?;
    print_reports(&reports, run.format, false)?;
    Ok(exit_code(&reports))
}

fn sweep(target: &str, grid: Option<&str>, order: Option<i64>, run: &RunArgs) -> Result<i32> {
    let points = match grid {
        Some(g) => parse_grid(g)?,
        None => vec![BTreeMap::new()],
    };
    let mut work = Vec::new();
    for p in &points {
        work.extend(target_work(target, p)?);
    }
    let opts = RunOptions { order, oracle: run.oracle, order_rule: true };
    let reports = run_all(&work, opts, threads(run))?;
    print_reports(&reports, run.format, true)?;
    Ok(exit_code(&reports))
}

/// The first summation met in a pre-order walk.
fn outer_sum(e: &Expr) -> Option<&Expr> {
    match e.kind {
        ExprKind::Sum { .. } | ExprKind::AltSum { .. } | ExprKind::Appell { .. } | ExprKind::Hecke { .. } => Some(e),
        _ => e.children().into_iter().find_map(outer_sum),
    }
}

/// A spec whose left side is a bare expression, for validation and evaluation.
fn expression_spec(text: &str, fixed: &BTreeMap<String, i64>, scale: i64, order: i64) -> Result<IdentitySpec> {
    let names: Vec<String> = fixed.keys().cloned().collect();
    let lhs = parse_expr(text, &names)?;
    let zero = Expr::new(ExprKind::Int(0), lhs.span);
    let params =
        fixed.iter().map(|(k, v)| Param { name: k.clone(), lo: IntExpr::lit(*v), hi: IntExpr::lit(*v) }).collect();
    Ok(IdentitySpec {
        name: "expression".into(),
        params,
        scale,
        order,
        z: ZBinding::Formal,
        span: lhs.span,
        lhs,
        rhs: zero,
    })
}

#[derive(Serialize)]
struct Coefficient {
    q_exp_num: i64,
    q_exp_den: i64,
    z_exp: i64,
    coeff: String,
}

#[derive(Serialize)]
struct Expansion {
    name: String,
    params: BTreeMap<String, i64>,
    scale: i64,
    order: i64,
    terms: Vec<Coefficient>,
}

fn q_label(e: i64, d: i64) -> String {
    let g = e.gcd(&d).max(1);
    if d / g == 1 {
        format!("q^{}", e / g)
    } else {
        format!("q^({}/{})", e / g, d / g)
    }
}

fn laurent_text(s: &QSeries, q: i64) -> String {
    let Some(l) = s.at_q(q) else { return "0".into() };
    let mut out = String::new();
    for (z, c) in l.iter() {
        let neg = c.is_negative();
        let a = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            out.push_str(if neg { "-" } else { "" });
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let zs = match z {
            0 => String::new(),
            1 => "z".into(),
            _ => format!("z^{z}"),
        };
        match (a.is_one(), zs.is_empty()) {
            (_, true) => out.push_str(&a.to_string()),
            (true, false) => out.push_str(&zs),
            (false, false) => {
                let _ = write!(out, "{a}*{zs}");
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn expand(
    input: &str,
    order: Option<i64>,
    params: Option<&str>,
    side: Side,
    raw_sum: bool,
    oracle: bool,
    scale: Option<i64>,
    format: Format,
) -> Result<i32> {
    let fixed = params.map(parse_params).transpose()?.unwrap_or_default();
    let (spec, job_params, env): (Arc<IdentitySpec>, BTreeMap<String, i64>, Env) = if is_file(input) {
        let specs = load_file(input)?;
        if specs.len() != 1 {
            return Err(Error::InvalidArgument(format!("{input} holds {} identities; expand needs one", specs.len())));
        }
        let job = spec_jobs(&specs[0], &fixed, &[])?.remove(0);
        (job.spec, job.params, job.env)
    } else if let Some(entry) = find(input) {
        if let Target::Builtin(_) = entry.target {
            return Err(Error::InvalidArgument(format!("{} is an engine check with no sides", entry.name)));
        }
        let job = entry_jobs(entry, &fixed)?.remove(0);
        (job.spec, job.params, job.env)
    } else {
        if scale.is_some_and(|d| d < 1) {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        let spec = expression_spec(input, &fixed, scale.unwrap_or(1), order.unwrap_or(DEFAULT_ORDER))?;
        if let Some(f) = validate(&spec).first() {
            return Err(Error::InvalidArgument(f.to_string()));
        }
        let env: Env = fixed.iter().map(|(k, v)| (k.clone(), *v)).collect();
        (Arc::new(spec), fixed.clone(), env)
    };
    let mut e = spec.side(side);
    if raw_sum {
        e = outer_sum(e).ok_or_else(|| Error::InvalidArgument("that side has no summation".into()))?;
    }
    let ctx = context_for(&spec, &env, order)?;
    let s = if oracle { brute_force_expr(e, &env, &ctx)? } else { dsl::eval(e, &env, &ctx, ctx.order())? };
    let d = ctx.scale();
    let mut out = String::new();
    match format {
        Format::Json => {
            let terms = s
                .iter()
                .map(|(q, z, c)| {
                    let g = q.gcd(&d).max(1);
                    Coefficient { q_exp_num: q / g, q_exp_den: d / g, z_exp: z, coeff: c.to_string() }
                })
                .collect();
            let x = Expansion { name: spec.name.clone(), params: job_params, scale: d, order: ctx.order(), terms };
            let body = serde_json::to_string_pretty(&x).map_err(|e| Error::Io(e.to_string()))?;
            let _ = writeln!(out, "{body}");
        }
        Format::Text => {
            if let (Some(lo), Some(hi)) = (s.min_q_exp(), s.max_q_exp()) {
                for q in lo..=hi {
                    let _ = writeln!(out, "{:>10}  {}", q_label(q, d), laurent_text(&s, q));
                }
            } else {
                let _ = writeln!(out, "{:>10}  0", q_label(0, d));
            }
            let _ = writeln!(out, "exact through {}", q_label(ctx.order(), d));
        }
    }
    emit(&out);
    Ok(0)
}

#[derive(Serialize)]
struct Listing {
    name: String,
    kind: String,
    params: Vec<String>,
    summary: String,
}

fn list(format: Format) -> Result<i32> {
    let rows: Vec<Listing> = catalog()
        .iter()
        .map(|e| {
            let (kind, params) = match &e.target {
                Target::Spec(s) => ("identity".to_string(), s.params.iter().map(|p| p.name.clone()).collect()),
                Target::Family(f) => (format!("family k={}..{}", f.lo, f.hi), vec!["k".to_string()]),
                Target::Builtin(_) => ("engine check".to_string(), Vec::new()),
            };
            Listing { name: e.name.clone(), kind, params, summary: e.summary.clone() }
        })
        .collect();
    let mut out = String::new();
    match format {
        Format::Json => {
            let body = serde_json::to_string_pretty(&rows).map_err(|e| Error::Io(e.to_string()))?;
            let _ = writeln!(out, "{body}");
        }
        Format::Text => {
            for r in rows {
                let ps = if r.params.is_empty() { String::new() } else { format!("[{}]", r.params.join(",")) };
                let _ = writeln!(out, "{:<20} {:<16} {:<8} {}", r.name, r.kind, ps, r.summary);
            }
        }
    }
    emit(&out);
    Ok(0)
}
