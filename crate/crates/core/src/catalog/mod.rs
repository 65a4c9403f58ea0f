//! The shipped identities: source files under `identities/`, depth-`k`
//! families generated as source text, and engine-level checks.

mod builtin;
mod families;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

pub use builtin::{closure_params, Builtin};

use crate::dsl::{bindings, parse, parse_file, IdentitySpec};
use crate::error::{Error, Result};

pub const SOURCES: [(&str, &str); 4] = [
    ("weak.idn", include_str!("../../identities/weak.idn")),
    ("families.idn", include_str!("../../identities/families.idn")),
    ("lattice.idn", include_str!("../../identities/lattice.idn")),
    ("hecke.idn", include_str!("../../identities/hecke.idn")),
];

pub const MANIFEST: &str = include_str!("../../identities/MANIFEST");

/// A family indexed by a summation depth `k`.
#[derive(Clone, Copy, Debug)]
pub struct Family {
    pub lo: i64,
    pub hi: i64,
    text: fn(i64) -> String,
}

impl Family {
    pub fn source(&self, k: i64) -> Result<String> {
        if k < self.lo || k > self.hi {
            return Err(Error::InvalidArgument(format!("k = {k} is outside {}..{}", self.lo, self.hi)));
        }
        Ok((self.text)(k))
    }

    pub fn instance(&self, k: i64) -> Result<IdentitySpec> {
        parse(&self.source(k)?)
    }
}

#[derive(Clone, Debug)]
pub enum Target {
    Spec(Arc<IdentitySpec>),
    Family(Family),
    Builtin(Builtin),
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub summary: String,
    pub target: Target,
}

/// One concrete verification: a spec and a full parameter binding.
#[derive(Clone, Debug)]
pub struct Job {
    pub spec: Arc<IdentitySpec>,
    /// Every parameter, including a family's `k`.
    pub params: BTreeMap<String, i64>,
    /// The spec's own parameters.
    pub env: HashMap<String, i64>,
}

fn families() -> Vec<(&'static str, Family)> {
    vec![
        ("AG1", Family { lo: 1, hi: 6, text: |k| families::ag1(k, false) }),
        ("AG1_i", Family { lo: 1, hi: 5, text: |k| families::ag1(k, true) }),
        ("AG2", Family { lo: 1, hi: 5, text: |k| families::ag2(k, false) }),
        ("AG2_i", Family { lo: 1, hi: 4, text: |k| families::ag2(k, true) }),
        ("djk_lattice", Family { lo: 2, hi: 4, text: |k| families::iterated_lattice(k, false) }),
        ("jouhet_lattice", Family { lo: 2, hi: 4, text: |k| families::iterated_lattice(k, true) }),
    ]
}

/// Manifest lines as `(name, summary)`.
pub fn manifest() -> Vec<(String, String)> {
    MANIFEST
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once('|'))
        .map(|(n, s)| (n.trim().to_string(), s.trim().to_string()))
        .collect()
}

/// The full catalog in manifest order. Panics if a shipped file fails to
/// parse, which the test suite rules out.
pub fn catalog() -> &'static [Entry] {
    static CATALOG: OnceLock<Vec<Entry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut targets: HashMap<String, Target> = HashMap::new();
        for (file, src) in SOURCES {
            for spec in parse_file(src).unwrap_or_else(|e| panic!("{file}: {e}")) {
                targets.insert(spec.name.clone(), Target::Spec(Arc::new(spec)));
            }
        }
        for (name, f) in families() {
            targets.insert(name.to_string(), Target::Family(f));
        }
        for b in Builtin::ALL {
            targets.insert(b.name().to_string(), Target::Builtin(b));
        }
        let mut out = Vec::new();
        for (name, summary) in manifest() {
            if let Some(target) = targets.remove(&name) {
                out.push(Entry { name, summary, target });
            }
        }
        let mut rest: Vec<_> = targets.into_iter().collect();
        rest.sort_by(|a, b| a.0.cmp(&b.0));
        out.extend(rest.into_iter().map(|(name, target)| Entry { name, summary: String::new(), target }));
        out
    })
}

fn canonical(name: &str) -> String {
    name.replace('-', "_")
}

/// Looks a target up by name; `-` and `_` are interchangeable.
pub fn find(name: &str) -> Option<&'static Entry> {
    let want = canonical(name);
    catalog().iter().find(|e| e.name == want)
}

/// Every job of a spec whose parameters agree with `fixed`.
pub fn spec_jobs(spec: &Arc<IdentitySpec>, fixed: &BTreeMap<String, i64>, extra: &[(String, i64)]) -> Result<Vec<Job>> {
    for k in fixed.keys() {
        if !spec.params.iter().any(|p| &p.name == k) && !extra.iter().any(|(n, _)| n == k) {
            return Err(Error::InvalidArgument(format!("{} has no parameter {k}", spec.name)));
        }
    }
    let mut out = Vec::new();
    for env in bindings(spec)? {
        if fixed.iter().any(|(k, v)| env.get(k).is_some_and(|x| x != v)) {
            continue;
        }
        let mut params: BTreeMap<String, i64> = extra.iter().cloned().collect();
        params.extend(env.iter().map(|(k, v)| (k.clone(), *v)));
        out.push(Job { spec: spec.clone(), params, env });
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument(format!("no binding of {} matches the given parameters", spec.name)));
    }
    Ok(out)
}

/// Jobs of a catalog entry; a family runs every `k` unless `k` is fixed.
pub fn entry_jobs(entry: &Entry, fixed: &BTreeMap<String, i64>) -> Result<Vec<Job>> {
    match &entry.target {
        Target::Spec(s) => spec_jobs(s, fixed, &[]),
        Target::Family(f) => {
            let ks: Vec<i64> = match fixed.get("k") {
                Some(&k) => vec![k],
                None => (f.lo..=f.hi).collect(),
            };
            let mut out = Vec::new();
            for k in ks {
                let spec = Arc::new(f.instance(k)?);
                out.extend(spec_jobs(&spec, fixed, &[("k".to_string(), k)])?);
            }
            Ok(out)
        }
        Target::Builtin(_) => {
            if fixed.is_empty() {
                Ok(Vec::new())
            } else {
                Err(Error::InvalidArgument(format!("{} takes no parameters", entry.name)))
            }
        }
    }
}
