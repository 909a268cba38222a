//! Combined invariant reports and their on-disk cache.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use log::info;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{fixture, s_candidates, skein_propagate, Fixture, InvarError, SkeinDeduction, SkeinInput, FIXTURE_IDS};
use crate::cobcat::FrobeniusSpec;
use crate::field::{FieldKind, F2, Q};
use crate::hfk11::build_cfk;
use crate::homalg::{hfk_hat_groups, s_from_lee, tau_from_cfk, BigradedGroups, Cfk};
use crate::linkdiag::{parse_expr, BuilderExpr, LinkDiagram};
use crate::poly::Poincare;
use crate::scan::{plan_order, scan_with, ScanOptions, DEFAULT_MAX_GENERATORS};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Kh,
    S,
    Hfk,
    Tau,
    Skein,
}

impl Task {
    pub const ALL: [Task; 5] = [Task::Kh, Task::S, Task::Hfk, Task::Tau, Task::Skein];

    pub fn name(self) -> &'static str {
        match self {
            Task::Kh => "kh",
            Task::S => "s",
            Task::Hfk => "hfk",
            Task::Tau => "tau",
            Task::Skein => "skein",
        }
    }

    /// Whether the task can run on `input` (without running it).
    pub fn applies_to(self, input: &ReportInput) -> bool {
        match (self, input) {
            (Task::Kh | Task::S, ReportInput::Expr(_)) => true,
            (Task::Kh | Task::S, ReportInput::Fixture(_)) => false,
            (Task::Hfk, _) => floer_source(input).is_some(),
            (Task::Tau, _) => tau_source(input).is_some(),
            (Task::Skein, _) => skein_n(input).is_some(),
        }
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Task::ALL.into_iter().find(|t| t.name() == s.trim()).ok_or_else(|| format!("unknown task `{s}`"))
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReportInput {
    Expr(BuilderExpr),
    Fixture(String),
}

impl ReportInput {
    /// Fixture ids take precedence over builder expressions.
    pub fn parse(text: &str) -> Result<Self, InvarError> {
        let t = text.trim();
        if FIXTURE_IDS.contains(&t) {
            return Ok(ReportInput::Fixture(t.to_string()));
        }
        Ok(ReportInput::Expr(parse_expr(t)?))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ReportInput::Expr(_) => "expr",
            ReportInput::Fixture(_) => "fixture",
        }
    }
}

impl fmt::Display for ReportInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportInput::Expr(e) => write!(f, "{e}"),
            ReportInput::Fixture(id) => f.write_str(id),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDescription {
    pub kind: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub pd: String,
    pub q_sign: i8,
    pub h_sign: i8,
    pub s_field: FieldKind,
    pub scan_plan: String,
    pub bigon_source: String,
    pub maslov_normalization: String,
    pub alexander_normalization: String,
    /// half-integer Maslov gradings stored as 2M
    pub hopf_maslov_doubled: bool,
    pub e0_parity: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            pd: "X(a,b,c,d): a incoming under-strand, ports counter-clockwise; positive iff over-strand runs d->b".into(),
            q_sign: 1,
            h_sign: 1,
            s_field: FieldKind::Q,
            scan_plan: "greedy minimal frontier".into(),
            bigon_source: "corner where the counter-clockwise boundary passes from alpha to beta".into(),
            maslov_normalization: "hat homology supported in M = 0".into(),
            alexander_normalization: "symmetric".into(),
            hopf_maslov_doubled: true,
            e0_parity: "both parities evaluated; parity-independent value used".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhResult {
    pub field: FieldKind,
    pub poincare: String,
    pub terms: usize,
    pub total_rank: u64,
    pub h0_support: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SResult {
    pub value: i32,
    pub genus_bound: Option<i64>,
    /// from the Khovanov support, when `kh` ran as well
    pub candidates: Option<Vec<i32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HfkResult {
    pub source: String,
    pub groups: BigradedGroups,
    pub maslov_doubled: bool,
    pub table: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauResult {
    pub value: i32,
    /// `cfk:<fixture>` or `skein`
    pub source: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kh: Option<KhResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<SResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hfk: Option<HfkResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau: Option<TauResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub skein: Option<SkeinDeduction>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub headline: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub version: u32,
    pub engine: String,
    pub input: InputDescription,
    pub tasks: Vec<Task>,
    pub conventions: Conventions,
    pub results: Results,
    /// seconds per task
    pub timings: BTreeMap<String, f64>,
    pub cache_key: String,
}

impl InvariantReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Serialization with timings cleared: identical inputs give identical
    /// bytes whether or not the report came from the cache.
    pub fn canonical_json(&self) -> String {
        InvariantReport { timings: BTreeMap::new(), ..self.clone() }.to_json()
    }
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub field: FieldKind,
    pub max_generators: usize,
    pub jobs: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { field: FieldKind::Q, max_generators: DEFAULT_MAX_GENERATORS, jobs: 1, cache_dir: None }
    }
}

pub fn cache_key(input: &ReportInput, tasks: &BTreeSet<Task>, opts: &ReportOptions) -> String {
    let desc = serde_json::json!({
        "version": REPORT_VERSION,
        "engine": engine(),
        "input": [input.kind(), input.to_string()],
        "tasks": tasks,
        "field": opts.field,
        "max_generators": opts.max_generators,
    });
    hex::encode(Sha256::digest(desc.to_string().as_bytes()))
}

fn engine() -> String {
    format!("khl-core {}", env!("CARGO_PKG_VERSION"))
}

/// Run `tasks` on `input`, consulting the cache; returns the report and
/// whether it was served from the cache.
pub fn run_report(
    input: &ReportInput,
    tasks: &BTreeSet<Task>,
    opts: &ReportOptions,
) -> Result<(InvariantReport, bool), InvarError> {
    for &t in tasks {
        if !t.applies_to(input) {
            return Err(InvarError::NotApplicable { task: t.name(), input: input.to_string() });
        }
    }
    let key = cache_key(input, tasks, opts);
    let path = opts.cache_dir.as_ref().map(|d| d.join(format!("{key}.json")));
    if let Some(p) = &path {
        if let Ok(text) = std::fs::read_to_string(p) {
            match serde_json::from_str::<InvariantReport>(&text) {
                Ok(r) if r.version == REPORT_VERSION && r.cache_key == key => {
                    info!("cache hit {}", p.display());
                    return Ok((r, true));
                }
                _ => info!("ignoring stale cache entry {}", p.display()),
            }
        }
    }
    let report = compute(input, tasks, opts, key)?;
    if let Some(p) = &path {
        write_atomic(p, &report.to_json())?;
    }
    Ok((report, false))
}

fn write_atomic(path: &Path, text: &str) -> Result<(), InvarError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("json.tmp.{}.{:?}", std::process::id(), std::thread::current().id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

enum Output {
    Kh(KhResult, Poincare),
    S(i32),
    Hfk(HfkResult),
    Tau(TauResult),
    Skein(SkeinDeduction),
}

fn compute(input: &ReportInput, tasks: &BTreeSet<Task>, opts: &ReportOptions, key: String) -> Result<InvariantReport, InvarError> {
    let diagram = match input {
        ReportInput::Expr(e) if tasks.contains(&Task::Kh) || tasks.contains(&Task::S) => Some(e.build()?),
        _ => None,
    };
    let run = |t: Task| -> Result<(Output, f64), InvarError> {
        let start = Instant::now();
        let out = run_task(t, input, diagram.as_ref(), opts)?;
        Ok((out, start.elapsed().as_secs_f64()))
    };
    let list: Vec<Task> = tasks.iter().copied().collect();
    let mut outs = Vec::with_capacity(list.len());
    for chunk in list.chunks(opts.jobs.max(1)) {
        if chunk.len() == 1 {
            outs.push((chunk[0], run(chunk[0])?));
            continue;
        }
        let done: Vec<_> = std::thread::scope(|sc| {
            let handles: Vec<_> = chunk.iter().map(|&t| (t, sc.spawn(move || run(t)))).collect();
            handles.into_iter().map(|(t, h)| (t, h.join().expect("task thread panicked"))).collect()
        });
        for (t, r) in done {
            outs.push((t, r?));
        }
    }

    let mut results = Results::default();
    let mut timings = BTreeMap::new();
    let mut kh_poly = None;
    for (t, (out, secs)) in outs {
        timings.insert(t.name().to_string(), secs);
        match out {
            Output::Kh(r, p) => {
                results.kh = Some(r);
                kh_poly = Some(p);
            }
            Output::S(v) => {
                let genus_bound = match input {
                    ReportInput::Expr(e) => e.genus_bound(),
                    _ => None,
                };
                results.s = Some(SResult { value: v, genus_bound, candidates: None });
            }
            Output::Hfk(r) => results.hfk = Some(r),
            Output::Tau(r) => results.tau = Some(r),
            Output::Skein(d) => results.skein = Some(d),
        }
    }
    if let (Some(s), Some(p)) = (results.s.as_mut(), kh_poly.as_ref()) {
        if let Some(g) = s.genus_bound {
            let support: BTreeSet<i32> = p.q_support(0).into_iter().collect();
            s.candidates = Some(s_candidates(&support, g)?.into_iter().collect());
        }
    }
    if let (Some(s), Some(tau)) = (&results.s, &results.tau) {
        let rel = if s.value == 2 * tau.value { "=" } else { "!=" };
        results.headline = Some(format!("s = {}, tau = {} ({}): s {rel} 2*tau", s.value, tau.value, tau.source));
    }
    Ok(InvariantReport {
        version: REPORT_VERSION,
        engine: engine(),
        input: InputDescription { kind: input.kind().into(), text: input.to_string() },
        tasks: list,
        conventions: Conventions::default(),
        results,
        timings,
        cache_key: key,
    })
}

fn run_task(t: Task, input: &ReportInput, diagram: Option<&LinkDiagram>, opts: &ReportOptions) -> Result<Output, InvarError> {
    let na = || InvarError::NotApplicable { task: t.name(), input: input.to_string() };
    let scan_opts = ScanOptions { max_generators: opts.max_generators, check_invariants: false };
    match t {
        Task::Kh => {
            let d = diagram.ok_or_else(na)?;
            let plan = plan_order(d);
            let p = match opts.field {
                FieldKind::Q => scan_with::<Q>(d, FrobeniusSpec::KHOVANOV, &plan, scan_opts)?.poincare()?,
                FieldKind::F2 => scan_with::<F2>(d, FrobeniusSpec::KHOVANOV, &plan, scan_opts)?.poincare()?,
            };
            let r = KhResult {
                field: opts.field,
                poincare: p.to_string(),
                terms: p.num_terms(),
                total_rank: p.total_rank(),
                h0_support: p.q_support(0),
            };
            Ok(Output::Kh(r, p))
        }
        Task::S => {
            let d = diagram.ok_or_else(na)?;
            let out = scan_with::<Q>(d, FrobeniusSpec::LEE, &plan_order(d), scan_opts)?;
            Ok(Output::S(s_from_lee(&out)?))
        }
        Task::Hfk => {
            let (id, fx) = floer_source(input).ok_or_else(na)?;
            let (groups, doubled) = match fx? {
                Fixture::Cfk(c) => (hfk_hat_groups(&c)?, false),
                Fixture::Diagram(d) => (hfk_hat_groups(&build_cfk(&d)?)?, false),
                Fixture::Table { groups, doubled } => (groups, doubled),
            };
            let table = groups.to_string();
            Ok(Output::Hfk(HfkResult { source: id.to_string(), groups, maslov_doubled: doubled, table }))
        }
        Task::Tau => match tau_source(input).ok_or_else(na)? {
            TauSource::Cfk(id, c) => Ok(Output::Tau(TauResult { value: tau_from_cfk(&c?)?, source: format!("cfk:{id}") })),
            TauSource::Skein(n, t) => {
                let d = skein_propagate(SkeinInput::for_torus(n)?)?;
                Ok(Output::Tau(TauResult { value: d.tau_at(t), source: "skein".into() }))
            }
        },
        Task::Skein => Ok(Output::Skein(skein_propagate(SkeinInput::for_torus(skein_n(input).ok_or_else(na)?)?)?)),
    }
}

/// Bundled knot Floer data standing in for an input.
fn floer_source(input: &ReportInput) -> Option<(&'static str, Result<Fixture, InvarError>)> {
    let id: &'static str = match input {
        ReportInput::Fixture(id) => FIXTURE_IDS.into_iter().find(|f| f == id)?,
        ReportInput::Expr(BuilderExpr::Unknot) => "unknot-11",
        ReportInput::Expr(e) => match (e.as_torus_knot_n(), e.as_positive_double_of_torus()) {
            (Some(0), _) => "unknot-11",
            (Some(1), _) => "t23-11",
            (Some(2), _) => "t25-11",
            (Some(3), _) => "t27-11",
            (_, Some((1, 6))) => "d6-cfk",
            (_, Some((n, t))) if (1..=4).contains(&n) && t == 4 * n + 2 => ["kstart-1", "kstart-2", "kstart-3", "kstart-4"][n as usize - 1],
            _ => return None,
        },
    };
    Some((id, fixture(id)))
}

enum TauSource {
    Cfk(&'static str, Result<Cfk, InvarError>),
    Skein(i64, i64),
}

fn tau_source(input: &ReportInput) -> Option<TauSource> {
    if let ReportInput::Expr(e) = input {
        if let Some((n, t)) = e.as_positive_double_of_torus() {
            if n >= 1 {
                return Some(TauSource::Skein(n, t));
            }
        }
    }
    let (id, fx) = floer_source(input)?;
    match fx {
        Ok(Fixture::Cfk(c)) => Some(TauSource::Cfk(id, Ok(c))),
        Ok(Fixture::Diagram(d)) => Some(TauSource::Cfk(id, build_cfk(&d).map_err(InvarError::from))),
        Ok(Fixture::Table { .. }) => None,
        Err(e) => Some(TauSource::Cfk(id, Err(e))),
    }
}

/// `n` for inputs in the family D_+(T(2, 2n+1), t).
fn skein_n(input: &ReportInput) -> Option<i64> {
    match input {
        ReportInput::Expr(e) => e.as_positive_double_of_torus().map(|p| p.0).filter(|&n| n >= 1),
        ReportInput::Fixture(id) if id == "d6-cfk" => Some(1),
        ReportInput::Fixture(id) => id.strip_prefix("kstart-")?.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tasks(ts: &[Task]) -> BTreeSet<Task> {
        ts.iter().copied().collect()
    }

    #[test]
    fn d6_fixture_report() {
        let input = ReportInput::parse("d6-cfk").unwrap();
        let (r, cached) = run_report(&input, &tasks(&[Task::Hfk, Task::Tau, Task::Skein]), &ReportOptions::default()).unwrap();
        assert!(!cached);
        let hfk = r.results.hfk.as_ref().unwrap();
        assert_eq!(hfk.groups, super::super::kstart_table(1));
        assert_eq!(r.results.tau, Some(TauResult { value: 0, source: "cfk:d6-cfk".into() }));
        assert_eq!(r.results.skein.as_ref().unwrap().t_tau, 1);
        let back: InvariantReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn unknot_report() {
        let input = ReportInput::parse("torus(2,1)").unwrap();
        let all: BTreeSet<Task> = Task::ALL.into_iter().filter(|t| t.applies_to(&input)).collect();
        assert_eq!(all, tasks(&[Task::Kh, Task::S, Task::Hfk, Task::Tau]));
        let (r, _) = run_report(&input, &all, &ReportOptions { jobs: 2, ..Default::default() }).unwrap();
        assert_eq!(r.results.kh.as_ref().unwrap().poincare, "q^-1 + q");
        assert_eq!(r.results.s.as_ref().unwrap().value, 0);
        assert_eq!(r.results.s.as_ref().unwrap().candidates, Some(vec![0]));
        assert_eq!(r.results.tau.as_ref().unwrap().value, 0);
        assert!(matches!(
            run_report(&input, &tasks(&[Task::Skein]), &ReportOptions::default()),
            Err(InvarError::NotApplicable { task: "skein", .. })
        ));
    }

    #[test]
    fn keys_depend_on_everything() {
        let a = ReportInput::parse("torus(2,3)").unwrap();
        let b = ReportInput::parse("torus(2,5)").unwrap();
        let o = ReportOptions::default();
        let k = cache_key(&a, &tasks(&[Task::Kh]), &o);
        assert_eq!(k, cache_key(&a, &tasks(&[Task::Kh]), &o));
        assert_ne!(k, cache_key(&b, &tasks(&[Task::Kh]), &o));
        assert_ne!(k, cache_key(&a, &tasks(&[Task::Kh, Task::S]), &o));
        assert_ne!(k, cache_key(&a, &tasks(&[Task::Kh]), &ReportOptions { field: FieldKind::F2, ..o.clone() }));
    }
}
