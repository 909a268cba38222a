//! Bundled fixtures, the skein deduction for twisted doubles, the
//! s-candidates argument and combined reports.

mod report;
mod skein;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::hfk11::{HfkError, OneOneDiagram};
use crate::homalg::{BigradedGroups, Cfk, HomError};
use crate::linkdiag::DiagramError;
use crate::scan::ScanError;

pub use report::{
    cache_key, run_report, Conventions, HfkResult, InvariantReport, KhResult, ReportInput, ReportOptions, Results, SResult, Task,
    TauResult, REPORT_VERSION,
};
pub use skein::{skein_propagate, F2Status, SkeinDeduction, SkeinInput};

#[derive(Debug, Error)]
pub enum InvarError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Homology(#[from] HomError),
    #[error(transparent)]
    Floer(#[from] HfkError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("table line {line}: {msg}")]
    Table { line: usize, msg: String },
    #[error("task `{task}` does not apply to `{input}`")]
    NotApplicable { task: &'static str, input: String },
    #[error("skein deduction: {0}")]
    Skein(String),
    #[error("empty grading table")]
    EmptyTable,
    #[error("no s candidate in [-{bound2}, {bound2}] from support {support:?}", bound2 = 2 * .bound)]
    NoCandidates { support: Vec<i32>, bound: i64 },
}

const D6_CFK: &str = include_str!("../../fixtures/d6.cfk");
const HOPF_HFK: &str = include_str!("../../fixtures/hopf.hfk");
const KSTART: [&str; 4] = [
    include_str!("../../fixtures/kstart-1.hfk"),
    include_str!("../../fixtures/kstart-2.hfk"),
    include_str!("../../fixtures/kstart-3.hfk"),
    include_str!("../../fixtures/kstart-4.hfk"),
];
const DIAGRAMS: [(&str, &str); 5] = [
    ("unknot-11", include_str!("../../fixtures/unknot.11")),
    ("t23-11", include_str!("../../fixtures/t23.11")),
    ("t25-11", include_str!("../../fixtures/t25.11")),
    ("t27-11", include_str!("../../fixtures/t27.11")),
    ("fig8-11", include_str!("../../fixtures/fig8.11")),
];

pub const FIXTURE_IDS: [&str; 11] =
    ["d6-cfk", "hopf-hfk", "kstart-1", "kstart-2", "kstart-3", "kstart-4", "unknot-11", "t23-11", "t25-11", "t27-11", "fig8-11"];

#[derive(Clone, Debug)]
pub enum Fixture {
    Cfk(Cfk),
    /// ranks per (A, M); `doubled` when M is stored as 2M
    Table { groups: BigradedGroups, doubled: bool },
    Diagram(OneOneDiagram),
}

pub fn fixture(id: &str) -> Result<Fixture, InvarError> {
    match id {
        "d6-cfk" => Ok(Fixture::Cfk(D6_CFK.parse()?)),
        "hopf-hfk" => {
            let (groups, doubled) = parse_table(HOPF_HFK)?;
            Ok(Fixture::Table { groups, doubled })
        }
        _ => {
            if let Some(n) = id.strip_prefix("kstart-").and_then(|n| n.parse::<usize>().ok()) {
                if (1..=4).contains(&n) {
                    let (groups, doubled) = parse_table(KSTART[n - 1])?;
                    return Ok(Fixture::Table { groups, doubled });
                }
            }
            let text = DIAGRAMS.iter().find(|d| d.0 == id).ok_or_else(|| InvarError::UnknownFixture(id.into()))?.1;
            Ok(Fixture::Diagram(text.parse()?))
        }
    }
}

/// Rank tables: `rank A=<a> M=<m> r=<rank>` lines, or `M2=<2m>` for doubled
/// Maslov gradings; `#` starts a comment.
pub fn parse_table(text: &str) -> Result<(BigradedGroups, bool), InvarError> {
    let mut g = BigradedGroups::new();
    let mut doubled = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |msg: &str| InvarError::Table { line, msg: msg.into() };
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let [kw, a, m, r] = toks[..] else { return Err(err("expected `rank A=.. M=.. r=..`")) };
        if kw != "rank" {
            return Err(err("expected `rank`"));
        }
        let val = |t: &str, key: &str| t.strip_prefix(key).and_then(|v| v.parse::<i64>().ok());
        let a = val(a, "A=").ok_or_else(|| err("bad A"))?;
        let (m, d) = match (val(m, "M="), val(m, "M2=")) {
            (Some(m), _) => (m, false),
            (_, Some(m)) => (m, true),
            _ => return Err(err("bad M")),
        };
        if *doubled.get_or_insert(d) != d {
            return Err(err("mixed M and M2 keys"));
        }
        let r = val(r, "r=").filter(|r| *r >= 0).ok_or_else(|| err("bad rank"))?;
        g.add(a as i32, m as i32, r as u64);
    }
    Ok((g, doubled.unwrap_or(false)))
}

/// Expected knot Floer table at the starting twist `t = 4n + 2` for doubles
/// of `T(2, 2n+1)`.
pub fn kstart_table(n: i64) -> BigradedGroups {
    let n32 = n as i32;
    let mut g = BigradedGroups::new();
    g.add(1, 1, 2 * n as u64 + 2);
    g.add(0, 0, 4 * n as u64 + 5);
    g.add(-1, -1, 2 * n as u64 + 2);
    for k in 1..=n32 {
        g.add(1, 1 - 2 * k, 2);
        g.add(0, -2 * k, 4);
        g.add(-1, -1 - 2 * k, 2);
    }
    g
}

/// Top group at `t = 0`, known up to an overall grading shift `m`:
/// `F^{2n}_(m) ⊕ F²_(m-1) ⊕ F²_(m-3) ⊕ … ⊕ F²_(m-2n+1)`.
pub fn eftekhary_top(n: i64, m: i32) -> BigradedGroups {
    let mut g = BigradedGroups::new();
    g.add(1, m, 2 * n as u64);
    for k in 0..n as i32 {
        g.add(1, m - 1 - 2 * k, 2);
    }
    g
}

/// Rank in even Maslov grading at the top Alexander grading.
pub fn e_rank(g: &BigradedGroups) -> Result<u64, InvarError> {
    let top = g.top().ok_or(InvarError::EmptyTable)?;
    Ok(g.at(top).iter().filter(|(m, _)| m.rem_euclid(2) == 0).map(|e| e.1).sum())
}

/// Values `a + 1` with `a` and `a + 2` both in the `h = 0` quantum support,
/// restricted by the slice-genus bound `|s| ≤ 2 g₄`.
pub fn s_candidates(support: &BTreeSet<i32>, genus_bound: i64) -> Result<BTreeSet<i32>, InvarError> {
    let b = 2 * genus_bound;
    let out: BTreeSet<i32> =
        support.iter().filter(|&&a| support.contains(&(a + 2))).map(|a| a + 1).filter(|&s| (s as i64).abs() <= b).collect();
    if out.is_empty() {
        return Err(InvarError::NoCandidates { support: support.iter().copied().collect(), bound: genus_bound });
    }
    Ok(out)
}
