//! Knot Floer complexes as text: generators with (A, M) gradings and
//! arrows labelled by basepoint multiplicities `(n_w, n_z)`, over F2.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{filtered_reduce, homology_ranks, BigradedGroups, Direction, FilteredComplex, HomError};
use crate::field::F2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfkGen {
    pub name: String,
    pub a: i32,
    pub m: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CfkArrow {
    pub src: usize,
    pub dst: usize,
    pub nw: u32,
    pub nz: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cfk {
    pub gens: Vec<CfkGen>,
    pub arrows: Vec<CfkArrow>,
}

impl Cfk {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_gen(&mut self, name: impl Into<String>, a: i32, m: i32) -> usize {
        self.gens.push(CfkGen { name: name.into(), a, m });
        self.gens.len() - 1
    }

    pub fn add_arrow(&mut self, src: usize, dst: usize, nw: u32, nz: u32) {
        self.arrows.push(CfkArrow { src, dst, nw, nz });
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    fn arrow_err(&self, a: &CfkArrow, msg: String) -> HomError {
        HomError::Arrow { src: self.gens[a.src].name.clone(), dst: self.gens[a.dst].name.clone(), msg }
    }

    /// Grading consistency of every arrow and `∂² = 0` over F2 in the full
    /// complex (compositions grouped by total multiplicity).
    pub fn check(&self) -> Result<(), HomError> {
        for a in &self.arrows {
            if a.src >= self.gens.len() || a.dst >= self.gens.len() {
                return Err(HomError::BadIndex(a.src.max(a.dst)));
            }
            let (x, y) = (&self.gens[a.src], &self.gens[a.dst]);
            let (nw, nz) = (a.nw as i32, a.nz as i32);
            if x.a - y.a != nz - nw {
                return Err(self.arrow_err(a, format!("A drops by {}, expected n_z - n_w = {}", x.a - y.a, nz - nw)));
            }
            if x.m - y.m != 1 - 2 * nw {
                return Err(self.arrow_err(a, format!("M drops by {}, expected 1 - 2n_w = {}", x.m - y.m, 1 - 2 * nw)));
            }
        }
        let mut out: HashMap<usize, Vec<&CfkArrow>> = HashMap::new();
        for a in &self.arrows {
            out.entry(a.src).or_default().push(a);
        }
        for (x, first) in &out {
            let mut acc: BTreeMap<(usize, u32, u32), bool> = BTreeMap::new();
            for a in first {
                for b in out.get(&a.dst).map(|v| v.as_slice()).unwrap_or(&[]) {
                    let e = acc.entry((b.dst, a.nw + b.nw, a.nz + b.nz)).or_insert(false);
                    *e = !*e;
                }
            }
            if acc.values().any(|&v| v) {
                return Err(HomError::DSquared(*x));
            }
        }
        Ok(())
    }

    /// Complex of arrows selected by `keep`, Maslov-graded, with the
    /// Alexander grading as filtration.
    fn sub_complex(&self, keep: impl Fn(&CfkArrow) -> bool) -> Result<FilteredComplex<F2>, HomError> {
        let mut c = FilteredComplex::new(Direction::Down);
        for g in &self.gens {
            c.add_gen(g.m, g.a);
        }
        for a in self.arrows.iter().filter(|a| keep(a)) {
            c.add_entry(a.src, a.dst, F2(true))?;
        }
        Ok(c)
    }

    /// The hat complex: arrows with `n_w = 0`, filtered by Alexander grading.
    pub fn hat_complex(&self) -> Result<FilteredComplex<F2>, HomError> {
        self.sub_complex(|a| a.nw == 0)
    }

    /// The associated graded complex: arrows with `n_w = n_z = 0`.
    pub fn graded_complex(&self) -> Result<FilteredComplex<F2>, HomError> {
        self.sub_complex(|a| a.nw == 0 && a.nz == 0)
    }

    /// Shift every Maslov grading by `dm` and Alexander grading by `da`.
    pub fn shift(&mut self, da: i32, dm: i32) {
        for g in &mut self.gens {
            g.a += da;
            g.m += dm;
        }
    }
}

impl FromStr for Cfk {
    type Err = HomError;

    fn from_str(s: &str) -> Result<Self, HomError> {
        let mut c = Cfk::new();
        let mut names: HashMap<String, usize> = HashMap::new();
        let err = |line: usize, msg: &str| HomError::Parse { line, msg: msg.to_string() };
        let int_field = |tok: Option<&str>, key: &str, line: usize| -> Result<i32, HomError> {
            let tok = tok.ok_or_else(|| err(line, &format!("missing {key}=")))?;
            let v = tok.strip_prefix(key).and_then(|t| t.strip_prefix('=')).ok_or_else(|| err(line, &format!("expected {key}=<int>, got `{tok}`")))?;
            v.parse().map_err(|_| err(line, &format!("bad integer `{v}`")))
        };
        for (n, raw) in s.lines().enumerate() {
            let line = n + 1;
            let text = raw.split('#').next().unwrap().trim();
            if text.is_empty() {
                continue;
            }
            let mut toks = text.split_whitespace();
            match toks.next().unwrap() {
                "gen" => {
                    let name = toks.next().ok_or_else(|| err(line, "missing generator name"))?;
                    let a = int_field(toks.next(), "A", line)?;
                    let m = int_field(toks.next(), "M", line)?;
                    if names.contains_key(name) {
                        return Err(err(line, &format!("duplicate generator `{name}`")));
                    }
                    names.insert(name.to_string(), c.add_gen(name, a, m));
                }
                "arrow" => {
                    let src = toks.next().ok_or_else(|| err(line, "missing source"))?;
                    if toks.next() != Some("->") {
                        return Err(err(line, "expected `->`"));
                    }
                    let dst = toks.next().ok_or_else(|| err(line, "missing target"))?;
                    let nw = int_field(toks.next(), "nw", line)?;
                    let nz = int_field(toks.next(), "nz", line)?;
                    if nw < 0 || nz < 0 {
                        return Err(err(line, "multiplicities must be nonnegative"));
                    }
                    let lookup = |g: &str| names.get(g).copied().ok_or_else(|| err(line, &format!("unknown generator `{g}`")));
                    c.add_arrow(lookup(src)?, lookup(dst)?, nw as u32, nz as u32);
                }
                other => return Err(err(line, &format!("unknown directive `{other}`"))),
            }
            if toks.next().is_some() {
                return Err(err(line, "trailing tokens"));
            }
        }
        Ok(c)
    }
}

impl fmt::Display for Cfk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gens {
            writeln!(f, "gen {} A={} M={}", g.name, g.a, g.m)?;
        }
        for a in &self.arrows {
            writeln!(f, "arrow {} -> {} nw={} nz={}", self.gens[a.src].name, self.gens[a.dst].name, a.nw, a.nz)?;
        }
        Ok(())
    }
}

/// Ranks of the homology of the associated graded complex per (A, M).
pub fn hfk_hat_groups(c: &Cfk) -> Result<BigradedGroups, HomError> {
    c.check()?;
    homology_ranks(&c.graded_complex()?)
}

/// Alexander filtration level of the generator of the hat homology.
pub fn tau_from_cfk(c: &Cfk) -> Result<i32, HomError> {
    c.check()?;
    let surv = filtered_reduce(&c.hat_complex()?);
    match surv.as_slice() {
        [s] => Ok(s.filtration),
        _ => Err(HomError::TotalRank { expected: 1, found: surv.len() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "\
# thin staircase
gen a A=1 M=0
gen b A=0 M=-1
gen c A=-1 M=-2
arrow b -> a nw=1 nz=0
arrow b -> c nw=0 nz=1
";

    #[test]
    fn parse_print_roundtrip() {
        let c: Cfk = TREFOIL.parse().unwrap();
        assert_eq!(c.gens.len(), 3);
        assert_eq!(c.arrows.len(), 2);
        let again: Cfk = c.to_string().parse().unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn trefoil_staircase() {
        let c: Cfk = TREFOIL.parse().unwrap();
        c.check().unwrap();
        let g = hfk_hat_groups(&c).unwrap();
        assert_eq!(g, BigradedGroups::from_entries([(1, 0, 1), (0, -1, 1), (-1, -2, 1)]));
        assert!(g.is_hfk_symmetric());
        assert_eq!(tau_from_cfk(&c).unwrap(), 1);
    }

    #[test]
    fn unknot() {
        let c: Cfk = "gen x A=0 M=0".parse().unwrap();
        assert_eq!(tau_from_cfk(&c).unwrap(), 0);
    }

    #[test]
    fn rejects_bad_gradings() {
        let c: Cfk = "gen a A=0 M=0\ngen b A=0 M=0\narrow a -> b nw=0 nz=0".parse().unwrap();
        assert!(matches!(c.check(), Err(HomError::Arrow { .. })));
        assert!("gen a A=0".parse::<Cfk>().is_err());
        assert!("gen a A=0 M=0\narrow a -> q nw=0 nz=0".parse::<Cfk>().is_err());
        assert!("bogus".parse::<Cfk>().is_err());
    }
}
