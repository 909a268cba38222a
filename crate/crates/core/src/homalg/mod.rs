//! Exact homology of sparse chain complexes, and reduction of filtered
//! complexes to their minimal form.

mod cfk;
pub mod linalg;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::poly::Laurent;
use crate::scan::OutputComplex;

pub use cfk::{hfk_hat_groups, tau_from_cfk, Cfk, CfkArrow, CfkGen};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("d∘d is non-zero at generator {0}")]
    DSquared(usize),
    #[error("entry {src} -> {dst} increases the filtration")]
    FiltrationIncrease { src: usize, dst: usize },
    #[error("entry {src} -> {dst} changes the grading by {step}")]
    GradingStep { src: usize, dst: usize, step: i32 },
    #[error("entry {src} -> {dst} is not homogeneous in the filtration")]
    NotHomogeneous { src: usize, dst: usize },
    #[error("expected total homology of rank {expected}, found {found}")]
    TotalRank { expected: usize, found: usize },
    #[error("survivors at q = {0:?} are not two levels apart")]
    QGap(Vec<i32>),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("arrow {src} -> {dst}: {msg}")]
    Arrow { src: String, dst: String, msg: String },
    #[error("generator index {0} out of range")]
    BadIndex(usize),
}

/// Whether `d` raises (`Up`, cohomological) or lowers (`Down`, homological)
/// the grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    fn step(self) -> i32 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gen {
    pub grading: i32,
    pub filtration: i32,
    pub secondary: Option<i32>,
}

/// Complex with a filtration that `d` never increases.
#[derive(Clone, Debug)]
pub struct FilteredComplex<F> {
    direction: Direction,
    gens: Vec<Gen>,
    /// `cols[j]` = d(g_j) as target -> coefficient
    cols: Vec<BTreeMap<usize, F>>,
}

impl<F: Field> FilteredComplex<F> {
    pub fn new(direction: Direction) -> Self {
        FilteredComplex { direction, gens: Vec::new(), cols: Vec::new() }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn add_gen(&mut self, grading: i32, filtration: i32) -> usize {
        self.add_gen_full(Gen { grading, filtration, secondary: None })
    }

    pub fn add_gen_full(&mut self, g: Gen) -> usize {
        self.gens.push(g);
        self.cols.push(BTreeMap::new());
        self.gens.len() - 1
    }

    /// Add `c` to the coefficient of `dst` in `d(src)`.
    pub fn add_entry(&mut self, src: usize, dst: usize, c: F) -> Result<(), HomError> {
        if src >= self.gens.len() || dst >= self.gens.len() {
            return Err(HomError::BadIndex(src.max(dst)));
        }
        let step = self.gens[dst].grading - self.gens[src].grading;
        if step != self.direction.step() {
            return Err(HomError::GradingStep { src, dst, step });
        }
        if self.gens[dst].filtration > self.gens[src].filtration {
            return Err(HomError::FiltrationIncrease { src, dst });
        }
        let e = self.cols[src].entry(dst).or_insert_with(F::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.cols[src].remove(&dst);
        }
        Ok(())
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn num_entries(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn differential(&self, j: usize) -> impl Iterator<Item = (usize, &F)> + '_ {
        self.cols[j].iter().map(|(&i, c)| (i, c))
    }

    pub fn check_d_squared(&self) -> Result<(), HomError> {
        for (j, col) in self.cols.iter().enumerate() {
            let mut acc: BTreeMap<usize, F> = BTreeMap::new();
            for (&i, a) in col {
                for (&k, b) in &self.cols[i] {
                    let e = acc.entry(k).or_insert_with(F::zero);
                    *e = e.clone() + a.clone() * b.clone();
                }
            }
            if acc.values().any(|v| !v.is_zero()) {
                return Err(HomError::DSquared(j));
            }
        }
        Ok(())
    }

    /// Drop the filtration: same complex with every generator at level 0.
    pub fn forget_filtration(&self) -> Self {
        let mut c = self.clone();
        for g in &mut c.gens {
            g.filtration = 0;
        }
        c
    }

    /// Homology ranks per grading, ignoring the filtration.
    pub fn homology_by_grading(&self) -> BTreeMap<i32, u64> {
        let mut dims: BTreeMap<i32, u64> = BTreeMap::new();
        for g in &self.gens {
            *dims.entry(g.grading).or_insert(0) += 1;
        }
        let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
        let mut by_grading: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (j, g) in self.gens.iter().enumerate() {
            by_grading.entry(g.grading).or_default().push(j);
        }
        for (&h, js) in &by_grading {
            let r = linalg::rank(js.iter().map(|&j| self.cols[j].iter().map(|(&i, c)| (i, c.clone())).collect()));
            ranks.insert(h, r);
        }
        let step = self.direction.step();
        dims.iter()
            .map(|(&h, &n)| {
                let out = ranks.get(&h).copied().unwrap_or(0) as u64;
                let inc = ranks.get(&(h - step)).copied().unwrap_or(0) as u64;
                (h, n - out - inc)
            })
            .filter(|&(_, r)| r > 0)
            .collect()
    }
}

/// Ranks keyed by (filtration or Alexander grading, homological or Maslov
/// grading).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedGroups {
    #[serde(with = "pairs")]
    ranks: BTreeMap<(i32, i32), u64>,
}

mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        a: i32,
        m: i32,
        rank: u64,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<(i32, i32), u64>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Entry> = m.iter().map(|(&(a, mm), &rank)| Entry { a, m: mm, rank }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(i32, i32), u64>, D::Error> {
        let v: Vec<Entry> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|e| ((e.a, e.m), e.rank)).collect())
    }
}

impl BigradedGroups {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (i32, i32, u64)>) -> Self {
        let mut g = Self::new();
        for (a, m, r) in entries {
            g.add(a, m, r);
        }
        g
    }

    pub fn add(&mut self, a: i32, m: i32, rank: u64) {
        if rank > 0 {
            *self.ranks.entry((a, m)).or_insert(0) += rank;
        }
    }

    pub fn rank(&self, a: i32, m: i32) -> u64 {
        self.ranks.get(&(a, m)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.ranks.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, i32, u64)> + '_ {
        self.ranks.iter().map(|(&(a, m), &r)| (a, m, r))
    }

    pub fn rank_at(&self, a: i32) -> u64 {
        self.iter().filter(|t| t.0 == a).map(|t| t.2).sum()
    }

    pub fn top(&self) -> Option<i32> {
        self.ranks.keys().map(|k| k.0).max()
    }

    /// `(m, rank)` pairs in grading `a`, highest `m` first.
    pub fn at(&self, a: i32) -> Vec<(i32, u64)> {
        let mut v: Vec<(i32, u64)> = self.iter().filter(|t| t.0 == a).map(|t| (t.1, t.2)).collect();
        v.reverse();
        v
    }

    /// `Σ (-1)^m rank x^a`.
    pub fn euler(&self) -> Laurent {
        Laurent::from_terms(self.iter().map(|(a, m, r)| (if m.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) }, a)))
    }

    /// Knot Floer symmetry `rank(a, m) = rank(-a, m - 2a)`.
    pub fn is_hfk_symmetric(&self) -> bool {
        self.iter().all(|(a, m, r)| self.rank(-a, m - 2 * a) == r)
    }
}

impl fmt::Display for BigradedGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut levels: Vec<i32> = self.ranks.keys().map(|k| k.0).collect();
        levels.dedup();
        levels.reverse();
        for (n, a) in levels.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            let parts: Vec<String> = self.at(*a).iter().map(|(m, r)| format!("F^{r}_({m})")).collect();
            write!(f, "A={a}: {}", parts.join(" + "))?;
        }
        Ok(())
    }
}

/// Ranks of the homology of a complex whose differential preserves the
/// filtration, per (filtration, grading).
pub fn homology_ranks<F: Field>(c: &FilteredComplex<F>) -> Result<BigradedGroups, HomError> {
    for (j, col) in c.cols.iter().enumerate() {
        if let Some(&i) = col.keys().find(|&&i| c.gens[i].filtration != c.gens[j].filtration) {
            return Err(HomError::NotHomogeneous { src: j, dst: i });
        }
    }
    c.check_d_squared()?;
    let mut blocks: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (j, g) in c.gens.iter().enumerate() {
        blocks.entry(g.filtration).or_default().push(j);
    }
    let mut out = BigradedGroups::new();
    for (a, js) in blocks {
        let mut sub = FilteredComplex::new(c.direction);
        let mut index = BTreeMap::new();
        for &j in &js {
            index.insert(j, sub.add_gen(c.gens[j].grading, 0));
        }
        for &j in &js {
            for (&i, v) in &c.cols[j] {
                sub.add_entry(index[&j], index[&i], v.clone())?;
            }
        }
        for (m, r) in sub.homology_by_grading() {
            out.add(a, m, r);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Survivor {
    pub index: usize,
    pub filtration: i32,
    pub grading: i32,
}

struct Reducer<F> {
    gens: Vec<Gen>,
    cols: Vec<BTreeMap<usize, F>>,
    rows: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
    /// (filtration drop, src, dst)
    entries: BTreeSet<(i32, usize, usize)>,
}

impl<F: Field> Reducer<F> {
    fn new(c: &FilteredComplex<F>) -> Self {
        let n = c.gens.len();
        let mut rows = vec![BTreeSet::new(); n];
        let mut entries = BTreeSet::new();
        for (j, col) in c.cols.iter().enumerate() {
            for &i in col.keys() {
                rows[i].insert(j);
                entries.insert((c.gens[j].filtration - c.gens[i].filtration, j, i));
            }
        }
        Reducer { gens: c.gens.clone(), cols: c.cols.clone(), rows, alive: vec![true; n], entries }
    }

    fn drop_of(&self, j: usize, i: usize) -> i32 {
        self.gens[j].filtration - self.gens[i].filtration
    }

    fn set(&mut self, j: usize, i: usize, v: F) {
        let d = self.drop_of(j, i);
        if v.is_zero() {
            if self.cols[j].remove(&i).is_some() {
                self.rows[i].remove(&j);
                self.entries.remove(&(d, j, i));
            }
        } else {
            if self.cols[j].insert(i, v).is_none() {
                self.rows[i].insert(j);
                self.entries.insert((d, j, i));
            }
        }
    }

    fn kill(&mut self, g: usize) {
        self.alive[g] = false;
        let outs: Vec<usize> = self.cols[g].keys().copied().collect();
        for i in outs {
            self.set(g, i, F::zero());
        }
        let ins: Vec<usize> = self.rows[g].iter().copied().collect();
        for j in ins {
            self.set(j, g, F::zero());
        }
    }

    /// Cancel `j -> i`: `d(k) -= <dk, i> c⁻¹ d(j)` for every other `k`.
    fn cancel(&mut self, j: usize, i: usize) {
        let min_drop = self.drop_of(j, i);
        let cinv = self.cols[j][&i].inv();
        let dj: Vec<(usize, F)> = self.cols[j].iter().filter(|(&l, _)| l != i).map(|(&l, v)| (l, v.clone())).collect();
        let ks: Vec<usize> = self.rows[i].iter().copied().filter(|&k| k != j).collect();
        for k in ks {
            let e = self.cols[k][&i].clone() * cinv.clone();
            for (l, v) in &dj {
                let cur = self.cols[k].get(l).cloned().unwrap_or_else(F::zero);
                let new = cur - e.clone() * v.clone();
                if !new.is_zero() {
                    assert!(self.drop_of(k, *l) >= min_drop, "cancellation created an entry below the minimal drop");
                }
                self.set(k, *l, new);
            }
        }
        self.kill(j);
        self.kill(i);
    }

    fn survivors(&self) -> Vec<Survivor> {
        (0..self.gens.len())
            .filter(|&g| self.alive[g])
            .map(|g| Survivor { index: g, filtration: self.gens[g].filtration, grading: self.gens[g].grading })
            .collect()
    }
}

/// Reduce to zero differential by repeatedly cancelling an entry of minimal
/// filtration drop, preferring sparse pivots to limit fill-in. Every step is
/// a filtered homotopy equivalence, so the survivors are an invariant of the
/// filtered complex.
pub fn filtered_reduce<F: Field>(c: &FilteredComplex<F>) -> Vec<Survivor> {
    let mut r = Reducer::new(c);
    while let Some(&(d, _, _)) = r.entries.iter().next() {
        let (j, i) = r
            .entries
            .range((d, 0, 0)..(d + 1, 0, 0))
            .take(PIVOT_WINDOW)
            .map(|&(_, j, i)| (j, i))
            .min_by_key(|&(j, i)| (r.cols[j].len() - 1) * (r.rows[i].len() - 1))
            .unwrap();
        r.cancel(j, i);
    }
    r.survivors()
}

const PIVOT_WINDOW: usize = 64;

/// As [`filtered_reduce`], with `pick(n)` choosing which of the `n`
/// minimal-drop entries (in `(src, dst)` order) to cancel next.
pub fn filtered_reduce_by<F: Field>(c: &FilteredComplex<F>, pick: &mut dyn FnMut(usize) -> usize) -> Vec<Survivor> {
    let mut r = Reducer::new(c);
    while let Some(&(d, _, _)) = r.entries.iter().next() {
        let cands: Vec<(usize, usize)> =
            r.entries.range((d, 0, 0)..(d + 1, 0, 0)).map(|&(_, j, i)| (j, i)).collect();
        let k = pick(cands.len()).min(cands.len() - 1);
        let (j, i) = cands[k];
        r.cancel(j, i);
    }
    r.survivors()
}

/// Rasmussen's invariant from a Lee complex of a knot: the two surviving
/// generators sit at quantum levels `s ∓ 1`.
pub fn s_from_lee<F: Field>(out: &OutputComplex<F>) -> Result<i32, HomError> {
    let c = out.to_filtered()?;
    let surv = filtered_reduce(&c);
    if surv.len() != 2 {
        return Err(HomError::TotalRank { expected: 2, found: surv.len() });
    }
    let mut qs: Vec<i32> = surv.iter().map(|s| -s.filtration).collect();
    qs.sort_unstable();
    if qs[1] - qs[0] != 2 {
        return Err(HomError::QGap(qs));
    }
    Ok(qs[0] + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F2, Q};

    #[test]
    fn zero_differential() {
        let mut c: FilteredComplex<Q> = FilteredComplex::new(Direction::Up);
        c.add_gen(0, 1);
        c.add_gen(0, 1);
        c.add_gen(1, 3);
        let g = homology_ranks(&c).unwrap();
        assert_eq!(g, BigradedGroups::from_entries([(1, 0, 2), (3, 1, 1)]));
    }

    #[test]
    fn acyclic_pair() {
        let mut c: FilteredComplex<F2> = FilteredComplex::new(Direction::Down);
        let a = c.add_gen(1, 0);
        let b = c.add_gen(0, 0);
        c.add_entry(a, b, F2(true)).unwrap();
        assert!(filtered_reduce(&c).is_empty());
        assert_eq!(homology_ranks(&c).unwrap().total(), 0);
    }

    #[test]
    fn rejects_filtration_increase() {
        let mut c: FilteredComplex<F2> = FilteredComplex::new(Direction::Up);
        let a = c.add_gen(0, 0);
        let b = c.add_gen(1, 1);
        assert!(matches!(c.add_entry(a, b, F2(true)), Err(HomError::FiltrationIncrease { .. })));
    }

    // x --1--> y, x --> z (drop 2), w --> z (drop 0): cancelling w -> z first
    // leaves the x -> y cancellation; survivors none; a staircase shape.
    #[test]
    fn minimal_drop_first() {
        let mut c: FilteredComplex<F2> = FilteredComplex::new(Direction::Down);
        let x = c.add_gen(1, 2);
        let y = c.add_gen(0, 1);
        let z = c.add_gen(0, 0);
        let w = c.add_gen(1, 0);
        let one = F2(true);
        c.add_entry(x, y, one).unwrap();
        c.add_entry(x, z, one).unwrap();
        c.add_entry(w, z, one).unwrap();
        c.check_d_squared().unwrap();
        assert!(filtered_reduce(&c).is_empty());
        // without w, the x -> y cancellation (drop 1) leaves z
        let mut c2: FilteredComplex<F2> = FilteredComplex::new(Direction::Down);
        let x = c2.add_gen(1, 2);
        let y = c2.add_gen(0, 1);
        let z = c2.add_gen(0, 0);
        c2.add_entry(x, y, one).unwrap();
        c2.add_entry(x, z, one).unwrap();
        let s = filtered_reduce(&c2);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].filtration, 0);
        assert_eq!(s[0].index, z);
    }

    #[test]
    fn symmetry_and_euler() {
        let g = BigradedGroups::from_entries([(1, 0, 1), (0, -1, 1), (-1, -2, 1)]);
        assert!(g.is_hfk_symmetric());
        assert_eq!(g.euler(), Laurent::from_terms([(1, 1), (-1, 0), (1, -1)]));
        let bad = BigradedGroups::from_entries([(1, 0, 1), (-1, 0, 1)]);
        assert!(!bad.is_hfk_symmetric());
        assert_eq!(g.to_string(), "A=1: F^1_(0)\nA=0: F^1_(-1)\nA=-1: F^1_(-2)");
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<BigradedGroups>(&json).unwrap(), g);
    }

    #[test]
    fn s_of_small_knots() {
        use crate::cobcat::FrobeniusSpec;
        use crate::linkdiag::{mirror, torus_link, unknot};
        use crate::scan::scan;
        let s = |d| s_from_lee(&scan::<Q>(&d, FrobeniusSpec::LEE).unwrap()).unwrap();
        assert_eq!(s(unknot()), 0);
        assert_eq!(s(torus_link(2, 3).unwrap()), 2);
        assert_eq!(s(mirror(&torus_link(2, 3).unwrap())), -2);
        assert_eq!(s(torus_link(2, 5).unwrap()), 4);
        let hopf = scan::<Q>(&torus_link(2, 2).unwrap(), FrobeniusSpec::LEE).unwrap();
        assert!(matches!(s_from_lee(&hopf), Err(HomError::TotalRank { expected: 2, found: 4 })));
    }
}
