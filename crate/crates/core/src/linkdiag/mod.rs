//! Oriented planar link diagrams in PD notation.
//!
//! A crossing `X(a,b,c,d)` lists its four incident arcs counterclockwise,
//! starting from the incoming under-strand, so the under-strand runs
//! `a -> c` and the over-strand joins `b` and `d`. Orientation of the
//! over-strand is recovered by propagation along the link; the crossing is
//! positive when the over-strand runs `d -> b`.

mod alexander;
mod builders;
mod expr;
mod jones;
mod planar;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

pub use alexander::{alexander_poly, fox_derivative, Word};
pub use builders::{braid_closure, mirror, torus_link, unknot, whitehead_double, ClaspSign};
pub use expr::{parse_expr, BuilderExpr};
pub use jones::{jones_kauffman, JONES_MAX_CROSSINGS};
pub use planar::PlanarBuilder;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("PD syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arc label {label} occurs {count} time(s); every label must occur exactly twice")]
    LabelArity { label: u32, count: usize },
    #[error("arc label 0 is not allowed; labels are positive integers")]
    ZeroLabel,
    #[error("inconsistent orientation at arc {label}")]
    Orientation { label: u32 },
    #[error("diagram is not planar: Euler characteristic {euler}, expected {expected}")]
    NonPlanar { euler: i64, expected: i64 },
    #[error("expected a knot (one component), found {components} components")]
    NotAKnot { components: usize },
    #[error("{op}: {msg}")]
    Builder { op: &'static str, msg: String },
    #[error("diagram has {crossings} crossings; {op} is limited to {limit}")]
    TooLarge { op: &'static str, crossings: usize, limit: usize },
}

/// Position of an arc end: (crossing index, slot 0..4).
pub type Slot = (usize, usize);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinkDiagram {
    crossings: Vec<[u32; 4]>,
    unknots: usize,
    signs: Vec<i8>,
}

impl LinkDiagram {
    /// Build and validate a diagram from PD tuples plus crossingless unknots.
    pub fn new(crossings: Vec<[u32; 4]>, unknots: usize) -> Result<Self, DiagramError> {
        let occurrences = occurrences(&crossings)?;
        let signs = orient(&crossings, &occurrences)?;
        let d = LinkDiagram { crossings, unknots, signs };
        d.check_planar(&occurrences)?;
        Ok(d)
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn unknot_components(&self) -> usize {
        self.unknots
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    pub fn num_positive(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn num_negative(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    /// All arc labels in increasing order.
    pub fn labels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.crossings.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Orientation of each arc: (slot it leaves from, slot it enters).
    pub fn arc_orientation(&self) -> BTreeMap<u32, (Slot, Slot)> {
        let mut tail: HashMap<u32, Slot> = HashMap::new();
        let mut head: HashMap<u32, Slot> = HashMap::new();
        for (i, x) in self.crossings.iter().enumerate() {
            let over_in = if self.signs[i] > 0 { 3 } else { 1 };
            for (s, &l) in x.iter().enumerate() {
                if s == 0 || s == over_in {
                    head.insert(l, (i, s));
                } else {
                    tail.insert(l, (i, s));
                }
            }
        }
        tail.into_iter().map(|(l, t)| (l, (t, head[&l]))).collect()
    }

    /// Number of link components, including crossingless unknots.
    pub fn num_components(&self) -> usize {
        let orient = self.arc_orientation();
        let mut seen: HashMap<u32, bool> = orient.keys().map(|&l| (l, false)).collect();
        let mut count = 0;
        for &start in orient.keys() {
            if seen[&start] {
                continue;
            }
            count += 1;
            let mut l = start;
            loop {
                seen.insert(l, true);
                let (c, s) = orient[&l].1;
                l = self.crossings[c][(s + 2) % 4];
                if l == start {
                    break;
                }
            }
        }
        count + self.unknots
    }

    pub fn is_knot(&self) -> bool {
        self.num_components() == 1
    }

    fn check_planar(&self, occ: &HashMap<u32, Vec<Slot>>) -> Result<(), DiagramError> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(());
        }
        // faces = orbits of (arrive at other end of the arc, then step to the next slot ccw)
        let mut visited = vec![[false; 4]; n];
        let mut faces = 0i64;
        for c in 0..n {
            for s in 0..4 {
                if visited[c][s] {
                    continue;
                }
                faces += 1;
                let (mut cc, mut ss) = (c, s);
                while !visited[cc][ss] {
                    visited[cc][ss] = true;
                    let label = self.crossings[cc][ss];
                    let other = other_end(occ, label, (cc, ss));
                    cc = other.0;
                    ss = (other.1 + 1) % 4;
                }
            }
        }
        // connected pieces of the 4-valent graph
        let mut uf = crate::util::UnionFind::new(n);
        for v in occ.values() {
            uf.union(v[0].0, v[1].0);
        }
        let pieces = uf.count() as i64;
        let euler = n as i64 - 2 * n as i64 + faces;
        if euler != 2 * pieces {
            return Err(DiagramError::NonPlanar { euler, expected: 2 * pieces });
        }
        Ok(())
    }

    /// PD text, e.g. `PD[X(4,2,5,1),X(6,4,1,3),X(2,6,3,5)]`.
    pub fn to_pd_string(&self) -> String {
        let mut items: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("X({},{},{},{})", x[0], x[1], x[2], x[3]))
            .collect();
        if self.unknots > 0 {
            items.push(format!("U({})", self.unknots));
        }
        format!("PD[{}]", items.join(","))
    }
}

impl fmt::Debug for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

fn other_end(occ: &HashMap<u32, Vec<Slot>>, label: u32, here: Slot) -> Slot {
    let v = &occ[&label];
    if v[0] == here {
        v[1]
    } else {
        v[0]
    }
}

fn occurrences(crossings: &[[u32; 4]]) -> Result<HashMap<u32, Vec<Slot>>, DiagramError> {
    let mut occ: HashMap<u32, Vec<Slot>> = HashMap::new();
    for (i, x) in crossings.iter().enumerate() {
        for (s, &l) in x.iter().enumerate() {
            if l == 0 {
                return Err(DiagramError::ZeroLabel);
            }
            occ.entry(l).or_default().push((i, s));
        }
    }
    let mut bad: Vec<(u32, usize)> =
        occ.iter().filter(|(_, v)| v.len() != 2).map(|(&l, v)| (l, v.len())).collect();
    bad.sort_unstable();
    if let Some(&(label, count)) = bad.first() {
        return Err(DiagramError::LabelArity { label, count });
    }
    Ok(occ)
}

/// Propagate orientation from the under-strands; returns crossing signs.
fn orient(crossings: &[[u32; 4]], occ: &HashMap<u32, Vec<Slot>>) -> Result<Vec<i8>, DiagramError> {
    let n = crossings.len();
    // over_in[c] = slot (1 or 3) through which the over-strand enters
    let mut over_in: Vec<Option<usize>> = vec![None; n];
    let incoming = |over_in: &Vec<Option<usize>>, (c, s): Slot| -> Option<bool> {
        match s {
            0 => Some(true),
            2 => Some(false),
            _ => over_in[c].map(|o| o == s),
        }
    };
    let mut labels: Vec<u32> = occ.keys().copied().collect();
    labels.sort_unstable();
    loop {
        let mut changed = true;
        while changed {
            changed = false;
            for &l in &labels {
                let (p, q) = (occ[&l][0], occ[&l][1]);
                let (dp, dq) = (incoming(&over_in, p), incoming(&over_in, q));
                match (dp, dq) {
                    (Some(a), Some(b)) => {
                        if a == b {
                            return Err(DiagramError::Orientation { label: l });
                        }
                    }
                    (Some(a), None) => {
                        over_in[q.0] = Some(if !a { q.1 } else { 4 - q.1 });
                        changed = true;
                    }
                    (None, Some(b)) => {
                        over_in[p.0] = Some(if !b { p.1 } else { 4 - p.1 });
                        changed = true;
                    }
                    (None, None) => {}
                }
            }
        }
        // components made only of over-strands: orient them d -> b
        match over_in.iter().position(|o| o.is_none()) {
            Some(c) => over_in[c] = Some(3),
            None => break,
        }
    }
    Ok(over_in.into_iter().map(|o| if o == Some(3) { 1 } else { -1 }).collect())
}

/// Parse `PD[X(a,b,c,d), ..., U(k)]`. Whitespace is ignored.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let mut p = PdParser { s: text.as_bytes(), pos: 0 };
    let (crossings, unknots) = p.parse()?;
    LinkDiagram::new(crossings, unknots)
}

struct PdParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl PdParser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DiagramError> {
        Err(DiagramError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), DiagramError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn number(&mut self) -> Result<u64, DiagramError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a non-negative integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer out of range"))
    }

    fn parse(&mut self) -> Result<(Vec<[u32; 4]>, usize), DiagramError> {
        self.expect(b'P')?;
        self.expect(b'D')?;
        let close = match self.peek() {
            Some(b'[') => b']',
            Some(b'(') => b')',
            _ => return self.err("expected `[` after PD"),
        };
        self.pos += 1;
        let mut crossings = Vec::new();
        let mut unknots = 0usize;
        if self.peek() == Some(close) {
            self.pos += 1;
            return self.finish(crossings, unknots);
        }
        loop {
            match self.peek() {
                Some(b'X') => {
                    self.pos += 1;
                    let c = self.open()?;
                    let mut x = [0u32; 4];
                    for (k, slot) in x.iter_mut().enumerate() {
                        if k > 0 {
                            self.expect(b',')?;
                        }
                        let v = self.number()?;
                        *slot = u32::try_from(v).or_else(|_| self.err("label out of range"))?;
                    }
                    self.expect(c)?;
                    crossings.push(x);
                }
                Some(b'U') => {
                    self.pos += 1;
                    let c = self.open()?;
                    unknots += self.number()? as usize;
                    self.expect(c)?;
                }
                _ => return self.err("expected `X(` or `U(`"),
            }
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    break;
                }
                _ => return self.err("expected `,` or closing bracket"),
            }
        }
        self.finish(crossings, unknots)
    }

    fn open(&mut self) -> Result<u8, DiagramError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                Ok(b')')
            }
            Some(b'[') => {
                self.pos += 1;
                Ok(b']')
            }
            _ => self.err("expected `(`"),
        }
    }

    fn finish(
        &mut self,
        crossings: Vec<[u32; 4]>,
        unknots: usize,
    ) -> Result<(Vec<[u32; 4]>, usize), DiagramError> {
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok((crossings, unknots))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "PD[X(4,2,5,1),X(6,4,1,3),X(2,6,3,5)]";

    #[test]
    fn crossingless_unknot() {
        let d = parse_pd("PD[U(1)]").unwrap();
        assert_eq!(d.num_crossings(), 0);
        assert_eq!(d.unknot_components(), 1);
        assert!(d.is_knot());
    }

    #[test]
    fn trefoil_signs() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.signs(), &[1, 1, 1]);
        assert_eq!(d.writhe(), 3);
        assert!(d.is_knot());
    }

    #[test]
    fn unmatched_labels() {
        let e = parse_pd("PD[X(1,4,2,3),X(3,6,4,5)]").unwrap_err();
        assert!(matches!(e, DiagramError::LabelArity { count: 1, .. }), "{e}");
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_pd("PD[X(1,2,3)]"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("X(1,2,3,4)"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("PD[X(1,2,2,1)] junk"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("PD[X(0,1,1,0)]"), Err(DiagramError::ZeroLabel)));
    }

    #[test]
    fn whitespace_insensitive() {
        let d = parse_pd(" PD [ X( 4 , 2,5,1 ),\n X(6,4,1,3), X(2,6,3,5) ] ").unwrap();
        assert_eq!(d.to_pd_string(), TREFOIL);
    }

    #[test]
    fn inconsistent_orientation() {
        // both under-strands of the two crossings point into arc 1
        let e = parse_pd("PD[X(1,3,2,4),X(1,4,2,3)]").unwrap_err();
        assert!(matches!(e, DiagramError::Orientation { .. }), "{e}");
    }

    #[test]
    fn kinks_are_accepted() {
        let pos = parse_pd("PD[X(1,2,2,1)]").unwrap();
        let neg = parse_pd("PD[X(2,2,1,1)]").unwrap();
        assert!(pos.is_knot() && neg.is_knot());
        assert_eq!(pos.writhe() + neg.writhe(), 0);
    }

    #[test]
    fn hopf_link_components() {
        let d = parse_pd("PD[X(4,1,3,2),X(2,3,1,4)]").unwrap();
        assert_eq!(d.num_components(), 2);
    }

    #[test]
    fn nonplanar_rejected() {
        // both crossings carry the same cyclic order: the rotation system lives on a torus
        let e = parse_pd("PD[X(1,2,3,4),X(3,4,1,2)]");
        assert!(e.is_err());
    }

    #[test]
    fn roundtrip() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(parse_pd(&d.to_pd_string()).unwrap(), d);
        let u = parse_pd("PD[X(1,2,2,1),U(2)]").unwrap();
        assert_eq!(parse_pd(&u.to_pd_string()).unwrap(), u);
    }
}
