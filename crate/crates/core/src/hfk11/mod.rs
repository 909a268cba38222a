//! Knot Floer complexes of genus-one doubly pointed Heegaard diagrams,
//! computed from embedded bigons in the universal cover of the torus.

mod builder;
mod diagram;
pub mod geometry;

use std::collections::VecDeque;

use thiserror::Error;

use crate::homalg::{filtered_reduce, hfk_hat_groups, Cfk, HomError};
pub use builder::{rainbow_diagram, RainbowSpec};
pub use diagram::OneOneDiagram;
use geometry::{ceil, floor, inside, Pt, R};

#[derive(Debug, Error)]
pub enum HfkError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("beta needs at least two vertices, got {0}")]
    TooFewVertices(usize),
    #[error("last vertex {end:?} is not the first {start:?} shifted by ({p}, 1)")]
    Period { start: Pt, end: Pt, p: i64 },
    #[error("vertex {vertex} at {point:?} lies on an alpha line")]
    Transversality { vertex: usize, point: Pt },
    #[error("basepoint {which} at {point:?} lies on {curve}")]
    BasepointOnCurve { which: &'static str, curve: &'static str, point: Pt },
    #[error("beta is not embedded: segment {first:?} meets translate {second:?}")]
    NotEmbedded { first: (i64, i64, usize), second: (i64, i64, usize) },
    #[error("crossing count mismatch: {period} per period, {level} on the base level")]
    CrossingCount { period: usize, level: usize },
    #[error("bigon graph is disconnected ({reached} of {total} generators reached)")]
    Disconnected { reached: usize, total: usize },
    #[error("inconsistent relative gradings at generator {0}")]
    Inconsistent(usize),
    #[error("Alexander support {lo}..={hi} admits no symmetric normalisation")]
    Asymmetric { lo: i32, hi: i32 },
    #[error("bad rainbow data: {0}")]
    Rainbow(String),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// Whether the source of a bigon is the corner where the counterclockwise
/// boundary passes from the `α` segment onto the `β` arc.
const SOURCE_AT_BETA_ENTRY: bool = true;

/// Intersection of `β̃` with the line `y = 0`; `pos` orders points along `β̃`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub index: usize,
    pub point: Pt,
    /// whether `β̃` crosses upward here
    pub up: bool,
    pos: (i64, usize),
}

#[derive(Clone, Debug)]
pub struct Bigon {
    pub src: usize,
    pub dst: usize,
    pub nw: u32,
    pub nz: u32,
    /// boundary: the `β` arc from one corner to the other; the `α` side closes it
    pub boundary: Vec<Pt>,
}

/// Points of `β̃ ∩ {y = 0}` in order along `β̃`; each torus intersection
/// point has exactly one such lift.
pub fn generators(d: &OneOneDiagram) -> Result<Vec<Generator>, HfkError> {
    let n = d.validate()?;
    let (y0, y1) = d.y_range();
    let mut out = Vec::new();
    for k in (-ceil(y1) as i64)..=(-floor(y0) as i64) {
        for (s, (a, b)) in d.segments(k).into_iter().enumerate() {
            let (lo, hi) = (a.y.min(b.y), a.y.max(b.y));
            if lo < R::from_integer(0) && hi > R::from_integer(0) {
                let t = -a.y / (b.y - a.y);
                let x = a.x + t * (b.x - a.x);
                out.push(Generator { index: out.len(), point: Pt::new(x, R::from_integer(0)), up: b.y > a.y, pos: (k, s) });
            }
        }
    }
    if out.len() != n {
        return Err(HfkError::CrossingCount { period: n, level: out.len() });
    }
    Ok(out)
}

fn count_translates(q: Pt, poly: &[Pt]) -> u32 {
    let xs = poly.iter().map(|p| p.x);
    let ys = poly.iter().map(|p| p.y);
    let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
    let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
    let mut n = 0;
    for i in ceil(x0 - q.x)..=floor(x1 - q.x) {
        for j in ceil(y0 - q.y)..=floor(y1 - q.y) {
            if inside(q + Pt::new(R::from_integer(i), R::from_integer(j)), poly) {
                n += 1;
            }
        }
    }
    n
}

/// Every embedded bigon with convex corners, up to deck translations.
pub fn find_bigons(d: &OneOneDiagram, gens: &[Generator]) -> Vec<Bigon> {
    let zero = R::from_integer(0);
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let (p, q) = (gens[i].point, gens[j].point);
            let (l, r) = if p.x < q.x { (p.x, q.x) } else { (q.x, p.x) };
            // the arc must avoid the open segment between its endpoints
            if gens[i + 1..j].iter().any(|g| g.point.x > l && g.point.x < r) {
                continue;
            }
            let mut arc = vec![p];
            let (ki, si) = gens[i].pos;
            let (kj, sj) = gens[j].pos;
            let mut k = ki;
            let mut s = si;
            let m = d.beta.len() - 1;
            let shift = |k: i64| Pt::int(k * d.p, k);
            while (k, s) != (kj, sj) {
                s += 1;
                if s == m {
                    s = 0;
                    k += 1;
                }
                arc.push(d.beta[s] + shift(k));
            }
            arc.push(q);
            let depart = gens[i].up;
            let arrive_above = !gens[j].up;
            if depart != arrive_above {
                continue;
            }
            // side of the region next to the alpha segment
            let mx = (l + r) / R::from_integer(2);
            let mut above = false;
            for e in arc.windows(2) {
                let (a, b) = (e[0], e[1]);
                if (a.x > mx) != (b.x > mx) {
                    let y = a.y + (mx - a.x) * (b.y - a.y) / (b.x - a.x);
                    if y > zero {
                        above = !above;
                    }
                }
            }
            if above != depart {
                continue;
            }
            // counterclockwise, the alpha side runs left-to-right when the
            // region lies above it
            let beta_entry = if above { r } else { l };
            let entry_is_p = p.x == beta_entry;
            let src_is_p = entry_is_p == SOURCE_AT_BETA_ENTRY;
            let (src, dst) = if src_is_p { (i, j) } else { (j, i) };
            out.push(Bigon { src, dst, nw: count_translates(d.w, &arc), nz: count_translates(d.z, &arc), boundary: arc });
        }
    }
    out
}

/// Relative (A, M) gradings propagated through the bigon graph, with
/// generator 0 at (0, 0).
pub fn relative_gradings(n: usize, bigons: &[Bigon]) -> Result<Vec<(i32, i32)>, HfkError> {
    let mut adj = vec![Vec::new(); n];
    for b in bigons {
        // A(src) - A(dst) = nz - nw, M(src) - M(dst) = 1 - 2 nw
        let da = b.nz as i32 - b.nw as i32;
        let dm = 1 - 2 * b.nw as i32;
        adj[b.src].push((b.dst, -da, -dm));
        adj[b.dst].push((b.src, da, dm));
    }
    let mut gr: Vec<Option<(i32, i32)>> = vec![None; n];
    let mut queue = VecDeque::new();
    if n > 0 {
        gr[0] = Some((0, 0));
        queue.push_back(0);
    }
    while let Some(x) = queue.pop_front() {
        let (a, m) = gr[x].unwrap();
        for &(y, da, dm) in &adj[x] {
            let g = (a + da, m + dm);
            match gr[y] {
                None => {
                    gr[y] = Some(g);
                    queue.push_back(y);
                }
                Some(h) if h != g => return Err(HfkError::Inconsistent(y)),
                _ => {}
            }
        }
    }
    let reached = gr.iter().filter(|g| g.is_some()).count();
    if reached < n {
        return Err(HfkError::Disconnected { reached, total: n });
    }
    Ok(gr.into_iter().map(Option::unwrap).collect())
}

/// The full knot Floer complex, with Maslov grading normalised so the hat
/// homology sits in degree 0 and Alexander grading made symmetric.
pub fn build_cfk(d: &OneOneDiagram) -> Result<Cfk, HfkError> {
    build_cfk_from(d, &generators(d)?)
}

/// As [`build_cfk`], reusing generators of an already validated diagram
/// (only the basepoints may differ).
pub fn build_cfk_from(d: &OneOneDiagram, gens: &[Generator]) -> Result<Cfk, HfkError> {
    let bigons = find_bigons(d, gens);
    let gr = relative_gradings(gens.len(), &bigons)?;
    let mut c = Cfk::new();
    for (i, &(a, m)) in gr.iter().enumerate() {
        c.add_gen(format!("x{}", i + 1), a, m);
    }
    for b in &bigons {
        c.add_arrow(b.src, b.dst, b.nw, b.nz);
    }
    c.check()?;
    let surv = filtered_reduce(&c.hat_complex()?);
    let dm = match surv.as_slice() {
        [s] => -s.grading,
        _ => return Err(HomError::TotalRank { expected: 1, found: surv.len() }.into()),
    };
    let groups = hfk_hat_groups(&c)?;
    let support: Vec<i32> = groups.iter().filter(|g| g.2 > 0).map(|g| g.0).collect();
    let (lo, hi) = (*support.iter().min().unwrap(), *support.iter().max().unwrap());
    if (lo + hi) % 2 != 0 {
        return Err(HfkError::Asymmetric { lo, hi });
    }
    let da = -(lo + hi) / 2;
    if (lo..=hi).any(|a| groups.rank_at(a) != groups.rank_at(lo + hi - a)) {
        return Err(HfkError::Asymmetric { lo, hi });
    }
    c.shift(da, dm);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unknot() -> OneOneDiagram {
        "period 0 1\nv 1/2 -1/3\nv 1/2 2/3\nz 1/4 1/2\nw 3/4 1/2\n".parse().unwrap()
    }

    #[test]
    fn unknot_diagram() {
        let d = unknot();
        assert_eq!(d.validate().unwrap(), 1);
        let c = build_cfk(&d).unwrap();
        assert_eq!(c.gens.len(), 1);
        assert!(c.arrows.is_empty());
        assert_eq!((c.gens[0].a, c.gens[0].m), (0, 0));
    }

    #[test]
    fn rejects_bad_diagrams() {
        let bad = |s: &str| s.parse::<OneOneDiagram>().unwrap().validate().unwrap_err();
        assert!(matches!(bad("period 0 1\nv 1/2 0\nv 1/2 1\nz 1/4 1/2\nw 3/4 1/2\n"), HfkError::Transversality { .. }));
        assert!(matches!(bad("period 1 1\nv 1/2 -1/3\nv 1/2 2/3\nz 1/4 1/2\nw 3/4 1/2\n"), HfkError::Period { .. }));
        assert!(matches!(bad("period 0 1\nv 1/2 -1/3\nv 1/2 2/3\nz 1/2 1/2\nw 3/4 1/2\n"), HfkError::BasepointOnCurve { .. }));
        assert!(matches!(bad("period 0 1\nv 1/2 -1/3\nv 1/2 2/3\nz 1/4 1/2\nw 3/4 1\n"), HfkError::BasepointOnCurve { .. }));
        // a hook through itself
        assert!(matches!(
            bad("period 0 1\nv 1/2 -1/3\nv 1/2 1/3\nv 0 1/6\nv 1 1/6\nv 1/2 2/3\nz 1/4 1/2\nw 3/4 1/2\n"),
            HfkError::NotEmbedded { .. }
        ));
        assert!(matches!("period 0 2\n".parse::<OneOneDiagram>(), Err(HfkError::Parse { line: 1, .. })));
    }

    #[test]
    fn text_round_trip() {
        let d = unknot();
        assert_eq!(d.to_string().parse::<OneOneDiagram>().unwrap(), d);
    }
}
