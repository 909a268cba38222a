//! Diagrams assembled from arc data: cutting the torus along `α` leaves an
//! annulus, and `β` meets it in rainbows near either boundary plus parallel
//! strands running across.

use std::collections::HashMap;

use super::diagram::OneOneDiagram;
use super::geometry::{Pt, R};
use super::HfkError;

/// `n` points on `α` at `x = (2i + 1) / 2n`. A rainbow `(a, b)` runs from
/// point `a` rightwards to point `b`, wrapping past `x = 1` when `b < a`.
/// Unmatched points carry strands; strand `j` leaves the `j`-th free bottom
/// point and reaches free top point `j + twist` (cyclically, winding once
/// around for each full turn).
#[derive(Clone, Debug)]
pub struct RainbowSpec {
    pub n: usize,
    pub bottom: Vec<(usize, usize)>,
    pub top: Vec<(usize, usize)>,
    pub twist: i64,
    pub z: Pt,
    pub w: Pt,
}

fn xcoord(n: usize, i: usize) -> R {
    R::new(2 * i as i128 + 1, 2 * n as i128)
}

struct Side {
    partner: HashMap<usize, (usize, i128)>,
    height: HashMap<usize, R>,
    free: Vec<usize>,
}

fn side(n: usize, pairs: &[(usize, usize)]) -> Result<Side, HfkError> {
    let mut partner = HashMap::new();
    let spans: Vec<(R, R)> = pairs
        .iter()
        .map(|&(a, b)| (xcoord(n, a), xcoord(n, b) + R::from_integer((b < a) as i128)))
        .collect();
    for &(a, b) in pairs {
        if a >= n || b >= n || a == b {
            return Err(HfkError::Rainbow(format!("bad pair ({a}, {b})")));
        }
        let wrap = (b < a) as i128;
        if partner.insert(a, (b, wrap)).is_some() || partner.insert(b, (a, -wrap)).is_some() {
            return Err(HfkError::Rainbow(format!("point reused in ({a}, {b})")));
        }
    }
    let contains = |o: (R, R), i: (R, R)| {
        (-1..=1).any(|t| {
            let t = R::from_integer(t);
            o.0 < i.0 + t && i.1 + t < o.1
        })
    };
    let mut depth = vec![1usize; pairs.len()];
    for _ in 0..pairs.len() {
        for i in 0..pairs.len() {
            for j in 0..pairs.len() {
                if i != j && contains(spans[i], spans[j]) {
                    depth[i] = depth[i].max(depth[j] + 1);
                }
            }
        }
    }
    let mut height = HashMap::new();
    for (k, &(a, b)) in pairs.iter().enumerate() {
        let h = R::new(depth[k] as i128, 4 * (n as i128 + 1));
        height.insert(a, h);
        height.insert(b, h);
    }
    let free = (0..n).filter(|i| !partner.contains_key(i)).collect();
    Ok(Side { partner, height, free })
}

pub fn rainbow_diagram(spec: &RainbowSpec) -> Result<OneOneDiagram, HfkError> {
    let n = spec.n;
    let bottom = side(n, &spec.bottom)?;
    let top = side(n, &spec.top)?;
    let v = bottom.free.len();
    if v == 0 || v != top.free.len() {
        return Err(HfkError::Rainbow(format!("{v} free bottom points, {} free top", top.free.len())));
    }
    let (lo, hi) = (R::new(3, 8), R::new(5, 8));
    let x = |i: usize, off: i128| xcoord(n, i) + R::from_integer(off);
    let lvl = |k: i128| R::from_integer(k);
    let m = spec.twist as i128;
    let vv = v as i128;
    let strand_end = |j: usize| {
        let t = j as i128 + m;
        (top.free[t.rem_euclid(vv) as usize], t.div_euclid(vv))
    };

    let f0 = bottom.free[0];
    let (g, off) = strand_end(0);
    let mut beta = vec![Pt::new(x(f0, 0), lo), Pt::new(x(g, off), hi)];
    // (level, point, x offset, moving up)
    let (mut k, mut i, mut xo, mut up) = (1i128, g, off, true);
    let mut crossings = 1;
    loop {
        if crossings > n {
            return Err(HfkError::Rainbow("curve does not close".into()));
        }
        if up {
            if let Some(j) = bottom.free.iter().position(|&f| f == i) {
                if j == 0 {
                    break;
                }
                let (g, off) = strand_end(j);
                beta.push(Pt::new(x(i, xo), lvl(k) + lo));
                beta.push(Pt::new(x(g, xo + off), lvl(k) + hi));
                (k, i, xo) = (k + 1, g, xo + off);
            } else {
                let (u, wrap) = bottom.partner[&i];
                let h = bottom.height[&i];
                beta.push(Pt::new(x(i, xo), lvl(k) + h));
                beta.push(Pt::new(x(u, xo + wrap), lvl(k) + h));
                (i, xo, up) = (u, xo + wrap, false);
            }
        } else if let Some(t) = top.free.iter().position(|&g| g == i) {
            let j = (t as i128 - m).rem_euclid(vv) as usize;
            if j == 0 {
                return Err(HfkError::Rainbow("curve closes with reversed orientation".into()));
            }
            let (_, off) = strand_end(j);
            beta.push(Pt::new(x(i, xo), lvl(k - 1) + hi));
            beta.push(Pt::new(x(bottom.free[j], xo - off), lvl(k - 1) + lo));
            (k, i, xo) = (k - 1, bottom.free[j], xo - off);
        } else {
            let (u, wrap) = top.partner[&i];
            let h = top.height[&i];
            beta.push(Pt::new(x(i, xo), lvl(k) - h));
            beta.push(Pt::new(x(u, xo + wrap), lvl(k) - h));
            (i, xo, up) = (u, xo + wrap, true);
        }
        crossings += 1;
    }
    if k != 1 || crossings != n {
        return Err(HfkError::Rainbow(format!("closed after {crossings} of {n} crossings at level {k}")));
    }
    beta.push(Pt::new(x(f0, xo), lvl(1) + lo));
    Ok(OneOneDiagram { p: xo as i64, beta, z: spec.z, w: spec.w })
}
