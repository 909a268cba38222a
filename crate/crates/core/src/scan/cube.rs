//! The full cube of resolutions, without any simplification.

use std::collections::HashMap;

use super::{OutputComplex, ScanError};
use crate::cobcat::FrobeniusSpec;
use crate::field::Field;
use crate::linkdiag::LinkDiagram;
use crate::util::UnionFind;

pub const CUBE_MAX_CROSSINGS: usize = 12;

/// Circles of one resolution: circle index per label slot.
struct Resolution {
    circle_of: Vec<usize>,
    count: usize,
}

fn resolve(xs: &[[usize; 4]], nlabels: usize, state: u32) -> Resolution {
    let mut uf = UnionFind::new(nlabels);
    for (i, x) in xs.iter().enumerate() {
        if state >> i & 1 == 0 {
            uf.union(x[0], x[1]);
            uf.union(x[2], x[3]);
        } else {
            uf.union(x[0], x[3]);
            uf.union(x[1], x[2]);
        }
    }
    let mut root_idx = HashMap::new();
    let circle_of = (0..nlabels)
        .map(|l| {
            let r = uf.find(l);
            let n = root_idx.len();
            *root_idx.entry(r).or_insert(n)
        })
        .collect();
    Resolution { circle_of, count: root_idx.len() }
}

/// Khovanov (or Lee) complex straight from the cube: generators are the
/// labellings of each resolution's circles by `1` or `X` (bit set = `X`).
pub fn direct_cube<F: Field>(d: &LinkDiagram, spec: FrobeniusSpec) -> Result<OutputComplex<F>, ScanError> {
    let n = d.num_crossings();
    if n > CUBE_MAX_CROSSINGS {
        return Err(ScanError::TooLarge { crossings: n, limit: CUBE_MAX_CROSSINGS });
    }
    let labels = d.labels();
    let index: HashMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let xs: Vec<[usize; 4]> = d.crossings().iter().map(|x| x.map(|l| index[&l])).collect();
    let extra = d.unknot_components();
    let (np, nn) = (d.num_positive() as i32, d.num_negative() as i32);

    let res: Vec<Resolution> = (0..1u32 << n).map(|s| resolve(&xs, labels.len(), s)).collect();
    let mut offset = Vec::with_capacity(res.len());
    let mut gens = Vec::new();
    for (s, r) in res.iter().enumerate() {
        offset.push(gens.len());
        let circles = r.count + extra;
        let ones = s.count_ones() as i32;
        for lab in 0..1u64 << circles {
            let xs_count = lab.count_ones() as i32;
            let q = ones + circles as i32 - 2 * xs_count + np - 2 * nn;
            gens.push((ones - nn, q));
        }
    }

    let mut entries = Vec::new();
    for (s, r) in res.iter().enumerate() {
        for (i, x) in xs.iter().enumerate() {
            if s >> i & 1 == 1 {
                continue;
            }
            let t = s | 1 << i;
            let rt = &res[t];
            let sign = if (s & ((1 << i) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
            let (a, b) = (r.circle_of[x[0]], r.circle_of[x[2]]);
            // circles of s other than a, b map to circles of t by any label;
            // unknot components sit after the diagram's circles
            let mut image = vec![usize::MAX; r.count];
            for l in 0..labels.len() {
                image[r.circle_of[l]] = rt.circle_of[l];
            }
            let (ta, tb) = (rt.circle_of[x[0]], rt.circle_of[x[1]]);
            let (cs, ct) = (r.count + extra, rt.count + extra);
            for lab in 0..1u64 << cs {
                let mut base = 0u64;
                for c in 0..r.count {
                    if c != a && c != b && lab >> c & 1 == 1 {
                        base |= 1 << image[c];
                    }
                }
                for u in 0..extra {
                    if lab >> (r.count + u) & 1 == 1 {
                        base |= 1 << (rt.count + u);
                    }
                }
                let elt = |c: usize| if lab >> c & 1 == 1 { (0, 1) } else { (1, 0) };
                let mut terms: Vec<(u64, i64)> = Vec::new();
                if a != b {
                    // merge
                    let m = spec.multiply(elt(a), elt(b));
                    let tc = rt.circle_of[x[0]];
                    if m.0 != 0 {
                        terms.push((base, m.0));
                    }
                    if m.1 != 0 {
                        terms.push((base | 1 << tc, m.1));
                    }
                } else {
                    // split into the circles through x0 and x1
                    for (mask, c) in spec.comultiply(elt(a), 2) {
                        let mut g = base;
                        if mask & 1 == 1 {
                            g |= 1 << ta;
                        }
                        if mask & 2 == 2 {
                            g |= 1 << tb;
                        }
                        terms.push((g, c));
                    }
                }
                debug_assert!(ct <= 64);
                for (g, c) in terms {
                    entries.push((offset[s] + lab as usize, offset[t] + g as usize, F::from_i64(sign * c)));
                }
            }
        }
    }
    Ok(OutputComplex::new(spec, gens, entries))
}
