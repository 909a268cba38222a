//! One scanning step: tensor a tangle complex with the two-term complex of
//! a single crossing.

use std::collections::HashMap;
use std::rc::Rc;

use crate::cobcat::{cycles, CobError, Matching, Mor, ObjId, Surface, SurfaceBuilder, TangleComplex};
use crate::field::Field;

/// The two smoothings as pairs of slots: 0-smoothing joins (0,1),(2,3),
/// 1-smoothing joins (0,3),(1,2).
const SMOOTHING: [[(usize, usize); 2]; 2] = [[(0, 1), (2, 3)], [(0, 3), (1, 2)]];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Arc {
    /// pair of the old matching
    Old(usize),
    /// arc of the smoothing
    Local(usize),
}

/// Result of closing an old matching with one smoothing.
struct Traced {
    matching: Matching,
    loops: usize,
    /// some arc on the path ending at each new boundary label
    arc_at: HashMap<u32, Arc>,
    loop_arcs: Vec<Arc>,
}

/// How the crossing meets the current boundary.
pub(crate) struct Step {
    x: [u32; 4],
    old_boundary: Vec<u32>,
    /// slot -> glued old label
    to_old: [Option<u32>; 4],
    /// slot -> other slot with the same label
    to_slot: [Option<usize>; 4],
    pub new_boundary: Vec<u32>,
}

impl Step {
    pub fn new(old_boundary: &[u32], x: [u32; 4]) -> Self {
        let mut to_old = [None; 4];
        let mut to_slot = [None; 4];
        for s in 0..4 {
            if old_boundary.binary_search(&x[s]).is_ok() {
                to_old[s] = Some(x[s]);
            } else if let Some(t) = (0..4).find(|&t| t != s && x[t] == x[s]) {
                to_slot[s] = Some(t);
            }
        }
        let mut new_boundary: Vec<u32> =
            old_boundary.iter().copied().filter(|l| !x.contains(l)).collect();
        for s in 0..4 {
            if to_old[s].is_none() && to_slot[s].is_none() {
                new_boundary.push(x[s]);
            }
        }
        new_boundary.sort_unstable();
        Step { x, old_boundary: old_boundary.to_vec(), to_old, to_slot, new_boundary }
    }

    fn trace(&self, m: &Matching, r: usize) -> Result<Traced, CobError> {
        let np = m.pairs().len();
        let nb = self.old_boundary.len();
        let old_pt = |l: u32| self.old_boundary.binary_search(&l).unwrap();
        // points: old labels 0..nb, then slots nb..nb+4
        let mut across = vec![(0usize, Arc::Old(0)); nb + 4];
        for (i, &(a, b)) in m.pairs().iter().enumerate() {
            across[old_pt(a)] = (old_pt(b), Arc::Old(i));
            across[old_pt(b)] = (old_pt(a), Arc::Old(i));
        }
        for (j, &(s, t)) in SMOOTHING[r].iter().enumerate() {
            across[nb + s] = (nb + t, Arc::Local(j));
            across[nb + t] = (nb + s, Arc::Local(j));
        }
        let mut glued = vec![None; nb + 4];
        for s in 0..4 {
            if let Some(l) = self.to_old[s] {
                glued[nb + s] = Some(old_pt(l));
                glued[old_pt(l)] = Some(nb + s);
            }
            if let Some(t) = self.to_slot[s] {
                glued[nb + s] = Some(nb + t);
            }
        }
        let label = |p: usize| if p < nb { self.old_boundary[p] } else { self.x[p - nb] };
        let arc_id = |a: Arc| match a {
            Arc::Old(i) => i,
            Arc::Local(j) => np + j,
        };
        let mut seen = vec![false; np + 2];
        let mut pairs = Vec::new();
        let mut arc_at = HashMap::new();
        for p in 0..nb + 4 {
            if glued[p].is_some() {
                continue;
            }
            let first = across[p].1;
            if seen[arc_id(first)] {
                continue;
            }
            let mut cur = p;
            let end = loop {
                let (next, a) = across[cur];
                seen[arc_id(a)] = true;
                match glued[next] {
                    Some(g) => cur = g,
                    None => break next,
                }
            };
            pairs.push((label(p), label(end)));
            arc_at.insert(label(p), first);
            arc_at.insert(label(end), first);
        }
        let mut loop_arcs = Vec::new();
        for p in 0..nb + 4 {
            let first = across[p].1;
            if seen[arc_id(first)] {
                continue;
            }
            let mut cur = p;
            loop {
                let (next, a) = across[cur];
                seen[arc_id(a)] = true;
                cur = glued[next].expect("open path inside a closed loop");
                if cur == p {
                    break;
                }
            }
            loop_arcs.push(first);
        }
        Ok(Traced { matching: Matching::new(pairs)?, loops: loop_arcs.len(), arc_at, loop_arcs })
    }

    fn strip(r: usize, s: usize) -> usize {
        SMOOTHING[r].iter().position(|&(a, b)| a == s || b == s).unwrap()
    }

    /// Gluings of the crossing's slots, given the piece holding each old label.
    fn glue(&self, b: &mut SurfaceBuilder, r_src: usize, old_piece: impl Fn(u32) -> usize, local: impl Fn(usize) -> usize) {
        for s in 0..4 {
            if let Some(l) = self.to_old[s] {
                b.glue_interval(old_piece(l), local(Self::strip(r_src, s)));
            }
            if let Some(t) = self.to_slot[s] {
                if s < t {
                    b.glue_interval(local(Self::strip(r_src, s)), local(Self::strip(r_src, t)));
                }
            }
        }
    }

    /// Boundary cycles of a cobordism `src -> dst` in basis order.
    fn boundaries(
        b: &mut SurfaceBuilder,
        src: &Traced,
        dst: &Traced,
        src_piece: impl Fn(Arc) -> usize,
        dst_piece: impl Fn(Arc) -> usize,
    ) -> Result<(), CobError> {
        let cs = cycles(&src.matching, &dst.matching)?;
        let mut owner = vec![usize::MAX; cs.count];
        for (i, &k) in cs.of_pair0.iter().enumerate() {
            if owner[k] == usize::MAX {
                owner[k] = src_piece(src.arc_at[&src.matching.pairs()[i].0]);
            }
        }
        for o in owner {
            b.boundary(o);
        }
        for &a in &src.loop_arcs {
            b.boundary(src_piece(a));
        }
        for &a in &dst.loop_arcs {
            b.boundary(dst_piece(a));
        }
        Ok(())
    }
}

type SurfaceCache = HashMap<(u32, u32, u8), Rc<Surface>>;

/// `old ⊗ [crossing x]` with Koszul signs; objects of `old` must carry no
/// free circles.
pub(crate) fn tensor<F: Field>(old: &TangleComplex<F>, x: [u32; 4]) -> Result<TangleComplex<F>, CobError> {
    let step = Step::new(old.boundary(), x);
    let mut new: TangleComplex<F> = TangleComplex::new(old.spec(), step.new_boundary.clone());
    let mut traced: HashMap<(u32, usize), Rc<Traced>> = HashMap::new();
    let mut ids: HashMap<(ObjId, usize), ObjId> = HashMap::new();
    for (id, o) in old.objects() {
        assert_eq!(o.circles, 0, "tensoring an object with free circles");
        for r in 0..2 {
            let t = match traced.get(&(o.matching, r)) {
                Some(t) => t.clone(),
                None => {
                    let t = Rc::new(step.trace(old.matching(o.matching), r)?);
                    traced.insert((o.matching, r), t.clone());
                    t
                }
            };
            let m = new.intern(t.matching.clone());
            let loops = u8::try_from(t.loops).map_err(|_| CobError::TooManyPieces(t.loops))?;
            ids.insert((id, r), new.add_object(m, loops, o.h + r as i32, o.q + r as i32));
        }
    }

    let spec = old.spec();
    let mut cache: SurfaceCache = HashMap::new();
    let objects: Vec<(ObjId, u32, i32)> = old.objects().map(|(id, o)| (id, o.matching, o.h)).collect();
    for &(src, ms, h) in &objects {
        // saddle at the new crossing
        let key = (ms, ms, 2);
        let surf = match cache.get(&key) {
            Some(s) => s.clone(),
            None => {
                let m = old.matching(ms);
                let np = m.pairs().len();
                let (t0, t1) = (&traced[&(ms, 0)], &traced[&(ms, 1)]);
                let mut b = SurfaceBuilder::new();
                b.pieces(np + 1);
                step.glue(&mut b, 0, |l| m.pair_of(l).unwrap(), |_| np);
                let piece = |a: Arc| match a {
                    Arc::Old(i) => i,
                    Arc::Local(_) => np,
                };
                Step::boundaries(&mut b, t0, t1, piece, piece)?;
                let s = Rc::new(b.finish()?);
                cache.insert(key, s.clone());
                s
            }
        };
        let sign = if h.rem_euclid(2) == 0 { F::one() } else { -F::one() };
        let mut saddle = Mor::zero();
        for (mask, k) in surf.eval(0, spec) {
            saddle.add_term(mask, F::from_i64(k));
        }
        new.add_entry(ids[&(src, 0)], ids[&(src, 1)], &saddle, &sign);

        // old differential, tensored with the identity of each smoothing
        let row: Vec<(ObjId, Mor<F>)> = old.outgoing(src).map(|(d, f)| (d, f.clone())).collect();
        for (dst, f) in row {
            let md = old.object(dst).unwrap().matching;
            for r in 0..2 {
                let key = (ms, md, r as u8);
                let surf = match cache.get(&key) {
                    Some(s) => s.clone(),
                    None => {
                        let (m0, m1) = (old.matching(ms), old.matching(md));
                        let cf = cycles(m0, m1)?;
                        let c = cf.count;
                        let mut b = SurfaceBuilder::new();
                        b.pieces(c + 2);
                        step.glue(&mut b, r, |l| cf.of_pair0[m0.pair_of(l).unwrap()], |j| c + j);
                        let src_piece = |a: Arc| match a {
                            Arc::Old(i) => cf.of_pair0[i],
                            Arc::Local(j) => c + j,
                        };
                        let dst_piece = |a: Arc| match a {
                            Arc::Old(i) => cf.of_pair1[i],
                            Arc::Local(j) => c + j,
                        };
                        Step::boundaries(&mut b, &traced[&(ms, r)], &traced[&(md, r)], src_piece, dst_piece)?;
                        let s = Rc::new(b.finish()?);
                        cache.insert(key, s.clone());
                        s
                    }
                };
                let mut g = Mor::zero();
                for (mask, coef) in f.terms() {
                    for (m2, k) in surf.eval(*mask, spec) {
                        g.add_term(m2, coef.clone() * F::from_i64(k));
                    }
                }
                new.add_entry(ids[&(src, r)], ids[&(dst, r)], &g, &F::one());
            }
        }
    }
    Ok(new)
}
