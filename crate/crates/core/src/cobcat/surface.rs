//! Evaluation of surfaces assembled from dotted disks.
//!
//! A surface is described by disk pieces glued along boundary intervals or
//! whole boundary circles. Each connected component with `b` remaining
//! boundary cycles, genus `g` and `d` dots is neck-cut into `b` disks carrying
//! `Δ^{b-1}(X^d (2X)^g)`; closed components become scalars through `ε`.

use super::{CobError, FrobeniusSpec};
use crate::util::UnionFind;

#[derive(Clone, Debug, Default)]
pub(crate) struct SurfaceBuilder {
    pieces: usize,
    glues: Vec<(usize, usize, bool)>,
    boundary: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Component {
    genus: u32,
    /// pieces of the component, as a bit set
    pieces: u64,
    /// indices of the final boundary cycles it carries
    boundary: Vec<u32>,
}

/// Gluing pattern with the topology already resolved; evaluates any
/// assignment of dots to its pieces.
#[derive(Clone, Debug)]
pub(crate) struct Surface {
    comps: Vec<Component>,
}

impl SurfaceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pieces(&mut self, n: usize) -> usize {
        let first = self.pieces;
        self.pieces += n;
        first
    }

    pub fn glue_interval(&mut self, a: usize, b: usize) {
        self.glues.push((a, b, true));
    }

    pub fn glue_circle(&mut self, a: usize, b: usize) {
        self.glues.push((a, b, false));
    }

    /// Declare the next final boundary cycle, lying on piece `owner`.
    pub fn boundary(&mut self, owner: usize) {
        self.boundary.push(owner);
    }

    pub fn finish(self) -> Result<Surface, CobError> {
        if self.pieces > 64 || self.boundary.len() > 64 {
            return Err(CobError::TooManyPieces(self.pieces.max(self.boundary.len())));
        }
        let mut uf = UnionFind::new(self.pieces);
        for &(a, b, _) in &self.glues {
            uf.union(a, b);
        }
        let mut root_comp = vec![usize::MAX; self.pieces];
        let mut comps: Vec<(Component, i64)> = Vec::new();
        for p in 0..self.pieces {
            let r = uf.find(p);
            if root_comp[r] == usize::MAX {
                root_comp[r] = comps.len();
                comps.push((Component { genus: 0, pieces: 0, boundary: Vec::new() }, 0));
            }
            let c = &mut comps[root_comp[r]];
            c.0.pieces |= 1 << p;
            c.1 += 1;
        }
        for &(a, _, interval) in &self.glues {
            if interval {
                comps[root_comp[uf.find(a)]].1 -= 1;
            }
        }
        for (i, &owner) in self.boundary.iter().enumerate() {
            comps[root_comp[uf.find(owner)]].0.boundary.push(i as u32);
        }
        let mut out = Vec::with_capacity(comps.len());
        for (mut c, chi) in comps {
            let twice_g = 2 - c.boundary.len() as i64 - chi;
            if twice_g < 0 || twice_g % 2 != 0 {
                return Err(CobError::Topology { chi, boundary: c.boundary.len() });
            }
            c.genus = (twice_g / 2) as u32;
            out.push(c);
        }
        Ok(Surface { comps: out })
    }
}

impl Surface {
    /// Linear combination of dotted disk sets on the final boundary cycles;
    /// `dots` has one bit per piece.
    pub fn eval(&self, dots: u64, spec: FrobeniusSpec) -> Vec<(u64, i64)> {
        let mut scalar = 1i64;
        let mut terms: Vec<(u64, i64)> = vec![(0, 1)];
        for c in &self.comps {
            let d = (dots & c.pieces).count_ones();
            let elt = spec.handle_dots(d, c.genus);
            if c.boundary.is_empty() {
                scalar *= spec.counit(elt);
                if scalar == 0 {
                    return Vec::new();
                }
                continue;
            }
            let local = spec.comultiply(elt, c.boundary.len());
            if local.is_empty() {
                return Vec::new();
            }
            let mut next = Vec::with_capacity(terms.len() * local.len());
            for &(m, a) in &terms {
                for &(lm, b) in &local {
                    let mut mask = m;
                    for (k, &bi) in c.boundary.iter().enumerate() {
                        if lm >> k & 1 == 1 {
                            mask |= 1 << bi;
                        }
                    }
                    next.push((mask, a * b));
                }
            }
            terms = next;
        }
        if scalar != 1 {
            for t in &mut terms {
                t.1 *= scalar;
            }
        }
        terms
    }

    #[cfg(test)]
    fn genus(&self) -> u32 {
        self.comps.iter().map(|c| c.genus).sum()
    }
}
