//! Dotted cobordisms between crossingless matchings, and complexes over them.
//!
//! A morphism between two objects is a linear combination of *basis
//! cobordisms*: one disk per cycle of the boundary graph (plus one disk per
//! free circle at either end), each disk carrying at most one dot. Any
//! dotted surface reduces to this form by neck-cutting, so composition glues
//! the disks, reads off the topology of each component and expands it again.

mod complex;
mod frobenius;
mod matching;
mod surface;

use thiserror::Error;

pub use complex::{Mor, ObjId, Object, TangleComplex};
pub use frobenius::{AlgElt, FrobeniusSpec};
pub use matching::{cycles, Cycles, Matching};
pub(crate) use surface::{Surface, SurfaceBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CobError {
    #[error("Frobenius parameter must be 0 or 1, got {0}")]
    BadParameter(u8),
    #[error("boundary label {0} is used twice in a matching")]
    RepeatedLabel(u32),
    #[error("source and target matchings have different boundaries")]
    BoundaryMismatch,
    #[error("composition of non-composable cobordisms")]
    NotComposable,
    #[error("surface needs {0} pieces; at most 64 are supported")]
    TooManyPieces(usize),
    #[error("inconsistent surface: Euler characteristic {chi} with {boundary} boundary cycles")]
    Topology { chi: i64, boundary: usize },
    #[error("object {0} has no free circle to deloop")]
    NoCircle(ObjId),
    #[error("no object {0}")]
    NoObject(ObjId),
    #[error("no differential entry {0} -> {1}")]
    NoEntry(ObjId, ObjId),
    #[error("entry {0} -> {1} is not invertible")]
    NotInvertible(ObjId, ObjId),
    #[error("d∘d is non-zero on {0} -> {1}")]
    DSquared(ObjId, ObjId),
    #[error("entry {src} -> {dst} has quantum degree {degree}")]
    Degree { src: ObjId, dst: ObjId, degree: i64 },
    #[error("entry {0} -> {1} does not raise the homological degree by one")]
    HomologicalDegree(ObjId, ObjId),
}

/// Basis cobordism between circle-free matchings: one disk per boundary
/// cycle (numbered as in [`cycles`]), bit `i` of `dots` dotting cycle `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DottedCobordism {
    pub source: Matching,
    pub target: Matching,
    pub dots: u64,
}

impl DottedCobordism {
    pub fn identity(m: &Matching) -> Self {
        DottedCobordism { source: m.clone(), target: m.clone(), dots: 0 }
    }

    pub fn num_components(&self) -> Result<usize, CobError> {
        Ok(cycles(&self.source, &self.target)?.count)
    }
}

/// Gluing pattern for `g ∘ f` with `f: (mx, kx) -> (my, ky)` and
/// `g: (my, ky) -> (mz, kz)`, where `k*` count free circles. Returns the
/// surface and the number of pieces of `f`; the dots of `g` are shifted by it.
pub(crate) fn composition_surface(
    (mx, kx): (&Matching, usize),
    (my, ky): (&Matching, usize),
    (mz, kz): (&Matching, usize),
) -> Result<(Surface, usize), CobError> {
    let cf = cycles(mx, my)?;
    let cg = cycles(my, mz)?;
    let cxz = cycles(mx, mz)?;
    let nf = cf.count + kx + ky;
    let ng = cg.count + ky + kz;
    let mut b = SurfaceBuilder::new();
    b.pieces(nf + ng);
    for j in 0..my.pairs().len() {
        b.glue_interval(cf.of_pair1[j], nf + cg.of_pair0[j]);
    }
    for c in 0..ky {
        b.glue_circle(cf.count + kx + c, nf + cg.count + c);
    }
    let mut owner = vec![usize::MAX; cxz.count];
    for (i, &k) in cxz.of_pair0.iter().enumerate() {
        if owner[k] == usize::MAX {
            owner[k] = cf.of_pair0[i];
        }
    }
    for o in owner {
        b.boundary(o);
    }
    for c in 0..kx {
        b.boundary(cf.count + c);
    }
    for c in 0..kz {
        b.boundary(nf + cg.count + ky + c);
    }
    Ok((b.finish()?, nf))
}

/// Compose two basis cobordisms; the result is an integer combination of
/// basis cobordisms from `f.source` to `g.target`.
pub fn compose(
    g: &DottedCobordism,
    f: &DottedCobordism,
    spec: FrobeniusSpec,
) -> Result<Vec<(DottedCobordism, i64)>, CobError> {
    if f.target != g.source {
        return Err(CobError::NotComposable);
    }
    let (surface, nf) = composition_surface((&f.source, 0), (&f.target, 0), (&g.target, 0))?;
    let mut terms = surface.eval(f.dots | g.dots << nf, spec);
    terms.sort_unstable();
    let mut out: Vec<(DottedCobordism, i64)> = Vec::new();
    for (m, c) in terms {
        match out.last_mut() {
            Some((d, acc)) if d.dots == m => *acc += c,
            _ => out.push((DottedCobordism { source: f.source.clone(), target: g.target.clone(), dots: m }, c)),
        }
    }
    out.retain(|t| t.1 != 0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(u32, u32)]) -> Matching {
        Matching::new(p.iter().copied()).unwrap()
    }

    #[test]
    fn saddles_compose_to_neck() {
        let r0 = m(&[(1, 2), (3, 4)]);
        let r1 = m(&[(1, 4), (2, 3)]);
        let s = DottedCobordism { source: r0.clone(), target: r1.clone(), dots: 0 };
        let back = DottedCobordism { source: r1, target: r0.clone(), dots: 0 };
        let c = compose(&back, &s, FrobeniusSpec::KHOVANOV).unwrap();
        // annulus between the two arcs: dot on one side or the other
        let dots: Vec<(u64, i64)> = c.iter().map(|(d, k)| (d.dots, *k)).collect();
        assert_eq!(dots, vec![(1, 1), (2, 1)]);
        let c = compose(&back, &s, FrobeniusSpec::LEE).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn identity_is_neutral() {
        let a = m(&[(1, 2), (3, 4)]);
        let b = m(&[(1, 4), (2, 3)]);
        let f = DottedCobordism { source: a.clone(), target: b.clone(), dots: 1 };
        for spec in [FrobeniusSpec::KHOVANOV, FrobeniusSpec::LEE] {
            assert_eq!(compose(&DottedCobordism::identity(&b), &f, spec).unwrap(), vec![(f.clone(), 1)]);
            assert_eq!(compose(&f, &DottedCobordism::identity(&a), spec).unwrap(), vec![(f.clone(), 1)]);
        }
    }

    #[test]
    fn dot_squared() {
        let a = m(&[(1, 2)]);
        let x = DottedCobordism { source: a.clone(), target: a.clone(), dots: 1 };
        assert!(compose(&x, &x, FrobeniusSpec::KHOVANOV).unwrap().is_empty());
        assert_eq!(compose(&x, &x, FrobeniusSpec::LEE).unwrap(), vec![(DottedCobordism::identity(&a), 1)]);
    }

    #[test]
    fn boundary_mismatch() {
        let a = m(&[(1, 2)]);
        let b = m(&[(3, 4)]);
        let f = DottedCobordism::identity(&a);
        let g = DottedCobordism::identity(&b);
        assert_eq!(compose(&g, &f, FrobeniusSpec::KHOVANOV), Err(CobError::NotComposable));
    }
}
