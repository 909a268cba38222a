//! Scanning computation of Khovanov and Lee complexes: crossings are
//! tensored in one at a time, and each intermediate tangle complex is
//! delooped and simplified by Gaussian elimination.

mod cube;
mod plan;
mod tensor;

use std::collections::BTreeMap;

use log::debug;
use thiserror::Error;

use crate::cobcat::{CobError, FrobeniusSpec, Matching, TangleComplex};
use crate::field::Field;
use crate::homalg::{homology_ranks, Direction, FilteredComplex, HomError};
use crate::linkdiag::{DiagramError, LinkDiagram};
use crate::poly::Poincare;

pub use cube::{direct_cube, CUBE_MAX_CROSSINGS};
pub use plan::{plan_order, ScanPlan};

pub const DEFAULT_MAX_GENERATORS: usize = 5_000_000;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Cobordism(#[from] CobError),
    #[error(transparent)]
    Homology(#[from] HomError),
    #[error("{count} generators after step {step} exceed the cap of {cap}")]
    TooManyGenerators { step: usize, count: usize, cap: usize },
    #[error("direct cube limited to {limit} crossings, got {crossings}")]
    TooLarge { crossings: usize, limit: usize },
    #[error("Poincaré polynomial requested from a Lee complex")]
    NotGraded,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub max_generators: usize,
    /// Assert `d² = 0` and the degree rules on small intermediate complexes.
    pub check_invariants: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { max_generators: DEFAULT_MAX_GENERATORS, check_invariants: false }
    }
}

/// Complex of a closed diagram over a field: generators with final `(h, q)`
/// gradings and scalar differential entries.
#[derive(Clone, Debug)]
pub struct OutputComplex<F> {
    spec: FrobeniusSpec,
    gens: Vec<(i32, i32)>,
    entries: Vec<(usize, usize, F)>,
}

impl<F: Field> OutputComplex<F> {
    pub fn new(spec: FrobeniusSpec, gens: Vec<(i32, i32)>, entries: Vec<(usize, usize, F)>) -> Self {
        OutputComplex { spec, gens, entries }
    }

    pub fn spec(&self) -> FrobeniusSpec {
        self.spec
    }

    pub fn is_filtered(&self) -> bool {
        self.spec.is_lee()
    }

    /// `(h, q)` per generator.
    pub fn gens(&self) -> &[(i32, i32)] {
        &self.gens
    }

    pub fn entries(&self) -> &[(usize, usize, F)] {
        &self.entries
    }

    /// Cohomological complex filtered by `-q`, so that `d` never raises the
    /// filtration.
    pub fn to_filtered(&self) -> Result<FilteredComplex<F>, HomError> {
        let mut c = FilteredComplex::new(Direction::Up);
        for &(h, q) in &self.gens {
            c.add_gen(h, -q);
        }
        for (s, t, v) in &self.entries {
            c.add_entry(*s, *t, v.clone())?;
        }
        Ok(c)
    }

    /// Homology ranks per homological degree, ignoring `q`.
    pub fn homology_by_h(&self) -> Result<BTreeMap<i32, u64>, HomError> {
        let c = self.to_filtered()?;
        c.check_d_squared()?;
        Ok(c.forget_filtration().homology_by_grading())
    }

    pub fn total_rank(&self) -> Result<u64, HomError> {
        Ok(self.homology_by_h()?.values().sum())
    }

    /// Bigraded homology of a Khovanov complex.
    pub fn poincare(&self) -> Result<Poincare, ScanError> {
        if self.spec.is_lee() {
            return Err(ScanError::NotGraded);
        }
        let g = homology_ranks(&self.to_filtered()?)?;
        let mut p = Poincare::new();
        for (f, h, r) in g.iter() {
            p.add(h, -f, r);
        }
        Ok(p)
    }
}

/// Scan with the greedy plan and default options.
pub fn scan<F: Field>(d: &LinkDiagram, spec: FrobeniusSpec) -> Result<OutputComplex<F>, ScanError> {
    scan_with(d, spec, &plan_order(d), ScanOptions::default())
}

pub fn scan_with<F: Field>(
    d: &LinkDiagram,
    spec: FrobeniusSpec,
    plan: &ScanPlan,
    opts: ScanOptions,
) -> Result<OutputComplex<F>, ScanError> {
    let mut c: TangleComplex<F> = TangleComplex::new(spec, Vec::new());
    let empty = c.intern(Matching::empty());
    let circles = u8::try_from(d.unknot_components()).map_err(|_| CobError::TooManyPieces(d.unknot_components()))?;
    c.add_object(empty, circles, 0, 0);
    c.deloop_all()?;
    for (step, &i) in plan.order.iter().enumerate() {
        let mut next = tensor::tensor(&c, d.crossings()[i])?;
        let cap = |n: usize| {
            if n > opts.max_generators {
                Err(ScanError::TooManyGenerators { step, count: n, cap: opts.max_generators })
            } else {
                Ok(())
            }
        };
        cap(next.num_objects())?;
        next.deloop_all()?;
        cap(next.num_objects())?;
        let cancelled = next.simplify()?;
        debug!(
            "step {step}: crossing {i}, boundary {}, {} objects, {} entries, {cancelled} cancelled",
            next.boundary().len(),
            next.num_objects(),
            next.num_entries()
        );
        if opts.check_invariants && next.num_objects() < 400 {
            next.check_invariants()?;
        }
        c = next;
    }
    let (np, nn) = (d.num_positive() as i32, d.num_negative() as i32);
    let mut index = BTreeMap::new();
    let mut gens = Vec::with_capacity(c.num_objects());
    for (id, o) in c.objects() {
        debug_assert!(o.circles == 0 && c.matching(o.matching).pairs().is_empty());
        index.insert(id, gens.len());
        gens.push((o.h - nn, o.q + np - 2 * nn));
    }
    let mut entries = Vec::new();
    for (id, _) in c.objects() {
        for (dst, m) in c.outgoing(id) {
            for (mask, v) in m.terms() {
                debug_assert_eq!(*mask, 0);
                entries.push((index[&id], index[&dst], v.clone()));
            }
        }
    }
    Ok(OutputComplex::new(spec, gens, entries))
}
