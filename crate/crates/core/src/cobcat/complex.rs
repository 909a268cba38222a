use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use super::{composition_surface, cycles, CobError, FrobeniusSpec, Matching, Surface};
use crate::field::Field;

pub type ObjId = u32;

/// Object of a tangle complex: a matching plus `circles` free circles,
/// placed in homological degree `h` with quantum shift `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Object {
    pub matching: u32,
    pub circles: u8,
    pub h: i32,
    pub q: i32,
}

/// Linear combination of basis cobordisms, keyed by dot mask.
///
/// Bits `0..c` dot the cycles of the boundary graph (see
/// [`cycles`](super::cycles)), the next bits the source's free circles, then
/// the target's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mor<F> {
    terms: Vec<(u64, F)>,
}

impl<F: Field> Mor<F> {
    pub fn zero() -> Self {
        Mor { terms: Vec::new() }
    }

    pub fn basis(mask: u64, c: F) -> Self {
        let mut m = Mor::zero();
        m.add_term(mask, c);
        m
    }

    pub fn terms(&self) -> &[(u64, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mask: u64, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&mask, |t| t.0) {
            Ok(i) => {
                let v = self.terms[i].1.clone() + c;
                if v.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = v;
                }
            }
            Err(i) => self.terms.insert(i, (mask, c)),
        }
    }

    pub fn add_scaled(&mut self, other: &Mor<F>, c: &F) {
        for (m, v) in &other.terms {
            self.add_term(*m, v.clone() * c.clone());
        }
    }

    /// The scalar `c` if this is `c` times the undotted basis element.
    pub fn as_scalar_identity(&self) -> Option<&F> {
        match self.terms.as_slice() {
            [(0, c)] => Some(c),
            _ => None,
        }
    }

    /// Keep terms whose bit `bit` equals `keep`, deleting that bit.
    fn filter_bit(&self, bit: u32, keep: bool) -> Mor<F> {
        let low = (1u64 << bit) - 1;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| (m >> bit & 1 == 1) == keep)
            .map(|(m, c)| ((m & low) | (m >> (bit + 1)) << bit, c.clone()))
            .collect();
        Mor { terms }
    }
}

type SurfaceKey = (u32, u8, u32, u8, u32, u8);

/// Chain complex over the dotted cobordism category, with a fixed set of
/// boundary labels.
#[derive(Clone, Debug)]
pub struct TangleComplex<F> {
    spec: FrobeniusSpec,
    boundary: Vec<u32>,
    matchings: Vec<Matching>,
    matching_ids: HashMap<Matching, u32>,
    objects: BTreeMap<ObjId, Object>,
    out: BTreeMap<ObjId, BTreeMap<ObjId, Mor<F>>>,
    inc: BTreeMap<ObjId, BTreeSet<ObjId>>,
    next_id: ObjId,
    surfaces: HashMap<SurfaceKey, Rc<(Surface, usize)>>,
}

impl<F: Field> TangleComplex<F> {
    pub fn new(spec: FrobeniusSpec, mut boundary: Vec<u32>) -> Self {
        boundary.sort_unstable();
        TangleComplex {
            spec,
            boundary,
            matchings: Vec::new(),
            matching_ids: HashMap::new(),
            objects: BTreeMap::new(),
            out: BTreeMap::new(),
            inc: BTreeMap::new(),
            next_id: 0,
            surfaces: HashMap::new(),
        }
    }

    pub fn spec(&self) -> FrobeniusSpec {
        self.spec
    }

    pub fn boundary(&self) -> &[u32] {
        &self.boundary
    }

    pub fn intern(&mut self, m: Matching) -> u32 {
        if let Some(&id) = self.matching_ids.get(&m) {
            return id;
        }
        let id = self.matchings.len() as u32;
        self.matchings.push(m.clone());
        self.matching_ids.insert(m, id);
        id
    }

    pub fn matching(&self, id: u32) -> &Matching {
        &self.matchings[id as usize]
    }

    pub fn add_object(&mut self, matching: u32, circles: u8, h: i32, q: i32) -> ObjId {
        let id = self.next_id;
        self.next_id += 1;
        self.objects.insert(id, Object { matching, circles, h, q });
        self.out.insert(id, BTreeMap::new());
        self.inc.insert(id, BTreeSet::new());
        id
    }

    pub fn object(&self, id: ObjId) -> Option<&Object> {
        self.objects.get(&id)
    }

    pub fn objects(&self) -> impl Iterator<Item = (ObjId, &Object)> + '_ {
        self.objects.iter().map(|(&k, v)| (k, v))
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_entries(&self) -> usize {
        self.out.values().map(|m| m.len()).sum()
    }

    pub fn entry(&self, src: ObjId, dst: ObjId) -> Option<&Mor<F>> {
        self.out.get(&src).and_then(|m| m.get(&dst))
    }

    pub fn outgoing(&self, src: ObjId) -> impl Iterator<Item = (ObjId, &Mor<F>)> + '_ {
        self.out.get(&src).into_iter().flat_map(|m| m.iter().map(|(&k, v)| (k, v)))
    }

    pub fn incoming(&self, dst: ObjId) -> impl Iterator<Item = ObjId> + '_ {
        self.inc.get(&dst).into_iter().flat_map(|s| s.iter().copied())
    }

    /// Add `c · m` to the entry `src -> dst`.
    pub fn add_entry(&mut self, src: ObjId, dst: ObjId, m: &Mor<F>, c: &F) {
        if m.is_zero() || c.is_zero() {
            return;
        }
        let row = self.out.get_mut(&src).expect("unknown source object");
        let e = row.entry(dst).or_insert_with(Mor::zero);
        e.add_scaled(m, c);
        if e.is_zero() {
            row.remove(&dst);
            self.inc.get_mut(&dst).unwrap().remove(&src);
        } else {
            self.inc.get_mut(&dst).expect("unknown target object").insert(src);
        }
    }

    pub fn remove_object(&mut self, id: ObjId) {
        self.objects.remove(&id);
        if let Some(row) = self.out.remove(&id) {
            for dst in row.keys() {
                if let Some(s) = self.inc.get_mut(dst) {
                    s.remove(&id);
                }
            }
        }
        if let Some(col) = self.inc.remove(&id) {
            for src in col {
                if let Some(r) = self.out.get_mut(&src) {
                    r.remove(&id);
                }
            }
        }
    }

    fn surface(&mut self, x: (u32, u8), y: (u32, u8), z: (u32, u8)) -> Result<Rc<(Surface, usize)>, CobError> {
        let key = (x.0, x.1, y.0, y.1, z.0, z.1);
        if let Some(s) = self.surfaces.get(&key) {
            return Ok(s.clone());
        }
        let s = composition_surface(
            (&self.matchings[x.0 as usize], x.1 as usize),
            (&self.matchings[y.0 as usize], y.1 as usize),
            (&self.matchings[z.0 as usize], z.1 as usize),
        )?;
        let s = Rc::new(s);
        self.surfaces.insert(key, s.clone());
        Ok(s)
    }

    /// `g ∘ f` for `f: x -> y`, `g: y -> z`, objects given as (matching, circles).
    pub fn compose_mor(
        &mut self,
        g: &Mor<F>,
        f: &Mor<F>,
        x: (u32, u8),
        y: (u32, u8),
        z: (u32, u8),
    ) -> Result<Mor<F>, CobError> {
        let s = self.surface(x, y, z)?;
        let (surface, nf) = (&s.0, s.1);
        let mut acc: BTreeMap<u64, F> = BTreeMap::new();
        for (mf, cf) in &f.terms {
            for (mg, cg) in &g.terms {
                let c = cf.clone() * cg.clone();
                for (m, k) in surface.eval(mf | mg << nf, self.spec) {
                    let v = acc.entry(m).or_insert_with(F::zero);
                    *v = v.clone() + c.clone() * F::from_i64(k);
                }
            }
        }
        Ok(Mor { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() })
    }

    fn key(&self, id: ObjId) -> (u32, u8) {
        let o = &self.objects[&id];
        (o.matching, o.circles)
    }

    /// Replace the last free circle of `id` by two objects with quantum
    /// shifts `+1` and `-1`; returns `(plus, minus)`.
    pub fn deloop(&mut self, id: ObjId) -> Result<(ObjId, ObjId), CobError> {
        let o = self.objects.get(&id).ok_or(CobError::NoObject(id))?.clone();
        if o.circles == 0 {
            return Err(CobError::NoCircle(id));
        }
        let k = o.circles - 1;
        let plus = self.add_object(o.matching, k, o.h, o.q + 1);
        let minus = self.add_object(o.matching, k, o.h, o.q - 1);
        let one = F::one();
        let incoming: Vec<ObjId> = self.incoming(id).collect();
        for x in incoming {
            let f = self.out[&x][&id].clone();
            let (xm, xk) = self.key(x);
            let c = cycles(&self.matchings[xm as usize], &self.matchings[o.matching as usize])?.count;
            let bit = (c + xk as usize + k as usize) as u32;
            // dotted cap onto ∅{+1}, plain cap onto ∅{-1}
            self.add_entry(x, plus, &f.filter_bit(bit, false), &one);
            self.add_entry(x, minus, &f.filter_bit(bit, true), &one);
        }
        let outgoing: Vec<(ObjId, Mor<F>)> = self.outgoing(id).map(|(y, m)| (y, m.clone())).collect();
        for (y, g) in outgoing {
            let (ym, _) = self.key(y);
            let c = cycles(&self.matchings[o.matching as usize], &self.matchings[ym as usize])?.count;
            let bit = (c + k as usize) as u32;
            // plain cup from ∅{+1}, dotted cup from ∅{-1}
            self.add_entry(plus, y, &g.filter_bit(bit, true), &one);
            self.add_entry(minus, y, &g.filter_bit(bit, false), &one);
        }
        self.remove_object(id);
        Ok((plus, minus))
    }

    /// Deloop until no object carries a free circle.
    pub fn deloop_all(&mut self) -> Result<(), CobError> {
        let mut work: Vec<ObjId> = self.objects.iter().filter(|(_, o)| o.circles > 0).map(|(&k, _)| k).collect();
        while let Some(id) = work.pop() {
            let (p, m) = self.deloop(id)?;
            if self.objects[&p].circles > 0 {
                work.push(m);
                work.push(p);
            }
        }
        Ok(())
    }

    /// Inverse of an entry of the form `a·id + b·X_j` between objects with
    /// the same circle-free matching.
    fn inverse(&self, src: ObjId, dst: ObjId, alpha: &Mor<F>) -> Result<Mor<F>, CobError> {
        let (s, d) = (&self.objects[&src], &self.objects[&dst]);
        if s.matching != d.matching || s.circles != 0 || d.circles != 0 {
            return Err(CobError::NotInvertible(src, dst));
        }
        let mut a = F::zero();
        let mut b: Option<(u64, F)> = None;
        for (m, c) in &alpha.terms {
            if *m == 0 {
                a = c.clone();
            } else if m.is_power_of_two() && b.is_none() {
                b = Some((*m, c.clone()));
            } else {
                return Err(CobError::NotInvertible(src, dst));
            }
        }
        let (mb, bv) = b.unwrap_or((1, F::zero()));
        let det = a.clone() * a.clone() - F::from_i64(self.spec.t_def()) * bv.clone() * bv.clone();
        if det.is_zero() {
            return Err(CobError::NotInvertible(src, dst));
        }
        let di = det.inv();
        let mut inv = Mor::basis(0, a * di.clone());
        inv.add_term(mb, -(bv * di));
        Ok(inv)
    }

    /// Gaussian elimination of the invertible entry `src -> dst`: both
    /// objects disappear and `d' = d - γ α⁻¹ δ` on the rest.
    pub fn eliminate(&mut self, src: ObjId, dst: ObjId) -> Result<Vec<(ObjId, ObjId)>, CobError> {
        let alpha = self.entry(src, dst).ok_or(CobError::NoEntry(src, dst))?.clone();
        let inv = self.inverse(src, dst, &alpha)?;
        let scalar = inv.as_scalar_identity().cloned();
        let a_key = self.key(src);
        let b_key = self.key(dst);
        let deltas: Vec<(ObjId, Mor<F>)> =
            self.incoming(dst).filter(|&x| x != src).map(|x| (x, self.out[&x][&dst].clone())).collect();
        let gammas: Vec<(ObjId, Mor<F>)> =
            self.outgoing(src).filter(|&(y, _)| y != dst).map(|(y, m)| (y, m.clone())).collect();
        self.remove_object(src);
        self.remove_object(dst);
        let mut touched = Vec::with_capacity(deltas.len() * gammas.len());
        let minus_one = -F::one();
        for (x, delta) in &deltas {
            let x_key = self.key(*x);
            let (pre, c) = match &scalar {
                Some(s) => (delta.clone(), minus_one.clone() * s.clone()),
                None => (self.compose_mor(&inv, delta, x_key, b_key, a_key)?, minus_one.clone()),
            };
            for (y, gamma) in &gammas {
                let y_key = self.key(*y);
                let upd = self.compose_mor(gamma, &pre, x_key, a_key, y_key)?;
                self.add_entry(*x, *y, &upd, &c);
                touched.push((*x, *y));
            }
        }
        Ok(touched)
    }

    /// Whether `src -> dst` is a degree-preserving nonzero multiple of the
    /// identity.
    pub fn is_identity_entry(&self, src: ObjId, dst: ObjId) -> bool {
        let (Some(s), Some(d)) = (self.objects.get(&src), self.objects.get(&dst)) else {
            return false;
        };
        s.matching == d.matching
            && s.circles == 0
            && d.circles == 0
            && s.q == d.q
            && self.entry(src, dst).is_some_and(|m| m.as_scalar_identity().is_some())
    }

    /// Greedily eliminate identity entries until none remain; returns the
    /// number of cancellations.
    pub fn simplify(&mut self) -> Result<usize, CobError> {
        let mut count = 0;
        loop {
            let mut work: Vec<(ObjId, ObjId)> = Vec::new();
            for (&a, row) in &self.out {
                for &b in row.keys() {
                    if self.is_identity_entry(a, b) {
                        work.push((a, b));
                    }
                }
            }
            if work.is_empty() {
                return Ok(count);
            }
            work.reverse();
            while let Some((a, b)) = work.pop() {
                if !self.is_identity_entry(a, b) {
                    continue;
                }
                let touched = self.eliminate(a, b)?;
                count += 1;
                for (x, y) in touched {
                    if self.is_identity_entry(x, y) {
                        work.push((x, y));
                    }
                }
            }
        }
    }

    /// Formal quantum degree of one basis term of `src -> dst`.
    fn term_degree(&self, src: ObjId, dst: ObjId, mask: u64) -> Result<i64, CobError> {
        let (s, d) = (&self.objects[&src], &self.objects[&dst]);
        let c = cycles(&self.matchings[s.matching as usize], &self.matchings[d.matching as usize])?.count;
        let disks = (c + s.circles as usize + d.circles as usize) as i64;
        let arity = self.boundary.len() as i64;
        Ok(disks - arity / 2 - 2 * mask.count_ones() as i64 + (d.q - s.q) as i64)
    }

    /// Check `d∘d = 0`, that `d` raises `h` by one, and the degree rule:
    /// every term has degree 0 (Khovanov) or a nonnegative multiple of 4 (Lee).
    pub fn check_invariants(&mut self) -> Result<(), CobError> {
        let ids: Vec<ObjId> = self.objects.keys().copied().collect();
        for &x in &ids {
            let row: Vec<(ObjId, Mor<F>)> = self.outgoing(x).map(|(y, m)| (y, m.clone())).collect();
            let mut sq: BTreeMap<ObjId, Mor<F>> = BTreeMap::new();
            for (y, f) in &row {
                if self.objects[y].h != self.objects[&x].h + 1 {
                    return Err(CobError::HomologicalDegree(x, *y));
                }
                for (m, _) in f.terms() {
                    let deg = self.term_degree(x, *y, *m)?;
                    let ok = if self.spec.is_lee() { deg >= 0 && deg % 4 == 0 } else { deg == 0 };
                    if !ok {
                        return Err(CobError::Degree { src: x, dst: *y, degree: deg });
                    }
                }
                let next: Vec<(ObjId, Mor<F>)> = self.outgoing(*y).map(|(z, m)| (z, m.clone())).collect();
                for (z, g) in next {
                    let c = self.compose_mor(&g, f, self.key(x), self.key(*y), self.key(z))?;
                    sq.entry(z).or_insert_with(Mor::zero).add_scaled(&c, &F::one());
                }
            }
            if let Some((&z, _)) = sq.iter().find(|(_, m)| !m.is_zero()) {
                return Err(CobError::DSquared(x, z));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F2, Q};

    fn single_circle<F: Field>(spec: FrobeniusSpec) -> (TangleComplex<F>, ObjId) {
        let mut c = TangleComplex::new(spec, vec![]);
        let e = c.intern(Matching::empty());
        let o = c.add_object(e, 1, 0, 0);
        (c, o)
    }

    #[test]
    fn deloop_single_circle() {
        let (mut c, o) = single_circle::<Q>(FrobeniusSpec::KHOVANOV);
        let (p, m) = c.deloop(o).unwrap();
        assert_eq!(c.num_objects(), 2);
        assert_eq!(c.object(p).unwrap().q, 1);
        assert_eq!(c.object(m).unwrap().q, -1);
        assert_eq!(c.deloop(p), Err(CobError::NoCircle(p)));
    }

    // circle -> circle by the identity (a cylinder, neck-cut as X⊗1 + 1⊗X),
    // delooped at both ends, must become the 2x2 identity matrix.
    #[test]
    fn deloop_round_trip_is_identity() {
        for spec in [FrobeniusSpec::KHOVANOV, FrobeniusSpec::LEE] {
            let mut c: TangleComplex<Q> = TangleComplex::new(spec, vec![]);
            let e = c.intern(Matching::empty());
            let a = c.add_object(e, 1, 0, 0);
            let b = c.add_object(e, 1, 1, 0);
            // bit 0: source circle dotted, bit 1: target circle dotted
            let mut cyl = Mor::basis(0b01, Q::one());
            cyl.add_term(0b10, Q::one());
            c.add_entry(a, b, &cyl, &Q::one());
            let (ap, am) = c.deloop(a).unwrap();
            let (bp, bm) = c.deloop(b).unwrap();
            assert_eq!(c.entry(ap, bp).unwrap().as_scalar_identity(), Some(&Q::one()));
            assert_eq!(c.entry(am, bm).unwrap().as_scalar_identity(), Some(&Q::one()));
            assert!(c.entry(ap, bm).is_none());
            assert!(c.entry(am, bp).is_none());
            c.check_invariants().unwrap();
            assert_eq!(c.simplify().unwrap(), 2);
            assert_eq!(c.num_objects(), 0);
        }
    }

    #[test]
    fn eliminate_acyclic_pair() {
        let mut c: TangleComplex<F2> = TangleComplex::new(FrobeniusSpec::KHOVANOV, vec![1, 2]);
        let m = c.intern(Matching::new([(1, 2)]).unwrap());
        let a = c.add_object(m, 0, 0, 0);
        let b = c.add_object(m, 0, 1, 0);
        c.add_entry(a, b, &Mor::basis(0, F2(true)), &F2(true));
        c.eliminate(a, b).unwrap();
        assert_eq!(c.num_objects(), 0);
    }

    #[test]
    fn lee_invertibility_criterion() {
        let mut c: TangleComplex<Q> = TangleComplex::new(FrobeniusSpec::LEE, vec![1, 2]);
        let m = c.intern(Matching::new([(1, 2)]).unwrap());
        let a = c.add_object(m, 0, 0, 0);
        let b = c.add_object(m, 0, 1, 0);
        let mut e = Mor::basis(0, Q::one());
        e.add_term(1, Q::one());
        c.add_entry(a, b, &e, &Q::one());
        assert_eq!(c.eliminate(a, b), Err(CobError::NotInvertible(a, b)));
        // 2·id + X is invertible: 4 - 1 ≠ 0
        let mut c: TangleComplex<Q> = TangleComplex::new(FrobeniusSpec::LEE, vec![1, 2]);
        let m = c.intern(Matching::new([(1, 2)]).unwrap());
        let x = c.add_object(m, 0, -1, 0);
        let a = c.add_object(m, 0, 0, 0);
        let b = c.add_object(m, 0, 1, 0);
        let y = c.add_object(m, 0, 2, 0);
        let mut e = Mor::basis(0, Q::from_i64(2));
        e.add_term(1, Q::one());
        c.add_entry(a, b, &e, &Q::one());
        c.add_entry(x, b, &Mor::basis(0, Q::one()), &Q::one());
        c.add_entry(a, y, &Mor::basis(0, Q::one()), &Q::one());
        c.eliminate(a, b).unwrap();
        // x -> y picks up -(2 - X)/3
        let got = c.entry(x, y).unwrap();
        assert_eq!(got.terms(), &[(0, Q::new(-2, 3)), (1, Q::new(1, 3))]);
    }

    #[test]
    fn closed_sphere_values() {
        // ∅ -> circle -> ∅ with cup then cap, dots as requested
        for (dots, expected) in [(0u64, 0i64), (1, 1)] {
            let (mut c, o) = single_circle::<Q>(FrobeniusSpec::KHOVANOV);
            let e = c.intern(Matching::empty());
            let s = c.add_object(e, 0, -1, 0);
            let t = c.add_object(e, 0, 1, 0);
            c.objects.get_mut(&o).unwrap().h = 0;
            // cup: target circle bit 0; cap: source circle bit 0, dots on the cap
            c.add_entry(s, o, &Mor::basis(0, Q::one()), &Q::one());
            c.add_entry(o, t, &Mor::basis(dots, Q::one()), &Q::one());
            let sq = c.compose_mor(&Mor::basis(dots, Q::one()), &Mor::basis(0, Q::one()), (e, 0), (e, 1), (e, 0)).unwrap();
            if expected == 0 {
                assert!(sq.is_zero());
            } else {
                assert_eq!(sq.as_scalar_identity(), Some(&Q::from_i64(expected)));
            }
        }
    }
}
