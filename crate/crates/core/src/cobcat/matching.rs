use std::fmt;

use super::CobError;

/// Perfect pairing of boundary labels. Pairs are stored `(a, b)` with
/// `a < b`, sorted by `a`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pairs: Vec<(u32, u32)>,
}

impl Matching {
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, CobError> {
        let mut pairs: Vec<(u32, u32)> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let mut labels: Vec<u32> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(CobError::RepeatedLabel(w[0]));
        }
        Ok(Matching { pairs })
    }

    pub fn empty() -> Self {
        Matching { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn arity(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn labels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        v.sort_unstable();
        v
    }

    /// Index of the pair containing `label`.
    pub fn pair_of(&self, label: u32) -> Option<usize> {
        self.pairs.iter().position(|&(a, b)| a == label || b == label)
    }

    pub fn partner(&self, label: u32) -> Option<u32> {
        self.pair_of(label).map(|i| {
            let (a, b) = self.pairs[i];
            if a == label {
                b
            } else {
                a
            }
        })
    }

    /// Whether the pairing is planar for boundary points placed on a circle
    /// in the given cyclic order.
    pub fn is_noncrossing(&self, cyclic_order: &[u32]) -> bool {
        let pos = |l: u32| cyclic_order.iter().position(|&x| x == l);
        let mut chords = Vec::with_capacity(self.pairs.len());
        for &(a, b) in &self.pairs {
            match (pos(a), pos(b)) {
                (Some(i), Some(j)) => chords.push((i.min(j), i.max(j))),
                _ => return false,
            }
        }
        chords.iter().all(|&(a, b)| chords.iter().all(|&(c, d)| !(a < c && c < b && b < d)))
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        f.write_str("}")
    }
}

/// Cycles of the boundary graph `m0 ∪ m1`, numbered by their smallest label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycles {
    pub of_pair0: Vec<usize>,
    pub of_pair1: Vec<usize>,
    pub count: usize,
}

pub fn cycles(m0: &Matching, m1: &Matching) -> Result<Cycles, CobError> {
    let labels = m0.labels();
    if labels != m1.labels() {
        return Err(CobError::BoundaryMismatch);
    }
    let index = |l: u32| labels.binary_search(&l).unwrap();
    // per-label partner and owning pair
    let n = labels.len();
    let mut p0 = vec![(0usize, 0usize); n];
    let mut p1 = vec![(0usize, 0usize); n];
    for (k, &(a, b)) in m0.pairs().iter().enumerate() {
        p0[index(a)] = (index(b), k);
        p0[index(b)] = (index(a), k);
    }
    for (k, &(a, b)) in m1.pairs().iter().enumerate() {
        p1[index(a)] = (index(b), k);
        p1[index(b)] = (index(a), k);
    }
    let mut of_pair0 = vec![usize::MAX; m0.pairs().len()];
    let mut of_pair1 = vec![usize::MAX; m1.pairs().len()];
    let mut count = 0;
    for start in 0..n {
        if of_pair0[p0[start].1] != usize::MAX {
            continue;
        }
        let mut l = start;
        loop {
            let (l2, k0) = p0[l];
            of_pair0[k0] = count;
            let (l3, k1) = p1[l2];
            of_pair1[k1] = count;
            l = l3;
            if l == start {
                break;
            }
        }
        count += 1;
    }
    Ok(Cycles { of_pair0, of_pair1, count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_counts() {
        let a = Matching::new([(1, 2), (3, 4)]).unwrap();
        let b = Matching::new([(1, 4), (2, 3)]).unwrap();
        assert_eq!(cycles(&a, &a).unwrap().count, 2);
        let c = cycles(&a, &b).unwrap();
        assert_eq!(c.count, 1);
        assert_eq!(c.of_pair0, vec![0, 0]);
        let e = Matching::empty();
        assert_eq!(cycles(&e, &e).unwrap().count, 0);
        assert!(cycles(&a, &Matching::new([(1, 2), (3, 5)]).unwrap()).is_err());
    }

    #[test]
    fn cycles_numbered_by_smallest_label() {
        let a = Matching::new([(1, 2), (3, 4), (5, 6)]).unwrap();
        let b = Matching::new([(1, 2), (3, 6), (4, 5)]).unwrap();
        let c = cycles(&a, &b).unwrap();
        assert_eq!(c.count, 2);
        assert_eq!(c.of_pair0, vec![0, 1, 1]);
        assert_eq!(c.of_pair1, vec![0, 1, 1]);
    }

    #[test]
    fn planarity() {
        let order = [1, 2, 3, 4];
        assert!(Matching::new([(1, 2), (3, 4)]).unwrap().is_noncrossing(&order));
        assert!(Matching::new([(1, 4), (2, 3)]).unwrap().is_noncrossing(&order));
        assert!(!Matching::new([(1, 3), (2, 4)]).unwrap().is_noncrossing(&order));
        assert!(Matching::new([(1, 1), (2, 3)]).is_err());
    }
}
