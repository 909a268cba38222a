use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::linkdiag::LinkDiagram;

/// Order in which crossings are tensored in, with the number of open
/// boundary points after each step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanPlan {
    pub order: Vec<usize>,
    pub frontier: Vec<usize>,
}

impl ScanPlan {
    pub fn max_frontier(&self) -> usize {
        self.frontier.iter().copied().max().unwrap_or(0)
    }

    /// Plan for a fixed order; panics if `order` is not a permutation.
    pub fn from_order(d: &LinkDiagram, order: Vec<usize>) -> Self {
        let mut seen = vec![false; d.num_crossings()];
        for &i in &order {
            assert!(!seen[i], "crossing {i} repeated in scan order");
            seen[i] = true;
        }
        assert!(seen.iter().all(|&s| s), "scan order misses a crossing");
        let mut open = BTreeSet::new();
        let frontier = order
            .iter()
            .map(|&i| {
                advance(&mut open, &d.crossings()[i]);
                open.len()
            })
            .collect();
        ScanPlan { order, frontier }
    }
}

/// Slots of `x` whose label is already open.
fn shared(open: &BTreeSet<u32>, x: &[u32; 4]) -> usize {
    x.iter().filter(|l| open.contains(l)).count()
}

fn advance(open: &mut BTreeSet<u32>, x: &[u32; 4]) {
    for (s, &l) in x.iter().enumerate() {
        if open.remove(&l) {
            continue;
        }
        let twice = x.iter().enumerate().any(|(t, &m)| t != s && m == l);
        if !twice {
            open.insert(l);
        }
    }
}

/// Greedy order: always take the crossing sharing the most slots with the
/// open boundary, lowest index on ties.
pub fn plan_order(d: &LinkDiagram) -> ScanPlan {
    let n = d.num_crossings();
    let xs = d.crossings();
    let mut used = vec![false; n];
    let mut open = BTreeSet::new();
    let mut order = Vec::with_capacity(n);
    let mut frontier = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for i in (0..n).filter(|&i| !used[i]) {
            let s = shared(&open, &xs[i]);
            if best.map_or(true, |(_, b)| s > b) {
                best = Some((i, s));
            }
        }
        let (i, _) = best.unwrap();
        used[i] = true;
        advance(&mut open, &xs[i]);
        order.push(i);
        frontier.push(open.len());
    }
    debug_assert!(open.is_empty());
    ScanPlan { order, frontier }
}
