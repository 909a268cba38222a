use std::collections::HashMap;

use crate::field::Field;

pub type SparseVec<F> = Vec<(usize, F)>;

/// Rank of a set of sparse vectors (sorted by index) by incremental
/// elimination on their leading index.
pub fn rank<F: Field>(vectors: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    let mut pivots: HashMap<usize, SparseVec<F>> = HashMap::new();
    for mut v in vectors {
        while let Some(&(lead, ref c)) = v.first() {
            match pivots.get(&lead) {
                Some(p) => {
                    let f = c.clone() * p[0].1.inv();
                    v = axpy(&v, p, &f);
                }
                None => {
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `v - f·p` for sorted sparse vectors.
fn axpy<F: Field>(v: &SparseVec<F>, p: &SparseVec<F>, f: &F) -> SparseVec<F> {
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < p.len() {
        let take_v = j >= p.len() || (i < v.len() && v[i].0 < p[j].0);
        let take_p = i >= v.len() || (j < p.len() && p[j].0 < v[i].0);
        if take_v {
            out.push(v[i].clone());
            i += 1;
        } else if take_p {
            out.push((p[j].0, -(f.clone() * p[j].1.clone())));
            j += 1;
        } else {
            let c = v[i].1.clone() - f.clone() * p[j].1.clone();
            if !c.is_zero() {
                out.push((v[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F2, Q};

    #[test]
    fn small_ranks() {
        let q = |n| Q::from_i64(n);
        let vs = vec![vec![(0, q(1)), (1, q(2))], vec![(0, q(2)), (1, q(4))], vec![(1, q(1))]];
        assert_eq!(rank(vs), 2);
        let vs = vec![vec![(0, F2(true)), (1, F2(true))], vec![(1, F2(true)), (2, F2(true))], vec![(0, F2(true)), (2, F2(true))]];
        assert_eq!(rank(vs), 2);
        assert_eq!(rank(Vec::<SparseVec<Q>>::new()), 0);
    }
}
