use std::collections::HashMap;

use super::{DiagramError, LinkDiagram};
use crate::poly::Laurent;
use crate::util::UnionFind;

pub const JONES_MAX_CROSSINGS: usize = 22;

/// Unnormalized Jones polynomial (unknot = q + q^-1) from the Kauffman
/// bracket state sum with writhe correction.
///
/// The bracket is accumulated in `A` with loop value `-A^2 - A^-2`; the
/// result is rewritten in `q` through `A^2 = -q^-1`.
pub fn jones_kauffman(d: &LinkDiagram) -> Result<Laurent, DiagramError> {
    let n = d.num_crossings();
    if n > JONES_MAX_CROSSINGS {
        return Err(DiagramError::TooLarge { op: "jones_kauffman", crossings: n, limit: JONES_MAX_CROSSINGS });
    }
    let labels = d.labels();
    let index: HashMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let xs: Vec<[usize; 4]> = d.crossings().iter().map(|x| x.map(|l| index[&l])).collect();

    // hist[(#B-smoothings, #loops)]
    let mut hist: HashMap<(usize, usize), i64> = HashMap::new();
    for state in 0u64..(1u64 << n) {
        let mut uf = UnionFind::new(labels.len());
        for (i, x) in xs.iter().enumerate() {
            if state >> i & 1 == 0 {
                uf.union(x[0], x[1]);
                uf.union(x[2], x[3]);
            } else {
                uf.union(x[0], x[3]);
                uf.union(x[1], x[2]);
            }
        }
        let loops = uf.count() + d.unknot_components();
        *hist.entry((state.count_ones() as usize, loops)).or_insert(0) += 1;
    }

    // bracket as a Laurent polynomial in A
    let delta = Laurent::from_terms([(-1, 2), (-1, -2)]);
    let mut delta_pows = vec![Laurent::one()];
    let max_loops = hist.keys().map(|k| k.1).max().unwrap_or(0);
    for i in 1..=max_loops {
        delta_pows.push(&delta_pows[i - 1] * &delta);
    }
    let mut bracket = Laurent::zero();
    for (&(b, loops), &count) in &hist {
        let a_exp = n as i32 - 2 * b as i32;
        bracket = &bracket + &delta_pows[loops].shift(a_exp).scale(count);
    }

    // (-A^3)^{-w} <D>
    let w = d.writhe();
    let corrected = bracket.shift(-3 * w as i32).scale(if w % 2 == 0 { 1 } else { -1 });

    let mut out = Laurent::zero();
    for (e, c) in corrected.terms() {
        debug_assert!(e % 2 == 0, "odd power of A after writhe correction");
        let m = e / 2;
        out.add_term(if m % 2 == 0 { c } else { -c }, -m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::{mirror, parse_pd, torus_link, unknot};

    fn lp(terms: &[(i64, i32)]) -> Laurent {
        Laurent::from_terms(terms.iter().copied())
    }

    #[test]
    fn unknot_value() {
        assert_eq!(jones_kauffman(&unknot()).unwrap(), lp(&[(1, 1), (1, -1)]));
        // Reidemeister I kinks of both signs
        for pd in ["PD[X(1,2,2,1)]", "PD[X(2,2,1,1)]"] {
            assert_eq!(jones_kauffman(&parse_pd(pd).unwrap()).unwrap(), lp(&[(1, 1), (1, -1)]));
        }
    }

    // Direct expansion over the 8 states of the standard trefoil diagram:
    // Σ_s (-1)^{r(s)} q^{r(s)} (q + q^-1)^{loops(s)} · q^3, with loop counts
    // 2,1,1,1,2,2,2,3 for r = 0,1,1,1,2,2,2,3.
    #[test]
    fn right_trefoil_brute_force() {
        let loops_by_r = [(0, 2), (1, 1), (1, 1), (1, 1), (2, 2), (2, 2), (2, 2), (3, 3)];
        let qq = lp(&[(1, 1), (1, -1)]);
        let mut expected = Laurent::zero();
        for (r, loops) in loops_by_r {
            let mut term = Laurent::monomial(if r % 2 == 0 { 1 } else { -1 }, r + 3);
            for _ in 0..loops {
                term = &term * &qq;
            }
            expected = &expected + &term;
        }
        assert_eq!(expected, lp(&[(1, 1), (1, 3), (1, 5), (-1, 9)]));
        let t = torus_link(2, 3).unwrap();
        assert_eq!(jones_kauffman(&t).unwrap(), expected);
        let pd = parse_pd("PD[X(4,2,5,1),X(6,4,1,3),X(2,6,3,5)]").unwrap();
        assert_eq!(jones_kauffman(&pd).unwrap(), expected);
    }

    #[test]
    fn mirror_inverts_variable() {
        let t = torus_link(2, 5).unwrap();
        assert_eq!(jones_kauffman(&mirror(&t)).unwrap(), jones_kauffman(&t).unwrap().invert_variable());
    }

    #[test]
    fn size_bound() {
        let big = torus_link(2, 23).unwrap();
        assert!(matches!(jones_kauffman(&big), Err(DiagramError::TooLarge { .. })));
    }

    #[test]
    fn doubles_of_unknot() {
        use crate::linkdiag::{whitehead_double, ClaspSign};
        let tref = whitehead_double(&unknot(), -1, ClaspSign::Positive).unwrap();
        assert_eq!(jones_kauffman(&tref).unwrap(), jones_kauffman(&torus_link(2, 3).unwrap()).unwrap());
        // figure-eight is amphichiral
        let fig8 = whitehead_double(&unknot(), 1, ClaspSign::Positive).unwrap();
        let v = jones_kauffman(&fig8).unwrap();
        assert_eq!(v, v.invert_variable());
        let u = whitehead_double(&unknot(), 0, ClaspSign::Negative).unwrap();
        assert_eq!(jones_kauffman(&u).unwrap(), lp(&[(1, 1), (1, -1)]));
    }
}
