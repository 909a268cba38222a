use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{DiagramError, LinkDiagram};
use crate::poly::Laurent;
use crate::util::UnionFind;

/// Group word as (generator, ±1) letters.
pub type Word = Vec<(usize, i8)>;

/// Fox derivative `∂w/∂x_g` pushed through the abelianization `x_i -> t`.
pub fn fox_derivative(w: &[(usize, i8)], g: usize) -> Laurent {
    let mut out = Laurent::zero();
    let mut prefix = 0i32;
    for &(h, e) in w {
        if e > 0 {
            if h == g {
                out.add_term(1, prefix);
            }
            prefix += 1;
        } else {
            prefix -= 1;
            if h == g {
                out.add_term(-1, prefix);
            }
        }
    }
    out
}

/// Alexander polynomial from the Wirtinger presentation, normalized to be
/// symmetric with `Δ(1) = 1`.
pub fn alexander_poly(d: &LinkDiagram) -> Result<Laurent, DiagramError> {
    if !d.is_knot() {
        return Err(DiagramError::NotAKnot { components: d.num_components() });
    }
    let n = d.num_crossings();
    if n <= 1 {
        return Ok(Laurent::one());
    }
    // Wirtinger generators: over-arcs, i.e. PD arcs joined through over-passes
    let labels = d.labels();
    let idx = |l: u32| labels.binary_search(&l).unwrap();
    let mut uf = UnionFind::new(labels.len());
    for x in d.crossings() {
        uf.union(idx(x[1]), idx(x[3]));
    }
    let mut gen_of = vec![usize::MAX; labels.len()];
    let mut ngens = 0;
    for i in 0..labels.len() {
        let r = uf.find(i);
        if gen_of[r] == usize::MAX {
            gen_of[r] = ngens;
            ngens += 1;
        }
        gen_of[i] = gen_of[r];
    }
    debug_assert_eq!(ngens, n);

    let relations: Vec<Word> = d
        .crossings()
        .iter()
        .zip(d.signs())
        .map(|(x, &s)| {
            let (k, i, j) = (gen_of[idx(x[1])], gen_of[idx(x[0])], gen_of[idx(x[2])]);
            let e = s;
            vec![(k, e), (i, 1), (k, -e), (j, -1)]
        })
        .collect();

    // Alexander matrix minus the last row and column, cleared of negative powers
    let m = n - 1;
    let mut mat: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(m);
    let mut total_shift = 0i32;
    for rel in relations.iter().take(m) {
        let row: Vec<Laurent> = (0..m).map(|g| fox_derivative(rel, g)).collect();
        let lo = row.iter().filter_map(|p| p.min_degree()).min().unwrap_or(0);
        total_shift += lo;
        mat.push(row.iter().map(|p| to_dense(&p.shift(-lo))).collect());
    }
    let det = bareiss_det(mat);
    let mut delta = Laurent::zero();
    for (e, c) in det.iter().enumerate() {
        if !c.is_zero() {
            let c = c.to_i64().expect("Alexander coefficient overflow");
            delta.add_term(c, e as i32 + total_shift);
        }
    }
    normalize(delta)
}

fn normalize(p: Laurent) -> Result<Laurent, DiagramError> {
    let (lo, hi) = match (p.min_degree(), p.max_degree()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(DiagramError::Builder { op: "alexander_poly", msg: "vanishing Alexander polynomial".into() }),
    };
    if (hi - lo) % 2 != 0 {
        return Err(DiagramError::Builder { op: "alexander_poly", msg: "odd degree span".into() });
    }
    let p = p.shift(-(lo + hi) / 2);
    let v = p.at_one();
    Ok(if v < 0 { p.scale(-1) } else { p })
}

fn to_dense(p: &Laurent) -> Vec<BigInt> {
    let hi = p.max_degree().unwrap_or(-1);
    let mut v = vec![BigInt::zero(); (hi + 1).max(0) as usize];
    for (e, c) in p.terms() {
        v[e as usize] = BigInt::from(c);
    }
    v
}

type Poly = Vec<BigInt>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn psub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Exact division; panics if `b` does not divide `a`.
fn pdiv_exact(a: &Poly, b: &Poly) -> Poly {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    if r.is_empty() {
        return r;
    }
    assert!(!b.is_empty(), "division by zero polynomial");
    let lb = b.last().unwrap().clone();
    let mut q = vec![BigInt::zero(); r.len().saturating_sub(b.len()) + 1];
    while !r.is_empty() && r.len() >= b.len() {
        let shift = r.len() - b.len();
        let (c, rem) = r.last().unwrap().div_rem(&lb);
        assert!(rem.is_zero(), "inexact polynomial division");
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &c * y;
        }
        q[shift] = c;
        r = trim(r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    trim(q)
}

/// Fraction-free determinant over Z[t].
fn bareiss_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut sign = BigInt::one();
    let mut prev: Poly = vec![BigInt::one()];
    for k in 0..n {
        if m[k][k].is_empty() {
            match (k + 1..n).find(|&i| !m[i][k].is_empty()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return vec![],
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = psub(&pmul(&m[k][k], &m[i][j]), &pmul(&m[i][k], &m[k][j]));
                m[i][j] = pdiv_exact(&num, &prev);
            }
            m[i][k] = vec![];
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign.is_negative() {
        det.into_iter().map(|c| -c).collect()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::{mirror, parse_pd, torus_link, unknot, whitehead_double, ClaspSign};

    fn lp(terms: &[(i64, i32)]) -> Laurent {
        Laurent::from_terms(terms.iter().copied())
    }

    #[test]
    fn fox_derivative_of_wirtinger_relation() {
        // r = x0 x1 x0^-1 x2^-1
        let r = vec![(0, 1), (1, 1), (0, -1), (2, -1)];
        assert_eq!(fox_derivative(&r, 0), lp(&[(1, 0), (-1, 1)]));
        assert_eq!(fox_derivative(&r, 1), lp(&[(1, 1)]));
        assert_eq!(fox_derivative(&r, 2), lp(&[(-1, 0)]));
    }

    // Hand Fox calculus on the 3-crossing Wirtinger presentation: rows
    // (1-t, t, -1) cyclically; the 2x2 minor is (1-t)^2 + t = 1 - t + t^2.
    #[test]
    fn trefoil() {
        let expected = lp(&[(1, 1), (-1, 0), (1, -1)]);
        assert_eq!(alexander_poly(&torus_link(2, 3).unwrap()).unwrap(), expected);
        assert_eq!(alexander_poly(&mirror(&torus_link(2, 3).unwrap())).unwrap(), expected);
        let pd = parse_pd("PD[X(4,2,5,1),X(6,4,1,3),X(2,6,3,5)]").unwrap();
        assert_eq!(alexander_poly(&pd).unwrap(), expected);
    }

    #[test]
    fn unknot_and_links() {
        assert_eq!(alexander_poly(&unknot()).unwrap(), Laurent::one());
        assert_eq!(alexander_poly(&torus_link(2, 1).unwrap()).unwrap(), Laurent::one());
        assert!(alexander_poly(&torus_link(2, 2).unwrap()).is_err());
    }

    #[test]
    fn figure_eight() {
        let d = parse_pd("PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]").unwrap();
        assert_eq!(alexander_poly(&d).unwrap(), lp(&[(-1, 1), (3, 0), (-1, -1)]));
    }

    #[test]
    fn torus_2_5() {
        let d = torus_link(2, 5).unwrap();
        assert_eq!(alexander_poly(&d).unwrap(), lp(&[(1, 2), (-1, 1), (1, 0), (-1, -1), (1, -2)]));
    }

    #[test]
    fn whitehead_doubles_of_unknot() {
        // D_+(U,-1) is the right trefoil, D_+(U,1) the figure-eight
        let u = unknot();
        let tref = whitehead_double(&u, -1, ClaspSign::Positive).unwrap();
        assert_eq!(alexander_poly(&tref).unwrap(), lp(&[(1, 1), (-1, 0), (1, -1)]));
        let fig8 = whitehead_double(&u, 1, ClaspSign::Positive).unwrap();
        assert_eq!(alexander_poly(&fig8).unwrap(), lp(&[(-1, 1), (3, 0), (-1, -1)]));
    }

    // Seifert matrix of the t-twisted double: [[-1, 1], [0, t]] for the
    // positive clasp, giving det(V - x V^T) = -t x + (2t + 1) - t x^-1.
    #[test]
    fn twisted_doubles_of_torus_knots() {
        for m in [3, 5] {
            let k = torus_link(2, m).unwrap();
            for t in -2..=8 {
                let d = whitehead_double(&k, t, ClaspSign::Positive).unwrap();
                let expected = lp(&[(-t, 1), (2 * t + 1, 0), (-t, -1)]);
                let expected = if t == 0 { Laurent::one() } else { expected };
                assert_eq!(alexander_poly(&d).unwrap(), expected, "m = {m}, t = {t}");
            }
        }
    }
}
