use std::collections::BTreeMap;

use khl_core::cobcat::FrobeniusSpec;
use khl_core::field::{Field, F2, Q};
use khl_core::homalg::{filtered_reduce, filtered_reduce_by, Direction, FilteredComplex};
use khl_core::linkdiag::{torus_link, whitehead_double, ClaspSign};
use khl_core::scan::scan;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random filtered complex over F2 with known answer: a direct sum of
/// cancelling pairs and survivors, conjugated by random filtered basis
/// changes within each grading. Returns the complex and the sorted
/// (filtration, grading) pairs of the survivors.
fn random_complex(seed: u64, n: usize) -> (FilteredComplex<F2>, Vec<(i32, i32)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens: Vec<(i32, i32)> = Vec::new();
    let mut d = vec![vec![false; n]; n]; // d[i][j]: coefficient of g_i in d(g_j)
    let mut expected = Vec::new();
    while gens.len() < n {
        let g = rng.gen_range(-2..3);
        let f = rng.gen_range(-3..4);
        if gens.len() + 2 <= n && rng.gen_bool(0.7) {
            // g_j -> g_i, grading up by one, filtration not increasing
            let (j, i) = (gens.len(), gens.len() + 1);
            gens.push((g, f));
            gens.push((g + 1, f - rng.gen_range(0..3)));
            d[i][j] = true;
        } else {
            gens.push((g, f));
            expected.push((f, g));
        }
    }
    for _ in 0..4 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        // replace g_b by g_b + g_a: same grading, no filtration increase
        if a == b || gens[a].0 != gens[b].0 || gens[a].1 > gens[b].1 {
            continue;
        }
        for row in d.iter_mut() {
            row[b] ^= row[a];
        }
        let rb = d[b].clone();
        for (x, y) in d[a].iter_mut().zip(rb) {
            *x ^= y;
        }
    }
    let mut c = FilteredComplex::new(Direction::Up);
    for &(g, f) in &gens {
        c.add_gen(g, f);
    }
    for (i, row) in d.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v {
                c.add_entry(j, i, F2(true)).unwrap();
            }
        }
    }
    expected.sort_unstable();
    (c, expected)
}

fn survivors<F: Field>(c: &FilteredComplex<F>, pick: &mut dyn FnMut(usize) -> usize) -> Vec<(i32, i32)> {
    let mut s: Vec<(i32, i32)> = filtered_reduce_by(c, pick).iter().map(|s| (s.filtration, s.grading)).collect();
    s.sort_unstable();
    s
}

fn by_grading(s: &[(i32, i32)]) -> BTreeMap<i32, u64> {
    let mut m = BTreeMap::new();
    for &(_, g) in s {
        *m.entry(g).or_insert(0) += 1;
    }
    m
}

#[test]
fn random_filtered_complexes_have_the_planted_answer() {
    for seed in 0..40 {
        let (c, expected) = random_complex(seed, 50);
        c.check_d_squared().unwrap();
        assert!(c.num_entries() > 0);
        assert_eq!(survivors(&c, &mut |_| 0), expected, "seed {seed}");
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        assert_eq!(survivors(&c, &mut |n| rng.gen_range(0..n)), expected, "seed {seed}");
        let homology: BTreeMap<i32, u64> = c.forget_filtration().homology_by_grading().into_iter().filter(|e| e.1 > 0).collect();
        assert_eq!(homology, by_grading(&expected), "seed {seed}");
    }
}

#[test]
fn lee_survivors_do_not_depend_on_cancellation_order() {
    let knots = [
        torus_link(2, 5).unwrap(),
        whitehead_double(&torus_link(2, 3).unwrap(), 2, ClaspSign::Positive).unwrap(),
        whitehead_double(&torus_link(2, 3).unwrap(), -1, ClaspSign::Negative).unwrap(),
    ];
    for k in &knots {
        let c = scan::<Q>(k, FrobeniusSpec::LEE).unwrap().to_filtered().unwrap();
        let base = survivors(&c, &mut |_| 0);
        assert_eq!(base.len(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            assert_eq!(survivors(&c, &mut |n| rng.gen_range(0..n)), base);
        }
        let default: Vec<(i32, i32)> = {
            let mut v: Vec<_> = filtered_reduce(&c).iter().map(|s| (s.filtration, s.grading)).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(default, base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn order_independence(seed in any::<u64>(), n in 2usize..60, picks in prop::collection::vec(any::<usize>(), 20)) {
        let (c, expected) = random_complex(seed, n);
        let first = survivors(&c, &mut |_| 0);
        prop_assert_eq!(&first, &expected);
        for p in picks {
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
            prop_assert_eq!(&survivors(&c, &mut |k| rng.gen_range(0..k)), &expected);
        }
    }

    #[test]
    fn two_elimination_orders_agree_on_ranks(seed in any::<u64>()) {
        let (c, expected) = random_complex(seed, 50);
        let flat = c.forget_filtration();
        let first = survivors(&flat, &mut |_| 0);
        let last = survivors(&flat, &mut |k| k - 1);
        prop_assert_eq!(by_grading(&first), by_grading(&last));
        prop_assert_eq!(by_grading(&first), by_grading(&expected));
    }
}
