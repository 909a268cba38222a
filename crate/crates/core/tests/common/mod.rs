#![allow(dead_code)]

use khl_core::linkdiag::LinkDiagram;
use rand::Rng;

pub fn braid_closure(strands: usize, word: &[(usize, bool)]) -> LinkDiagram {
    khl_core::linkdiag::braid_closure(strands, word).unwrap()
}

pub fn random_word(rng: &mut impl Rng, strands: usize, len: usize) -> Vec<(usize, bool)> {
    (0..len).map(|_| (rng.gen_range(0..strands - 1), rng.gen_bool(0.5))).collect()
}
