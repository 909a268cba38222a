use serde::{Deserialize, Serialize};

use super::CobError;

/// Rank-two Frobenius algebra `A = F[X]/(X² - t)` with `ε(1) = 0`, `ε(X) = 1`.
///
/// `t = 0` gives Khovanov's theory, `t = 1` Lee's deformation. Elements of
/// `A` are written as pairs `(a, b)` meaning `a + bX`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrobeniusSpec {
    t_def: u8,
}

pub type AlgElt = (i64, i64);

impl FrobeniusSpec {
    pub const KHOVANOV: FrobeniusSpec = FrobeniusSpec { t_def: 0 };
    pub const LEE: FrobeniusSpec = FrobeniusSpec { t_def: 1 };

    pub fn new(t_def: u8) -> Result<Self, CobError> {
        match t_def {
            0 | 1 => Ok(FrobeniusSpec { t_def }),
            _ => Err(CobError::BadParameter(t_def)),
        }
    }

    pub fn t_def(&self) -> i64 {
        self.t_def as i64
    }

    pub fn is_lee(&self) -> bool {
        self.t_def == 1
    }

    pub fn multiply(&self, x: AlgElt, y: AlgElt) -> AlgElt {
        (x.0 * y.0 + self.t_def() * x.1 * y.1, x.0 * y.1 + x.1 * y.0)
    }

    pub fn counit(&self, x: AlgElt) -> i64 {
        x.1
    }

    /// `X^dots · (2X)^genus`, the value of a connected surface before its
    /// boundary is split off.
    pub fn handle_dots(&self, dots: u32, genus: u32) -> AlgElt {
        let k = dots + genus;
        let two_g = 1i64 << genus;
        let tk = if self.t_def == 0 && k >= 2 { 0 } else { 1 };
        if k % 2 == 0 {
            (two_g * tk, 0)
        } else {
            (0, two_g * tk)
        }
    }

    /// `Δ^{b-1}(x)` in `A^{⊗b}`; bit `i` of each mask marks an `X` in factor `i`.
    pub fn comultiply(&self, x: AlgElt, b: usize) -> Vec<(u64, i64)> {
        assert!(b >= 1 && b <= 64);
        let mut terms: Vec<(u64, i64)> = Vec::with_capacity(2);
        if x.0 != 0 {
            terms.push((0, x.0));
        }
        if x.1 != 0 {
            terms.push((1, x.1));
        }
        for k in 1..b {
            let mut next = Vec::with_capacity(terms.len() * 2);
            let last = 1u64 << (k - 1);
            let new = 1u64 << k;
            for (m, c) in terms {
                if m & last == 0 {
                    // Δ(1) = 1⊗X + X⊗1
                    next.push((m | new, c));
                    next.push((m | last, c));
                } else {
                    // Δ(X) = X⊗X + t·1⊗1
                    next.push((m | new, c));
                    if self.t_def != 0 {
                        next.push((m & !last, c * self.t_def()));
                    }
                }
            }
            terms = next;
        }
        terms.sort_unstable();
        terms
    }
}
