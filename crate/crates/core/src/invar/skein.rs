//! Skein-exact-triangle bookkeeping for the twist family D(t) = D_+(K, t).
//!
//! Going from D(t) to D(t-1) changes one crossing. The top Alexander group's
//! even-parity rank `e` grows by one exactly when the map `f₂` of the
//! triangle is nontrivial, and that happens iff `τ(D(t-1)) = 1`. The
//! crossing-change inequality forces `τ` to be nonincreasing in `t` with
//! values in {0, 1}.

use serde::{Deserialize, Serialize};

use super::{e_rank, eftekhary_top, kstart_table, InvarError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeinInput {
    /// twist with a known table
    pub t_start: i64,
    pub tau_start: i32,
    pub e_start: u64,
    /// `e` at `t = 0`
    pub e_end: u64,
    /// the Hopf link's top group has odd parity
    pub hopf_top_odd: bool,
}

impl SkeinInput {
    /// Inputs for doubles of `T(2, 2n+1)`: the table at `t = 4n + 2` and the
    /// `t = 0` top group, whose absolute grading is known only up to parity;
    /// both parities are evaluated and must agree.
    pub fn for_torus(n: i64) -> Result<Self, InvarError> {
        if n < 1 {
            return Err(InvarError::Skein(format!("n = {n} must be positive")));
        }
        let e_start = e_rank(&kstart_table(n))?;
        let (even, odd) = (e_rank(&eftekhary_top(n, 0))?, e_rank(&eftekhary_top(n, 1))?);
        if even != odd {
            return Err(InvarError::Skein(format!("e(0) depends on parity: {even} vs {odd}")));
        }
        Ok(SkeinInput { t_start: 4 * n + 2, tau_start: 0, e_start, e_end: even, hopf_top_odd: true })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum F2Status {
    Trivial,
    Nontrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeinDeduction {
    pub input: SkeinInput,
    /// `(t, status of f₂)` for `t = t_start, …, 1`
    pub f2: Vec<(i64, F2Status)>,
    /// `(t, τ(D(t)))` for `t = t_start, …, 0`
    pub tau: Vec<(i64, i32)>,
    /// largest `t` with `τ(D(t)) = 1`
    pub t_tau: i64,
}

impl SkeinDeduction {
    /// `τ(D(t))` for any `t`, extending by monotonicity outside the table.
    pub fn tau_at(&self, t: i64) -> i32 {
        (t <= self.t_tau) as i32
    }

    pub fn nontrivial(&self) -> Vec<i64> {
        self.f2.iter().filter(|e| e.1 == F2Status::Nontrivial).map(|e| e.0).collect()
    }
}

pub fn skein_propagate(input: SkeinInput) -> Result<SkeinDeduction, InvarError> {
    if !input.hopf_top_odd {
        return Err(InvarError::Skein("parity convention: the Hopf top group must be odd".into()));
    }
    if input.tau_start != 0 {
        return Err(InvarError::Skein(format!("τ(D({})) = {} leaves no room for a drop", input.t_start, input.tau_start)));
    }
    let delta = input.e_end as i64 - input.e_start as i64;
    if delta < 0 || delta > input.t_start {
        return Err(InvarError::Skein(format!("Δ = {delta} outside 0..={}", input.t_start)));
    }
    // Δ nontrivial applications; nontrivial at t means τ(D(t-1)) = 1, and
    // τ nonincreasing means the nontrivial set is a down-set of {1, …, t_start}
    let f2 = (1..=input.t_start)
        .rev()
        .map(|t| (t, if t <= delta { F2Status::Nontrivial } else { F2Status::Trivial }))
        .collect();
    let t_tau = delta - 1;
    let tau = (0..=input.t_start).rev().map(|u| (u, (u <= t_tau) as i32)).collect();
    Ok(SkeinDeduction { input, f2, tau, t_tau })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(t_start: i64, e_start: u64, e_end: u64) -> SkeinInput {
        SkeinInput { t_start, tau_start: 0, e_start, e_end, hopf_top_odd: true }
    }

    #[test]
    fn lemma_case() {
        let d = skein_propagate(input(6, 0, 2)).unwrap();
        assert_eq!(d.nontrivial(), vec![2, 1]);
        assert_eq!(d.t_tau, 1);
        for (t, tau) in &d.tau {
            assert_eq!(*tau, (*t <= 1) as i32);
        }
    }

    #[test]
    fn no_change() {
        let d = skein_propagate(input(6, 0, 0)).unwrap();
        assert!(d.nontrivial().is_empty());
        assert!(d.tau.iter().all(|e| e.1 == 0));
    }

    #[test]
    fn rejects_impossible_counts() {
        assert!(skein_propagate(input(6, 2, 0)).is_err());
        assert!(skein_propagate(input(6, 0, 7)).is_err());
    }

    /// Brute force: among all sets of Δ nontrivial applications, exactly one
    /// gives a nonincreasing τ with values in {0, 1}.
    #[test]
    fn down_set_is_forced() {
        for t_start in 1..=10i64 {
            for delta in 0..=t_start {
                let mut consistent = Vec::new();
                for mask in 0u32..1 << t_start {
                    if mask.count_ones() as i64 != delta {
                        continue;
                    }
                    // tau(D(t-1)) = 1 iff bit t-1 set; tau(D(t_start)) = 0
                    let tau = |u: i64| if u == t_start { 0 } else { (mask >> u & 1) as i32 };
                    if (1..=t_start).all(|u| tau(u) <= tau(u - 1)) {
                        consistent.push(mask);
                    }
                }
                assert_eq!(consistent, vec![(1u32 << delta) - 1], "t_start {t_start}, Δ {delta}");
                let d = skein_propagate(input(t_start, 0, delta as u64)).unwrap();
                let nontrivial: u32 = d.nontrivial().iter().map(|t| 1 << (t - 1)).sum();
                assert_eq!(nontrivial, consistent[0]);
            }
        }
    }

    #[test]
    fn torus_family_matches_closed_form() {
        for n in 1..=10 {
            let inp = SkeinInput::for_torus(n).unwrap();
            assert_eq!((inp.t_start, inp.e_start, inp.e_end), (4 * n + 2, 0, 2 * n as u64));
            let d = skein_propagate(inp).unwrap();
            assert_eq!(d.t_tau, 2 * n - 1);
            for t in -3..=inp.t_start + 3 {
                assert_eq!(d.tau_at(t), if t > 2 * n - 1 { 0 } else { 1 });
            }
        }
    }
}
