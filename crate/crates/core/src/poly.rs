//! Laurent polynomials with integer coefficients: single-variable (Jones,
//! Alexander) and the two-variable Poincaré polynomials in `q` and `t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Laurent {
    terms: BTreeMap<i32, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: i64, e: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(c, e);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i32)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (c, e) in it {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, c: i64, e: i32) {
        if c == 0 {
            return;
        }
        let v = self.terms.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Evaluate at 1.
    pub fn at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Substitute `x -> x^{-1}`.
    pub fn invert_variable(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (c, -e)))
    }

    pub fn shift(&self, k: i32) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (c, e + k)))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (c * k, e)))
    }

    pub fn is_palindromic(&self) -> bool {
        self.terms().all(|(e, c)| self.coeff(-e) == c)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let (sign, a) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            match (a, mono.is_empty()) {
                (_, true) => out.push_str(&a.to_string()),
                (1, false) => out.push_str(&mono),
                (_, false) => out.push_str(&format!("{a}*{mono}")),
            }
        }
        out
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut p = self.clone();
        for (e, c) in rhs.terms() {
            p.add_term(c, e);
        }
        p
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut p = self.clone();
        for (e, c) in rhs.terms() {
            p.add_term(-c, e);
        }
        p
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut p = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                p.add_term(c1 * c2, e1 + e2);
            }
        }
        p
    }
}

/// Poincaré polynomial `Σ rank · q^j t^h` of a bigraded vector space.
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poincare {
    /// keyed by (h, q)
    terms: BTreeMap<(i32, i32), u64>,
}

impl Poincare {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, h: i32, q: i32, rank: u64) {
        if rank == 0 {
            return;
        }
        *self.terms.entry((h, q)).or_insert(0) += rank;
    }

    pub fn rank(&self, h: i32, q: i32) -> u64 {
        self.terms.get(&(h, q)).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate `(h, q, rank)`.
    pub fn iter(&self) -> impl Iterator<Item = (i32, i32, u64)> + '_ {
        self.terms.iter().map(|(&(h, q), &r)| (h, q, r))
    }

    /// q-degrees supported in homological degree `h`.
    pub fn q_support(&self, h: i32) -> Vec<i32> {
        self.iter().filter(|t| t.0 == h).map(|t| t.1).collect()
    }

    /// Graded Euler characteristic `Σ (-1)^h rank q^j`.
    pub fn euler(&self) -> Laurent {
        Laurent::from_terms(
            self.iter().map(|(h, q, r)| (if h.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) }, q)),
        )
    }

    /// Parse expressions such as `q^-5*t^-4 + q^-1t^-3 + 2q + q^5*t^2`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut p = Poincare::new();
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() || cleaned == "0" {
            return Ok(p);
        }
        for term in cleaned.split('+') {
            if term.is_empty() {
                return Err(format!("empty term in `{s}`"));
            }
            let (coef, rest) = split_coefficient(term);
            let mut h = 0;
            let mut q = 0;
            let bytes: Vec<char> = rest.chars().filter(|&c| c != '*').collect();
            let mut i = 0;
            while i < bytes.len() {
                let var = bytes[i];
                if var != 'q' && var != 't' {
                    return Err(format!("unexpected `{var}` in term `{term}`"));
                }
                i += 1;
                let mut e = 1;
                if i < bytes.len() && bytes[i] == '^' {
                    i += 1;
                    let start = i;
                    if i < bytes.len() && (bytes[i] == '-' || bytes[i] == '{') {
                        i += 1;
                    }
                    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '-') {
                        i += 1;
                    }
                    let txt: String = bytes[start..i].iter().filter(|c| **c != '{').collect();
                    if i < bytes.len() && bytes[i] == '}' {
                        i += 1;
                    }
                    e = txt.parse::<i32>().map_err(|_| format!("bad exponent in `{term}`"))?;
                }
                if var == 'q' {
                    q += e;
                } else {
                    h += e;
                }
            }
            p.add(h, q, coef);
        }
        Ok(p)
    }
}

fn split_coefficient(term: &str) -> (u64, &str) {
    let end = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
    if end == 0 {
        (1, term)
    } else {
        (term[..end].parse().unwrap(), &term[end..])
    }
}

impl fmt::Display for Poincare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(h, q, r)| {
                let mut factors = Vec::new();
                match q {
                    0 => {}
                    1 => factors.push("q".to_string()),
                    _ => factors.push(format!("q^{q}")),
                }
                match h {
                    0 => {}
                    1 => factors.push("t".to_string()),
                    _ => factors.push(format!("t^{h}")),
                }
                let mono = factors.join("*");
                match (r, mono.is_empty()) {
                    (_, true) => r.to_string(),
                    (1, false) => mono,
                    _ => format!("{r}*{mono}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for Poincare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_mul_and_print() {
        let a = Laurent::from_terms([(1, 1), (1, -1)]);
        let b = &a * &a;
        assert_eq!(b, Laurent::from_terms([(1, 2), (2, 0), (1, -2)]));
        assert_eq!(Laurent::from_terms([(-6, 1), (13, 0), (-6, -1)]).to_string_in("x"), "-6*x^-1 + 13 - 6*x");
    }

    #[test]
    fn poincare_roundtrip() {
        let p = Poincare::parse("q^-5*t^-4 + 2q + q^3t^-1 + 2*q^5*t").unwrap();
        assert_eq!(p.rank(0, 1), 2);
        assert_eq!(p.rank(-4, -5), 1);
        assert_eq!(p.rank(1, 5), 2);
        let again = Poincare::parse(&p.to_string()).unwrap();
        assert_eq!(p, again);
        assert_eq!(p.to_string(), "q^-5*t^-4 + q^3*t^-1 + 2*q + 2*q^5*t");
    }

    #[test]
    fn poincare_parses_tex_braces() {
        let p = Poincare::parse("q^{-5}t^{-4}+q^{13}t^{6}").unwrap();
        assert_eq!(p.rank(-4, -5), 1);
        assert_eq!(p.rank(6, 13), 1);
    }
}
