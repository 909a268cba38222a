//! Coefficient fields: the two-element field and exact rationals.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Minimal field interface used by every engine in the crate.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const KIND: FieldKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    F2,
    Q,
}

impl FieldKind {
    pub fn name(&self) -> &'static str {
        match self {
            FieldKind::F2 => "f2",
            FieldKind::Q => "q",
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "f2" | "z2" | "z/2" => Ok(FieldKind::F2),
            "q" | "qq" | "rational" => Ok(FieldKind::Q),
            _ => Err(format!("unknown field `{s}` (expected f2 or q)")),
        }
    }
}

impl Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Element of the field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct F2(pub bool);

impl Debug for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 as u8)
    }
}

impl Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 as u8)
    }
}

impl Add for F2 {
    type Output = F2;
    fn add(self, rhs: F2) -> F2 {
        F2(self.0 ^ rhs.0)
    }
}

impl Sub for F2 {
    type Output = F2;
    fn sub(self, rhs: F2) -> F2 {
        F2(self.0 ^ rhs.0)
    }
}

impl Mul for F2 {
    type Output = F2;
    fn mul(self, rhs: F2) -> F2 {
        F2(self.0 & rhs.0)
    }
}

impl Neg for F2 {
    type Output = F2;
    fn neg(self) -> F2 {
        self
    }
}

impl Field for F2 {
    const KIND: FieldKind = FieldKind::F2;

    fn zero() -> Self {
        F2(false)
    }
    fn one() -> Self {
        F2(true)
    }
    fn from_i64(n: i64) -> Self {
        F2(n.rem_euclid(2) == 1)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn inv(&self) -> Self {
        assert!(self.0, "inverse of zero in F2");
        *self
    }
}

/// Exact rational number. Small values stay on a machine-word fast path and
/// promote to arbitrary precision on overflow.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Q {
    Small(i64, i64),
    Big(BigRational),
}

impl Q {
    fn small(n: i64, d: i64) -> Q {
        debug_assert!(d != 0);
        if n == i64::MIN || d == i64::MIN {
            return Q::from_big(BigRational::new(BigInt::from(n), BigInt::from(d)));
        }
        let g = gcd_i64(n, d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            match (n.checked_neg(), d.checked_neg()) {
                (Some(a), Some(b)) => {
                    n = a;
                    d = b;
                }
                _ => {
                    return Q::from_big(BigRational::new(BigInt::from(n), BigInt::from(d)));
                }
            }
        }
        Q::Small(n, d)
    }

    fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Q::Small(n, d),
            _ => Q::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(r) => r.clone(),
        }
    }

    pub fn new(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        Q::small(n, d)
    }

    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        let r = self.to_big();
        (r.numer().clone(), r.denom().clone())
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a as i64
    }
}

impl Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{n}"),
            Q::Small(n, d) => write!(f, "{n}/{d}"),
            Q::Big(r) => write!(f, "{r}"),
        }
    }
}

impl Add for Q {
    type Output = Q;
    fn add(self, rhs: Q) -> Q {
        if let (Q::Small(a, b), Q::Small(c, d)) = (&self, &rhs) {
            if b == d {
                if let Some(n) = a.checked_add(*c) {
                    return Q::small(n, *b);
                }
            } else if let (Some(x), Some(y), Some(z)) =
                (a.checked_mul(*d), c.checked_mul(*b), b.checked_mul(*d))
            {
                if let Some(n) = x.checked_add(y) {
                    return Q::small(n, z);
                }
            }
        }
        Q::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for Q {
    type Output = Q;
    fn sub(self, rhs: Q) -> Q {
        self + (-rhs)
    }
}

impl Mul for Q {
    type Output = Q;
    fn mul(self, rhs: Q) -> Q {
        if let (Q::Small(a, b), Q::Small(c, d)) = (&self, &rhs) {
            if let (Some(n), Some(m)) = (a.checked_mul(*c), b.checked_mul(*d)) {
                if n != i64::MIN && m != i64::MIN {
                    return Q::small(n, m);
                }
            }
        }
        Q::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self {
            Q::Small(n, d) if n != i64::MIN => Q::Small(-n, d),
            other => Q::from_big(-other.to_big()),
        }
    }
}

impl Field for Q {
    const KIND: FieldKind = FieldKind::Q;

    fn zero() -> Self {
        Q::Small(0, 1)
    }
    fn one() -> Self {
        Q::Small(1, 1)
    }
    fn from_i64(n: i64) -> Self {
        if n == i64::MIN {
            Q::Big(BigRational::from_integer(BigInt::from(n)))
        } else {
            Q::Small(n, 1)
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            Q::Small(n, _) => *n == 0,
            Q::Big(r) => r.is_zero(),
        }
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in Q");
        match self {
            Q::Small(n, d) => Q::small(*d, *n),
            Q::Big(r) => Q::from_big(r.recip()),
        }
    }
    fn is_one(&self) -> bool {
        match self {
            Q::Small(n, d) => *n == 1 && *d == 1,
            Q::Big(r) => r.is_one(),
        }
    }
}

impl Q {
    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(n, _) => *n < 0,
            Q::Big(r) => r.is_negative(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f2_arithmetic() {
        assert_eq!(F2::one() + F2::one(), F2::zero());
        assert_eq!(F2::from_i64(-3), F2::one());
        assert_eq!(-F2::one(), F2::one());
    }

    #[test]
    fn q_overflow_promotes() {
        let big = Q::from_i64(i64::MAX);
        let s = big.clone() + big.clone();
        assert!(matches!(s, Q::Big(_)));
        let back = s - big.clone();
        assert_eq!(back, big);
        assert!(matches!(back, Q::Small(..)));
    }

    #[test]
    fn q_normal_form() {
        assert_eq!(Q::new(2, -4), Q::new(-1, 2));
        assert_eq!(Q::new(3, 3), Q::one());
        assert_eq!(Q::new(2, 3).inv(), Q::new(3, 2));
    }

    proptest! {
        #[test]
        fn q_matches_bigrational(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = Q::new(a, b);
            let y = Q::new(c, d);
            let bx = BigRational::new(a.into(), b.into());
            let by = BigRational::new(c.into(), d.into());
            prop_assert_eq!((x.clone() + y.clone()).to_big(), &bx + &by);
            prop_assert_eq!((x.clone() * y.clone()).to_big(), &bx * &by);
            prop_assert_eq!((x - y).to_big(), bx - by);
        }
    }
}
