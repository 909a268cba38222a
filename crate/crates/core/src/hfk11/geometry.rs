//! Exact planar geometry over `i128` rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type R = Ratio<i128>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pt {
    pub x: R,
    pub y: R,
}

impl Pt {
    pub fn new(x: R, y: R) -> Self {
        Pt { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Pt { x: R::from_integer(x as i128), y: R::from_integer(y as i128) }
    }
}

impl Add for Pt {
    type Output = Pt;
    fn add(self, o: Pt) -> Pt {
        Pt { x: self.x + o.x, y: self.y + o.y }
    }
}

impl Sub for Pt {
    type Output = Pt;
    fn sub(self, o: Pt) -> Pt {
        Pt { x: self.x - o.x, y: self.y - o.y }
    }
}

impl fmt::Debug for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn cross(a: Pt, b: Pt) -> R {
    a.x * b.y - a.y * b.x
}

pub fn dot(a: Pt, b: Pt) -> R {
    a.x * b.x + a.y * b.y
}

/// Sign of the turn `a -> b -> c`.
pub fn orient(a: Pt, b: Pt, c: Pt) -> Ordering {
    cross(b - a, c - a).cmp(&R::zero())
}

/// `p` lies on the closed segment `ab`.
pub fn on_segment(p: Pt, a: Pt, b: Pt) -> bool {
    orient(a, b, p) == Ordering::Equal
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// Closed segments `ab` and `cd` share a point.
pub fn segments_meet(a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    if o1 != o2 && o3 != o4 && o1 != Ordering::Equal && o2 != Ordering::Equal && o3 != Ordering::Equal && o4 != Ordering::Equal {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Segments `av` and `vb` sharing the endpoint `v` overlap beyond it.
pub fn adjacent_overlap(a: Pt, v: Pt, b: Pt) -> bool {
    orient(a, v, b) == Ordering::Equal && dot(a - v, b - v).is_positive()
}

/// Crossing-number test; `p` must not lie on the boundary.
pub fn inside(p: Pt, poly: &[Pt]) -> bool {
    let mut odd = false;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                odd = !odd;
            }
        }
    }
    odd
}

pub fn floor(r: R) -> i128 {
    r.floor().to_integer()
}

pub fn ceil(r: R) -> i128 {
    r.ceil().to_integer()
}

pub fn is_integer(r: R) -> bool {
    r.is_integer()
}

pub fn parse_rational(s: &str) -> Option<R> {
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (i128, i128) = (n.parse().ok()?, d.parse().ok()?);
            (d != 0).then(|| R::new(n, d))
        }
        None => s.parse::<i128>().ok().map(R::from_integer),
    }
}

pub fn fmt_rational(r: R) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
