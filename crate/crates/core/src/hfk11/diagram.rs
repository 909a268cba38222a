use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::geometry::{adjacent_overlap, ceil, floor, fmt_rational, is_integer, on_segment, parse_rational, segments_meet, Pt, R};
use super::HfkError;

/// Genus-one doubly pointed diagram, lifted to the plane: `α` is the line
/// `y = 0` (and its integer translates), `β̃` the polyline `beta`, whose last
/// vertex is the first one translated by the period `(p, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneOneDiagram {
    pub p: i64,
    pub beta: Vec<Pt>,
    pub z: Pt,
    pub w: Pt,
}

/// Position along `β̃`: (period, segment, vertex coordinates of the segment).
pub(crate) type Segment = (Pt, Pt);

impl OneOneDiagram {
    pub fn period(&self) -> Pt {
        Pt::int(self.p, 1)
    }

    /// Segments of one period, shifted by `k` periods.
    pub(crate) fn segments(&self, k: i64) -> Vec<Segment> {
        let shift = Pt::new(R::from_integer((k * self.p) as i128), R::from_integer(k as i128));
        self.beta.windows(2).map(|w| (w[0] + shift, w[1] + shift)).collect()
    }

    pub(crate) fn y_range(&self) -> (R, R) {
        let ys = self.beta.iter().map(|v| v.y);
        (ys.clone().min().unwrap(), ys.max().unwrap())
    }

    pub(crate) fn x_range(&self) -> (R, R) {
        let xs = self.beta.iter().map(|v| v.x);
        (xs.clone().min().unwrap(), xs.max().unwrap())
    }

    /// Whether `q` lies on some lift of `β`.
    fn on_beta(&self, q: Pt) -> bool {
        self.segments(0).iter().any(|&(a, b)| {
            let (x0, x1) = (floor(a.x.min(b.x) - q.x), ceil(a.x.max(b.x) - q.x));
            let (y0, y1) = (floor(a.y.min(b.y) - q.y), ceil(a.y.max(b.y) - q.y));
            (x0..=x1).any(|i| {
                (y0..=y1).any(|j| on_segment(q + Pt::new(R::from_integer(i), R::from_integer(j)), a, b))
            })
        })
    }

    /// Check every structural requirement; returns the number of
    /// intersection points of `α` and `β` in the torus.
    pub fn validate(&self) -> Result<usize, HfkError> {
        if self.beta.len() < 2 {
            return Err(HfkError::TooFewVertices(self.beta.len()));
        }
        let first = self.beta[0];
        let last = *self.beta.last().unwrap();
        if last != first + self.period() {
            return Err(HfkError::Period { start: first, end: last, p: self.p });
        }
        for (i, v) in self.beta.iter().enumerate() {
            if is_integer(v.y) {
                return Err(HfkError::Transversality { vertex: i, point: *v });
            }
        }
        for (name, q) in [("z", self.z), ("w", self.w)] {
            if is_integer(q.y) {
                return Err(HfkError::BasepointOnCurve { which: name, curve: "alpha", point: q });
            }
            if self.on_beta(q) {
                return Err(HfkError::BasepointOnCurve { which: name, curve: "beta", point: q });
            }
        }
        self.check_embedded()?;
        Ok(self.crossings_per_period())
    }

    pub(crate) fn crossings_per_period(&self) -> usize {
        self.segments(0)
            .iter()
            .map(|&(a, b)| {
                let (lo, hi) = (a.y.min(b.y), a.y.max(b.y));
                (ceil(hi) - ceil(lo)) as usize
            })
            .sum()
    }

    /// The full preimage of `β` is embedded: the base period meets neither
    /// itself nor any translate except at shared vertices.
    fn check_embedded(&self) -> Result<(), HfkError> {
        let base = self.segments(0);
        let m = base.len();
        let (x0, x1) = self.x_range();
        let (y0, y1) = self.y_range();
        let jspan = (ceil(y1 - y0) + 1) as i64;
        let wspan = ceil(x1 - x0) + 1;
        for j in -jspan..=jspan {
            let shifted = self.segments(j);
            let jp = (j * self.p) as i128;
            for i in (-wspan - jp)..=(wspan - jp) {
                let t = Pt::new(R::from_integer(i), R::zero());
                for (a, &(p0, p1)) in base.iter().enumerate() {
                    for (b, &(q0, q1)) in shifted.iter().enumerate() {
                        let (q0, q1) = (q0 + t, q1 + t);
                        if i == 0 && j == 0 && a == b {
                            continue;
                        }
                        let adjacent = i == 0
                            && ((j == 0 && (a + 1 == b || b + 1 == a)) || (j == 1 && a + 1 == m && b == 0) || (j == -1 && a == 0 && b + 1 == m));
                        let bad = if adjacent {
                            if p1 == q0 {
                                adjacent_overlap(p0, p1, q1)
                            } else {
                                adjacent_overlap(q0, q1, p1)
                            }
                        } else {
                            segments_meet(p0, p1, q0, q1)
                        };
                        if bad {
                            return Err(HfkError::NotEmbedded { first: (0, 0, a), second: (i as i64, j, b) });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn translated(&self, t: Pt) -> Self {
        OneOneDiagram { p: self.p, beta: self.beta.iter().map(|&v| v + t).collect(), z: self.z + t, w: self.w + t }
    }

    /// Same curve, with the period starting at vertex `k`.
    pub fn rotated(&self, k: usize) -> Self {
        let m = self.beta.len() - 1;
        let k = k % m;
        let per = self.period();
        let mut beta: Vec<Pt> = self.beta[k..=m].to_vec();
        beta.extend(self.beta[1..=k].iter().map(|&v| v + per));
        OneOneDiagram { beta, ..self.clone() }
    }

    /// Insert the point at parameter `t` of segment `k`.
    pub fn subdivided(&self, k: usize, t: R) -> Self {
        let (a, b) = (self.beta[k], self.beta[k + 1]);
        let mid = Pt::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        let mut beta = self.beta.clone();
        beta.insert(k + 1, mid);
        OneOneDiagram { beta, ..self.clone() }
    }
}

impl FromStr for OneOneDiagram {
    type Err = HfkError;

    fn from_str(s: &str) -> Result<Self, HfkError> {
        let mut p = None;
        let mut beta = Vec::new();
        let (mut z, mut w) = (None, None);
        for (n, raw) in s.lines().enumerate() {
            let line = n + 1;
            let err = |msg: String| HfkError::Parse { line, msg };
            let text = raw.split('#').next().unwrap().trim();
            if text.is_empty() {
                continue;
            }
            let toks: Vec<&str> = text.split_whitespace().collect();
            let point = |toks: &[&str]| -> Result<Pt, HfkError> {
                match toks {
                    [x, y] => {
                        let x = parse_rational(x).ok_or_else(|| err(format!("bad rational `{x}`")))?;
                        let y = parse_rational(y).ok_or_else(|| err(format!("bad rational `{y}`")))?;
                        Ok(Pt::new(x, y))
                    }
                    _ => Err(err("expected two rationals".into())),
                }
            };
            match toks[0] {
                "period" => {
                    if toks.len() != 3 || toks[2] != "1" {
                        return Err(err("expected `period <p> 1`".into()));
                    }
                    p = Some(toks[1].parse().map_err(|_| err(format!("bad period `{}`", toks[1])))?);
                }
                "v" => beta.push(point(&toks[1..])?),
                "z" => z = Some(point(&toks[1..])?),
                "w" => w = Some(point(&toks[1..])?),
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let missing = |what: &str| HfkError::Parse { line: 0, msg: format!("missing {what}") };
        Ok(OneOneDiagram {
            p: p.ok_or_else(|| missing("period"))?,
            beta,
            z: z.ok_or_else(|| missing("z"))?,
            w: w.ok_or_else(|| missing("w"))?,
        })
    }
}

impl fmt::Display for OneOneDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "period {} 1", self.p)?;
        for v in &self.beta {
            writeln!(f, "v {} {}", fmt_rational(v.x), fmt_rational(v.y))?;
        }
        writeln!(f, "z {} {}", fmt_rational(self.z.x), fmt_rational(self.z.y))?;
        writeln!(f, "w {} {}", fmt_rational(self.w.x), fmt_rational(self.w.y))
    }
}
