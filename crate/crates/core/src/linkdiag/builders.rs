use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DiagramError, LinkDiagram, PlanarBuilder, Slot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClaspSign {
    Positive,
    Negative,
}

impl fmt::Display for ClaspSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaspSign::Positive => "+",
            ClaspSign::Negative => "-",
        })
    }
}

pub fn unknot() -> LinkDiagram {
    LinkDiagram::new(vec![], 1).unwrap()
}

// Twist crossing ports, counterclockwise: SW, SE, NE, NW. Strands run
// SW -> NE and NW -> SE, so the band's bottom/top strands swap.
const SW: usize = 0;
const SE: usize = 1;
const NE: usize = 2;
const NW: usize = 3;

/// Closure of the two-strand braid `σ^m` with positive crossings.
pub fn torus_link(two: u32, m: i64) -> Result<LinkDiagram, DiagramError> {
    if two != 2 {
        return Err(DiagramError::Builder { op: "torus", msg: format!("only T(2,m) is supported, got T({two},{m})") });
    }
    if m < 1 {
        return Err(DiagramError::Builder { op: "torus", msg: format!("need m >= 1, got {m}") });
    }
    let mut b = PlanarBuilder::new();
    let xs: Vec<usize> = (0..m).map(|_| b.add_crossing(0)).collect();
    for i in 0..xs.len() {
        let (x, y) = (xs[i], xs[(i + 1) % xs.len()]);
        b.connect((x, SE), (y, SW));
        b.connect((x, NE), (y, NW));
    }
    b.build()
}

/// Closure of a braid on `strands` strands, read left to right. A letter
/// `(i, positive)` crosses positions `i` and `i + 1`; positions no letter
/// touches close up into unknotted components.
pub fn braid_closure(strands: usize, word: &[(usize, bool)]) -> Result<LinkDiagram, DiagramError> {
    if let Some(&(i, _)) = word.iter().find(|l| l.0 + 1 >= strands) {
        return Err(DiagramError::Builder { op: "braid", msg: format!("letter {i} needs more than {strands} strands") });
    }
    let mut b = PlanarBuilder::new();
    let mut first = vec![None; strands];
    let mut last = vec![None; strands];
    for &(i, positive) in word {
        let x = b.add_crossing(if positive { 0 } else { 1 });
        for (pos, inp, out) in [(i, SW, SE), (i + 1, NW, NE)] {
            match last[pos] {
                Some(p) => b.connect(p, (x, inp)),
                None => first[pos] = Some((x, inp)),
            }
            last[pos] = Some((x, out));
        }
    }
    for pos in 0..strands {
        match (last[pos], first[pos]) {
            (Some(p), Some(q)) => b.connect(p, q),
            _ => b.add_loop(),
        }
    }
    b.build()
}

/// Band piece with input and output port pairs (bottom, top).
struct BandPiece {
    input: (Slot, Slot),
    output: (Slot, Slot),
}

fn twist_crossing(b: &mut PlanarBuilder, right_handed: bool) -> BandPiece {
    // right-handed: the strand heading down (NW -> SE) passes over
    let x = b.add_crossing(if right_handed { 0 } else { 1 });
    BandPiece { input: ((x, SW), (x, NW)), output: ((x, SE), (x, NE)) }
}

fn clasp(b: &mut PlanarBuilder, sign: ClaspSign) -> BandPiece {
    // ports counterclockwise: E, N, W, S
    const E: usize = 0;
    const N: usize = 1;
    const W: usize = 2;
    const S: usize = 3;
    // positive clasp: vertical (N–S) strands pass over
    let under = match sign {
        ClaspSign::Positive => 0,
        ClaspSign::Negative => 1,
    };
    let x1 = b.add_crossing(under);
    let x2 = b.add_crossing(under);
    // the incoming hook: bottom -> x1 (W to E) -> x2 (S to N) -> top
    b.connect((x1, E), (x2, S));
    // the outgoing hook: top <- x2 (E to W) -> x1 (N to S) -> bottom
    b.connect((x1, N), (x2, W));
    BandPiece { input: ((x1, W), (x2, N)), output: ((x1, S), (x2, E)) }
}

/// Twisted Whitehead double of a knot diagram.
///
/// The companion is blackboard-doubled (four crossings per crossing), then
/// `|t - w|` full twists and a clasp are inserted on one band, where `w` is
/// the companion's writhe. The two parallel strands link `t` times.
pub fn whitehead_double(companion: &LinkDiagram, t: i64, sign: ClaspSign) -> Result<LinkDiagram, DiagramError> {
    if !companion.is_knot() {
        return Err(DiagramError::NotAKnot { components: companion.num_components() });
    }
    let w = companion.writhe();
    let k = t - w;
    let mut b = PlanarBuilder::new();

    // doubled crossings: ends[i][slot] = (first, second) in ccw order around the crossing
    const S0: usize = 0;
    const E1: usize = 1;
    const N2: usize = 2;
    const W3: usize = 3;
    let mut ends: Vec<[(Slot, Slot); 4]> = Vec::new();
    for _ in companion.crossings() {
        let ll = b.add_crossing(0);
        let rl = b.add_crossing(0);
        let lu = b.add_crossing(0);
        let ru = b.add_crossing(0);
        b.connect((ll, N2), (lu, S0));
        b.connect((rl, N2), (ru, S0));
        b.connect((ll, E1), (rl, W3));
        b.connect((lu, E1), (ru, W3));
        ends.push([
            ((ll, S0), (rl, S0)),
            ((rl, E1), (ru, E1)),
            ((ru, N2), (lu, N2)),
            ((lu, W3), (ll, W3)),
        ]);
    }

    let mut pieces: Vec<BandPiece> =
        (0..k.unsigned_abs()).flat_map(|_| [k > 0, k > 0]).map(|rh| twist_crossing(&mut b, rh)).collect();
    pieces.push(clasp(&mut b, sign));
    for i in 1..pieces.len() {
        let (o, n) = (pieces[i - 1].output, pieces[i].input);
        b.connect(o.0, n.0);
        b.connect(o.1, n.1);
    }
    let band_in = pieces[0].input;
    let band_out = pieces[pieces.len() - 1].output;

    if companion.num_crossings() == 0 {
        b.connect(band_out.0, band_in.0);
        b.connect(band_out.1, band_in.1);
    } else {
        let mut occ: BTreeMap<u32, Vec<Slot>> = BTreeMap::new();
        for (i, x) in companion.crossings().iter().enumerate() {
            for (s, &l) in x.iter().enumerate() {
                occ.entry(l).or_default().push((i, s));
            }
        }
        let band_label = *occ.keys().next().unwrap();
        for (&l, v) in &occ {
            let (p, q) = (ends[v[0].0][v[0].1], ends[v[1].0][v[1].1]);
            if l == band_label {
                // leaving p: right side = first, left side = second
                b.connect(p.0, band_in.0);
                b.connect(p.1, band_in.1);
                b.connect(band_out.0, q.1);
                b.connect(band_out.1, q.0);
            } else {
                b.connect(p.0, q.1);
                b.connect(p.1, q.0);
            }
        }
    }
    b.build()
}

/// Switch every crossing.
pub fn mirror(d: &LinkDiagram) -> LinkDiagram {
    let crossings = d
        .crossings()
        .iter()
        .zip(d.signs())
        .map(|(x, &s)| if s > 0 { [x[3], x[0], x[1], x[2]] } else { [x[1], x[2], x[3], x[0]] })
        .collect();
    LinkDiagram::new(crossings, d.unknot_components()).expect("mirror of a valid diagram")
}
