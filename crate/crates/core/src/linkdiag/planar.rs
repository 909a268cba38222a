use super::{DiagramError, LinkDiagram, Slot};

/// Assembles a diagram from crossings whose four ports are listed
/// counterclockwise, then orients and labels it.
///
/// Strands are oriented by walking from the lowest unvisited port, trying
/// ports 0 and 3 of each crossing as entry points first; builders rely on
/// this to orient parallel braid strands the same way.
#[derive(Clone, Debug, Default)]
pub struct PlanarBuilder {
    under: Vec<u8>,
    links: Vec<[Option<Slot>; 4]>,
    loops: usize,
}

impl PlanarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// `under_pair` 0 puts ports 0–2 under, 1 puts ports 1–3 under.
    pub fn add_crossing(&mut self, under_pair: u8) -> usize {
        assert!(under_pair < 2);
        self.under.push(under_pair);
        self.links.push([None; 4]);
        self.links.len() - 1
    }

    pub fn connect(&mut self, p: Slot, q: Slot) {
        assert!(self.links[p.0][p.1].is_none(), "port {p:?} already connected");
        assert!(self.links[q.0][q.1].is_none(), "port {q:?} already connected");
        assert!(p != q);
        self.links[p.0][p.1] = Some(q);
        self.links[q.0][q.1] = Some(p);
    }

    pub fn add_loop(&mut self) {
        self.loops += 1;
    }

    pub fn num_crossings(&self) -> usize {
        self.links.len()
    }

    pub fn build(&self) -> Result<LinkDiagram, DiagramError> {
        let n = self.links.len();
        for (c, ports) in self.links.iter().enumerate() {
            if let Some(s) = ports.iter().position(|p| p.is_none()) {
                return Err(DiagramError::Builder {
                    op: "planar",
                    msg: format!("port {s} of crossing {c} is not connected"),
                });
            }
        }
        let mut label = vec![[0u32; 4]; n];
        let mut entry = vec![[false; 4]; n];
        let mut used = vec![[false; 4]; n];
        let mut next_label = 1u32;
        for c in 0..n {
            for s in [0, 3, 1, 2] {
                if used[c][s] {
                    continue;
                }
                let start = (c, s);
                let mut cur = start;
                loop {
                    used[cur.0][cur.1] = true;
                    entry[cur.0][cur.1] = true;
                    let out = (cur.0, (cur.1 + 2) % 4);
                    used[out.0][out.1] = true;
                    let nxt = self.links[out.0][out.1].unwrap();
                    label[out.0][out.1] = next_label;
                    label[nxt.0][nxt.1] = next_label;
                    next_label += 1;
                    if nxt == start {
                        break;
                    }
                    cur = nxt;
                }
            }
        }
        let crossings = (0..n)
            .map(|c| {
                let u = self.under[c] as usize;
                let inc = if entry[c][u] { u } else { u + 2 };
                [0, 1, 2, 3].map(|k| label[c][(inc + k) % 4])
            })
            .collect();
        LinkDiagram::new(crossings, self.loops)
    }
}
