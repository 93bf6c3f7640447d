use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PlanarDiagram;
use crate::cube::State;
use crate::unionfind::UnionFind;

/// Direction of the decorating arrow at every crossing.
///
/// In the resolution with a negative marker the crossing `X[a,b,c,d]` becomes
/// the arcs `a-d` and `b-c`; the standard arrow runs from the `a-d` arc to the
/// `b-c` arc, and a flipped arrow runs the other way. With a positive marker
/// the arcs are `a-b` and `c-d` and the arrow (rotated a quarter turn) runs
/// from `a-b` to `c-d` unless flipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowChoice {
    flipped: Vec<bool>,
}

impl ArrowChoice {
    pub fn standard(crossings: usize) -> Self {
        ArrowChoice {
            flipped: vec![false; crossings],
        }
    }

    /// Reproducible pseudo-random arrows.
    pub fn seeded(crossings: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ArrowChoice {
            flipped: (0..crossings).map(|_| rng.gen()).collect(),
        }
    }

    pub fn from_flips(flipped: Vec<bool>) -> Self {
        ArrowChoice { flipped }
    }

    pub fn is_flipped(&self, crossing: usize) -> bool {
        self.flipped.get(crossing).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.flipped.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flipped.is_empty()
    }
}

/// Circles of one resolution, without arrow data.
///
/// Circles are numbered by increasing label, where the label of a circle is
/// its smallest edge label. Free loops come last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleMap {
    circle_of_edge: Vec<u8>,
    /// Dense index of the smallest edge on each edge-carrying circle.
    reps: Vec<u16>,
    free_loops: usize,
}

impl CircleMap {
    pub fn compute(d: &PlanarDiagram, markers: u32) -> CircleMap {
        let m = d.edge_count();
        let mut uf = UnionFind::new(m);
        for (k, &[a, b, c, e]) in d.crossings().iter().enumerate() {
            let [a, b, c, e] = [a, b, c, e].map(|l| d.edge_index(l).unwrap() as u32);
            if markers >> k & 1 == 1 {
                uf.union(a, b);
                uf.union(c, e);
            } else {
                uf.union(a, e);
                uf.union(b, c);
            }
        }
        let mut circle_of_root = vec![u8::MAX; m];
        let mut circle_of_edge = vec![0u8; m];
        let mut reps = Vec::new();
        for idx in 0..m {
            let r = uf.find(idx as u32) as usize;
            if circle_of_root[r] == u8::MAX {
                circle_of_root[r] = reps.len() as u8;
                reps.push(idx as u16);
            }
            circle_of_edge[idx] = circle_of_root[r];
        }
        CircleMap {
            circle_of_edge,
            reps,
            free_loops: d.free_loops(),
        }
    }

    pub fn count(&self) -> usize {
        self.reps.len() + self.free_loops
    }

    /// Circle through the edge with dense index `edge`.
    pub fn circle_of(&self, edge: usize) -> usize {
        self.circle_of_edge[edge] as usize
    }

    /// Dense index of a representative edge of an edge-carrying circle.
    pub fn representative(&self, circle: usize) -> Option<usize> {
        self.reps.get(circle).map(|&r| r as usize)
    }

    /// Number of circles that carry diagram edges.
    pub fn edge_circles(&self) -> usize {
        self.reps.len()
    }
}

/// Arrow at one crossing of a resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrow {
    pub from_circle: usize,
    pub to_circle: usize,
    /// Edge labels on which the arrow tail and head sit.
    pub from_edge: u32,
    pub to_edge: u32,
}

/// Resolution of a diagram at a state: its circles and one arrow per crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    circles: CircleMap,
    labels: Vec<u32>,
    arrows: Vec<Arrow>,
}

impl Resolution {
    pub fn circle_count(&self) -> usize {
        self.circles.count()
    }

    /// Canonical circle labels in circle order. Free loops receive labels
    /// past the largest edge label.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn circles(&self) -> &CircleMap {
        &self.circles
    }
}

impl PlanarDiagram {
    /// Resolves every crossing according to `state` and places the arrows.
    pub fn resolve(&self, state: &State, arrows: &ArrowChoice) -> Resolution {
        let circles = CircleMap::compute(self, state.bits());
        let max_label = self.edge_labels().last().copied().unwrap_or(0);
        let mut labels: Vec<u32> = (0..circles.edge_circles())
            .map(|c| self.edge_labels()[circles.representative(c).unwrap()])
            .collect();
        labels.extend((0..self.free_loops()).map(|f| max_label + 1 + f as u32));

        let circle = |l: u32| circles.circle_of(self.edge_index(l).unwrap());
        let arrows = self
            .crossings()
            .iter()
            .enumerate()
            .map(|(k, &[a, b, c, _])| {
                let (tail, head) = if state.is_positive(k) { (a, c) } else { (a, b) };
                let (tail, head) = if arrows.is_flipped(k) {
                    (head, tail)
                } else {
                    (tail, head)
                };
                Arrow {
                    from_circle: circle(tail),
                    to_circle: circle(head),
                    from_edge: tail,
                    to_edge: head,
                }
            })
            .collect();
        Resolution {
            circles,
            labels,
            arrows,
        }
    }
}
