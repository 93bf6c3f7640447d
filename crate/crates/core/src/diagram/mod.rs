//! Oriented link diagrams in planar-diagram (PD) notation.
//!
//! A crossing `X[a,b,c,d]` lists the four incident edges counterclockwise,
//! starting from the incoming lower strand, so the lower strand always runs
//! `a -> c`. The direction of the upper strand (`b -> d` or `d -> b`) is
//! recovered from the requirement that every edge has exactly one head and
//! one tail; the usual "consecutive labels along each component" numbering
//! only breaks ties.
//!
//! Crossingless unknotted components cannot be written in PD notation. They
//! are carried separately as `free_loops`; `PD[]` is the one-loop unknot.

mod builder;
mod corpus;
mod generators;
mod parse;
mod resolve;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::unionfind::ParityUnionFind;

pub use builder::{DiagramBuilder, Port};
pub use corpus::{bundled_corpus, parse_corpus, CorpusEntry};
pub use generators::{gen_braid_closure, gen_pretzel, gen_torus, parse_generator};
pub use parse::parse_pd;
pub use resolve::{Arrow, ArrowChoice, CircleMap, Resolution};

/// Sign of a crossing under the right-hand rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CrossingSign {
    Positive,
    Negative,
}

impl CrossingSign {
    pub fn value(self) -> i32 {
        match self {
            CrossingSign::Positive => 1,
            CrossingSign::Negative => -1,
        }
    }
}

/// An oriented link diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarDiagram {
    crossings: Vec<[u32; 4]>,
    /// `true` when the upper strand of the crossing runs `b -> d`.
    over_b_to_d: Vec<bool>,
    /// Sorted edge labels; the position of a label is its dense index.
    edges: Vec<u32>,
    /// Components as edge-label cycles in orientation order.
    components: Vec<Vec<u32>>,
    free_loops: usize,
    name: Option<String>,
}

impl PlanarDiagram {
    /// The crossingless unknot, `PD[]`.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// `loops` disjoint crossingless circles.
    pub fn unlink(loops: usize) -> Self {
        PlanarDiagram {
            crossings: Vec::new(),
            over_b_to_d: Vec::new(),
            edges: Vec::new(),
            components: Vec::new(),
            free_loops: loops,
            name: None,
        }
    }

    /// Validates a crossing list and derives edge orientations and components.
    pub fn from_crossings(crossings: Vec<[u32; 4]>, free_loops: usize) -> Result<Self> {
        if crossings.is_empty() {
            if free_loops == 0 {
                return Err(Error::InvalidDiagram("empty diagram".into()));
            }
            return Ok(Self::unlink(free_loops));
        }
        let (edges, occurrences) = edge_occurrences(&crossings)?;
        let over_b_to_d = solve_orientation(&crossings, &edges, &occurrences)?;
        Self::from_oriented(crossings, over_b_to_d, free_loops)
    }

    /// Builds a diagram whose upper-strand directions are already known.
    pub(crate) fn from_oriented(
        crossings: Vec<[u32; 4]>,
        over_b_to_d: Vec<bool>,
        free_loops: usize,
    ) -> Result<Self> {
        if crossings.is_empty() {
            return Self::from_crossings(crossings, free_loops);
        }
        let (edges, occurrences) = edge_occurrences(&crossings)?;

        let enters = |x: usize, slot: usize| match slot {
            0 => true,
            2 => false,
            1 => over_b_to_d[x],
            _ => !over_b_to_d[x],
        };
        // Head of each edge: the (crossing, slot) where it enters.
        let mut head: HashMap<u32, (usize, usize)> = HashMap::new();
        for (&e, occ) in &occurrences {
            let heads: Vec<_> = occ.iter().copied().filter(|&(x, s)| enters(x, s)).collect();
            if heads.len() != 1 {
                return Err(Error::InvalidDiagram(format!(
                    "inconsistent orientation: edge {e} has {} heads",
                    heads.len()
                )));
            }
            head.insert(e, heads[0]);
        }

        let mut visited: HashMap<u32, bool> = edges.iter().map(|&e| (e, false)).collect();
        let mut components = Vec::new();
        for &start in &edges {
            if visited[&start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut e = start;
            loop {
                if visited[&e] {
                    if e != start {
                        return Err(Error::InvalidDiagram(
                            "orientation cycle does not close".into(),
                        ));
                    }
                    break;
                }
                visited.insert(e, true);
                comp.push(e);
                let (x, s) = head[&e];
                e = crossings[x][(s + 2) % 4];
            }
            components.push(comp);
        }

        Ok(PlanarDiagram {
            crossings,
            over_b_to_d,
            edges,
            components,
            free_loops,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn edge_labels(&self) -> &[u32] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn edge_index(&self, label: u32) -> Option<usize> {
        self.edges.binary_search(&label).ok()
    }

    /// Components that pass through at least one crossing.
    pub fn components(&self) -> &[Vec<u32>] {
        &self.components
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Total number of link components, free loops included.
    pub fn component_count(&self) -> usize {
        self.components.len() + self.free_loops
    }

    /// True if the upper strand at crossing `x` runs from slot 1 to slot 3.
    pub fn over_runs_b_to_d(&self, x: usize) -> bool {
        self.over_b_to_d[x]
    }

    /// Crossing signs in crossing order.
    ///
    /// With `a` pointing up and the slots counterclockwise, an upper strand
    /// running `d -> b` crosses left to right over an upward strand, which is
    /// a positive crossing.
    pub fn crossing_signs(&self) -> Vec<CrossingSign> {
        self.over_b_to_d
            .iter()
            .map(|&fwd| {
                if fwd {
                    CrossingSign::Negative
                } else {
                    CrossingSign::Positive
                }
            })
            .collect()
    }

    pub fn writhe(&self) -> i32 {
        self.crossing_signs().iter().map(|s| s.value()).sum()
    }

    /// Number of positive and negative crossings.
    pub fn signed_counts(&self) -> (usize, usize) {
        let pos = self.over_b_to_d.iter().filter(|f| !**f).count();
        (pos, self.crossings.len() - pos)
    }

    /// Switches every crossing. Orientation is kept, so all signs flip.
    pub fn mirror(&self) -> PlanarDiagram {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.over_b_to_d)
            .map(|(&[a, b, c, d], &fwd)| if fwd { [b, c, d, a] } else { [d, a, b, c] })
            .collect();
        // The old lower strand a -> c becomes the upper strand: in the rotated
        // tuple it sits in slots (b, d) for `[d,a,b,c]` and (d, b) for `[b,c,d,a]`.
        let over_b_to_d = self.over_b_to_d.iter().map(|&fwd| !fwd).collect();
        PlanarDiagram {
            crossings,
            over_b_to_d,
            edges: self.edges.clone(),
            components: self.components.clone(),
            free_loops: self.free_loops,
            name: self.name.as_ref().map(|n| format!("mirror({n})")),
        }
    }

    /// PD text for the crossings. Free loops are not representable and are
    /// only reflected by `PD[]` for the bare unknot.
    pub fn to_pd_string(&self) -> String {
        let body: Vec<String> = self
            .crossings
            .iter()
            .map(|[a, b, c, d]| format!("X[{a},{b},{c},{d}]"))
            .collect();
        format!("PD[{}]", body.join(","))
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())?;
        if !self.crossings.is_empty() && self.free_loops > 0 {
            write!(f, " + {} free loop(s)", self.free_loops)?;
        }
        Ok(())
    }
}

type Occurrences = HashMap<u32, Vec<(usize, usize)>>;

fn edge_occurrences(crossings: &[[u32; 4]]) -> Result<(Vec<u32>, Occurrences)> {
    let mut occurrences: Occurrences = HashMap::new();
    for (x, c) in crossings.iter().enumerate() {
        for (slot, &e) in c.iter().enumerate() {
            occurrences.entry(e).or_default().push((x, slot));
        }
    }
    let mut edges: Vec<u32> = occurrences.keys().copied().collect();
    edges.sort_unstable();
    for e in &edges {
        let k = occurrences[e].len();
        if k != 2 {
            return Err(Error::InvalidDiagram(format!(
                "edge {e} appears {k} time(s); every edge must appear exactly twice"
            )));
        }
    }
    Ok((edges, occurrences))
}

/// Solves for the direction of every upper strand.
///
/// Each slot of each crossing is either a head or a tail of its edge. Slots 0
/// and 2 are fixed; slots 1 and 3 depend on one boolean per crossing. Every
/// edge contributes the constraint "exactly one of my two slots is a head".
fn solve_orientation(
    crossings: &[[u32; 4]],
    edges: &[u32],
    occurrences: &Occurrences,
) -> Result<Vec<bool>> {
    let n = crossings.len();
    let truth = n as u32;
    let mut uf = ParityUnionFind::new(n + 1);

    // A literal is (node, flip): its value is value(node) ^ flip, with the
    // extra node `truth` pinned to true.
    let literal = |x: usize, slot: usize| -> (u32, bool) {
        match slot {
            0 => (truth, false),
            2 => (truth, true),
            1 => (x as u32, false),
            _ => (x as u32, true),
        }
    };

    for e in edges {
        let occ = &occurrences[e];
        let (n1, f1) = literal(occ[0].0, occ[0].1);
        let (n2, f2) = literal(occ[1].0, occ[1].1);
        if !uf.relate(n1, n2, true ^ f1 ^ f2) {
            return Err(Error::InvalidDiagram(format!(
                "inconsistent orientation: edge {e} cannot have one head and one tail"
            )));
        }
    }

    // Numbering hint: the upper strand runs b -> d when d follows b.
    let hint = |x: usize| {
        let [_, b, _, d] = crossings[x];
        let (b, d) = (b as i64, d as i64);
        d - b == 1 || b - d > 1
    };

    let (truth_root, truth_par) = uf.find(truth);
    let mut votes: HashMap<u32, i64> = HashMap::new();
    let mut roots = Vec::with_capacity(n);
    for x in 0..n {
        let (r, p) = uf.find(x as u32);
        roots.push((r, p));
        if r != truth_root {
            // Vote for the root value that makes x agree with its hint.
            let want_root = hint(x) ^ p;
            *votes.entry(r).or_default() += if want_root { 1 } else { -1 };
        }
    }

    let mut out = Vec::with_capacity(n);
    for (x, &(r, p)) in roots.iter().enumerate() {
        let root_value = if r == truth_root {
            // value(truth) = true = value(root) ^ truth_par
            !truth_par
        } else {
            let v = votes[&r];
            if v == 0 {
                hint(x) ^ p
            } else {
                v > 0
            }
        };
        out.push(root_value ^ p);
    }
    Ok(out)
}
