//! Kauffman states, gradings, and the cube of resolutions with its edge signs.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::maps::{compose, EdgeKind, EdgeMap, Theory};
use crate::diagram::{ArrowChoice, CircleMap, PlanarDiagram};
use crate::error::{Error, Result};
use crate::unionfind::ParityUnionFind;

/// Default cap on the crossing count of a cube.
pub const DEFAULT_MAX_CROSSINGS: usize = 20;

/// Markers at every crossing; bit `k` set means a positive marker at crossing `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    bits: u32,
    n: u8,
}

impl State {
    pub fn new(bits: u32, n: usize) -> Self {
        assert!(n <= 31, "at most 31 crossings");
        debug_assert!(n == 31 || bits >> n == 0);
        State { bits, n: n as u8 }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_positive(&self, k: usize) -> bool {
        self.bits >> k & 1 == 1
    }

    /// Positive markers minus negative markers.
    pub fn sigma(&self) -> i32 {
        2 * self.bits.count_ones() as i32 - self.n as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Grading {
    pub i: i32,
    pub j: i32,
}

pub fn gradings(d: &PlanarDiagram, s: &State) -> Grading {
    let w = d.writhe();
    let sigma = s.sigma();
    Grading {
        i: (w - sigma) / 2,
        j: (3 * w - sigma) / 2,
    }
}

/// All `2^n` states in increasing order of their bit patterns.
pub fn enumerate_states(d: &PlanarDiagram, limit: usize) -> Result<Vec<State>> {
    let n = d.crossing_count();
    check_limit(n, limit)?;
    Ok((0..1u32 << n).map(|b| State::new(b, n)).collect())
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit.min(30) {
        return Err(Error::ResourceLimit(format!(
            "{n} crossings exceeds the limit of {}",
            limit.min(30)
        )));
    }
    Ok(())
}

/// An edge of the cube, from `source` (positive marker at `crossing`) to the
/// state with that marker made negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CubeEdge {
    pub source: u32,
    pub crossing: usize,
    pub kind: EdgeKind,
}

impl CubeEdge {
    pub fn target(&self) -> u32 {
        self.source & !(1 << self.crossing)
    }
}

/// How the two unsigned paths around a square face compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceRelation {
    Commute,
    Anticommute,
    /// Both composites vanish; the face imposes no constraint.
    Free,
}

/// Signs of all cube edges, `sign(v, k)` for the edge leaving `v` at `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSigns {
    n: usize,
    negative: Vec<bool>,
}

impl EdgeSigns {
    pub fn all_positive(n: usize) -> Self {
        EdgeSigns {
            n,
            negative: vec![false; (1usize << n) * n.max(1)],
        }
    }

    fn idx(&self, v: u32, k: usize) -> usize {
        v as usize * self.n + k
    }

    pub fn sign(&self, v: u32, k: usize) -> i32 {
        if self.negative[self.idx(v, k)] {
            -1
        } else {
            1
        }
    }

    pub fn set(&mut self, v: u32, k: usize, negative: bool) {
        let i = self.idx(v, k);
        self.negative[i] = negative;
    }

    /// Changes the assignment by the coboundary of a vertex function:
    /// `e(v -> w)` is multiplied by `g(v) g(w)`. Squares keep their sign
    /// products, so the result is again a valid assignment.
    pub fn regauge(&self, g: impl Fn(u32) -> bool) -> EdgeSigns {
        let mut out = self.clone();
        for v in 0..1u32 << self.n {
            for k in 0..self.n {
                if v >> k & 1 == 1 {
                    let i = self.idx(v, k);
                    out.negative[i] ^= g(v) ^ g(v & !(1 << k));
                }
            }
        }
        out
    }
}

/// The cube of resolutions of a diagram under a fixed arrow choice.
#[derive(Debug, Clone)]
pub struct ResolutionCube {
    diagram: PlanarDiagram,
    arrows: ArrowChoice,
    circles: Vec<CircleMap>,
    /// Dense edge indices `[a, b, c, d]` per crossing.
    ports: Vec<[usize; 4]>,
}

impl ResolutionCube {
    pub fn build(d: &PlanarDiagram, arrows: ArrowChoice, limit: usize) -> Result<Self> {
        let n = d.crossing_count();
        check_limit(n, limit)?;
        if arrows.len() != n {
            return Err(Error::InvalidArgument(format!(
                "arrow choice covers {} crossings, diagram has {n}",
                arrows.len()
            )));
        }
        let circles: Vec<CircleMap> = (0..1u32 << n)
            .into_par_iter()
            .map(|v| CircleMap::compute(d, v))
            .collect();
        if let Some(m) = circles.iter().map(|c| c.count()).max() {
            if m > 31 {
                return Err(Error::ResourceLimit(format!(
                    "a resolution has {m} circles"
                )));
            }
        }
        let ports = d
            .crossings()
            .iter()
            .map(|x| x.map(|l| d.edge_index(l).expect("edge label")))
            .collect();
        Ok(ResolutionCube {
            diagram: d.clone(),
            arrows,
            circles,
            ports,
        })
    }

    pub fn diagram(&self) -> &PlanarDiagram {
        &self.diagram
    }

    pub fn arrows(&self) -> &ArrowChoice {
        &self.arrows
    }

    pub fn crossing_count(&self) -> usize {
        self.ports.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.circles.len()
    }

    pub fn state(&self, v: u32) -> State {
        State::new(v, self.crossing_count())
    }

    pub fn grading(&self, v: u32) -> Grading {
        gradings(&self.diagram, &self.state(v))
    }

    pub fn circles(&self, v: u32) -> &CircleMap {
        &self.circles[v as usize]
    }

    pub fn circle_count(&self, v: u32) -> usize {
        self.circles[v as usize].count()
    }

    /// All `n 2^(n-1)` edges, ordered by source then crossing.
    pub fn adjacent_pairs(&self) -> Result<Vec<CubeEdge>> {
        let n = self.crossing_count();
        let mut out = Vec::with_capacity(n << n.saturating_sub(1));
        for v in 0..self.vertex_count() as u32 {
            for k in (0..n).filter(|k| v >> k & 1 == 1) {
                let kind = self.edge_map(v, k)?.kind;
                out.push(CubeEdge {
                    source: v,
                    crossing: k,
                    kind,
                });
            }
        }
        Ok(out)
    }

    /// Circle correspondence along the edge leaving `v` at crossing `k`.
    pub fn edge_map(&self, v: u32, k: usize) -> Result<EdgeMap> {
        debug_assert!(v >> k & 1 == 1);
        let src = &self.circles[v as usize];
        let tgt = &self.circles[(v & !(1 << k)) as usize];
        let (ms, mt) = (src.count(), tgt.count());
        let mut eta = [0u8; 32];
        for (c, e) in eta.iter_mut().enumerate().take(src.edge_circles()) {
            *e = tgt.circle_of(src.representative(c).unwrap()) as u8;
        }
        for f in 0..ms - src.edge_circles() {
            eta[src.edge_circles() + f] = (tgt.edge_circles() + f) as u8;
        }
        let [a, b, c, _] = self.ports[k];
        if mt + 1 == ms {
            let (x, y) = (src.circle_of(a) as u8, src.circle_of(c) as u8);
            Ok(EdgeMap {
                kind: EdgeKind::Merge,
                eta,
                source_circles: ms as u8,
                a: x.min(y),
                b: x.max(y),
                joined: eta[x as usize],
            })
        } else if ms + 1 == mt {
            // the negative smoothing joins a with d and b with c
            let (mut tail, mut head) = (tgt.circle_of(a) as u8, tgt.circle_of(b) as u8);
            if self.arrows.is_flipped(k) {
                std::mem::swap(&mut tail, &mut head);
            }
            Ok(EdgeMap {
                kind: EdgeKind::Split,
                eta,
                source_circles: ms as u8,
                a: tail,
                b: head,
                joined: src.circle_of(a) as u8,
            })
        } else {
            Err(Error::Inconsistent(format!(
                "circle count changes from {ms} to {mt} along edge ({v:b}, {k})"
            )))
        }
    }

    /// Compares the two unsigned paths around the face spanned by crossings
    /// `j` and `k` at the top vertex `v`.
    ///
    /// A circle away from both crossings is carried along by every edge map,
    /// and since both paths perform the same number of splits it picks up the
    /// same sign on either path. The comparison therefore runs over monomials
    /// in the circles through the two crossings only.
    pub fn face_relation(
        &self,
        theory: Theory,
        v: u32,
        j: usize,
        k: usize,
    ) -> Result<FaceRelation> {
        let circles = &self.circles[v as usize];
        let touched = [j, k]
            .iter()
            .flat_map(|&x| [self.ports[x][0], self.ports[x][2]])
            .fold(0u32, |m, e| m | 1 << circles.circle_of(e));
        self.compare_paths(theory, v, j, k, submasks(touched))
    }

    /// [`face_relation`](Self::face_relation) checked on the whole basis.
    pub fn face_relation_full(
        &self,
        theory: Theory,
        v: u32,
        j: usize,
        k: usize,
    ) -> Result<FaceRelation> {
        self.compare_paths(theory, v, j, k, (0..1u32 << self.circle_count(v)).collect())
    }

    fn compare_paths(
        &self,
        theory: Theory,
        v: u32,
        j: usize,
        k: usize,
        masks: Vec<u32>,
    ) -> Result<FaceRelation> {
        let (bj, bk) = (1u32 << j, 1u32 << k);
        let first = (self.edge_map(v, j)?, self.edge_map(v & !bj, k)?);
        let second = (self.edge_map(v, k)?, self.edge_map(v & !bk, j)?);
        let (mut commute, mut anti, mut nonzero) = (true, true, false);
        for mask in masks {
            let p = compose(theory, &first.0, &first.1, mask);
            let q = compose(theory, &second.0, &second.1, mask);
            nonzero |= !p.is_empty() || !q.is_empty();
            if p != q {
                commute = false;
            }
            if p.len() != q.len() || p.iter().zip(&q).any(|(x, y)| x.0 != y.0 || x.1 != -y.1) {
                anti = false;
            }
            if !commute && !anti {
                return Err(Error::Inconsistent(format!(
                    "face ({v:b}; {j}, {k}) neither commutes nor anticommutes"
                )));
            }
        }
        Ok(match (nonzero, commute, anti) {
            (false, _, _) => FaceRelation::Free,
            (true, true, _) => FaceRelation::Commute,
            _ => FaceRelation::Anticommute,
        })
    }

    /// Signs of the even theory: `(-1)` to the number of negative markers at
    /// crossings before the changing one.
    pub fn even_signs(&self) -> EdgeSigns {
        let n = self.crossing_count();
        let mut s = EdgeSigns::all_positive(n);
        for v in 0..self.vertex_count() as u32 {
            for k in (0..n).filter(|k| v >> k & 1 == 1) {
                let zeros_below = (!v & ((1u32 << k) - 1)).count_ones();
                s.set(v, k, zeros_below % 2 == 1);
            }
        }
        s
    }

    /// Finds signs making every square of the odd cube anticommute.
    ///
    /// Vertices are processed by increasing number of negative markers. The
    /// edges entering a vertex are constrained only by faces whose other two
    /// edges are already fixed, so each vertex is a small parity problem; the
    /// first edge in each of its classes is fixed to `+1`. Should that local
    /// problem ever be contradictory, the whole system is solved at once by
    /// elimination.
    pub fn solve_edge_assignment(&self) -> Result<EdgeSigns> {
        let n = self.crossing_count();
        let mut signs = EdgeSigns::all_positive(n);
        let mut by_height: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for v in 0..self.vertex_count() as u32 {
            by_height[n - v.count_ones() as usize].push(v);
        }
        for level in by_height.iter().skip(2) {
            let solved: Result<Vec<Option<Vec<(u32, usize, bool)>>>> = level
                .par_iter()
                .map(|&t| self.solve_at(t, &signs))
                .collect();
            for local in solved? {
                match local {
                    Some(vals) => {
                        for (v, k, neg) in vals {
                            signs.set(v, k, neg);
                        }
                    }
                    None => return self.solve_globally(),
                }
            }
        }
        Ok(signs)
    }

    /// Parity problem for the edges entering `t`. Returns `None` when the
    /// local constraints contradict each other.
    fn solve_at(&self, t: u32, signs: &EdgeSigns) -> Result<Option<Vec<(u32, usize, bool)>>> {
        let n = self.crossing_count();
        let zeros: Vec<usize> = (0..n).filter(|&k| t >> k & 1 == 0).collect();
        let mut puf = ParityUnionFind::new(zeros.len());
        for (x, &j) in zeros.iter().enumerate() {
            for (y, &k) in zeros.iter().enumerate().skip(x + 1) {
                let v = t | 1 << j | 1 << k;
                let rhs = match self.face_relation(Theory::Odd, v, j, k)? {
                    FaceRelation::Free => continue,
                    FaceRelation::Commute => true,
                    FaceRelation::Anticommute => false,
                };
                // e(v,j) e(v-j,k) and e(v,k) e(v-k,j) must multiply to -1 for
                // commuting faces and +1 for anticommuting ones.
                let known = (signs.sign(v, j) * signs.sign(v, k) < 0) ^ rhs;
                if !puf.relate(x as u32, y as u32, known) {
                    return Ok(None);
                }
            }
        }
        Ok(Some(
            zeros
                .iter()
                .enumerate()
                .map(|(x, &j)| (t | 1 << j, j, puf.find(x as u32).1))
                .collect(),
        ))
    }

    fn solve_globally(&self) -> Result<EdgeSigns> {
        let n = self.crossing_count();
        let mut system = Gf2System::default();
        for v in 0..self.vertex_count() as u32 {
            let ones: Vec<usize> = (0..n).filter(|&k| v >> k & 1 == 1).collect();
            for (x, &j) in ones.iter().enumerate() {
                for &k in &ones[x + 1..] {
                    let rhs = match self.face_relation(Theory::Odd, v, j, k)? {
                        FaceRelation::Free => continue,
                        FaceRelation::Commute => true,
                        FaceRelation::Anticommute => false,
                    };
                    let var = |w: u32, c: usize| w as usize * n + c;
                    let mut row = vec![
                        var(v, j),
                        var(v, k),
                        var(v & !(1 << j), k),
                        var(v & !(1 << k), j),
                    ];
                    row.sort_unstable();
                    if !system.add(row, rhs) {
                        return Err(Error::Inconsistent(
                            "odd sign system has no solution".into(),
                        ));
                    }
                }
            }
        }
        let mut signs = EdgeSigns::all_positive(n);
        for (var, value) in system.solve() {
            signs.negative[var] = value;
        }
        Ok(signs)
    }

    /// Structured dump of the cube: vertices with gradings and circle counts,
    /// edges with kinds and signs.
    pub fn to_json(&self, signs: &EdgeSigns) -> Result<serde_json::Value> {
        let n = self.crossing_count();
        let vertices: Vec<_> = (0..self.vertex_count() as u32)
            .map(|v| {
                let g = self.grading(v);
                serde_json::json!({
                    "state": format!("{:0width$b}", v, width = n.max(1)),
                    "i": g.i,
                    "j": g.j,
                    "circles": self.circle_count(v),
                })
            })
            .collect();
        let edges: Vec<_> = self
            .adjacent_pairs()?
            .into_iter()
            .map(|e| {
                serde_json::json!({
                    "from": e.source,
                    "to": e.target(),
                    "crossing": e.crossing,
                    "kind": e.kind,
                    "sign": signs.sign(e.source, e.crossing),
                })
            })
            .collect();
        Ok(serde_json::json!({
            "crossings": n,
            "writhe": self.diagram.writhe(),
            "vertices": vertices,
            "edges": edges,
        }))
    }
}

fn submasks(m: u32) -> Vec<u32> {
    let mut out = vec![0];
    let mut s = m;
    while s != 0 {
        out.push(s);
        s = (s - 1) & m;
    }
    out
}

/// Incremental row echelon form over the two-element field. Rows are sorted
/// variable lists; each stored row is keyed by its largest variable.
#[derive(Default)]
struct Gf2System {
    pivots: std::collections::BTreeMap<usize, (Vec<usize>, bool)>,
}

impl Gf2System {
    fn add(&mut self, mut row: Vec<usize>, mut rhs: bool) -> bool {
        while let Some(&lead) = row.last() {
            match self.pivots.get(&lead) {
                Some((p, r)) => {
                    row = symmetric_difference(&row, p);
                    rhs ^= r;
                }
                None => {
                    self.pivots.insert(lead, (row, rhs));
                    return true;
                }
            }
        }
        !rhs
    }

    /// Free variables are zero; pivots are fixed in increasing order.
    fn solve(&self) -> Vec<(usize, bool)> {
        let mut value = std::collections::HashMap::new();
        for (&lead, (row, rhs)) in &self.pivots {
            let mut x = *rhs;
            for v in &row[..row.len() - 1] {
                x ^= value.get(v).copied().unwrap_or(false);
            }
            value.insert(lead, x);
        }
        value.into_iter().collect()
    }
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
