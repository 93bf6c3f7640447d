//! Bigraded chain complexes built from the cube of resolutions.

pub mod maps;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{EdgeSigns, ResolutionCube, DEFAULT_MAX_CROSSINGS};
use crate::diagram::{ArrowChoice, CircleMap, PlanarDiagram};
use crate::error::{Error, Result};
use crate::matrix::{ColumnBuilder, SparseMatrix};
use crate::poly::LaurentPolynomial;
use maps::{apply, EdgeMap, Theory};

/// Which homology is computed. Reduced odd homology has no complex of its
/// own here; it is recovered from the unreduced odd groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Odd,
    Even,
    ReducedOdd,
    ReducedEven,
}

impl Flavor {
    pub fn theory(self) -> Theory {
        match self {
            Flavor::Odd | Flavor::ReducedOdd => Theory::Odd,
            Flavor::Even | Flavor::ReducedEven => Theory::Even,
        }
    }

    pub fn is_reduced(self) -> bool {
        matches!(self, Flavor::ReducedOdd | Flavor::ReducedEven)
    }

    pub fn new(theory: Theory, reduced: bool) -> Self {
        match (theory, reduced) {
            (Theory::Odd, false) => Flavor::Odd,
            (Theory::Odd, true) => Flavor::ReducedOdd,
            (Theory::Even, false) => Flavor::Even,
            (Theory::Even, true) => Flavor::ReducedEven,
        }
    }
}

/// Basis element: a state and a monomial over its circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub state: u32,
    pub monomial: u32,
}

/// Choices that do not change the homology but do change the complex.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub max_crossings: usize,
    /// Re-randomizes the crossing arrows and the odd edge signs.
    pub seed: Option<u64>,
    /// Edge label marking the component for reduced even homology; defaults
    /// to the smallest label.
    pub basepoint: Option<u32>,
    /// Flips the sign of one cube edge after solving, producing a broken
    /// differential. Used to check that the square test catches it.
    pub inject_fault: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_crossings: DEFAULT_MAX_CROSSINGS,
            seed: None,
            basepoint: None,
            inject_fault: false,
        }
    }
}

/// A bigraded complex of free abelian groups whose differential has degree
/// `(1, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    flavor: Flavor,
    writhe: i32,
    name: Option<String>,
    shift: (i32, i32),
    blocks: BTreeMap<(i32, i32), Vec<Generator>>,
    /// `differentials[(i, j)]` maps block `(i, j)` to block `(i + 1, j)`.
    differentials: BTreeMap<(i32, i32), SparseMatrix>,
}

/// Builds the complex of `flavor` with default choices.
///
/// ```
/// use oddkh::{build_complex, parse_pd, Flavor};
/// let hopf = parse_pd("PD[X[1,3,2,4],X[3,1,4,2]]").unwrap();
/// let c = build_complex(&hopf, Flavor::Odd, None).unwrap();
/// assert_eq!(c.rank(1, 2), 2);
/// assert!(c.check_d_squared().is_ok());
/// ```
pub fn build_complex(
    d: &PlanarDiagram,
    flavor: Flavor,
    basepoint: Option<u32>,
) -> Result<ChainComplex> {
    build_complex_with(
        d,
        flavor,
        &BuildOptions {
            basepoint,
            ..BuildOptions::default()
        },
    )
}

pub fn build_complex_with(
    d: &PlanarDiagram,
    flavor: Flavor,
    opts: &BuildOptions,
) -> Result<ChainComplex> {
    let (cube, signs) = prepare_cube(d, flavor, opts)?;
    build_from_cube(&cube, &signs, flavor, opts.basepoint)
}

/// The cube of `d` with edge signs for the theory of `flavor`.
pub fn prepare_cube(
    d: &PlanarDiagram,
    flavor: Flavor,
    opts: &BuildOptions,
) -> Result<(ResolutionCube, EdgeSigns)> {
    let n = d.crossing_count();
    let arrows = match opts.seed {
        Some(s) => ArrowChoice::seeded(n, s),
        None => ArrowChoice::standard(n),
    };
    let cube = ResolutionCube::build(d, arrows, opts.max_crossings)?;
    let mut signs = match flavor.theory() {
        Theory::Odd => {
            let s = cube.solve_edge_assignment()?;
            match opts.seed {
                Some(seed) => s.regauge(|v| gauge_bit(seed, v)),
                None => s,
            }
        }
        Theory::Even => cube.even_signs(),
    };
    if opts.inject_fault && n >= 2 {
        let top = (1u32 << n) - 1;
        let flipped = signs.sign(top, 0) > 0;
        signs.set(top, 0, flipped);
    }
    Ok((cube, signs))
}

fn gauge_bit(seed: u64, v: u32) -> bool {
    // splitmix64 finalizer over (seed, v)
    let mut z = seed ^ (v as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (z ^ (z >> 31)) & 1 == 1
}

/// Assembles the complex from a cube and edge signs.
pub fn build_from_cube(
    cube: &ResolutionCube,
    signs: &EdgeSigns,
    flavor: Flavor,
    basepoint: Option<u32>,
) -> Result<ChainComplex> {
    assemble(cube, signs, flavor, basepoint, None)
}

/// The quantum gradings carried by generators of the complex.
pub fn quantum_gradings(cube: &ResolutionCube, flavor: Flavor) -> Vec<i32> {
    let reduced = flavor.is_reduced() as i32;
    let mut js = std::collections::BTreeSet::new();
    for v in 0..cube.vertex_count() as u32 {
        let g = cube.grading(v);
        let m = cube.circle_count(v) as i32;
        // reduced flavors pin one circle to X
        for k in reduced..=m {
            js.insert(g.j + m - 2 * k + reduced);
        }
    }
    js.into_iter().collect()
}

/// Number of generators of the unreduced complex, counted without building it.
pub fn generator_count(d: &PlanarDiagram, limit: usize) -> Result<u64> {
    let n = d.crossing_count();
    if n > limit {
        return Err(Error::ResourceLimit(format!(
            "{n} crossings exceeds the limit of {limit}"
        )));
    }
    Ok((0..1u32 << n)
        .into_par_iter()
        .map(|v| 1u64 << CircleMap::compute(d, v).count())
        .sum())
}

/// The summand of the complex in quantum grading `j`.
///
/// The differential preserves `j`, so the complex is the direct sum of these
/// strands; building one at a time bounds memory by the largest strand.
pub fn build_strand(
    cube: &ResolutionCube,
    signs: &EdgeSigns,
    flavor: Flavor,
    basepoint: Option<u32>,
    j: i32,
) -> Result<ChainComplex> {
    assemble(cube, signs, flavor, basepoint, Some(j))
}

fn assemble(
    cube: &ResolutionCube,
    signs: &EdgeSigns,
    flavor: Flavor,
    basepoint: Option<u32>,
    only_j: Option<i32>,
) -> Result<ChainComplex> {
    let d = cube.diagram();
    let theory = flavor.theory();
    let reduced = match flavor {
        Flavor::ReducedOdd => {
            return Err(Error::InvalidArgument(
                "reduced odd homology is derived from the unreduced groups, not built".into(),
            ))
        }
        Flavor::ReducedEven => true,
        _ => false,
    };
    let base = if reduced {
        Some(basepoint_edge(d, basepoint)?)
    } else {
        None
    };
    let n = cube.crossing_count();

    // basepoint circle index in each state
    let base_circle = |v: u32| -> Option<u32> {
        base.map(|b| match b {
            Base::Edge(e) => cube.circles(v).circle_of(e) as u32,
            Base::FreeLoop => cube.circles(v).edge_circles() as u32,
        })
    };

    let per_state: Vec<Vec<((i32, i32), Generator)>> = (0..cube.vertex_count() as u32)
        .into_par_iter()
        .map(|v| {
            let g = cube.grading(v);
            let m = cube.circle_count(v) as i32;
            let bp = base_circle(v);
            let j_of = |mono: u32| g.j + m - 2 * mono.count_ones() as i32 + reduced as i32;
            (0..1u32 << m)
                .filter(|&mono| bp.is_none_or(|b| mono >> b & 1 == 1))
                .filter(|&mono| only_j.is_none_or(|j| j_of(mono) == j))
                .map(|mono| {
                    (
                        (g.i, j_of(mono)),
                        Generator {
                            state: v,
                            monomial: mono,
                        },
                    )
                })
                .collect()
        })
        .collect();
    let mut blocks: BTreeMap<(i32, i32), Vec<Generator>> = BTreeMap::new();
    for gens in per_state {
        for (key, g) in gens {
            blocks.entry(key).or_default().push(g);
        }
    }
    // states are visited in increasing order, monomials likewise
    debug_assert!(blocks.values().all(|b| b.windows(2).all(|w| w[0] < w[1])));

    let keys: Vec<(i32, i32)> = blocks.keys().copied().collect();
    let matrices: Vec<Result<Option<((i32, i32), SparseMatrix)>>> = keys
        .par_iter()
        .map(|&(i, j)| {
            let Some(target) = blocks.get(&(i + 1, j)) else {
                return Ok(None);
            };
            let source = &blocks[&(i, j)];
            let mut columns = ColumnBuilder::new(target.len());
            let mut maps: Vec<Option<EdgeMap>> = vec![None; n];
            let mut current = u32::MAX;
            for g in source {
                if g.state != current {
                    current = g.state;
                    for (k, slot) in maps.iter_mut().enumerate() {
                        *slot = if g.state >> k & 1 == 1 {
                            Some(cube.edge_map(g.state, k)?)
                        } else {
                            None
                        };
                    }
                }
                let mut col = Vec::new();
                for (k, em) in maps.iter().enumerate() {
                    let Some(em) = em else { continue };
                    let w = g.state & !(1 << k);
                    let s = signs.sign(g.state, k);
                    for &(mono, c) in apply(theory, em, g.monomial).as_slice() {
                        let key = Generator {
                            state: w,
                            monomial: mono,
                        };
                        let row = target.binary_search(&key).map_err(|_| {
                            Error::Inconsistent(format!(
                                "image {key:?} missing from block ({}, {j})",
                                i + 1
                            ))
                        })?;
                        col.push((row as u32, s * c));
                    }
                }
                columns.push_column(col);
            }
            Ok(Some(((i, j), columns.finish())))
        })
        .collect();
    let mut differentials = BTreeMap::new();
    for m in matrices {
        if let Some((k, mat)) = m? {
            differentials.insert(k, mat);
        }
    }
    Ok(ChainComplex {
        flavor,
        writhe: d.writhe(),
        name: d.name().map(str::to_string),
        shift: (0, 0),
        blocks,
        differentials,
    })
}

#[derive(Debug, Clone, Copy)]
enum Base {
    Edge(usize),
    FreeLoop,
}

fn basepoint_edge(d: &PlanarDiagram, basepoint: Option<u32>) -> Result<Base> {
    match basepoint {
        Some(label) => d.edge_index(label).map(Base::Edge).ok_or_else(|| {
            Error::InvalidArgument(format!("basepoint {label} is not an edge label"))
        }),
        None if d.edge_count() > 0 => Ok(Base::Edge(0)),
        None if d.free_loops() > 0 => Ok(Base::FreeLoop),
        None => Err(Error::InvalidDiagram(
            "diagram has nothing to place a basepoint on".into(),
        )),
    }
}

impl ChainComplex {
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn writhe(&self) -> i32 {
        self.writhe
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Total grading shift applied since construction.
    pub fn shift_applied(&self) -> (i32, i32) {
        self.shift
    }

    /// Bigradings with a nonempty basis, in increasing order.
    pub fn gradings(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.blocks.keys().copied()
    }

    pub fn basis(&self, i: i32, j: i32) -> &[Generator] {
        self.blocks.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, i: i32, j: i32) -> usize {
        self.basis(i, j).len()
    }

    pub fn total_rank(&self) -> usize {
        self.blocks.values().map(Vec::len).sum()
    }

    /// The differential out of `(i, j)`, or `None` if either end is zero.
    pub fn differential(&self, i: i32, j: i32) -> Option<&SparseMatrix> {
        self.differentials.get(&(i, j))
    }

    pub fn shift(&self, dh: i32, dq: i32) -> ChainComplex {
        ChainComplex {
            flavor: self.flavor,
            writhe: self.writhe,
            name: self.name.clone(),
            shift: (self.shift.0 + dh, self.shift.1 + dq),
            blocks: self
                .blocks
                .iter()
                .map(|(&(i, j), b)| ((i + dh, j + dq), b.clone()))
                .collect(),
            differentials: self
                .differentials
                .iter()
                .map(|(&(i, j), m)| ((i + dh, j + dq), m.clone()))
                .collect(),
        }
    }

    /// Graded Euler characteristic `sum (-1)^i q^j rank C^{i,j}`.
    pub fn euler_characteristic(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for (&(i, j), b) in &self.blocks {
            p.add_term(
                if i.rem_euclid(2) == 0 { 1 } else { -1 } * b.len() as i64,
                j,
            );
        }
        p
    }

    /// Checks that consecutive differentials compose to zero.
    pub fn check_d_squared(&self) -> Result<()> {
        self.differentials
            .par_iter()
            .try_for_each(
                |(&(i, j), first)| match self.differentials.get(&(i + 1, j)) {
                    Some(second) if !second.product_is_zero(first) => Err(Error::Inconsistent(
                        format!("d o d is nonzero starting at ({i}, {j})"),
                    )),
                    _ => Ok(()),
                },
            )
    }

    /// Entries reduced modulo two.
    pub fn mod2(&self) -> ChainComplex {
        let mut c = self.clone();
        for m in c.differentials.values_mut() {
            *m = m.mod2();
        }
        c
    }

    /// Block dimensions and differentials as sparse triplets.
    pub fn to_json(&self) -> serde_json::Value {
        let blocks: Vec<_> = self
            .blocks
            .iter()
            .map(|(&(i, j), b)| serde_json::json!({ "i": i, "j": j, "dim": b.len() }))
            .collect();
        let differentials: Vec<_> = self
            .differentials
            .iter()
            .map(|(&(i, j), m)| {
                let entries: Vec<[i64; 3]> = m
                    .triplets()
                    .map(|(r, c, v)| [r as i64, c as i64, v as i64])
                    .collect();
                serde_json::json!({
                    "from": [i, j],
                    "to": [i + 1, j],
                    "rows": m.rows(),
                    "cols": m.cols(),
                    "entries": entries,
                })
            })
            .collect();
        serde_json::json!({
            "schema": 1,
            "name": self.name,
            "flavor": self.flavor,
            "writhe": self.writhe,
            "shift": [self.shift.0, self.shift.1],
            "blocks": blocks,
            "differentials": differentials,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{bundled_corpus, parse_pd};

    fn hopf() -> PlanarDiagram {
        parse_pd("PD[X[1,3,2,4],X[3,1,4,2]]").unwrap()
    }

    fn dims(c: &ChainComplex) -> Vec<((i32, i32), usize)> {
        c.gradings().map(|(i, j)| ((i, j), c.rank(i, j))).collect()
    }

    #[test]
    fn generator_count_matches_built_complex() {
        let c = build_complex(&hopf(), Flavor::Even, None).unwrap();
        assert_eq!(generator_count(&hopf(), 20).unwrap(), c.total_rank() as u64);
        assert!(generator_count(&hopf(), 1).is_err());
    }

    #[test]
    fn hopf_odd_block_dimensions() {
        let c = build_complex(&hopf(), Flavor::Odd, None).unwrap();
        assert_eq!(
            dims(&c),
            [
                ((0, 0), 1),
                ((0, 2), 2),
                ((0, 4), 1),
                ((1, 2), 2),
                ((1, 4), 2),
                ((2, 2), 1),
                ((2, 4), 2),
                ((2, 6), 1)
            ]
        );
    }

    #[test]
    fn unknot_complex() {
        let c = build_complex(&PlanarDiagram::unknot(), Flavor::Odd, None).unwrap();
        assert_eq!(dims(&c), [((0, -1), 1), ((0, 1), 1)]);
        assert!(c.differential(0, 1).is_none());
        let r = build_complex(&PlanarDiagram::unknot(), Flavor::ReducedEven, None).unwrap();
        assert_eq!(dims(&r), [((0, 0), 1)]);
    }

    #[test]
    fn squares_vanish_on_corpus() {
        for e in bundled_corpus() {
            for flavor in [Flavor::Odd, Flavor::Even, Flavor::ReducedEven] {
                let c = build_complex(&e.diagram, flavor, None).unwrap();
                c.check_d_squared()
                    .unwrap_or_else(|err| panic!("{} {flavor:?}: {err}", e.name));
            }
        }
    }

    #[test]
    fn fault_injection_is_detected() {
        let d = bundled_corpus()
            .into_iter()
            .find(|e| e.name == "trefoil_right")
            .unwrap()
            .diagram;
        for flavor in [Flavor::Odd, Flavor::Even] {
            let opts = BuildOptions {
                inject_fault: true,
                ..Default::default()
            };
            let c = build_complex_with(&d, flavor, &opts).unwrap();
            assert!(matches!(c.check_d_squared(), Err(Error::Inconsistent(_))));
        }
    }

    #[test]
    fn odd_and_even_blocks_agree() {
        for e in bundled_corpus() {
            let o = build_complex(&e.diagram, Flavor::Odd, None).unwrap();
            let v = build_complex(&e.diagram, Flavor::Even, None).unwrap();
            assert_eq!(dims(&o), dims(&v), "{}", e.name);
        }
    }

    #[test]
    fn hopf_euler_characteristic() {
        let c = build_complex(&hopf(), Flavor::Even, None).unwrap();
        let expect = [0, 2, 4, 6]
            .iter()
            .fold(LaurentPolynomial::zero(), |p, &e| {
                p + LaurentPolynomial::monomial(1, e)
            });
        assert_eq!(c.euler_characteristic(), expect);
    }

    #[test]
    fn shifts_compose() {
        let c = build_complex(&hopf(), Flavor::Odd, None).unwrap();
        assert_eq!(c.shift(0, 0), c);
        let back = c.shift(1, 2).shift(-1, -2);
        assert_eq!(back.blocks, c.blocks);
        assert_eq!(
            c.shift(1, 2).euler_characteristic(),
            -c.euler_characteristic().shift(2)
        );
    }

    #[test]
    fn reduced_odd_is_not_built() {
        assert!(build_complex(&hopf(), Flavor::ReducedOdd, None).is_err());
    }

    #[test]
    fn json_dump_lists_blocks() {
        let c = build_complex(&hopf(), Flavor::Odd, None).unwrap();
        let j = c.to_json();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["blocks"].as_array().unwrap().len(), 8);
    }
}
