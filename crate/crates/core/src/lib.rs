//! Odd and even Khovanov homology of links from planar diagrams.
//!
//! ```
//! use oddkh::{compute_homology, gen_pretzel, Flavor, Ring};
//! let k = gen_pretzel(&[3, 3, -3]).unwrap();
//! let h = compute_homology(&k, Flavor::ReducedOdd, Ring::Z, &Default::default()).unwrap();
//! assert_eq!(h.get(0, 0).rank, 2);
//! assert_eq!(h.get(0, -2).torsion, vec![3]);
//! ```

pub mod chain;
pub mod checks;
pub mod cube;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod invariants;
pub mod matrix;
pub mod poly;
pub mod render;
pub mod snf;
mod unionfind;

pub use chain::maps::{delta_odd, even_merge, even_split, m_odd, EdgeKind, EdgeMap, Terms, Theory};
pub use chain::{
    build_complex, build_complex_with, build_from_cube, build_strand, generator_count,
    prepare_cube, quantum_gradings, BuildOptions, ChainComplex, Flavor, Generator,
};
pub use cube::{
    enumerate_states, gradings, CubeEdge, EdgeSigns, FaceRelation, Grading, ResolutionCube, State,
};
pub use diagram::{
    bundled_corpus, gen_braid_closure, gen_pretzel, gen_torus, parse_corpus, parse_generator,
    parse_pd, ArrowChoice, CorpusEntry, CrossingSign, PlanarDiagram, Resolution,
};
pub use error::{Error, ErrorKind, Result};
pub use homology::{homology, reduce_by_splitting, unreduce, BigradedGroup, HomologyTable, Ring};
pub use invariants::{
    homological_width, is_zero_omitting, jones_from_table, jones_skein_oracle, qa_obstruction,
    tb_bound, tb_of_table, tb_report, torsion_profile, QaReport, QaVerdict, TbReport,
    TorsionProfile, WidthReport,
};
pub use matrix::SparseMatrix;
pub use poly::LaurentPolynomial;
pub use snf::{rank_gf2, smith_normal_form, SmithForm};

/// Homology of a diagram in one flavor and ring.
///
/// The complex is processed one quantum grading at a time. Reduced odd
/// homology is obtained by splitting the unreduced odd groups.
pub fn compute_homology(
    d: &PlanarDiagram,
    flavor: Flavor,
    ring: Ring,
    opts: &BuildOptions,
) -> Result<HomologyTable> {
    let build = if flavor == Flavor::ReducedOdd {
        Flavor::Odd
    } else {
        flavor
    };
    let (cube, signs) = chain::prepare_cube(d, build, opts)?;
    let mut h = HomologyTable::new(build, ring, d.name().map(str::to_string));
    for j in chain::quantum_gradings(&cube, build) {
        let c = chain::build_strand(&cube, &signs, build, opts.basepoint, j)?;
        if cfg!(debug_assertions) || opts.inject_fault {
            c.check_d_squared()?;
        }
        for ((i, j), g) in homology(&c, ring).entries() {
            h.insert(i, j, g.clone());
        }
    }
    if flavor == Flavor::ReducedOdd {
        reduce_by_splitting(&h)
    } else {
        Ok(h)
    }
}
