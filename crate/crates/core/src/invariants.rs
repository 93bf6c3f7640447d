//! Invariants read off homology tables: the Jones polynomial, homological
//! width, quasi-alternating obstructions, Thurston-Bennequin bounds, zero
//! omission, and the placement of torsion.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::{BuildOptions, Flavor};
use crate::compute_homology;
use crate::diagram::PlanarDiagram;
use crate::error::{Error, Result};
use crate::homology::{HomologyTable, Ring};
use crate::poly::LaurentPolynomial;

/// `sum (-1)^i q^j rank H^{i,j}`.
pub fn jones_from_table(t: &HomologyTable) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero();
    for ((i, j), g) in t.entries() {
        let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        p.add_term(sign * g.rank as i64, j);
    }
    p
}

/// Jones polynomial by a state sum, normalized so the unknot is `q + q^-1`.
///
/// Crossings are smoothed one at a time while tracking how the open strand
/// ends are paired up; states with the same pairing are merged, so the cost
/// is governed by the number of pairings rather than by `2^n`.
///
/// ```
/// use oddkh::{jones_skein_oracle, parse_pd};
/// let right = parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]").unwrap();
/// assert_eq!(jones_skein_oracle(&right).unwrap().to_string(), "-q^9 + q^5 + q^3 + q");
/// ```
pub fn jones_skein_oracle(d: &PlanarDiagram) -> Result<LaurentPolynomial> {
    if d.crossing_count() > 40 {
        return Err(Error::ResourceLimit(
            "state sum limited to 40 crossings".into(),
        ));
    }
    // pairing of dangling labels -> accumulated weight
    let mut layer: BTreeMap<Vec<(u32, u32)>, LaurentPolynomial> = BTreeMap::new();
    layer.insert(Vec::new(), LaurentPolynomial::one());
    let minus_q = LaurentPolynomial::monomial(-1, 1);
    for &[a, b, c, e] in d.crossings() {
        let mut next: BTreeMap<Vec<(u32, u32)>, LaurentPolynomial> = BTreeMap::new();
        for (pairing, w) in &layer {
            for (arcs, weight) in [
                ([(a, b), (c, e)], LaurentPolynomial::one()),
                ([(a, e), (b, c)], minus_q.clone()),
            ] {
                let mut partner: BTreeMap<u32, u32> = BTreeMap::new();
                for &(x, y) in pairing {
                    partner.insert(x, y);
                    partner.insert(y, x);
                }
                let mut loops = 0;
                for (p1, p2) in arcs {
                    loops += join(&mut partner, p1, p2);
                }
                let mut key: Vec<(u32, u32)> = partner
                    .iter()
                    .filter(|(x, y)| x < y)
                    .map(|(&x, &y)| (x, y))
                    .collect();
                key.sort_unstable();
                let term = w.clone() * weight.clone() * LaurentPolynomial::loop_value().pow(loops);
                let slot = next.entry(key).or_default();
                *slot = slot.clone() + term;
            }
        }
        layer = next;
    }
    let bracket = layer.remove(&Vec::new()).unwrap_or_default();
    debug_assert!(layer.is_empty(), "every strand end is eventually paired");
    let bracket = bracket * LaurentPolynomial::loop_value().pow(d.free_loops() as u32);
    let (np, nm) = d.signed_counts();
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    Ok(bracket * LaurentPolynomial::monomial(sign, np as i32 - 2 * nm as i32))
}

/// Adds an arc joining the ends labelled `p1` and `p2`. A label is dangling
/// when one of its two ends has been used; `partner` pairs the two dangling
/// ends of each open path. Returns 1 if the arc closes a loop.
fn join(partner: &mut BTreeMap<u32, u32>, p1: u32, p2: u32) -> u32 {
    if p1 == p2 {
        // both ends of one edge at this crossing, joined directly
        return 1;
    }
    if partner.get(&p1) == Some(&p2) {
        partner.remove(&p1);
        partner.remove(&p2);
        return 1;
    }
    let far = |partner: &mut BTreeMap<u32, u32>, p: u32| match partner.remove(&p) {
        Some(f) => {
            partner.remove(&f);
            f
        }
        None => p,
    };
    let f1 = far(partner, p1);
    let f2 = far(partner, p2);
    partner.insert(f1, f2);
    partner.insert(f2, f1);
    0
}

/// Diagonals `j - 2i` carrying nonzero groups, and the resulting width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    pub flavor: Flavor,
    pub ring: Ring,
    pub width: usize,
    pub diagonals: Vec<i32>,
    pub torsion_included: bool,
    /// Width 2 for unreduced tables, 1 for reduced ones.
    pub thin: bool,
}

/// Width of a table, counting groups that are pure torsion.
pub fn homological_width(t: &HomologyTable) -> Result<WidthReport> {
    let mut diagonals: Vec<i32> = t.entries().map(|((i, j), _)| j - 2 * i).collect();
    diagonals.sort_unstable();
    diagonals.dedup();
    let (lo, hi) = match (diagonals.first(), diagonals.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(Error::InvalidArgument("width of an empty table".into())),
    };
    let width = ((hi - lo) / 2 + 1) as usize;
    let thin = width <= if t.flavor.is_reduced() { 1 } else { 2 };
    Ok(WidthReport {
        flavor: t.flavor,
        ring: t.ring,
        width,
        diagonals,
        torsion_included: true,
        thin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QaVerdict {
    NotQuasiAlternating,
    NoObstruction,
}

/// Integral widths in both theories and the conclusion drawn from them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaReport {
    pub even: WidthReport,
    pub odd: WidthReport,
    pub reduced_even: WidthReport,
    pub reduced_odd: WidthReport,
    pub verdict: QaVerdict,
}

impl fmt::Display for QaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut thick = Vec::new();
        if !self.even.thin {
            thick.push("even-thick");
        }
        if !self.odd.thin {
            thick.push("odd-thick");
        }
        match self.verdict {
            QaVerdict::NotQuasiAlternating => {
                write!(f, "not quasi-alternating ({})", thick.join(", "))
            }
            QaVerdict::NoObstruction => write!(f, "no obstruction (even-thin, odd-thin)"),
        }
    }
}

/// Thickness of integral even or odd homology rules out quasi-alternating
/// links. Thinness proves nothing, so the other verdict is only "no
/// obstruction".
pub fn qa_obstruction(d: &PlanarDiagram, opts: &BuildOptions) -> Result<QaReport> {
    let even = compute_homology(d, Flavor::Even, Ring::Z, opts)?;
    let odd = compute_homology(d, Flavor::Odd, Ring::Z, opts)?;
    let reduced_even = compute_homology(d, Flavor::ReducedEven, Ring::Z, opts)?;
    let reduced_odd = crate::homology::reduce_by_splitting(&odd)?;
    let report = |t: &HomologyTable| homological_width(t);
    let (even, odd) = (report(&even)?, report(&odd)?);
    let verdict = if even.thin && odd.thin {
        QaVerdict::NoObstruction
    } else {
        QaVerdict::NotQuasiAlternating
    };
    Ok(QaReport {
        even,
        odd,
        reduced_even: report(&reduced_even)?,
        reduced_odd: report(&reduced_odd)?,
        verdict,
    })
}

/// Upper bounds on the maximal Thurston-Bennequin number.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TbReport {
    pub even_z: Option<i32>,
    pub even_q: Option<i32>,
    pub reduced_even: Option<i32>,
    pub reduced_odd: Option<i32>,
}

impl fmt::Display for TbReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<i32>| v.map_or("-".to_string(), |x| x.to_string());
        writeln!(f, "even Z: {}", show(self.even_z))?;
        writeln!(f, "even Q: {}", show(self.even_q))?;
        writeln!(f, "reduced even Z: {}", show(self.reduced_even))?;
        write!(f, "reduced odd Z: {}", show(self.reduced_odd))
    }
}

/// `min (j - i)` over nonzero groups, minus one for reduced tables.
pub fn tb_of_table(t: &HomologyTable) -> Option<i32> {
    let m = t.entries().map(|((i, j), _)| j - i).min()?;
    Some(if t.flavor.is_reduced() { m - 1 } else { m })
}

/// Collects the bound of each table into the slot for its flavor and ring.
pub fn tb_bound(tables: &[&HomologyTable]) -> TbReport {
    let mut r = TbReport::default();
    for t in tables {
        let slot = match (t.flavor, t.ring) {
            (Flavor::Even, Ring::Z) => &mut r.even_z,
            (Flavor::Even, Ring::Q) => &mut r.even_q,
            (Flavor::ReducedEven, Ring::Z) => &mut r.reduced_even,
            (Flavor::ReducedOdd, Ring::Z) => &mut r.reduced_odd,
            _ => continue,
        };
        *slot = tb_of_table(t);
    }
    r
}

/// All four bounds of a diagram.
pub fn tb_report(d: &PlanarDiagram, opts: &BuildOptions) -> Result<TbReport> {
    let even_z = compute_homology(d, Flavor::Even, Ring::Z, opts)?;
    let even_q = even_z.free_part();
    let reduced_even = compute_homology(d, Flavor::ReducedEven, Ring::Z, opts)?;
    let reduced_odd = compute_homology(d, Flavor::ReducedOdd, Ring::Z, opts)?;
    let mut even_q = even_q;
    even_q.flavor = Flavor::Even;
    Ok(tb_bound(&[&even_z, &even_q, &reduced_even, &reduced_odd]))
}

/// True if no group in homological degree 0 has a free part.
pub fn is_zero_omitting(t: &HomologyTable) -> bool {
    t.entries()
        .filter(|((i, _), _)| *i == 0)
        .all(|(_, g)| g.rank == 0)
}

/// Torsion orders grouped by diagonal `j - 2i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionProfile {
    pub by_diagonal: BTreeMap<i32, Vec<u64>>,
    /// Diagonals carrying free summands.
    pub free_diagonals: Vec<i32>,
}

impl TorsionProfile {
    /// Torsion on diagonals without free summands.
    pub fn off_diagonal(&self) -> BTreeMap<i32, Vec<u64>> {
        self.by_diagonal
            .iter()
            .filter(|(d, _)| !self.free_diagonals.contains(d))
            .map(|(&d, v)| (d, v.clone()))
            .collect()
    }

    /// Whether some off-diagonal torsion summand has an element of order `n`.
    pub fn has_off_diagonal_order(&self, n: u64) -> bool {
        self.off_diagonal().values().flatten().any(|t| t % n == 0)
    }
}

pub fn torsion_profile(t: &HomologyTable) -> TorsionProfile {
    let mut p = TorsionProfile::default();
    for ((i, j), g) in t.entries() {
        let d = j - 2 * i;
        if !g.torsion.is_empty() {
            p.by_diagonal.entry(d).or_default().extend(&g.torsion);
        }
        if g.rank > 0 && !p.free_diagonals.contains(&d) {
            p.free_diagonals.push(d);
        }
    }
    p.free_diagonals.sort_unstable();
    for v in p.by_diagonal.values_mut() {
        v.sort_unstable();
    }
    p
}
