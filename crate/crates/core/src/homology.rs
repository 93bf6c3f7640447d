//! Bigraded homology groups over the integers, the rationals, and the field
//! with two elements.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, Flavor};
use crate::error::{Error, Result};
use crate::snf::{rank_gf2, smith_normal_form};

/// Coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Z,
    Q,
    Z2,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Z => "Z",
            Ring::Q => "Q",
            Ring::Z2 => "Z2",
        })
    }
}

impl std::str::FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Ring::Z),
            "Q" | "q" => Ok(Ring::Q),
            "Z2" | "z2" => Ok(Ring::Z2),
            _ => Err(Error::Parse(format!(
                "unknown ring `{s}` (expected Z, Q, or Z2)"
            ))),
        }
    }
}

/// A finitely generated abelian group `Z^rank + Z/t_1 + ... + Z/t_k` with
/// `t_1 | t_2 | ... | t_k`. Over a field the torsion list is empty and
/// `rank` is the dimension.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BigradedGroup {
    pub rank: u64,
    pub torsion: Vec<u64>,
}

impl BigradedGroup {
    pub fn free(rank: u64) -> Self {
        BigradedGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of torsion summands of even order.
    pub fn even_torsion(&self) -> usize {
        self.torsion.iter().filter(|t| *t % 2 == 0).count()
    }

    /// Prime power orders of the cyclic summands of the torsion part.
    pub fn primary_parts(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &t in &self.torsion {
            out.extend(prime_powers(t));
        }
        out.sort_unstable();
        out
    }

    /// Rebuilds the invariant factor form from prime power orders.
    pub fn from_primary(rank: u64, parts: &[u64]) -> Self {
        // group prime powers by prime, largest first
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &q in parts {
            by_prime
                .entry(smallest_prime_factor(q))
                .or_default()
                .push(q);
        }
        let mut len = 0;
        for v in by_prime.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
            len = len.max(v.len());
        }
        // the k-th largest invariant factor is the product of the k-th largest
        // power of every prime
        let mut torsion: Vec<u64> = (0..len)
            .map(|k| by_prime.values().filter_map(|v| v.get(k)).product())
            .collect();
        torsion.reverse();
        BigradedGroup { rank, torsion }
    }

    /// `self = other + result`, if `other` is a direct summand by counting.
    pub fn checked_sub(&self, other: &BigradedGroup) -> Option<BigradedGroup> {
        let rank = self.rank.checked_sub(other.rank)?;
        let mut mine = self.primary_parts();
        for q in other.primary_parts() {
            let pos = mine.iter().position(|&x| x == q)?;
            mine.remove(pos);
        }
        Some(BigradedGroup::from_primary(rank, &mine))
    }

    pub fn direct_sum(&self, other: &BigradedGroup) -> BigradedGroup {
        let mut parts = self.primary_parts();
        parts.extend(other.primary_parts());
        BigradedGroup::from_primary(self.rank + other.rank, &parts)
    }
}

/// Cell notation: `1`, `1_3`, `2, 1_3`; torsion summands of the same order
/// are collected as `count_order`.
impl fmt::Display for BigradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(self.rank.to_string());
        }
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for &t in &self.torsion {
            *counts.entry(t).or_default() += 1;
        }
        for (t, c) in counts {
            parts.push(format!("{c}_{t}"));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        f.write_str(&parts.join(", "))
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    n
}

fn prime_powers(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let p = smallest_prime_factor(n);
        let mut q = 1;
        while n.is_multiple_of(p) {
            n /= p;
            q *= p;
        }
        out.push(q);
    }
    out
}

/// Homology groups indexed by `(i, j)`; only nonzero groups are stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub flavor: Flavor,
    pub ring: Ring,
    pub name: Option<String>,
    entries: BTreeMap<(i32, i32), BigradedGroup>,
}

impl HomologyTable {
    pub fn new(flavor: Flavor, ring: Ring, name: Option<String>) -> Self {
        HomologyTable {
            flavor,
            ring,
            name,
            entries: BTreeMap::new(),
        }
    }

    /// Sets a group; zero groups are dropped.
    pub fn insert(&mut self, i: i32, j: i32, g: BigradedGroup) {
        if g.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), g);
        }
    }

    pub fn get(&self, i: i32, j: i32) -> BigradedGroup {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Nonzero groups in increasing `(i, j)`.
    pub fn entries(&self) -> impl Iterator<Item = ((i32, i32), &BigradedGroup)> {
        self.entries.iter().map(|(&k, g)| (k, g))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same groups in the same places, ignoring names and labels.
    pub fn same_groups(&self, other: &HomologyTable) -> bool {
        self.entries == other.entries
    }

    /// The parity shared by every `j` in the table.
    pub fn j_parity(&self) -> Option<i32> {
        self.entries.keys().next().map(|&(_, j)| j.rem_euclid(2))
    }

    pub fn i_range(&self) -> Option<(i32, i32)> {
        let is = self.entries.keys().map(|k| k.0);
        Some((is.clone().min()?, is.max()?))
    }

    pub fn j_range(&self) -> Option<(i32, i32)> {
        let js = self.entries.keys().map(|k| k.1);
        Some((js.clone().min()?, js.max()?))
    }

    /// Drops torsion, as a table over the rationals.
    pub fn free_part(&self) -> HomologyTable {
        let mut t = HomologyTable::new(self.flavor, Ring::Q, self.name.clone());
        for (&(i, j), g) in &self.entries {
            t.insert(i, j, BigradedGroup::free(g.rank));
        }
        t
    }
}

/// Homology of a complex.
///
/// ```
/// use oddkh::{build_complex, homology, parse_pd, Flavor, Ring};
/// let c = build_complex(&parse_pd("PD[]").unwrap(), Flavor::Odd, None).unwrap();
/// let h = homology(&c, Ring::Z);
/// assert_eq!(h.get(0, 1).rank, 1);
/// assert_eq!(h.get(0, -1).rank, 1);
/// ```
pub fn homology(c: &ChainComplex, ring: Ring) -> HomologyTable {
    struct Reduction {
        rank: usize,
        torsion: Vec<u64>,
    }
    let keys: Vec<(i32, i32)> = c.gradings().collect();
    let reductions: BTreeMap<(i32, i32), Reduction> = keys
        .par_iter()
        .filter_map(|&(i, j)| {
            let m = c.differential(i, j)?;
            let r = match ring {
                Ring::Z2 => Reduction {
                    rank: rank_gf2(m),
                    torsion: Vec::new(),
                },
                Ring::Q => Reduction {
                    rank: smith_normal_form(m).rank,
                    torsion: Vec::new(),
                },
                Ring::Z => {
                    let s = smith_normal_form(m);
                    let torsion = s
                        .torsion
                        .iter()
                        .map(|t| t.to_u64().expect("torsion order fits in 64 bits"))
                        .collect();
                    Reduction {
                        rank: s.rank,
                        torsion,
                    }
                }
            };
            Some(((i, j), r))
        })
        .collect();
    let mut t = HomologyTable::new(c.flavor(), ring, c.name().map(str::to_string));
    for (i, j) in keys {
        let dim = c.rank(i, j);
        let out = reductions.get(&(i, j)).map_or(0, |r| r.rank);
        let (inc, torsion) = reductions
            .get(&(i - 1, j))
            .map_or((0, Vec::new()), |r| (r.rank, r.torsion.clone()));
        let rank = (dim - out - inc) as u64;
        t.insert(i, j, BigradedGroup { rank, torsion });
    }
    t
}

/// Recovers reduced odd homology from unreduced odd homology, which is
/// two copies of the reduced groups shifted by `j +- 1`.
///
/// Works down each column from the top `j`: the top group of the unreduced
/// column is a reduced group one step lower, and each further reduced group
/// is what remains after removing the copy already accounted for.
pub fn reduce_by_splitting(t: &HomologyTable) -> Result<HomologyTable> {
    if t.flavor != Flavor::Odd {
        return Err(Error::InvalidArgument(format!(
            "splitting applies to unreduced odd tables, not {:?}",
            t.flavor
        )));
    }
    let mut out = HomologyTable::new(Flavor::ReducedOdd, t.ring, t.name.clone());
    let mut columns: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
    for ((i, j), _) in t.entries() {
        columns.entry(i).or_default().push(j);
    }
    for (i, js) in columns {
        let top = *js.iter().max().unwrap();
        let bottom = *js.iter().min().unwrap();
        // reduced[j] for j from top - 1 downwards
        let mut above = BigradedGroup::default();
        let mut j = top;
        while j >= bottom {
            let h = t.get(i, j);
            let r = h.checked_sub(&above).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "group at ({i}, {j}) does not contain the shifted copy {above}"
                ))
            })?;
            out.insert(i, j - 1, r.clone());
            above = r;
            j -= 2;
        }
        if !above.is_zero() {
            return Err(Error::Inconsistent(format!(
                "column {i} leaves {above} below the lowest group"
            )));
        }
    }
    Ok(out)
}

/// The inverse of [`reduce_by_splitting`]: `H^{i,j} = R^{i,j-1} + R^{i,j+1}`.
pub fn unreduce(reduced: &HomologyTable) -> HomologyTable {
    let flavor = match reduced.flavor {
        Flavor::ReducedEven => Flavor::Even,
        _ => Flavor::Odd,
    };
    let mut out = HomologyTable::new(flavor, reduced.ring, reduced.name.clone());
    for ((i, j), g) in reduced.entries() {
        for jj in [j + 1, j - 1] {
            let sum = out.get(i, jj).direct_sum(g);
            out.insert(i, jj, sum);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_complex;
    use crate::diagram::parse_pd;
    use proptest::prelude::*;

    #[test]
    fn group_display() {
        assert_eq!(BigradedGroup::free(1).to_string(), "1");
        assert_eq!(
            BigradedGroup {
                rank: 0,
                torsion: vec![2]
            }
            .to_string(),
            "1_2"
        );
        assert_eq!(
            BigradedGroup {
                rank: 2,
                torsion: vec![3, 3]
            }
            .to_string(),
            "2, 2_3"
        );
        assert_eq!(BigradedGroup::default().to_string(), "0");
    }

    #[test]
    fn primary_decomposition() {
        let g = BigradedGroup {
            rank: 1,
            torsion: vec![2, 12],
        };
        assert_eq!(g.primary_parts(), vec![2, 3, 4]);
        assert_eq!(BigradedGroup::from_primary(1, &[2, 3, 4]), g);
        let z6 = BigradedGroup {
            rank: 0,
            torsion: vec![6],
        };
        let z2 = BigradedGroup {
            rank: 0,
            torsion: vec![2],
        };
        assert_eq!(
            z6.checked_sub(&z2),
            Some(BigradedGroup {
                rank: 0,
                torsion: vec![3]
            })
        );
        assert_eq!(z2.checked_sub(&z6), None);
        assert_eq!(
            z2.direct_sum(&BigradedGroup {
                rank: 0,
                torsion: vec![3]
            }),
            z6
        );
    }

    #[test]
    fn hopf_odd_homology() {
        let hopf = parse_pd("PD[X[1,3,2,4],X[3,1,4,2]]").unwrap();
        let h = homology(&build_complex(&hopf, Flavor::Odd, None).unwrap(), Ring::Z);
        let support: Vec<_> = h.entries().map(|(k, g)| (k, g.clone())).collect();
        let one = BigradedGroup::free(1);
        assert_eq!(
            support,
            [
                ((0, 0), one.clone()),
                ((0, 2), one.clone()),
                ((2, 4), one.clone()),
                ((2, 6), one)
            ]
        );
    }

    #[test]
    fn unknot_splits() {
        let c = build_complex(&parse_pd("PD[]").unwrap(), Flavor::Odd, None).unwrap();
        let r = reduce_by_splitting(&homology(&c, Ring::Z)).unwrap();
        let support: Vec<_> = r.entries().map(|(k, g)| (k, g.rank)).collect();
        assert_eq!(support, [((0, 0), 1)]);
    }

    #[test]
    fn splitting_detects_underflow() {
        let mut t = HomologyTable::new(Flavor::Odd, Ring::Z, None);
        t.insert(0, 1, BigradedGroup::free(1));
        assert!(matches!(
            reduce_by_splitting(&t),
            Err(Error::Inconsistent(_))
        ));
    }

    fn arb_group() -> impl Strategy<Value = BigradedGroup> {
        (
            0u64..3,
            proptest::collection::vec(prop::sample::select(vec![2u64, 3, 4, 8, 9]), 0..3),
        )
            .prop_map(|(rank, parts)| BigradedGroup::from_primary(rank, &parts))
    }

    proptest! {
        #[test]
        fn splitting_inverts_doubling(
            cells in proptest::collection::btree_map((-3i32..3, -4i32..4), arb_group(), 0..8)
        ) {
            let mut reduced = HomologyTable::new(Flavor::ReducedOdd, Ring::Z, None);
            for ((i, j), g) in cells {
                reduced.insert(i, 2 * j, g);
            }
            let back = reduce_by_splitting(&unreduce(&reduced)).unwrap();
            prop_assert!(back.same_groups(&reduced));
        }

        #[test]
        fn invariant_factors_divide(g in arb_group()) {
            prop_assert!(g.torsion.windows(2).all(|w| w[1] % w[0] == 0));
            prop_assert_eq!(BigradedGroup::from_primary(g.rank, &g.primary_parts()), g);
        }
    }
}
