//! Edge maps of the odd and even theories on monomial bases.
//!
//! A generator of a resolution with `m` circles is a bitmask over circle
//! indices. In the odd theory the mask is the wedge `X_{c1} ^ ... ^ X_{ck}`
//! with factors in increasing circle order; in the even theory it is the
//! tensor word with `X` on the circles in the mask and `1` elsewhere.

use serde::{Deserialize, Serialize};

/// Which Khovanov theory a complex computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Merge,
    Split,
}

/// Circle correspondence across one cube edge.
///
/// `eta[c]` is the target circle of source circle `c`. For a merge, `a < b`
/// are the two source circles that merge. For a split, `a` and `b` are the
/// two offspring circles in the target, `a` at the arrow tail, and `joined`
/// is the source circle that splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeMap {
    pub kind: EdgeKind,
    pub eta: [u8; 32],
    pub source_circles: u8,
    pub a: u8,
    pub b: u8,
    pub joined: u8,
}

/// Up to two signed basis terms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Terms {
    len: u8,
    items: [(u32, i32); 2],
}

impl Terms {
    pub fn zero() -> Self {
        Terms::default()
    }

    pub fn one(mask: u32, coeff: i32) -> Self {
        let mut t = Terms::default();
        t.push(mask, coeff);
        t
    }

    fn push(&mut self, mask: u32, coeff: i32) {
        self.items[self.len as usize] = (mask, coeff);
        self.len += 1;
    }

    pub fn as_slice(&self) -> &[(u32, i32)] {
        &self.items[..self.len as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.len == 0
    }
}

#[inline]
fn below(c: u8) -> u32 {
    (1u32 << c) - 1
}

/// Relabels a wedge through `eta`, returning the target mask and whether the
/// reordering is odd. `None` if two factors land on the same circle.
pub fn relabel_wedge(em: &EdgeMap, mask: u32) -> Option<(u32, bool)> {
    let mut out = 0u32;
    let mut odd = false;
    let mut rest = mask;
    while rest != 0 {
        let c = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let t = em.eta[c];
        if out >> t & 1 == 1 {
            return None;
        }
        // factors already placed with a larger index must be jumped over
        odd ^= (out >> t).count_ones() & 1 == 1;
        out |= 1 << t;
    }
    Some((out, odd))
}

fn relabel_set(em: &EdgeMap, mask: u32) -> u32 {
    let mut out = 0u32;
    let mut rest = mask;
    while rest != 0 {
        let c = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1 << em.eta[c];
    }
    out
}

/// `X_c ^ y` put in canonical order.
fn wedge_left(c: u8, y: u32, negate: bool) -> Option<(u32, i32)> {
    if y >> c & 1 == 1 {
        return None;
    }
    let odd = negate ^ ((y & below(c)).count_ones() & 1 == 1);
    Some((y | 1 << c, if odd { -1 } else { 1 }))
}

/// Odd merge: identify the two merging circles; a wedge containing both dies.
pub fn m_odd(em: &EdgeMap, mask: u32) -> Terms {
    debug_assert_eq!(em.kind, EdgeKind::Merge);
    match relabel_wedge(em, mask) {
        Some((m, odd)) => Terms::one(m, if odd { -1 } else { 1 }),
        None => Terms::zero(),
    }
}

/// Odd split: `(X_a - X_b) ^ eta(x)`.
pub fn delta_odd(em: &EdgeMap, mask: u32) -> Terms {
    debug_assert_eq!(em.kind, EdgeKind::Split);
    let (y, odd) = relabel_wedge(em, mask).expect("split relabeling is injective");
    let mut t = Terms::zero();
    if let Some((m, s)) = wedge_left(em.a, y, odd) {
        t.push(m, s);
    }
    if let Some((m, s)) = wedge_left(em.b, y, !odd) {
        t.push(m, s);
    }
    t
}

/// Even merge: `m(X (x) X) = 0`, otherwise labels combine.
pub fn even_merge(em: &EdgeMap, mask: u32) -> Terms {
    debug_assert_eq!(em.kind, EdgeKind::Merge);
    if mask >> em.a & 1 == 1 && mask >> em.b & 1 == 1 {
        return Terms::zero();
    }
    Terms::one(relabel_set(em, mask), 1)
}

/// Even split: `D(1) = 1 (x) X + X (x) 1`, `D(X) = X (x) X`.
pub fn even_split(em: &EdgeMap, mask: u32) -> Terms {
    debug_assert_eq!(em.kind, EdgeKind::Split);
    let y = relabel_set(em, mask & !(1 << em.joined));
    if mask >> em.joined & 1 == 1 {
        Terms::one(y | 1 << em.a | 1 << em.b, 1)
    } else {
        let mut t = Terms::one(y | 1 << em.b, 1);
        t.push(y | 1 << em.a, 1);
        t
    }
}

/// The unsigned edge map of `theory`.
pub fn apply(theory: Theory, em: &EdgeMap, mask: u32) -> Terms {
    match (theory, em.kind) {
        (Theory::Odd, EdgeKind::Merge) => m_odd(em, mask),
        (Theory::Odd, EdgeKind::Split) => delta_odd(em, mask),
        (Theory::Even, EdgeKind::Merge) => even_merge(em, mask),
        (Theory::Even, EdgeKind::Split) => even_split(em, mask),
    }
}

/// Applies two edge maps in sequence and returns the combined, sorted terms.
pub(crate) fn compose(
    theory: Theory,
    first: &EdgeMap,
    second: &EdgeMap,
    mask: u32,
) -> Vec<(u32, i32)> {
    let mut out: Vec<(u32, i32)> = Vec::with_capacity(4);
    for &(m1, c1) in apply(theory, first, mask).as_slice() {
        for &(m2, c2) in apply(theory, second, m1).as_slice() {
            match out.iter_mut().find(|(m, _)| *m == m2) {
                Some(e) => e.1 += c1 * c2,
                None => out.push((m2, c1 * c2)),
            }
        }
    }
    out.retain(|&(_, c)| c != 0);
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_eta() -> [u8; 32] {
        std::array::from_fn(|i| i as u8)
    }

    /// Two circles 0,1 merging into circle 0; a bystander circle 2 becomes 1.
    fn merge_map() -> EdgeMap {
        let mut eta = identity_eta();
        eta[1] = 0;
        eta[2] = 1;
        EdgeMap {
            kind: EdgeKind::Merge,
            eta,
            source_circles: 3,
            a: 0,
            b: 1,
            joined: 0,
        }
    }

    /// Circle 0 splits into 0 (tail) and 2; bystander 1 stays 1.
    fn split_map() -> EdgeMap {
        EdgeMap {
            kind: EdgeKind::Split,
            eta: identity_eta(),
            source_circles: 2,
            a: 0,
            b: 2,
            joined: 0,
        }
    }

    #[test]
    fn merge_values() {
        let em = merge_map();
        assert_eq!(m_odd(&em, 0).as_slice(), &[(0, 1)]);
        assert_eq!(m_odd(&em, 0b001).as_slice(), &[(0b01, 1)]);
        assert_eq!(m_odd(&em, 0b010).as_slice(), &[(0b01, 1)]);
        assert!(m_odd(&em, 0b011).is_zero());
        // X_1 ^ X_2 -> X_0 ^ X_1
        assert_eq!(m_odd(&em, 0b110).as_slice(), &[(0b11, 1)]);
    }

    #[test]
    fn merge_reorder_sign() {
        // circles 0,2 merge into target 1; circle 1 becomes 0
        let mut eta = identity_eta();
        eta[0] = 1;
        eta[1] = 0;
        eta[2] = 1;
        let em = EdgeMap {
            kind: EdgeKind::Merge,
            eta,
            source_circles: 3,
            a: 0,
            b: 2,
            joined: 0,
        };
        // X_0 ^ X_1 -> X_1 ^ X_0 = -X_0 ^ X_1
        assert_eq!(m_odd(&em, 0b011).as_slice(), &[(0b11, -1)]);
        // X_1 ^ X_2 -> X_0 ^ X_1
        assert_eq!(m_odd(&em, 0b110).as_slice(), &[(0b11, 1)]);
    }

    #[test]
    fn split_values() {
        let em = split_map();
        // 1 -> X_0 - X_2
        assert_eq!(delta_odd(&em, 0).as_slice(), &[(0b001, 1), (0b100, -1)]);
        // X (the split circle) -> X_0 ^ X_2; the X_0 ^ X_0 term vanishes
        assert_eq!(delta_odd(&em, 0b01).as_slice(), &[(0b101, 1)]);
        // X_1 -> X_0 ^ X_1 - X_2 ^ X_1 = X_0^X_1 + X_1^X_2
        assert_eq!(delta_odd(&em, 0b10).as_slice(), &[(0b011, 1), (0b110, 1)]);
    }

    #[test]
    fn split_of_x_independent_of_eta_choice() {
        let mut em = split_map();
        em.eta[0] = 2;
        assert_eq!(delta_odd(&em, 0b01).as_slice(), &[(0b101, 1)]);
    }

    #[test]
    fn even_values() {
        let em = merge_map();
        assert!(even_merge(&em, 0b011).is_zero());
        assert_eq!(even_merge(&em, 0b010).as_slice(), &[(0b01, 1)]);
        let sp = split_map();
        assert_eq!(even_split(&sp, 0).as_slice(), &[(0b100, 1), (0b001, 1)]);
        assert_eq!(even_split(&sp, 0b01).as_slice(), &[(0b101, 1)]);
        assert_eq!(even_split(&sp, 0b10).as_slice(), &[(0b110, 1), (0b011, 1)]);
    }
}
