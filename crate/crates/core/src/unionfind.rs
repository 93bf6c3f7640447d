/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        true
    }
}

/// Union-find over boolean unknowns that also tracks the parity between each
/// node and its root, so that constraints of the form `x ^ y = r` can be
/// merged and checked incrementally.
#[derive(Debug, Clone)]
pub(crate) struct ParityUnionFind {
    parent: Vec<u32>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len as u32).collect(),
            parity: vec![false; len],
        }
    }

    /// Returns the root of `x` and the parity `value(x) ^ value(root)`.
    pub fn find(&mut self, x: u32) -> (u32, bool) {
        let p = self.parent[x as usize];
        if p == x {
            return (x, false);
        }
        let (root, par) = self.find(p);
        let total = par ^ self.parity[x as usize];
        self.parent[x as usize] = root;
        self.parity[x as usize] = total;
        (root, total)
    }

    /// Records `value(a) ^ value(b) = rel`; returns false on contradiction.
    pub fn relate(&mut self, a: u32, b: u32, rel: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        self.parent[ra as usize] = rb;
        self.parity[ra as usize] = pa ^ pb ^ rel;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_finds() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.find(0), uf.find(1));
        assert_ne!(uf.find(1), uf.find(3));
    }

    #[test]
    fn parity_contradiction_detected() {
        let mut uf = ParityUnionFind::new(3);
        assert!(uf.relate(0, 1, true));
        assert!(uf.relate(1, 2, true));
        assert!(uf.relate(0, 2, false));
        assert!(!uf.relate(0, 2, true));
    }
}
