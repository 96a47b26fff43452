//! Block systems and the primitivity test.

use serde::{Deserialize, Serialize};

use super::PermGroup;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A `G`-invariant partition of the points into equal-sized blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSystem {
    /// Block index of every point, numbered by first occurrence.
    pub block_map: Vec<usize>,
    pub block_count: usize,
}

impl BlockSystem {
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count];
        for (x, &b) in self.block_map.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn block_size(&self) -> usize {
        self.block_map.len() / self.block_count.max(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.block_count == 1 || self.block_count == self.block_map.len()
    }

    /// Checks equal block sizes and that every generator maps blocks to blocks.
    pub fn is_invariant_under(&self, gens: &[Permutation]) -> bool {
        let blocks = self.blocks();
        if blocks.iter().any(|b| b.len() != self.block_size()) {
            return false;
        }
        gens.iter().all(|g| {
            blocks.iter().all(|b| {
                let target = self.block_map[g.apply(b[0])];
                b.iter().all(|&x| self.block_map[g.apply(x)] == target)
            })
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Finest block system in which `a` and `b` share a block.
pub(crate) fn minimal_block_system(gens: &[Permutation], degree: usize, a: usize, b: usize) -> BlockSystem {
    let mut uf = UnionFind::new(degree);
    uf.union(a, b);
    let mut queue = vec![(a, b)];
    while let Some((x, y)) = queue.pop() {
        for g in gens {
            let (gx, gy) = (g.apply(x), g.apply(y));
            let (rx, ry) = (uf.find(gx), uf.find(gy));
            if rx != ry {
                uf.union(rx, ry);
                queue.push((rx, ry));
            }
        }
    }
    let mut index = vec![usize::MAX; degree];
    let mut block_map = Vec::with_capacity(degree);
    let mut count = 0;
    for x in 0..degree {
        let r = uf.find(x);
        if index[r] == usize::MAX {
            index[r] = count;
            count += 1;
        }
        block_map.push(index[r]);
    }
    BlockSystem {
        block_map,
        block_count: count,
    }
}

impl PermGroup {
    /// `None` when primitive; otherwise a nontrivial block system.
    pub fn primitivity_witness(&self) -> Result<Option<BlockSystem>> {
        if !self.is_transitive() {
            return Err(Error::NotTransitive);
        }
        if self.degree() <= 2 {
            return Ok(None);
        }
        // Seeds {0, x} with x running over representatives of the
        // suborbits of G_0 give every block containing 0.
        let stab = self.point_stabilizer(0)?;
        for orbit in stab.orbits() {
            let x = orbit[0];
            if x == 0 {
                continue;
            }
            let bs = minimal_block_system(self.generators(), self.degree(), 0, x);
            if bs.block_count > 1 {
                return Ok(Some(bs));
            }
        }
        Ok(None)
    }

    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.primitivity_witness()?.is_none())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitivity_examples() {
        assert!(PermGroup::symmetric(5).is_primitive().unwrap());
        let c4 = PermGroup::from_cycles(&["(1 2 3 4)"], 4).unwrap();
        let w = c4.primitivity_witness().unwrap().unwrap();
        assert_eq!(w.blocks(), vec![vec![0, 2], vec![1, 3]]);
        assert!(w.is_invariant_under(c4.generators()));
        let f21 = PermGroup::from_cycles(&["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 7).unwrap();
        assert!(f21.is_primitive().unwrap());
    }

    #[test]
    fn intransitive_input_is_rejected() {
        let g = PermGroup::from_cycles(&["(1 2)"], 3).unwrap();
        assert_eq!(g.is_primitive().unwrap_err(), Error::NotTransitive);
    }

    #[test]
    fn wreath_product_is_imprimitive() {
        // S3 wr S2 on 6 points preserves {1,2,3},{4,5,6}.
        let g = PermGroup::from_cycles(&["(1 2 3)", "(1 2)", "(1 4)(2 5)(3 6)"], 6).unwrap();
        let w = g.primitivity_witness().unwrap().unwrap();
        assert_eq!(w.block_count, 2);
        assert!(w.is_invariant_under(g.generators()));
        assert!(!w.is_trivial());
    }
}
