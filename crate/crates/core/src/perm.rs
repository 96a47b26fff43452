//! Permutations of `{0, .., n-1}` stored as image tables.
//!
//! Points are 0-based internally and 1-based in cycle notation. Composition is
//! a right action: `p.compose(&q)` maps `x` to `q(p(x))`, matching the
//! exponent notation `x^{pq}`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::OutOfRange {
                    point: x,
                    degree: n,
                });
            }
            if seen[x] {
                return Err(Error::NotBijection(format!("{x} appears twice")));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Parses a product of disjoint cycles such as `"(1 2 3)(4 5)"`.
    ///
    /// `"()"` (or the empty string) is the identity. Points are 1-based.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        let mut rest = text.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::MalformedCycle(format!("expected '(' in {text:?}")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::MalformedCycle(format!("unclosed cycle in {text:?}")))?;
            let body = &rest[1..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let p: usize = tok
                    .parse()
                    .map_err(|_| Error::MalformedCycle(format!("bad point {tok:?}")))?;
                if p == 0 || p > degree {
                    return Err(Error::OutOfRange { point: p, degree });
                }
                if used[p - 1] {
                    return Err(Error::MalformedCycle(format!("point {p} repeated")));
                }
                used[p - 1] = true;
                cycle.push(p - 1);
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()] as u32;
            }
            rest = rest[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `x -> q(p(x))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        check_degrees(self, q)?;
        Ok(self.then(q))
    }

    /// Unchecked composition, first `self` then `q`.
    #[inline]
    pub(crate) fn then(&self, q: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), q.degree());
        Permutation {
            images: self.images.iter().map(|&x| q.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `g^-1 p g`: relabels every point `x` of `self` as `x^g`.
    pub fn conjugate(&self, g: &Permutation) -> Result<Permutation> {
        check_degrees(self, g)?;
        Ok(g.inverse().then(self).then(g))
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// Element order, the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    /// Restriction to a block of points that the permutation maps onto
    /// itself, relabelled `block[i] -> i`.
    pub fn restrict(&self, block: &[usize]) -> Option<Permutation> {
        let mut pos = vec![usize::MAX; self.degree()];
        for (i, &x) in block.iter().enumerate() {
            pos[x] = i;
        }
        let mut images = Vec::with_capacity(block.len());
        for &x in block {
            let y = pos[self.apply(x)];
            if y == usize::MAX {
                return None;
            }
            images.push(y as u32);
        }
        Some(Permutation { images })
    }
}

fn check_degrees(p: &Permutation, q: &Permutation) -> Result<()> {
    if p.degree() != q.degree() {
        return Err(Error::IncompatibleDegree {
            left: p.degree(),
            right: q.degree(),
        });
    }
    Ok(())
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}
