//! Deterministic Schreier-Sims with explicit transversals.

use num_bigint::BigUint;
use num_traits::One;

use crate::perm::Permutation;

/// One level of a stabilizer chain: the group `G^(i)` fixing the earlier base
/// points, given by strong generators, with the orbit of its base point.
#[derive(Clone, Debug)]
pub struct Level {
    pub(crate) base_point: usize,
    pub(crate) gens: Vec<Permutation>,
    pub(crate) orbit: Vec<usize>,
    /// `transversal[x]` maps the base point to `x`.
    pub(crate) transversal: Vec<Option<Permutation>>,
    pub(crate) inverse: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, base_point: usize, gens: Vec<Permutation>) -> Self {
        let mut level = Level {
            base_point,
            gens,
            orbit: Vec::new(),
            transversal: vec![None; degree],
            inverse: vec![None; degree],
        };
        level.recompute_orbit(degree);
        level
    }

    fn recompute_orbit(&mut self, degree: usize) {
        let b = self.base_point;
        if self.orbit.is_empty() {
            self.transversal[b] = Some(Permutation::identity(degree));
            self.inverse[b] = Some(Permutation::identity(degree));
            self.orbit.push(b);
        }
        // Existing transversal entries stay valid; rescan every orbit point so
        // that newly added generators are applied everywhere.
        let mut j = 0;
        while j < self.orbit.len() {
            let x = self.orbit[j];
            for s in &self.gens {
                let y = s.apply(x);
                if self.transversal[y].is_none() {
                    let t = self.transversal[x].as_ref().unwrap().then(s);
                    self.inverse[y] = Some(t.inverse());
                    self.transversal[y] = Some(t);
                    self.orbit.push(y);
                }
            }
            j += 1;
        }
    }

    pub fn base_point(&self) -> usize {
        self.base_point
    }

    pub fn orbit(&self) -> &[usize] {
        &self.orbit
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn transversal(&self, x: usize) -> Option<&Permutation> {
        self.transversal[x].as_ref()
    }
}

/// Base and strong generating set with one [`Level`] per base point.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    pub(crate) degree: usize,
    pub(crate) levels: Vec<Level>,
}

impl StabilizerChain {
    /// Builds a chain whose base starts with `base_prefix` (points are kept
    /// even when redundant). When `known_order` is given, construction stops
    /// as soon as the partial chain reaches it: the product of the partial
    /// orbit lengths never exceeds the group order, so equality certifies
    /// completeness.
    pub(crate) fn build(
        degree: usize,
        generators: &[Permutation],
        base_prefix: &[usize],
        known_order: Option<&BigUint>,
    ) -> Self {
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        let mut base: Vec<usize> = base_prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                let moved = (0..degree).find(|&x| g.apply(x) != x).unwrap();
                base.push(moved);
            }
        }
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::with_capacity(base.len()),
        };
        for (i, &b) in base.iter().enumerate() {
            let level_gens = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&p| g.apply(p) == p))
                .cloned()
                .collect();
            chain.levels.push(Level::new(degree, b, level_gens));
        }
        if chain.is_done(known_order) {
            return chain;
        }

        let mut i = chain.levels.len();
        while i > 0 {
            let level = i - 1;
            match chain.first_failing_schreier_generator(level) {
                Some((h, j)) => {
                    if j == chain.levels.len() {
                        let moved = (0..degree).find(|&x| h.apply(x) != x).unwrap();
                        chain
                            .levels
                            .push(Level::new(degree, moved, Vec::new()));
                    }
                    for l in level + 1..=j {
                        chain.levels[l].gens.push(h.clone());
                        chain.levels[l].recompute_orbit(degree);
                    }
                    if chain.is_done(known_order) {
                        return chain;
                    }
                    i = j + 1;
                }
                None => i -= 1,
            }
        }
        chain
    }

    fn is_done(&self, known_order: Option<&BigUint>) -> bool {
        matches!(known_order, Some(o) if &self.order() == o)
    }

    fn first_failing_schreier_generator(&self, level: usize) -> Option<(Permutation, usize)> {
        let lv = &self.levels[level];
        for &beta in &lv.orbit {
            let t = lv.transversal[beta].as_ref().unwrap();
            for s in &lv.gens {
                let image = s.apply(beta);
                let y = t.then(s).then(lv.inverse[image].as_ref().unwrap());
                if y.is_identity() {
                    continue;
                }
                let (h, j) = self.sift_from(y, level + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Sifts `g` through levels `start..`; returns the residue and the index
    /// of the level where sifting stopped (`levels.len()` if it got through).
    pub(crate) fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (l, lv) in self.levels.iter().enumerate().skip(start) {
            let beta = g.apply(lv.base_point);
            match &lv.inverse[beta] {
                Some(inv) => g = g.then(inv),
                None => return (g, l),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    pub fn order(&self) -> BigUint {
        self.order_from(0)
    }

    /// Order of the stabilizer of the first `level` base points.
    pub fn order_from(&self, level: usize) -> BigUint {
        self.levels[level.min(self.levels.len())..]
            .iter()
            .fold(BigUint::one(), |acc, lv| acc * BigUint::from(lv.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Strong generators of the whole group.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.levels
            .first()
            .map(|l| l.gens.clone())
            .unwrap_or_default()
    }

    pub(crate) fn tail(&self, from: usize) -> StabilizerChain {
        StabilizerChain {
            degree: self.degree,
            levels: self.levels[from.min(self.levels.len())..].to_vec(),
        }
    }
}
