//! Finitely generated permutation groups backed by a stabilizer chain.

mod blocks;
mod chain;
mod coset;
mod intersect;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;

pub use blocks::BlockSystem;
pub use chain::{Level, StabilizerChain};
pub use coset::{coset_action, GroupAction, Label, LabelKind};
pub use intersect::{intersection, intersection_by_enumeration};

use crate::error::{capacity, Error, Result};
use crate::perm::Permutation;

/// Default cap on the index of a coset action.
pub const DEFAULT_DEGREE_CAP: usize = 5000;
/// Default cap on enumerated elements (intersections, element lists).
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabilizerChain,
    order: BigUint,
}

impl PermGroup {
    /// Runs Schreier-Sims on `generators`.
    pub fn new(generators: Vec<Permutation>) -> Result<Self> {
        Self::with_base(generators, &[])
    }

    /// As [`PermGroup::new`] with the base starting at `base_prefix`.
    pub fn with_base(generators: Vec<Permutation>, base_prefix: &[usize]) -> Result<Self> {
        let degree = check_generators(&generators)?;
        check_points(base_prefix, degree)?;
        let chain = StabilizerChain::build(degree, &generators, base_prefix, None);
        Ok(Self::from_chain(generators, chain))
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_chain(
            vec![Permutation::identity(degree)],
            StabilizerChain {
                degree,
                levels: Vec::new(),
            },
        )
    }

    /// Parses generators in cycle notation.
    pub fn from_cycles<S: AsRef<str>>(gens: &[S], degree: usize) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|s| Permutation::parse_cycles(s.as_ref(), degree))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens)
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = vec![Permutation::identity(n)];
        if n >= 2 {
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            gens = vec![
                Permutation::from_images(cycle).unwrap(),
                Permutation::from_images(swap).unwrap(),
            ];
        }
        Self::new(gens).expect("valid generators")
    }

    pub fn alternating(n: usize) -> Self {
        if n < 3 {
            return Self::trivial(n.max(1));
        }
        // (1 2 3) together with an n-cycle (n odd) or an (n-1)-cycle on 2..n (n even).
        let mut three: Vec<usize> = (0..n).collect();
        three[0] = 1;
        three[1] = 2;
        three[2] = 0;
        let mut long: Vec<usize> = (0..n).collect();
        let start = if n % 2 == 1 { 0 } else { 1 };
        for i in start..n {
            long[i] = if i + 1 == n { start } else { i + 1 };
        }
        Self::new(vec![
            Permutation::from_images(long).unwrap(),
            Permutation::from_images(three).unwrap(),
        ])
        .expect("valid generators")
    }

    pub(crate) fn from_chain(generators: Vec<Permutation>, chain: StabilizerChain) -> Self {
        let order = chain.order();
        PermGroup {
            degree: chain.degree,
            generators,
            chain,
            order,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::IncompatibleDegree {
                left: self.degree,
                right: p.degree(),
            });
        }
        let (residue, _) = self.chain.sift_from(p.clone(), 0);
        Ok(residue.is_identity())
    }

    /// `true` when every generator of `other` lies in `self`.
    pub fn contains_group(&self, other: &PermGroup) -> Result<bool> {
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same elements (degree, order and mutual containment).
    pub fn same_group(&self, other: &PermGroup) -> Result<bool> {
        Ok(self.degree == other.degree
            && self.order == other.order
            && self.contains_group(other)?)
    }

    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        check_points(&[point], self.degree)?;
        Ok(orbit_of(&self.generators, self.degree, point))
    }

    /// All orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let o = orbit_of(&self.generators, self.degree, x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        orbit_of(&self.generators, self.degree, 0).len() == self.degree
    }

    /// A chain for the same group with base starting at `prefix`.
    pub fn chain_with_base(&self, prefix: &[usize]) -> Result<StabilizerChain> {
        check_points(prefix, self.degree)?;
        Ok(StabilizerChain::build(
            self.degree,
            &self.chain.strong_generators_or(&self.generators),
            prefix,
            Some(&self.order),
        ))
    }

    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup> {
        self.tuple_stabilizer(&[point])
    }

    /// Pointwise stabilizer of an ordered list of distinct points.
    pub fn tuple_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        check_distinct(points, self.degree)?;
        let chain = self.chain_with_base(points)?;
        let tail = chain.tail(points.len());
        let gens = match tail.levels.first() {
            Some(l) => l.gens.clone(),
            None => vec![Permutation::identity(self.degree)],
        };
        Ok(Self::from_chain(gens, tail))
    }

    /// `|G_{p_0 .. p_{j-1}}|` for `j = 0..=points.len()`. Repeated points are
    /// allowed and leave the order unchanged.
    pub fn prefix_stabilizer_orders(&self, points: &[usize]) -> Result<Vec<BigUint>> {
        check_points(points, self.degree)?;
        let mut distinct = Vec::new();
        let mut level_after = Vec::with_capacity(points.len() + 1);
        level_after.push(0);
        for &p in points {
            if !distinct.contains(&p) {
                distinct.push(p);
            }
            level_after.push(distinct.len());
        }
        let chain = self.chain_with_base(&distinct)?;
        Ok(level_after.iter().map(|&l| chain.order_from(l)).collect())
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for lv in self.chain.levels.iter().rev() {
            let x = lv.orbit[rng.gen_range(0..lv.orbit.len())];
            g = g.then(lv.transversal[x].as_ref().unwrap());
        }
        g
    }

    /// Every element, listed as transversal products. Fails above `cap`.
    pub fn elements(&self, cap: u64) -> Result<Vec<Permutation>> {
        match self.order.to_u64() {
            Some(n) if n <= cap => {}
            _ => return Err(capacity(format!("group order {}", self.order), cap)),
        }
        let mut out = vec![Permutation::identity(self.degree)];
        for lv in self.chain.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lv.orbit.len());
            for g in &out {
                for &x in &lv.orbit {
                    next.push(g.then(lv.transversal[x].as_ref().unwrap()));
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Subgroup of even permutations.
    pub fn even_part(&self) -> PermGroup {
        let odd = self.generators.iter().find(|g| !g.is_even());
        let Some(t) = odd else {
            return self.clone();
        };
        // Schreier generators for the transversal {1, t}.
        let t_inv = t.inverse();
        let mut gens = Vec::new();
        for s in &self.generators {
            if s.is_even() {
                gens.push(s.clone());
                gens.push(t.then(s).then(&t_inv));
            } else {
                gens.push(s.then(&t_inv));
                gens.push(t.then(s));
            }
        }
        let mut order = self.order.clone();
        order /= 2u32;
        let chain = StabilizerChain::build(self.degree, &gens, &[], Some(&order));
        Self::from_chain(gens, chain)
    }

    /// Primes dividing the group order (all of them are at most the degree).
    pub fn prime_divisors(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        let mut rest = self.order.clone();
        for p in 2..=self.degree.max(2) as u64 {
            let bp = BigUint::from(p);
            if (&rest % &bp) == BigUint::from(0u32) {
                out.insert(p);
                while (&rest % &bp) == BigUint::from(0u32) {
                    rest /= &bp;
                }
            }
        }
        out
    }

    /// Generators rendered in cycle notation.
    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_string()).collect()
    }
}

impl StabilizerChain {
    fn strong_generators_or(&self, fallback: &[Permutation]) -> Vec<Permutation> {
        let s = self.strong_generators();
        if s.is_empty() {
            fallback.to_vec()
        } else {
            s
        }
    }
}

pub(crate) fn orbit_of(gens: &[Permutation], degree: usize, point: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut orbit = vec![point];
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
            }
        }
        i += 1;
    }
    orbit.sort_unstable();
    orbit
}

fn check_generators(gens: &[Permutation]) -> Result<usize> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let degree = first.degree();
    if degree == 0 {
        return Err(Error::Parameter("degree must be positive".into()));
    }
    for g in gens {
        if g.degree() != degree {
            return Err(Error::IncompatibleDegree {
                left: degree,
                right: g.degree(),
            });
        }
    }
    Ok(degree)
}

fn check_points(points: &[usize], degree: usize) -> Result<()> {
    for &p in points {
        if p >= degree {
            return Err(Error::OutOfRange { point: p, degree });
        }
    }
    Ok(())
}

fn check_distinct(points: &[usize], degree: usize) -> Result<()> {
    check_points(points, degree)?;
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(Error::RepeatedPoint(*p));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grp(gens: &[&str], n: usize) -> PermGroup {
        PermGroup::from_cycles(gens, n).unwrap()
    }

    fn frobenius21() -> PermGroup {
        grp(&["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 7)
    }

    /// Closure of the generators by breadth-first multiplication.
    fn brute_closure(gens: &[Permutation]) -> BTreeSet<Permutation> {
        let mut seen = BTreeSet::new();
        let id = Permutation::identity(gens[0].degree());
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        seen
    }

    #[test]
    fn build_examples() {
        assert_eq!(grp(&["(1 2 3 4 5)", "(1 2)"], 5).order(), &BigUint::from(120u32));
        assert_eq!(grp(&["(1 2 3 4 5)", "(3 4 5)"], 5).order(), &BigUint::from(60u32));
        let f = frobenius21();
        assert_eq!(brute_closure(f.generators()).len(), 21);
        assert_eq!(f.order(), &BigUint::from(21u32));
    }

    #[test]
    fn build_errors() {
        assert_eq!(PermGroup::new(vec![]).unwrap_err(), Error::EmptyGenerators);
        let mixed = vec![Permutation::identity(3), Permutation::identity(4)];
        assert!(matches!(
            PermGroup::new(mixed),
            Err(Error::IncompatibleDegree { .. })
        ));
    }

    #[test]
    fn membership() {
        let a5 = grp(&["(1 2 3 4 5)", "(3 4 5)"], 5);
        let s5 = grp(&["(1 2 3 4 5)", "(1 2)"], 5);
        let t = Permutation::parse_cycles("(1 2)", 5).unwrap();
        assert!(!a5.contains(&t).unwrap());
        assert!(s5.contains(&t).unwrap());
        let f = frobenius21();
        let x = Permutation::parse_cycles("(1 2)(3 6)(4 5)", 7).unwrap();
        assert!(!brute_closure(f.generators()).contains(&x));
        assert!(!f.contains(&x).unwrap());
        assert!(a5.contains(&Permutation::identity(4)).is_err());
        for g in brute_closure(f.generators()) {
            assert!(f.contains(&g).unwrap());
        }
    }

    #[test]
    fn orbits_and_transitivity() {
        assert_eq!(PermGroup::symmetric(5).orbit(0).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(grp(&["(1 2)"], 4).orbit(2).unwrap(), vec![2]);
        let v4 = grp(&["(1 2)(3 4)", "(1 3)(2 4)"], 4);
        assert_eq!(v4.orbit(0).unwrap(), vec![0, 1, 2, 3]);
        assert!(v4.is_transitive());
        assert!(!grp(&["(1 2)"], 4).is_transitive());
        assert!(v4.orbit(4).is_err());
    }

    #[test]
    fn stabilizers() {
        let s5 = PermGroup::symmetric(5);
        assert_eq!(s5.point_stabilizer(0).unwrap().order(), &BigUint::from(24u32));
        assert!(s5.tuple_stabilizer(&[0, 1, 2, 3, 4]).unwrap().is_trivial());
        assert_eq!(
            frobenius21().point_stabilizer(0).unwrap().order(),
            &BigUint::from(3u32)
        );
        assert_eq!(s5.tuple_stabilizer(&[0, 0]).unwrap_err(), Error::RepeatedPoint(0));
        assert!(s5.tuple_stabilizer(&[7]).is_err());
        let st = s5.tuple_stabilizer(&[3, 1]).unwrap();
        for g in st.generators() {
            assert_eq!(g.apply(3), 3);
            assert_eq!(g.apply(1), 1);
        }
        assert_eq!(st.order(), &BigUint::from(6u32));
    }

    #[test]
    fn tuple_stabilizer_is_iterated_point_stabilizer() {
        let g = PermGroup::symmetric(7);
        let direct = g.tuple_stabilizer(&[4, 0, 6]).unwrap();
        let iterated = g
            .point_stabilizer(4)
            .unwrap()
            .point_stabilizer(0)
            .unwrap()
            .point_stabilizer(6)
            .unwrap();
        assert!(direct.same_group(&iterated).unwrap());
        let orders = g.prefix_stabilizer_orders(&[4, 0, 4, 6]).unwrap();
        let expect: Vec<BigUint> = [5040u32, 720, 120, 120, 24]
            .iter()
            .map(|&x| BigUint::from(x))
            .collect();
        assert_eq!(orders, expect);
    }

    #[test]
    fn symmetric_and_alternating_orders() {
        let mut fact = BigUint::one();
        for n in 1..=12usize {
            fact *= n;
            assert_eq!(PermGroup::symmetric(n).order(), &fact, "S{n}");
            if n >= 3 {
                assert_eq!(PermGroup::alternating(n).order(), &(&fact / 2u32), "A{n}");
            }
        }
    }

    #[test]
    fn even_part_of_symmetric_group() {
        for n in 3..8 {
            let s = PermGroup::symmetric(n);
            let a = s.even_part();
            assert!(a.same_group(&PermGroup::alternating(n)).unwrap());
        }
    }

    #[test]
    fn random_elements_and_enumeration() {
        let f = frobenius21();
        let elems: BTreeSet<_> = f.elements(100).unwrap().into_iter().collect();
        assert_eq!(elems, brute_closure(f.generators()));
        assert!(PermGroup::symmetric(8).elements(100).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            assert!(elems.contains(&f.random_element(&mut rng)));
        }
    }

    #[test]
    fn orbit_stabilizer_on_random_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(2..9);
            let s = PermGroup::symmetric(n);
            let gens: Vec<_> = (0..rng.gen_range(1..3))
                .map(|_| s.random_element(&mut rng))
                .collect();
            let g = PermGroup::new(gens).unwrap();
            let x = rng.gen_range(0..n);
            let orbit = g.orbit(x).unwrap().len();
            let stab = g.point_stabilizer(x).unwrap();
            assert_eq!(g.order(), &(stab.order() * orbit));
        }
    }

    #[test]
    fn prime_divisors_of_order() {
        let primes: Vec<u64> = frobenius21().prime_divisors().into_iter().collect();
        assert_eq!(primes, vec![3, 7]);
        assert!(PermGroup::trivial(3).prime_divisors().is_empty());
    }
}
