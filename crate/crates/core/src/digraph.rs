//! Orbital digraphs and s-arc transitivity.
//!
//! `s_max_criterion` decides s-arc transitivity from stabilizer orders along
//! one fixed s-arc; `s_max_bruteforce` enumerates s-arcs and counts orbits,
//! and serves as its oracle.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Result};
use crate::grp::{GroupAction, PermGroup};

/// Default number of s-arcs the brute-force oracle may list per level.
pub const DEFAULT_ARC_BUDGET: u64 = 1_000_000;

/// Default upper limit for the s search.
pub const DEFAULT_S_CAP: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "orbital", rename_all = "snake_case")]
pub enum Pairing {
    SelfPaired,
    PairedWith(usize),
}

/// One nondiagonal orbital of a transitive action, as a relation on the
/// vertices. Out-neighbour lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitalDigraph {
    pub id: usize,
    pub vertex_count: usize,
    pub representative_arc: (usize, usize),
    pub valency: usize,
    pub pairing: Pairing,
    out: Vec<Vec<u32>>,
}

impl OrbitalDigraph {
    /// A self-paired orbital is an undirected graph, not a digraph.
    pub fn is_digraph(&self) -> bool {
        self.pairing != Pairing::SelfPaired
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[v].iter().map(|&x| x as usize)
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for list in &self.out {
            for &v in list {
                d[v as usize] += 1;
            }
        }
        d
    }

    /// All arcs `(u, v)` in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count).flat_map(move |u| self.out_neighbors(u).map(move |v| (u, v)))
    }

    /// Header `vertices=N valency=V` followed by one `u v` line per arc.
    pub fn write_edge_list<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "vertices={} valency={}", self.vertex_count, self.valency)?;
        for (u, v) in self.arcs() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn edge_list(&self) -> String {
        let mut s = format!("vertices={} valency={}\n", self.vertex_count, self.valency);
        for (u, v) in self.arcs() {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }
}

/// The nondiagonal orbitals of a transitive action, numbered by the least
/// point of the corresponding suborbit of the stabilizer of vertex 0.
pub fn orbitals(action: &GroupAction) -> Result<Vec<OrbitalDigraph>> {
    orbitals_of_group(action.induced())
}

pub fn orbitals_of_group(g: &PermGroup) -> Result<Vec<OrbitalDigraph>> {
    if !g.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let n = g.degree();
    let chain = g.chain_with_base(&[0])?;
    let top = &chain.levels()[..1];
    // transversal[v] maps 0 to v
    let transversal = |v: usize| {
        top.first()
            .and_then(|l| l.transversal(v))
            .cloned()
            .unwrap_or_else(|| crate::perm::Permutation::identity(n))
    };
    let suborbits: Vec<Vec<usize>> = g
        .point_stabilizer(0)?
        .orbits()
        .into_iter()
        .filter(|o| o[0] != 0)
        .collect();
    let mut which = vec![usize::MAX; n];
    for (i, o) in suborbits.iter().enumerate() {
        for &x in o {
            which[x] = i;
        }
    }
    let ts: Vec<_> = (0..n).map(transversal).collect();
    let mut out = Vec::with_capacity(suborbits.len());
    for (id, delta) in suborbits.iter().enumerate() {
        let x = delta[0];
        let back = ts[x].inverse().apply(0);
        let pair = which[back];
        let lists = ts
            .iter()
            .map(|t| {
                let mut l: Vec<u32> = delta.iter().map(|&y| t.apply(y) as u32).collect();
                l.sort_unstable();
                l
            })
            .collect();
        out.push(OrbitalDigraph {
            id,
            vertex_count: n,
            representative_arc: (0, x),
            valency: delta.len(),
            pairing: if pair == id {
                Pairing::SelfPaired
            } else {
                Pairing::PairedWith(pair)
            },
            out: lists,
        });
    }
    Ok(out)
}

/// `Exact(s)`: s-arc transitive but not (s+1)-arc transitive.
/// `AtLeast(cap)`: s-arc transitive for every `s <= cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum SMax {
    Exact(u32),
    AtLeast(u32),
}

impl SMax {
    /// The s value, read as a lower bound for `AtLeast`.
    pub fn value(self) -> u32 {
        match self {
            SMax::Exact(s) | SMax::AtLeast(s) => s,
        }
    }

    /// Whether s-arc transitivity holds for the given `s`, if decided.
    pub fn transitive_at(self, s: u32) -> Option<bool> {
        match self {
            SMax::Exact(m) => Some(s <= m),
            SMax::AtLeast(m) if s <= m => Some(true),
            SMax::AtLeast(_) => None,
        }
    }
}

impl std::fmt::Display for SMax {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SMax::Exact(s) => write!(f, "{s}"),
            SMax::AtLeast(s) => write!(f, "unbounded({s})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Criterion,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SArcResult {
    pub s_max: SMax,
    pub method: Method,
    /// The arc path the verdict was read from (criterion), or one s-arc of
    /// the longest transitive level (brute force).
    pub witness_arc_path: Vec<usize>,
    /// Largest s with `valency^s | |G_v|`; absent for valency below 2.
    pub divisibility_cap: Option<u32>,
}

/// Largest `s` with `valency^s` dividing `stabilizer_order`.
pub fn valency_power_cap(valency: usize, stabilizer_order: &BigUint) -> Result<u32> {
    if valency <= 1 {
        return Err(Error::DegenerateValency(valency));
    }
    if stabilizer_order.is_zero() {
        return Err(Error::Zero);
    }
    let v = BigUint::from(valency);
    let mut rest = stabilizer_order.clone();
    let mut s = 0;
    while (&rest % &v).is_zero() {
        rest /= &v;
        s += 1;
    }
    Ok(s)
}

fn cap_for(g: &PermGroup, digraph: &OrbitalDigraph) -> Option<u32> {
    let stab = g.order() / BigUint::from(g.degree());
    valency_power_cap(digraph.valency, &stab).ok()
}

fn check_cap(cap: u32) -> Result<()> {
    if cap == 0 {
        return Err(Error::Parameter("s cap must be at least 1".into()));
    }
    Ok(())
}

/// s_max by the stabilizer factorization test along the arc path that
/// always moves to the least out-neighbour.
pub fn s_max_criterion(action: &GroupAction, digraph: &OrbitalDigraph, cap: u32) -> Result<SArcResult> {
    s_max_criterion_with(action.induced(), digraph, cap, |d, v| d.out_neighbors(v).next().unwrap())
}

/// As [`s_max_criterion`], extending the path by uniformly random
/// out-neighbours. The verdict does not depend on the path.
pub fn s_max_criterion_random<R: Rng>(
    action: &GroupAction,
    digraph: &OrbitalDigraph,
    cap: u32,
    rng: &mut R,
) -> Result<SArcResult> {
    s_max_criterion_with(action.induced(), digraph, cap, |d, v| {
        let list = &d.out[v];
        list[rng.gen_range(0..list.len())] as usize
    })
}

/// For the arc path `v_0 → v_1 → ..`, the action is (i+1)-arc transitive
/// (given i-arc transitivity) iff `G_{v_1..v_i} = G_{v_0..v_i} G_{v_1..v_{i+1}}`.
/// Both factors lie in the left side, so equality holds iff
/// `|A| |B| = |C| |A ∩ B|` with `A ∩ B = G_{v_0..v_{i+1}}`.
pub fn s_max_criterion_with(
    g: &PermGroup,
    digraph: &OrbitalDigraph,
    cap: u32,
    mut next: impl FnMut(&OrbitalDigraph, usize) -> usize,
) -> Result<SArcResult> {
    check_cap(cap)?;
    let (v0, v1) = digraph.representative_arc;
    let mut path = vec![v0, v1];
    while path.len() < cap as usize + 1 {
        let last = *path.last().unwrap();
        path.push(next(digraph, last));
    }
    let from0 = g.prefix_stabilizer_orders(&path)?;
    let from1 = g.prefix_stabilizer_orders(&path[1..])?;
    // from0[j] = |G_{v_0..v_{j-1}}|, from1[j] = |G_{v_1..v_j}|
    let mut s_max = SMax::AtLeast(cap);
    for i in 1..cap as usize {
        let a = &from0[i + 1];
        let a_meet_b = &from0[i + 2];
        let b = &from1[i + 1];
        let c = &from1[i];
        if a * b != c * a_meet_b {
            s_max = SMax::Exact(i as u32);
            break;
        }
    }
    let keep = match s_max {
        SMax::Exact(s) => s as usize + 2,
        SMax::AtLeast(s) => s as usize + 1,
    };
    path.truncate(keep);
    Ok(SArcResult {
        s_max,
        method: Method::Criterion,
        witness_arc_path: path,
        divisibility_cap: cap_for(g, digraph),
    })
}

/// Orbit count of `G` on the s-arcs for one `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCount {
    pub s: u32,
    pub arcs: u64,
    pub orbits: u64,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb) as usize] = ra.min(rb);
        true
    }
}

/// Lists all s-arcs and counts orbits of the generators on them.
fn count_level(g: &PermGroup, digraph: &OrbitalDigraph, s: u32) -> LevelCount {
    let width = s as usize + 1;
    let mut arcs: Vec<u32> = (0..digraph.vertex_count as u32).collect();
    for len in 1..width {
        let mut next = Vec::with_capacity(arcs.len() * digraph.valency);
        for walk in arcs.chunks(len) {
            let last = *walk.last().unwrap() as usize;
            for &y in &digraph.out[last] {
                next.extend_from_slice(walk);
                next.push(y);
            }
        }
        arcs = next;
    }
    let count = arcs.len() / width;
    let index: HashMap<&[u32], u32> = arcs
        .chunks(width)
        .enumerate()
        .map(|(i, w)| (w, i as u32))
        .collect();
    let mut uf = UnionFind((0..count as u32).collect());
    let mut orbits = count as u64;
    let mut image = vec![0u32; width];
    for (i, w) in arcs.chunks(width).enumerate() {
        for x in g.generators() {
            for (dst, &src) in image.iter_mut().zip(w) {
                *dst = x.apply(src as usize) as u32;
            }
            let j = index[image.as_slice()];
            if uf.union(i as u32, j) {
                orbits -= 1;
            }
        }
    }
    LevelCount {
        s,
        arcs: count as u64,
        orbits,
    }
}

fn arc_total(digraph: &OrbitalDigraph, s: u32) -> Option<u64> {
    (digraph.valency as u64)
        .checked_pow(s)?
        .checked_mul(digraph.vertex_count as u64)
}

/// Orbit counts for `s = 1..=max_s`, stopping silently before the first
/// level with more than `budget` s-arcs.
pub fn arc_orbit_counts(action: &GroupAction, digraph: &OrbitalDigraph, max_s: u32, budget: u64) -> Vec<LevelCount> {
    let g = action.induced();
    let mut out = Vec::new();
    for s in 1..=max_s {
        match arc_total(digraph, s) {
            Some(t) if t <= budget => out.push(count_level(g, digraph, s)),
            _ => break,
        }
    }
    out
}

/// s_max by listing s-arcs. Fails with a capacity error when a level that
/// must be inspected has more than `budget` s-arcs.
pub fn s_max_bruteforce(
    action: &GroupAction,
    digraph: &OrbitalDigraph,
    cap: u32,
    budget: u64,
) -> Result<SArcResult> {
    check_cap(cap)?;
    let g = action.induced();
    let mut s_max = SMax::AtLeast(cap);
    for s in 1..=cap {
        let total = arc_total(digraph, s).unwrap_or(u64::MAX);
        if total > budget {
            return Err(capacity(format!("{total} {s}-arcs"), budget));
        }
        let level = count_level(g, digraph, s);
        if level.orbits != 1 {
            s_max = SMax::Exact(s - 1);
            break;
        }
    }
    // One s-arc of the last transitive level, extended by least neighbours.
    let mut path = vec![digraph.representative_arc.0, digraph.representative_arc.1];
    while path.len() < s_max.value() as usize + 1 {
        let last = *path.last().unwrap();
        path.push(digraph.out[last][0] as usize);
    }
    path.truncate(s_max.value() as usize + 1);
    Ok(SArcResult {
        s_max,
        method: Method::BruteForce,
        witness_arc_path: path,
        divisibility_cap: cap_for(g, digraph),
    })
}

/// `|G_v|` for the induced action.
pub fn vertex_stabilizer_order(action: &GroupAction) -> BigUint {
    let g = action.induced();
    g.order() / BigUint::from(g.degree())
}

/// `|G_v|` as `u64` when it fits.
pub fn vertex_stabilizer_order_u64(action: &GroupAction) -> Option<u64> {
    vertex_stabilizer_order(action).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn petersen_scheme() {
        let a = crate::actions::subsets_action(5, 2, crate::actions::GroupType::Sym).unwrap();
        let orbs = orbitals(&a).unwrap();
        let mut vals: Vec<usize> = orbs.iter().map(|o| o.valency).collect();
        vals.sort();
        assert_eq!(vals, vec![3, 6]);
        assert!(orbs.iter().all(|o| !o.is_digraph()));
    }

    #[test]
    fn frobenius_orbitals_are_paired() {
        let a = fixtures::frobenius21();
        let orbs = orbitals(&a).unwrap();
        assert_eq!(orbs.len(), 2);
        assert_eq!(orbs[0].valency, 3);
        assert_eq!(orbs[1].valency, 3);
        assert_eq!(orbs[0].pairing, Pairing::PairedWith(1));
        assert_eq!(orbs[1].pairing, Pairing::PairedWith(0));
        for (u, v) in orbs[0].arcs() {
            assert!(!orbs[0].has_arc(v, u));
            assert!(orbs[1].has_arc(v, u));
        }
    }

    #[test]
    fn two_transitive_gives_complete_graph() {
        let a = fixtures::symmetric_natural(6);
        let orbs = orbitals(&a).unwrap();
        assert_eq!(orbs.len(), 1);
        assert_eq!(orbs[0].valency, 5);
        assert_eq!(orbs[0].pairing, Pairing::SelfPaired);
    }

    #[test]
    fn intransitive_is_rejected() {
        let g = PermGroup::from_cycles(&["(1 2)"], 3).unwrap();
        assert_eq!(orbitals_of_group(&g).unwrap_err(), Error::NotTransitive);
    }

    #[test]
    fn criterion_examples() {
        let c5 = fixtures::directed_cycle(5);
        let d = &orbitals(&c5).unwrap()[0];
        let r = s_max_criterion(&c5, d, 10).unwrap();
        assert_eq!(r.s_max, SMax::AtLeast(10));
        assert_eq!(r.divisibility_cap, None);

        let f = fixtures::frobenius21();
        for d in orbitals(&f).unwrap() {
            let r = s_max_criterion(&f, &d, 5).unwrap();
            assert_eq!(r.s_max, SMax::Exact(1));
            assert_eq!(r.divisibility_cap, Some(1));
        }

        let s3 = fixtures::symmetric_natural(3);
        let d = &orbitals(&s3).unwrap()[0];
        let a = s_max_criterion(&s3, d, 4).unwrap();
        let b = s_max_bruteforce(&s3, d, 4, DEFAULT_ARC_BUDGET).unwrap();
        assert_eq!(a.s_max, b.s_max);
    }

    #[test]
    fn bruteforce_examples() {
        let f = fixtures::frobenius21();
        let d = &orbitals(&f).unwrap()[0];
        let counts = arc_orbit_counts(&f, d, 2, DEFAULT_ARC_BUDGET);
        assert_eq!(counts[0], LevelCount { s: 1, arcs: 21, orbits: 1 });
        assert_eq!(counts[1].arcs, 63);
        assert!(counts[1].orbits >= 3);

        let c5 = fixtures::directed_cycle(5);
        let d = &orbitals(&c5).unwrap()[0];
        let counts = arc_orbit_counts(&c5, d, 4, DEFAULT_ARC_BUDGET);
        assert_eq!(counts[3], LevelCount { s: 4, arcs: 5, orbits: 1 });

        let d = &orbitals(&f).unwrap()[0];
        let err = s_max_bruteforce(&f, d, 3, 50).unwrap_err();
        assert!(matches!(err, Error::Capacity { cap: 50, .. }));
    }

    #[test]
    fn blown_up_cycles() {
        for (k, m, expected) in [(3, 3, 2), (4, 2, 3), (5, 2, 4)] {
            let a = fixtures::blown_up_cycle(k, m);
            let orbs = orbitals(&a).unwrap();
            let d = orbs.iter().find(|o| o.valency == m && o.is_digraph()).unwrap();
            let r = s_max_criterion(&a, d, 6).unwrap();
            assert_eq!(r.s_max, SMax::Exact(expected), "C_{k}[{m}]");
            let b = s_max_bruteforce(&a, d, 6, DEFAULT_ARC_BUDGET).unwrap();
            assert_eq!(b.s_max, r.s_max);
        }
    }

    #[test]
    fn divisibility_cap_examples() {
        assert_eq!(valency_power_cap(3, &BigUint::from(3u32)).unwrap(), 1);
        assert_eq!(valency_power_cap(3, &BigUint::from(27u32)).unwrap(), 3);
        assert_eq!(valency_power_cap(6, &BigUint::from(48u32)).unwrap(), 1);
        assert_eq!(valency_power_cap(1, &BigUint::from(5u32)), Err(Error::DegenerateValency(1)));
    }

    #[test]
    fn random_paths_agree_with_greedy() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for a in [fixtures::blown_up_cycle(3, 3), fixtures::blown_up_cycle(4, 2), fixtures::frobenius21()] {
            for d in orbitals(&a).unwrap() {
                let greedy = s_max_criterion(&a, &d, 5).unwrap().s_max;
                for _ in 0..10 {
                    let r = s_max_criterion_random(&a, &d, 5, &mut rng).unwrap();
                    assert_eq!(r.s_max, greedy);
                }
            }
        }
    }

    #[test]
    fn orbital_invariants_on_fixtures() {
        for a in fixtures::all() {
            let orbs = orbitals(&a.action).unwrap();
            let n = a.action.degree();
            assert_eq!(orbs.iter().map(|o| o.valency).sum::<usize>(), n - 1, "{}", a.name);
            for o in &orbs {
                assert!(o.arcs().all(|(u, v)| u != v));
                assert!(o.in_degrees().iter().all(|&d| d == o.valency));
                if let Pairing::PairedWith(j) = o.pairing {
                    assert_eq!(orbs[j].valency, o.valency);
                    assert!(o.arcs().all(|(u, v)| orbs[j].has_arc(v, u) && !o.has_arc(v, u)));
                }
            }
        }
    }

    #[test]
    fn edge_list_format() {
        let c = fixtures::directed_cycle(3);
        let d = &orbitals(&c).unwrap()[0];
        assert_eq!(d.edge_list(), "vertices=3 valency=1\n0 1\n1 2\n2 0\n");
        let mut buf = Vec::new();
        d.write_edge_list(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), d.edge_list());
    }
}
