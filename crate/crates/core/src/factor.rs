//! Factorizations `G = HK`, homogeneous factorizations of small groups and
//! projections of subgroups of wreath products.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capacity, Error, Result};
use crate::grp::{intersection, PermGroup, DEFAULT_ENUMERATION_CAP};
use crate::perm::Permutation;

/// Largest group order accepted by the subgroup enumeration.
pub const DEFAULT_SUBGROUP_CAP: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationResult {
    pub holds: bool,
    pub order_h: BigUint,
    pub order_k: BigUint,
    pub order_intersection: BigUint,
    /// `|HK| = |H| |K| / |H ∩ K|`
    pub product_order: BigUint,
}

/// Whether `G = HK`, decided by `|H| |K| / |H ∩ K| = |G|`.
pub fn is_factorization(g: &PermGroup, h: &PermGroup, k: &PermGroup) -> Result<FactorizationResult> {
    for (name, sub) in [("H", h), ("K", k)] {
        if !g.contains_group(sub)? {
            return Err(Error::NotSubgroup(format!("{name} is not contained in G")));
        }
    }
    let meet = intersection(h, k, DEFAULT_ENUMERATION_CAP)?;
    let product_order = h.order() * k.order() / meet.order();
    Ok(FactorizationResult {
        holds: &product_order == g.order(),
        order_h: h.order().clone(),
        order_k: k.order().clone(),
        order_intersection: meet.order().clone(),
        product_order,
    })
}

type Bits = Vec<u64>;

fn bit(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn popcount(b: &Bits) -> u64 {
    b.iter().map(|w| w.count_ones() as u64).sum()
}

fn meet_count(a: &Bits, b: &Bits) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

/// The elements of a group with index lookup and conjugation tables.
struct ElementTable {
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    /// `conj[j][i]` is the index of `x_j^-1 e_i x_j` for generator `x_j`.
    conj: Vec<Vec<u32>>,
}

impl ElementTable {
    fn new(g: &PermGroup, cap: u64) -> Result<Self> {
        let elements = g.elements(cap)?;
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i as u32))
            .collect();
        let conj = g
            .generators()
            .iter()
            .map(|x| {
                let xi = x.inverse();
                elements.iter().map(|e| index[&xi.then(e).then(x)]).collect()
            })
            .collect();
        Ok(ElementTable {
            elements,
            index,
            conj,
        })
    }

    fn words(&self) -> usize {
        self.elements.len().div_ceil(64)
    }

    /// Element set of the subgroup generated by the listed elements.
    fn closure(&self, gens: &[u32]) -> Bits {
        let mut bits = vec![0u64; self.words()];
        let id = self.index[&Permutation::identity(self.elements[0].degree())];
        set_bit(&mut bits, id as usize);
        let mut members = vec![id];
        let mut i = 0;
        while i < members.len() {
            let e = &self.elements[members[i] as usize];
            for &s in gens {
                let j = self.index[&e.then(&self.elements[s as usize])];
                if !bit(&bits, j as usize) {
                    set_bit(&mut bits, j as usize);
                    members.push(j);
                }
            }
            i += 1;
        }
        bits
    }

    fn conjugate(&self, b: &Bits, j: usize) -> Bits {
        let mut out = vec![0u64; b.len()];
        for i in 0..self.elements.len() {
            if bit(b, i) {
                set_bit(&mut out, self.conj[j][i] as usize);
            }
        }
        out
    }
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub order: u64,
    pub representative: PermGroup,
    /// Number of conjugates.
    pub length: usize,
}

struct Lattice {
    table: ElementTable,
    /// Representative element sets, generator indices and conjugates with
    /// conjugating element (as a permutation).
    reps: Vec<(Bits, Vec<u32>)>,
    conjugates: Vec<Vec<(Bits, Permutation)>>,
}

fn enumerate(g: &PermGroup, cap: u64) -> Result<Lattice> {
    match g.order().to_u64() {
        Some(o) if o <= cap => {}
        _ => return Err(capacity(format!("group order {}", g.order()), cap)),
    }
    let table = ElementTable::new(g, cap)?;
    let n = table.elements.len();
    let degree = g.degree();
    let mut seen: HashMap<Bits, usize> = HashMap::new();
    let mut reps: Vec<(Bits, Vec<u32>)> = Vec::new();
    let mut conjugates: Vec<Vec<(Bits, Permutation)>> = Vec::new();

    let add_class = |bits: Bits,
                         gens: Vec<u32>,
                         seen: &mut HashMap<Bits, usize>,
                         reps: &mut Vec<(Bits, Vec<u32>)>,
                         conjugates: &mut Vec<Vec<(Bits, Permutation)>>| {
        let id = reps.len();
        let mut class = vec![(bits.clone(), Permutation::identity(degree))];
        seen.insert(bits.clone(), id);
        let mut i = 0;
        while i < class.len() {
            let (b, x) = class[i].clone();
            for (j, gen) in g.generators().iter().enumerate() {
                let c = table.conjugate(&b, j);
                if let std::collections::hash_map::Entry::Vacant(v) = seen.entry(c.clone()) {
                    v.insert(id);
                    class.push((c, x.then(gen)));
                }
            }
            i += 1;
        }
        reps.push((bits, gens));
        conjugates.push(class);
    };

    let trivial = table.closure(&[]);
    add_class(trivial, Vec::new(), &mut seen, &mut reps, &mut conjugates);
    // Every subgroup K > 1 is <M, x> for a maximal subgroup M of K and any
    // x in K \ M, and M is conjugate to a representative already queued.
    let mut next = 0;
    while next < reps.len() {
        let (h_bits, h_gens) = reps[next].clone();
        let mut covered = h_bits.clone();
        for x in 0..n as u32 {
            if bit(&covered, x as usize) {
                continue;
            }
            // Mark the right coset Hx, all of whose elements give the same
            // extension.
            for y in 0..n {
                if bit(&h_bits, y) {
                    let hx = table.index[&table.elements[y].then(&table.elements[x as usize])];
                    set_bit(&mut covered, hx as usize);
                }
            }
            let mut gens = h_gens.clone();
            gens.push(x);
            let k = table.closure(&gens);
            if !seen.contains_key(&k) {
                add_class(k, gens, &mut seen, &mut reps, &mut conjugates);
            }
        }
        next += 1;
    }
    Ok(Lattice {
        table,
        reps,
        conjugates,
    })
}

fn group_from(table: &ElementTable, gens: &[u32], degree: usize) -> Result<PermGroup> {
    if gens.is_empty() {
        return Ok(PermGroup::trivial(degree));
    }
    PermGroup::new(gens.iter().map(|&i| table.elements[i as usize].clone()).collect())
}

/// Conjugacy classes of subgroups of `G`, ordered by subgroup order. Fails
/// when `|G|` exceeds `cap`.
pub fn subgroup_classes(g: &PermGroup, cap: u64) -> Result<Vec<SubgroupClass>> {
    let lat = enumerate(g, cap)?;
    let mut out = lat
        .reps
        .iter()
        .zip(&lat.conjugates)
        .map(|((bits, gens), class)| {
            Ok(SubgroupClass {
                order: popcount(bits),
                representative: group_from(&lat.table, gens, g.degree())?,
                length: class.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|c| c.order);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// `B = A^g` for some `g ∈ G`.
    Conjugate,
    /// Equal orders only; isomorphism is not tested.
    OrderEqual,
}

#[derive(Clone, Debug)]
pub struct HomogeneousFactorization {
    pub a: PermGroup,
    pub b: PermGroup,
    pub order: u64,
    pub intersection_order: u64,
    pub evidence: Evidence,
}

/// All `G = AB` with `|A| = |B|` and `|G : A| >= min_index`, with `A` up to
/// conjugacy and `B` running over every subgroup.
pub fn homogeneous_factorizations(g: &PermGroup, min_index: u64) -> Result<Vec<HomogeneousFactorization>> {
    homogeneous_factorizations_capped(g, min_index, DEFAULT_SUBGROUP_CAP)
}

pub fn homogeneous_factorizations_capped(
    g: &PermGroup,
    min_index: u64,
    cap: u64,
) -> Result<Vec<HomogeneousFactorization>> {
    let lat = enumerate(g, cap)?;
    let total = lat.table.elements.len() as u64;
    let found: Vec<(usize, usize, usize, u64)> = (0..lat.reps.len())
        .into_par_iter()
        .flat_map_iter(|ai| {
            let a = &lat.reps[ai].0;
            let order = popcount(a);
            let lat = &lat;
            let ok = order > 0 && total / order >= min_index && order * order >= total;
            (0..lat.reps.len())
                .filter(move |&bi| ok && popcount(&lat.reps[bi].0) == order)
                .flat_map(move |bi| {
                    lat.conjugates[bi].iter().enumerate().filter_map(move |(ci, (b, _))| {
                        let m = meet_count(a, b);
                        (order * order == total * m).then_some((ai, bi, ci, m))
                    })
                })
        })
        .collect();
    found
        .into_iter()
        .map(|(ai, bi, ci, m)| {
            let a = group_from(&lat.table, &lat.reps[ai].1, g.degree())?;
            let b_rep = group_from(&lat.table, &lat.reps[bi].1, g.degree())?;
            let x = &lat.conjugates[bi][ci].1;
            let xi = x.inverse();
            let b = if b_rep.is_trivial() {
                b_rep
            } else {
                PermGroup::new(b_rep.generators().iter().map(|s| xi.then(s).then(x)).collect())?
            };
            Ok(HomogeneousFactorization {
                order: popcount(&lat.reps[ai].0),
                a,
                b,
                intersection_order: m,
                evidence: if ai == bi {
                    Evidence::Conjugate
                } else {
                    Evidence::OrderEqual
                },
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    /// `|G_sub ∩ M|`, the kernel of the action on blocks.
    pub kernel_order: BigUint,
    pub projection_orders: Vec<BigUint>,
    pub projections_equal: bool,
    /// `π(φ_i(G_sub ∩ M))` for each block.
    pub prime_sets: Vec<BTreeSet<u64>>,
}

/// Projections of `G_sub ∩ M` onto the factors of the base group `M` of a
/// wreath product whose blocks are listed in aligned order: point
/// `blocks[i][j]` of block `i` is identified with point `j` of the factor.
pub fn wreath_projection_check(sub: &PermGroup, blocks: &[Vec<usize>]) -> Result<ProjectionReport> {
    let n = sub.degree();
    let k = blocks.len();
    let m = blocks.first().map_or(0, Vec::len);
    let mut block_of = vec![usize::MAX; n];
    for (i, b) in blocks.iter().enumerate() {
        if b.len() != m {
            return Err(Error::Parameter("blocks must have equal size".into()));
        }
        for &x in b {
            if x >= n || block_of[x] != usize::MAX {
                return Err(Error::Parameter("blocks must partition the points".into()));
            }
            block_of[x] = i;
        }
    }
    if block_of.contains(&usize::MAX) {
        return Err(Error::Parameter("blocks must cover the points".into()));
    }
    // Each generator extended by its permutation of the blocks, on points
    // n..n+k.
    let mut extended = Vec::new();
    for g in sub.generators() {
        let mut images: Vec<usize> = (0..n).map(|x| g.apply(x)).collect();
        for b in blocks {
            let target = block_of[g.apply(b[0])];
            if b.iter().any(|&x| block_of[g.apply(x)] != target) {
                return Err(Error::Parameter(format!("{g} does not preserve the blocks")));
            }
            images.push(n + target);
        }
        extended.push(Permutation::from_images(images)?);
    }
    let big = PermGroup::new(extended)?;
    if big.orbit(n)?.len() != k {
        return Err(Error::NotTransitive);
    }
    let tail: Vec<usize> = (n..n + k).collect();
    let kernel = big.tuple_stabilizer(&tail)?;
    let mut projections = Vec::with_capacity(k);
    for b in blocks {
        let gens: Vec<Permutation> = kernel
            .generators()
            .iter()
            .map(|g| g.restrict(b).expect("kernel fixes every block"))
            .collect();
        projections.push(PermGroup::new(gens)?);
    }
    let mut equal = true;
    for p in &projections[1..] {
        equal &= p.same_group(&projections[0])?;
    }
    Ok(ProjectionReport {
        kernel_order: kernel.order().clone(),
        projection_orders: projections.iter().map(|p| p.order().clone()).collect(),
        projections_equal: equal,
        prime_sets: projections.iter().map(PermGroup::prime_divisors).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{affine_subgroup, GroupType};
    use std::collections::HashSet;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn a5_pair() -> (PermGroup, PermGroup, PermGroup) {
        let a6 = PermGroup::alternating(6);
        let h = a6.point_stabilizer(5).unwrap();
        let k = PermGroup::from_cycles(&["(1 2 3 4 5)", "(1 6)(2 5)"], 6).unwrap();
        (a6, h, k)
    }

    #[test]
    fn a6_is_a5_times_a5() {
        let (a6, h, k) = a5_pair();
        let r = is_factorization(&a6, &h, &k).unwrap();
        assert!(r.holds);
        assert_eq!(r.order_intersection, big(10));
        assert_eq!(r.product_order, big(360));
        let s = is_factorization(&a6, &k, &h).unwrap();
        assert_eq!(s, FactorizationResult { order_h: r.order_k.clone(), order_k: r.order_h.clone(), ..r });
    }

    #[test]
    fn factorization_examples() {
        let s4 = PermGroup::symmetric(4);
        let h = s4.point_stabilizer(0).unwrap();
        let r = is_factorization(&s4, &h, &h).unwrap();
        assert!(!r.holds);
        assert_eq!(r.product_order, big(6));
        let k = s4.point_stabilizer(1).unwrap();
        let r = is_factorization(&s4, &h, &k).unwrap();
        assert!(!r.holds);
        assert_eq!(r.order_intersection, big(2));
        assert_eq!(r.product_order, big(18));
        let t = PermGroup::trivial(4);
        assert!(is_factorization(&s4, &s4, &t).unwrap().holds);
        let a4 = PermGroup::alternating(4);
        assert!(matches!(is_factorization(&a4, &s4, &t), Err(Error::NotSubgroup(_))));
    }

    /// All subgroups of a group whose subgroups are 2-generated, as sorted
    /// element lists, split into conjugacy classes by brute force.
    fn brute_force_class_count(g: &PermGroup) -> usize {
        let elems = g.elements(1000).unwrap();
        let mut subgroups: HashSet<Vec<Permutation>> = HashSet::new();
        for a in &elems {
            for b in &elems {
                let mut set: Vec<Permutation> = PermGroup::new(vec![a.clone(), b.clone()])
                    .unwrap()
                    .elements(1000)
                    .unwrap();
                set.sort();
                subgroups.insert(set);
            }
        }
        let mut classes = 0;
        let mut done: HashSet<Vec<Permutation>> = HashSet::new();
        for s in &subgroups {
            if done.contains(s) {
                continue;
            }
            classes += 1;
            for x in &elems {
                let mut c: Vec<Permutation> = s.iter().map(|y| y.conjugate(x).unwrap()).collect();
                c.sort();
                done.insert(c);
            }
        }
        classes
    }

    #[test]
    fn s4_has_eleven_classes() {
        let s4 = PermGroup::symmetric(4);
        let classes = subgroup_classes(&s4, 100).unwrap();
        assert_eq!(classes.len(), 11);
        assert_eq!(brute_force_class_count(&s4), 11);
        assert_eq!(classes.iter().map(|c| c.length).sum::<usize>(), 30);
    }

    #[test]
    fn class_counts_match_brute_force() {
        for g in [
            PermGroup::alternating(4),
            PermGroup::symmetric(3),
            PermGroup::from_cycles(&["(1 2 3 4 5)", "(2 5)(3 4)"], 5).unwrap(),
            PermGroup::from_cycles(&["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 7).unwrap(),
        ] {
            assert_eq!(subgroup_classes(&g, 100).unwrap().len(), brute_force_class_count(&g));
        }
    }

    #[test]
    fn perfect_subgroups_are_found() {
        let classes = subgroup_classes(&PermGroup::alternating(6), 1000).unwrap();
        assert_eq!(classes.len(), 22);
        assert_eq!(classes.iter().filter(|c| c.order == 60).count(), 2);
    }

    #[test]
    fn a6_homogeneous_factorizations() {
        let a6 = PermGroup::alternating(6);
        let found = homogeneous_factorizations(&a6, 3).unwrap();
        assert!(!found.is_empty());
        let pair = found.iter().find(|f| f.order == 60).unwrap();
        assert_eq!(pair.intersection_order, 10);
        assert_eq!(pair.evidence, Evidence::OrderEqual);
        for f in &found {
            assert!(is_factorization(&a6, &f.a, &f.b).unwrap().holds);
            assert_eq!(f.a.order(), f.b.order());
        }
    }

    #[test]
    fn affine_groups_of_degree_nine_have_none() {
        let agl = affine_subgroup(2, 3).unwrap();
        let asl = GroupType::Alt.meet(&agl);
        assert_eq!(asl.order(), &big(216));
        assert!(homogeneous_factorizations(&asl, 3).unwrap().is_empty());
        assert!(homogeneous_factorizations(&agl, 3).unwrap().is_empty());
    }

    #[test]
    fn subgroup_cap_is_enforced() {
        let err = homogeneous_factorizations_capped(&PermGroup::symmetric(6), 3, 100).unwrap_err();
        assert!(matches!(err, Error::Capacity { cap: 100, .. }));
    }

    #[test]
    fn projection_examples() {
        let w = PermGroup::from_cycles(&["(1 2)", "(1 3)(2 4)"], 4).unwrap();
        let r = wreath_projection_check(&w, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(r.projections_equal);
        assert_eq!(r.projection_orders, vec![big(2), big(2)]);

        let diag = PermGroup::from_cycles(&["(1 2 3)(4 5 6)", "(1 2)(4 5)", "(1 4)(2 5)(3 6)"], 6).unwrap();
        let r = wreath_projection_check(&diag, &[vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(r.kernel_order, big(6));
        assert!(r.projections_equal);
        assert_eq!(r.prime_sets[0], BTreeSet::from([2, 3]));

        let intrans = PermGroup::from_cycles(&["(1 2)"], 4).unwrap();
        assert_eq!(
            wreath_projection_check(&intrans, &[vec![0, 1], vec![2, 3]]).unwrap_err(),
            Error::NotTransitive
        );
    }

    #[test]
    fn cyclic_top_group() {
        let g = PermGroup::from_cycles(&["(1 3 2 4)"], 4).unwrap();
        let r = wreath_projection_check(&g, &[vec![0, 1], vec![2, 3]]).unwrap();
        // (1 3 2 4)^2 = (1 2)(3 4) lies in the kernel and projects to S_2 on both.
        assert!(r.projections_equal);
        assert_eq!(r.kernel_order, big(2));
    }
}
