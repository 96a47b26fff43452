//! Subgroup intersection by backtrack over base images.

use num_traits::ToPrimitive;

use super::chain::StabilizerChain;
use super::PermGroup;
use crate::error::{capacity, Error, Result};
use crate::perm::Permutation;

/// `H ∩ K`. Both chains are rebuilt over a common base and the elements of
/// the smaller group are walked level by level, pruning every branch whose
/// partial base image cannot be matched in the other group. Fails when the
/// search visits more than `cap` nodes.
pub fn intersection(h: &PermGroup, k: &PermGroup, cap: u64) -> Result<PermGroup> {
    check_same_degree(h, k)?;
    let (small, large) = if h.order() <= k.order() { (h, k) } else { (k, h) };
    if small.is_trivial() {
        return Ok(PermGroup::trivial(h.degree()));
    }
    if large.contains_group(small)? {
        return Ok(small.clone());
    }
    let mut base = small.chain().base();
    for b in large.chain().base() {
        if !base.contains(&b) {
            base.push(b);
        }
    }
    let hc = small.chain_with_base(&base)?;
    let kc = large.chain_with_base(&base)?;
    debug_assert_eq!(hc.base(), kc.base());

    let mut search = Search {
        hc: &hc,
        kc: &kc,
        nodes: 0,
        cap,
        found: PermGroup::trivial(h.degree()),
    };
    let id = Permutation::identity(h.degree());
    search.descend(0, &id, &id)?;
    Ok(search.found)
}

struct Search<'a> {
    hc: &'a StabilizerChain,
    kc: &'a StabilizerChain,
    nodes: u64,
    cap: u64,
    found: PermGroup,
}

impl Search<'_> {
    /// `p` and `q` are the partial products `u_j .. u_1` in the two chains;
    /// they agree on the first `level` base points.
    fn descend(&mut self, level: usize, p: &Permutation, q: &Permutation) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(capacity("intersection search nodes", self.cap));
        }
        if level == self.hc.levels.len() {
            if p == q && !self.found.contains(p)? {
                let mut gens: Vec<Permutation> = self.found.generators().to_vec();
                gens.retain(|g| !g.is_identity());
                gens.push(p.clone());
                self.found = PermGroup::new(gens)?;
            }
            return Ok(());
        }
        let hl = &self.hc.levels[level];
        let kl = &self.kc.levels[level];
        let q_inv = q.inverse();
        for &beta in &hl.orbit {
            let gamma = p.apply(beta);
            let beta_k = q_inv.apply(gamma);
            let Some(v) = kl.transversal[beta_k].as_ref() else {
                continue;
            };
            let u = hl.transversal[beta].as_ref().unwrap();
            let np = u.then(p);
            let nq = v.then(q);
            self.descend(level + 1, &np, &nq)?;
        }
        Ok(())
    }
}

/// `H ∩ K` by listing the smaller group and testing membership in the other.
pub fn intersection_by_enumeration(h: &PermGroup, k: &PermGroup, cap: u64) -> Result<PermGroup> {
    check_same_degree(h, k)?;
    let (small, large) = if h.order() <= k.order() { (h, k) } else { (k, h) };
    if small.order().to_u64().is_none_or(|o| o > cap) {
        return Err(capacity(format!("order {}", small.order()), cap));
    }
    let mut found = PermGroup::trivial(h.degree());
    for g in small.elements(cap)? {
        if large.contains(&g)? && !found.contains(&g)? {
            let mut gens: Vec<Permutation> = found.generators().to_vec();
            gens.retain(|x| !x.is_identity());
            gens.push(g);
            found = PermGroup::new(gens)?;
        }
    }
    Ok(found)
}

fn check_same_degree(h: &PermGroup, k: &PermGroup) -> Result<()> {
    if h.degree() != k.degree() {
        return Err(Error::IncompatibleDegree {
            left: h.degree(),
            right: k.degree(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::DEFAULT_ENUMERATION_CAP as CAP;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn self_intersection() {
        let g = PermGroup::symmetric(6);
        assert!(intersection(&g, &g, CAP).unwrap().same_group(&g).unwrap());
    }

    #[test]
    fn two_point_stabilizers_of_s5() {
        let s5 = PermGroup::symmetric(5);
        let a = s5.point_stabilizer(0).unwrap();
        let b = s5.point_stabilizer(1).unwrap();
        let i = intersection(&a, &b, CAP).unwrap();
        assert_eq!(i.order(), &BigUint::from(6u32));
        assert!(i.same_group(&s5.tuple_stabilizer(&[0, 1]).unwrap()).unwrap());
    }

    #[test]
    fn the_two_a5_classes_in_a6_meet_in_order_10() {
        let a6 = PermGroup::alternating(6);
        let intransitive = a6.point_stabilizer(5).unwrap();
        let transitive = PermGroup::from_cycles(&["(1 2 3 4 5)", "(1 6)(2 5)"], 6).unwrap();
        assert_eq!(transitive.order(), &BigUint::from(60u32));
        let by_search = intersection(&intransitive, &transitive, CAP).unwrap();
        let by_listing = intersection_by_enumeration(&intransitive, &transitive, CAP).unwrap();
        assert_eq!(by_listing.order(), &BigUint::from(10u32));
        assert!(by_search.same_group(&by_listing).unwrap());
    }

    #[test]
    fn search_agrees_with_enumeration_on_random_subgroups() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(3..8);
            let s = PermGroup::symmetric(n);
            let mut pick = |k: usize| {
                let gens: Vec<_> = (0..k).map(|_| s.random_element(&mut rng)).collect();
                PermGroup::new(gens).unwrap()
            };
            let h = pick(1);
            let k = pick(2);
            let a = intersection(&h, &k, CAP).unwrap();
            let b = intersection_by_enumeration(&h, &k, CAP).unwrap();
            assert!(a.same_group(&b).unwrap());
        }
    }

    #[test]
    fn node_cap_is_reported() {
        let a = PermGroup::symmetric(8).point_stabilizer(0).unwrap();
        let b = PermGroup::alternating(8);
        let err = intersection(&a, &b, 10).unwrap_err();
        assert!(matches!(err, Error::Capacity { cap: 10, .. }));
    }
}
