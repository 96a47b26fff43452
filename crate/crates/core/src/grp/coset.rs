//! Group actions on labelled point sets, including actions on right cosets.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::chain::StabilizerChain;
use super::PermGroup;
use crate::error::{capacity, Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelKind {
    Point,
    Subset,
    Partition,
    Tuple,
    Coset,
}

/// A point of the induced action.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Point(usize),
    /// Sorted subset of the underlying points.
    Subset(Vec<usize>),
    /// Blocks sorted internally and by least element.
    Partition(Vec<Vec<usize>>),
    Tuple(Vec<usize>),
    /// Lexicographically least element of the right coset `Hg`.
    Coset(Permutation),
}

impl Label {
    pub fn kind(&self) -> LabelKind {
        match self {
            Label::Point(_) => LabelKind::Point,
            Label::Subset(_) => LabelKind::Subset,
            Label::Partition(_) => LabelKind::Partition,
            Label::Tuple(_) => LabelKind::Tuple,
            Label::Coset(_) => LabelKind::Coset,
        }
    }
}

/// An abstract group acting on labels, with the induced permutation group on
/// label indices. For coset actions the subgroup is kept so that images of
/// arbitrary elements can be recomputed.
#[derive(Clone, Debug)]
pub struct GroupAction {
    abstract_group: PermGroup,
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    induced: PermGroup,
    kind: LabelKind,
    coset_subgroup: Option<CosetData>,
}

#[derive(Clone, Debug)]
struct CosetData {
    subgroup: PermGroup,
    full_chain: StabilizerChain,
}

impl GroupAction {
    /// Builds the action from labels closed under the generators of `group`.
    pub fn new(group: PermGroup, labels: Vec<Label>) -> Result<Self> {
        Self::assemble(group, labels, None)
    }

    fn assemble(group: PermGroup, labels: Vec<Label>, coset: Option<CosetData>) -> Result<Self> {
        let kind = labels
            .first()
            .map(Label::kind)
            .ok_or_else(|| Error::Parameter("empty label set".into()))?;
        let index: HashMap<Label, usize> = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        if index.len() != labels.len() {
            return Err(Error::Parameter("duplicate labels".into()));
        }
        let mut action = GroupAction {
            abstract_group: group,
            labels,
            index,
            induced: PermGroup::trivial(1),
            kind,
            coset_subgroup: coset,
        };
        let gens = action
            .abstract_group
            .generators()
            .iter()
            .map(|g| action.induce(g))
            .collect::<Result<Vec<_>>>()?;
        action.induced = PermGroup::new(gens)?;
        Ok(action)
    }

    pub fn abstract_group(&self) -> &PermGroup {
        &self.abstract_group
    }

    pub fn induced(&self) -> &PermGroup {
        &self.induced
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn kind(&self) -> LabelKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.labels.len()
    }

    pub fn label_index(&self, label: &Label) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Order of the stabilizer of a label in the induced group.
    pub fn stabilizer_order(&self) -> BigUint {
        self.induced.order() / BigUint::from(self.degree())
    }

    /// The subgroup whose cosets are the points, for coset actions.
    pub fn coset_subgroup(&self) -> Option<&PermGroup> {
        self.coset_subgroup.as_ref().map(|c| &c.subgroup)
    }

    /// Image of a label under an element of the abstract group.
    pub fn image(&self, label: &Label, g: &Permutation) -> Result<Label> {
        Ok(match label {
            Label::Point(x) => Label::Point(g.apply(*x)),
            Label::Subset(s) => {
                let mut t: Vec<usize> = s.iter().map(|&x| g.apply(x)).collect();
                t.sort_unstable();
                Label::Subset(t)
            }
            Label::Partition(blocks) => {
                let mut out: Vec<Vec<usize>> = blocks
                    .iter()
                    .map(|b| {
                        let mut t: Vec<usize> = b.iter().map(|&x| g.apply(x)).collect();
                        t.sort_unstable();
                        t
                    })
                    .collect();
                out.sort();
                Label::Partition(out)
            }
            Label::Tuple(t) => Label::Tuple(t.iter().map(|&x| g.apply(x)).collect()),
            Label::Coset(c) => {
                let data = self
                    .coset_subgroup
                    .as_ref()
                    .ok_or_else(|| Error::Parameter("coset label without subgroup".into()))?;
                Label::Coset(min_coset_rep(&data.full_chain, &c.then(g)))
            }
        })
    }

    /// The permutation of label indices induced by `g`.
    pub fn induce(&self, g: &Permutation) -> Result<Permutation> {
        let images = self
            .labels
            .iter()
            .map(|l| {
                let img = self.image(l, g)?;
                self.index
                    .get(&img)
                    .copied()
                    .ok_or_else(|| Error::Parameter(format!("label set not closed: {img:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }

    /// Checks `induce(a b) = induce(a) induce(b)` on all pairs of generators.
    pub fn verify_homomorphism(&self) -> Result<bool> {
        let gens = self.abstract_group.generators();
        for a in gens {
            let ia = self.induce(a)?;
            for b in gens {
                let lhs = self.induce(&a.then(b))?;
                if lhs != ia.then(&self.induce(b)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Least element of the right coset `H c` in the lexicographic order of image
/// tables. `chain` must be a chain for `H` with base `0, 1, .., n-1`.
fn min_coset_rep(chain: &StabilizerChain, c: &Permutation) -> Permutation {
    let mut rep = c.clone();
    for lv in &chain.levels {
        let best = lv
            .orbit
            .iter()
            .copied()
            .min_by_key(|&y| rep.apply(y))
            .unwrap();
        rep = lv.transversal[best].as_ref().unwrap().then(&rep);
    }
    rep
}

/// The action of `G` by right multiplication on the right cosets of `H`.
///
/// Labels are the least coset elements sorted lexicographically, so the
/// coset `H` itself is label 0 and its stabilizer is `H`.
pub fn coset_action(g: &PermGroup, h: &PermGroup, degree_cap: usize) -> Result<GroupAction> {
    if g.degree() != h.degree() {
        return Err(Error::IncompatibleDegree {
            left: g.degree(),
            right: h.degree(),
        });
    }
    if !g.contains_group(h)? {
        return Err(Error::NotSubgroup(
            "a generator of H is not in G".to_string(),
        ));
    }
    let index = g.order() / h.order();
    match index.to_usize() {
        Some(i) if i <= degree_cap => {}
        _ => return Err(capacity(format!("coset action degree {index}"), degree_cap as u64)),
    }
    let n = g.degree();
    let full_base: Vec<usize> = (0..n).collect();
    let full_chain = h.chain_with_base(&full_base)?;

    let start = min_coset_rep(&full_chain, &Permutation::identity(n));
    let mut seen: HashMap<Permutation, ()> = HashMap::new();
    seen.insert(start.clone(), ());
    let mut queue = vec![start];
    let mut i = 0;
    while i < queue.len() {
        let c = queue[i].clone();
        for x in g.generators() {
            let next = min_coset_rep(&full_chain, &c.then(x));
            if seen.insert(next.clone(), ()).is_none() {
                queue.push(next);
            }
        }
        i += 1;
    }
    queue.sort();
    let labels = queue.into_iter().map(Label::Coset).collect();
    GroupAction::assemble(
        g.clone(),
        labels,
        Some(CosetData {
            subgroup: h.clone(),
            full_chain,
        }),
    )
}
