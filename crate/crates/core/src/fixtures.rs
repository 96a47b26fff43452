//! Small actions used to exercise the orbital and s-arc machinery. None of
//! them is an action of an alternating or symmetric group of degree at
//! least 5; they exist because such actions rarely have directed orbitals
//! at tiny degree.

use crate::grp::{GroupAction, Label, PermGroup};
use crate::perm::Permutation;

pub struct Fixture {
    pub name: &'static str,
    pub action: GroupAction,
}

fn natural(g: PermGroup) -> GroupAction {
    let labels = (0..g.degree()).map(Label::Point).collect();
    GroupAction::new(g, labels).expect("point labels are closed")
}

fn cycle_on(points: &[usize], degree: usize) -> Permutation {
    let mut images: Vec<usize> = (0..degree).collect();
    for (i, &x) in points.iter().enumerate() {
        images[x] = points[(i + 1) % points.len()];
    }
    Permutation::from_images(images).unwrap()
}

/// `Z_n` rotating a directed `n`-cycle.
pub fn directed_cycle(n: usize) -> GroupAction {
    let pts: Vec<usize> = (0..n).collect();
    natural(PermGroup::new(vec![cycle_on(&pts, n)]).unwrap())
}

/// The Frobenius group `7:3` on 7 points.
pub fn frobenius21() -> GroupAction {
    natural(PermGroup::from_cycles(&["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 7).unwrap())
}

pub fn symmetric_natural(n: usize) -> GroupAction {
    natural(PermGroup::symmetric(n))
}

pub fn alternating_natural(n: usize) -> GroupAction {
    natural(PermGroup::alternating(n))
}

/// The dihedral group of order `2n` on the `n`-gon.
pub fn dihedral(n: usize) -> GroupAction {
    let pts: Vec<usize> = (0..n).collect();
    let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    natural(PermGroup::new(vec![cycle_on(&pts, n), Permutation::from_images(reflection).unwrap()]).unwrap())
}

/// `S_m ≀ Z_k` on the lexicographic product `C_k[m K_1]`: vertex `(i, j)`
/// is point `i m + j`, and every vertex of layer `i` points to every vertex
/// of layer `i + 1`. The layer-to-next-layer orbital has s_max `k - 1`.
pub fn blown_up_cycle(k: usize, m: usize) -> GroupAction {
    let n = k * m;
    let layer0: Vec<usize> = (0..m).collect();
    let mut gens = vec![cycle_on(&layer0, n)];
    if m > 2 {
        gens.push(cycle_on(&[0, 1], n));
    }
    let shift: Vec<usize> = (0..n).map(|x| (x + m) % n).collect();
    gens.push(Permutation::from_images(shift).unwrap());
    natural(PermGroup::new(gens).unwrap())
}

pub fn all() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "cycle5",
            action: directed_cycle(5),
        },
        Fixture {
            name: "frobenius21",
            action: frobenius21(),
        },
        Fixture {
            name: "s3",
            action: symmetric_natural(3),
        },
        Fixture {
            name: "a3",
            action: alternating_natural(3),
        },
        Fixture {
            name: "d10",
            action: dihedral(5),
        },
        Fixture {
            name: "blowup3x3",
            action: blown_up_cycle(3, 3),
        },
        Fixture {
            name: "blowup4x2",
            action: blown_up_cycle(4, 2),
        },
    ]
}

pub fn by_name(name: &str) -> Option<GroupAction> {
    all().into_iter().find(|f| f.name == name).map(|f| f.action)
}

pub fn names() -> Vec<&'static str> {
    all().into_iter().map(|f| f.name).collect()
}
