//! The primitive actions of `A_n` and `S_n` coming from the maximal subgroup
//! families: intransitive, imprimitive, affine and wreath subgroups built
//! directly, diagonal and almost simple ones read from a catalog.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Result};
use crate::grp::{coset_action, BlockSystem, GroupAction, Label, PermGroup, DEFAULT_DEGREE_CAP};
use crate::numth::is_prime;
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupType {
    Alt,
    Sym,
}

impl GroupType {
    pub fn ambient(self, n: usize) -> PermGroup {
        match self {
            GroupType::Alt => PermGroup::alternating(n),
            GroupType::Sym => PermGroup::symmetric(n),
        }
    }

    /// `H ∩ G` for `H ≤ S_n`.
    pub fn meet(self, h: &PermGroup) -> PermGroup {
        match self {
            GroupType::Alt => h.even_part(),
            GroupType::Sym => h.clone(),
        }
    }

    pub fn order(self, n: usize) -> BigUint {
        let f: BigUint = (1..=n as u64).product();
        match self {
            GroupType::Alt if n >= 2 => f / 2u32,
            _ => f,
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupType::Alt => "alt",
            GroupType::Sym => "sym",
        })
    }
}

impl FromStr for GroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alt" | "a" => Ok(GroupType::Alt),
            "sym" | "s" => Ok(GroupType::Sym),
            other => Err(Error::Parameter(format!("unknown group type {other:?}"))),
        }
    }
}

/// The six shapes of maximal subgroup of `A_n` / `S_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    Intransitive,
    Imprimitive,
    Affine,
    Diagonal,
    Wreath,
    AlmostSimple,
}

impl FamilyTag {
    /// The single-letter name `a` .. `f`.
    pub fn letter(self) -> char {
        match self {
            FamilyTag::Intransitive => 'a',
            FamilyTag::Imprimitive => 'b',
            FamilyTag::Affine => 'c',
            FamilyTag::Diagonal => 'd',
            FamilyTag::Wreath => 'e',
            FamilyTag::AlmostSimple => 'f',
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).unwrap();
        f.write_str(s.as_str().unwrap())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('-', "_");
        Ok(match t.as_str() {
            "a" | "intransitive" | "subsets" => FamilyTag::Intransitive,
            "b" | "imprimitive" | "partitions" => FamilyTag::Imprimitive,
            "c" | "affine" => FamilyTag::Affine,
            "d" | "diagonal" => FamilyTag::Diagonal,
            "e" | "wreath" | "product" => FamilyTag::Wreath,
            "f" | "almost_simple" => FamilyTag::AlmostSimple,
            _ => return Err(Error::Parameter(format!("unknown family {s:?}"))),
        })
    }
}

/// A family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum ActionFamily {
    /// `(S_m × S_k) ∩ G`, `n = m + k`, `m < k`.
    Intransitive { m: usize, k: usize },
    /// `(S_m ≀ S_k) ∩ G`, `n = mk`.
    Imprimitive { m: usize, k: usize },
    /// `AGL(k, p) ∩ G`, `n = p^k`.
    Affine { k: u32, p: u64 },
    Diagonal,
    /// `(S_m ≀ S_k) ∩ G` in product action, `n = m^k`.
    Wreath { m: usize, k: u32 },
    AlmostSimple,
}

impl ActionFamily {
    pub fn tag(&self) -> FamilyTag {
        match self {
            ActionFamily::Intransitive { .. } => FamilyTag::Intransitive,
            ActionFamily::Imprimitive { .. } => FamilyTag::Imprimitive,
            ActionFamily::Affine { .. } => FamilyTag::Affine,
            ActionFamily::Diagonal => FamilyTag::Diagonal,
            ActionFamily::Wreath { .. } => FamilyTag::Wreath,
            ActionFamily::AlmostSimple => FamilyTag::AlmostSimple,
        }
    }

    /// Checks the parameter constraints against the degree `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let ok = match *self {
            ActionFamily::Intransitive { m, k } => m >= 1 && m < k && m + k == n,
            ActionFamily::Imprimitive { m, k } => m > 1 && k > 1 && m * k == n,
            ActionFamily::Affine { k, p } => {
                k >= 1 && is_prime(p) && (p as u128).checked_pow(k) == Some(n as u128)
            }
            ActionFamily::Wreath { m, k } => {
                m >= 5 && k > 1 && (m as u128).checked_pow(k) == Some(n as u128)
            }
            ActionFamily::Diagonal | ActionFamily::AlmostSimple => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("{self:?} does not fit n = {n}")))
        }
    }
}

impl fmt::Display for ActionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionFamily::Intransitive { m, k } => write!(f, "intransitive(m={m},k={k})"),
            ActionFamily::Imprimitive { m, k } => write!(f, "imprimitive(m={m},k={k})"),
            ActionFamily::Affine { k, p } => write!(f, "affine(k={k},p={p})"),
            ActionFamily::Diagonal => f.write_str("diagonal"),
            ActionFamily::Wreath { m, k } => write!(f, "wreath(m={m},k={k})"),
            ActionFamily::AlmostSimple => f.write_str("almost_simple"),
        }
    }
}

fn binomial(n: usize, m: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..m {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn check_degree(degree: &BigUint, cap: usize, what: &str) -> Result<()> {
    match degree.to_usize() {
        Some(d) if d <= cap => Ok(()),
        _ => Err(capacity(format!("{what} degree {degree}"), cap as u64)),
    }
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < m - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `0..n` into blocks of size `m`, each block sorted and the
/// blocks ordered by least element.
fn partitions(n: usize, m: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(free: &mut Vec<usize>, m: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let first = free.remove(0);
        for rest in subsets(free.len(), m - 1) {
            let mut block = vec![first];
            block.extend(rest.iter().map(|&i| free[i]));
            let remaining: Vec<usize> = free
                .iter()
                .copied()
                .filter(|x| !block.contains(x))
                .collect();
            let saved = std::mem::replace(free, remaining);
            cur.push(block);
            go(free, m, cur, out);
            cur.pop();
            *free = saved;
        }
        free.insert(0, first);
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), m, &mut Vec::new(), &mut out);
    out
}

/// `G` on the `m`-subsets of the `n` points, `m < n - m`.
pub fn subsets_action(n: usize, m: usize, group: GroupType) -> Result<GroupAction> {
    if m == 0 || 2 * m >= n {
        return Err(Error::Parameter(format!("need 1 <= m < n - m, got n={n}, m={m}")));
    }
    let labels = subsets(n, m).into_iter().map(Label::Subset).collect();
    GroupAction::new(group.ambient(n), labels)
}

/// `G` on partitions of the `n` points into `k` blocks of size `m`.
pub fn partition_action(n: usize, m: usize, k: usize, group: GroupType) -> Result<GroupAction> {
    if m < 2 || k < 2 || m * k != n {
        return Err(Error::Parameter(format!("need n = mk with m, k > 1, got n={n}, m={m}, k={k}")));
    }
    let labels = partitions(n, m).into_iter().map(Label::Partition).collect();
    GroupAction::new(group.ambient(n), labels)
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors: Vec<u64> = crate::numth::prime_set(p - 1).unwrap().into_iter().collect();
    (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&q| num_bigint::BigUint::from(g).modpow(&((p - 1) / q).into(), &p.into()) != BigUint::one())
        })
        .unwrap()
}

/// `AGL(k, p)` on the `p^k` vectors of `F_p^k`; vector `v` is point
/// `Σ v_i p^i`.
pub fn affine_subgroup(k: u32, p: u64) -> Result<PermGroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    let n = (p as u128)
        .checked_pow(k)
        .filter(|&n| n <= DEFAULT_DEGREE_CAP as u128)
        .ok_or_else(|| capacity(format!("affine degree {p}^{k}"), DEFAULT_DEGREE_CAP as u64))?
        as usize;
    let k = k as usize;
    let decode = |mut x: usize| -> Vec<u64> {
        (0..k)
            .map(|_| {
                let d = (x as u64) % p;
                x /= p as usize;
                d
            })
            .collect()
    };
    let encode = |v: &[u64]| -> usize { v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize) };
    let linear = |a: &[Vec<u64>]| -> Permutation {
        let images = (0..n)
            .map(|x| {
                let v = decode(x);
                let w: Vec<u64> = (0..k)
                    .map(|i| (0..k).map(|j| a[i][j] * v[j]).sum::<u64>() % p)
                    .collect();
                encode(&w)
            })
            .collect();
        Permutation::from_images(images).unwrap()
    };
    let unit = |i: usize, j: usize| -> Vec<Vec<u64>> {
        let mut a = vec![vec![0u64; k]; k];
        for (d, row) in a.iter_mut().enumerate() {
            row[d] = 1;
        }
        a[i][j] = (a[i][j] + 1) % p;
        a
    };

    let mut gens = Vec::new();
    for i in 0..k {
        let images = (0..n)
            .map(|x| {
                let mut v = decode(x);
                v[i] = (v[i] + 1) % p;
                encode(&v)
            })
            .collect();
        gens.push(Permutation::from_images(images)?);
    }
    let w = primitive_root(p);
    if w != 1 {
        let mut d = unit(0, 0);
        d[0][0] = w;
        gens.push(linear(&d));
    }
    for i in 0..k.saturating_sub(1) {
        gens.push(linear(&unit(i, i + 1)));
        gens.push(linear(&unit(i + 1, i)));
    }
    PermGroup::new(gens)
}

/// `|AGL(k, p)| = p^k ∏ (p^k - p^i)`.
pub fn affine_order(k: u32, p: u64) -> BigUint {
    let q = BigUint::from(p).pow(k);
    (0..k).fold(q.clone(), |acc, i| acc * (&q - BigUint::from(p).pow(i)))
}

/// `(S_m ≀ S_k) ∩ G` in product action on `m^k` points; tuple `x` is point
/// `Σ x_i m^i`.
pub fn product_action(m: usize, k: u32, group: GroupType) -> Result<PermGroup> {
    if m < 5 || k < 2 {
        return Err(Error::Parameter(format!("product action needs m >= 5, k >= 2, got m={m}, k={k}")));
    }
    let n = (m as u128)
        .checked_pow(k)
        .filter(|&n| n <= DEFAULT_DEGREE_CAP as u128)
        .ok_or_else(|| capacity(format!("product action degree {m}^{k}"), DEFAULT_DEGREE_CAP as u64))?
        as usize;
    let k = k as usize;
    let decode = |mut x: usize| -> Vec<usize> {
        (0..k)
            .map(|_| {
                let d = x % m;
                x /= m;
                d
            })
            .collect()
    };
    let encode = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &d| acc * m + d) };
    let build = |f: &dyn Fn(Vec<usize>) -> Vec<usize>| -> Permutation {
        Permutation::from_images((0..n).map(|x| encode(&f(decode(x)))).collect()).unwrap()
    };
    let gens = vec![
        build(&|mut v| {
            v[0] = (v[0] + 1) % m;
            v
        }),
        build(&|mut v| {
            v[0] = match v[0] {
                0 => 1,
                1 => 0,
                d => d,
            };
            v
        }),
        build(&|mut v| {
            v.swap(0, 1);
            v
        }),
        build(&|mut v| {
            v.rotate_left(1);
            v
        }),
    ];
    Ok(group.meet(&PermGroup::new(gens)?))
}

/// The coset action of `A_{m^k}` or `S_{m^k}` on the wreath subgroup. At
/// every reachable size the index is far past `degree_cap`.
pub fn product_coset_action(m: usize, k: u32, group: GroupType, degree_cap: usize) -> Result<GroupAction> {
    let h = product_action(m, k, group)?;
    let n = h.degree();
    let index = group.order(n) / h.order();
    check_degree(&index, degree_cap, "wreath coset action")?;
    coset_action(&group.ambient(n), &h, degree_cap)
}

/// A hand-seeded subgroup whose coset action should be primitive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub n: usize,
    pub group: GroupType,
    pub family: FamilyTag,
    pub generators: Vec<String>,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CatalogFile {
    version: u32,
    entries: Vec<CatalogEntry>,
}

pub const CATALOG_VERSION: u32 = 1;

/// The catalog shipped with the crate.
pub const BUNDLED_CATALOG: &str = include_str!("../data/catalog.json");

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let file: CatalogFile = serde_json::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
    if file.version != CATALOG_VERSION {
        return Err(Error::Catalog(format!("unsupported catalog version {}", file.version)));
    }
    Ok(file.entries)
}

pub fn load_catalog(path: &Path) -> Result<Vec<CatalogEntry>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
    parse_catalog(&text)
}

/// Why a candidate subgroup does not give a primitive action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    NotProper,
    NotInGroup { generator: String },
    /// The coset action preserves this block system, so the subgroup is not
    /// maximal.
    Imprimitive { blocks: BlockSystem },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NotProper => f.write_str("subgroup is the whole group"),
            Rejection::NotInGroup { generator } => write!(f, "generator {generator} not in group"),
            Rejection::Imprimitive { blocks } => write!(
                f,
                "imprimitive: {} blocks of size {}",
                blocks.block_count,
                blocks.block_size()
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Instantiated {
    Accepted(GroupAction),
    Rejected { action: Option<GroupAction>, reason: Rejection },
}

impl Instantiated {
    pub fn accepted(&self) -> Option<&GroupAction> {
        match self {
            Instantiated::Accepted(a) => Some(a),
            Instantiated::Rejected { .. } => None,
        }
    }
}

/// Wraps an action with its primitivity verdict.
pub fn check_primitive(action: GroupAction) -> Result<Instantiated> {
    match action.induced().primitivity_witness()? {
        None => Ok(Instantiated::Accepted(action)),
        Some(blocks) => Ok(Instantiated::Rejected {
            action: Some(action),
            reason: Rejection::Imprimitive { blocks },
        }),
    }
}

/// The coset action of `G` on `⟨generators⟩`, with maximality checked by
/// primitivity.
pub fn instantiate(entry: &CatalogEntry, degree_cap: usize) -> Result<Instantiated> {
    let n = entry.n;
    let g = entry.group.ambient(n);
    let h = PermGroup::from_cycles(&entry.generators, n)?;
    for (text, x) in entry.generators.iter().zip(h.generators()) {
        if !g.contains(x)? {
            return Ok(Instantiated::Rejected {
                action: None,
                reason: Rejection::NotInGroup {
                    generator: text.clone(),
                },
            });
        }
    }
    if h.order() == g.order() {
        return Ok(Instantiated::Rejected {
            action: None,
            reason: Rejection::NotProper,
        });
    }
    check_primitive(coset_action(&g, &h, degree_cap)?)
}

/// One candidate action of `A_n` or `S_n`.
#[derive(Clone, Debug)]
pub enum ActionSpec {
    Family {
        n: usize,
        group: GroupType,
        family: ActionFamily,
    },
    Catalog(CatalogEntry),
}

impl ActionSpec {
    pub fn n(&self) -> usize {
        match self {
            ActionSpec::Family { n, .. } => *n,
            ActionSpec::Catalog(e) => e.n,
        }
    }

    pub fn group(&self) -> GroupType {
        match self {
            ActionSpec::Family { group, .. } => *group,
            ActionSpec::Catalog(e) => e.group,
        }
    }

    pub fn family_tag(&self) -> FamilyTag {
        match self {
            ActionSpec::Family { family, .. } => family.tag(),
            ActionSpec::Catalog(e) => e.family,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ActionSpec::Family { family, .. } => family.to_string(),
            ActionSpec::Catalog(e) => format!("catalog {}: {}", e.family, e.provenance),
        }
    }

    /// The degree predicted from the subgroup order, before building.
    pub fn expected_degree(&self) -> Option<BigUint> {
        let ActionSpec::Family { n, group, family } = self else {
            return None;
        };
        let n = *n;
        let fact = |x: usize| -> BigUint { (1..=x as u64).product() };
        Some(match *family {
            ActionFamily::Intransitive { m, .. } => binomial(n, m),
            ActionFamily::Imprimitive { m, k } => fact(n) / (fact(m).pow(k as u32) * fact(k)),
            ActionFamily::Affine { k, p } => {
                let h = affine_order(k, p);
                // AGL(k,p) lies in A_n exactly for p = 2, k >= 3.
                let in_alt = p == 2 && k >= 3;
                match group {
                    GroupType::Sym => fact(n) / h,
                    GroupType::Alt if in_alt => group.order(n) / h,
                    GroupType::Alt => fact(n) / h,
                }
            }
            ActionFamily::Wreath { m, k } => fact(n) / (fact(m).pow(k) * fact(k as usize)),
            ActionFamily::Diagonal | ActionFamily::AlmostSimple => return None,
        })
    }

    /// Builds the action and checks that it is primitive. Actions larger
    /// than `degree_cap` fail with a capacity error.
    pub fn build(&self, degree_cap: usize) -> Result<Instantiated> {
        if let Some(d) = self.expected_degree() {
            check_degree(&d, degree_cap, &self.describe())?;
        }
        match self {
            ActionSpec::Catalog(e) => instantiate(e, degree_cap),
            ActionSpec::Family { n, group, family } => {
                family.validate(*n)?;
                let action = match *family {
                    ActionFamily::Intransitive { m, .. } => subsets_action(*n, m, *group)?,
                    ActionFamily::Imprimitive { m, k } => partition_action(*n, m, k, *group)?,
                    ActionFamily::Affine { k, p } => {
                        let h = group.meet(&affine_subgroup(k, p)?);
                        coset_action(&group.ambient(*n), &h, degree_cap)?
                    }
                    ActionFamily::Wreath { m, k } => product_coset_action(m, k, *group, degree_cap)?,
                    ActionFamily::Diagonal | ActionFamily::AlmostSimple => {
                        return Err(Error::Parameter(format!("{family} actions come from the catalog")))
                    }
                };
                check_primitive(action)
            }
        }
    }
}

/// Every programmatic family action of `A_n` / `S_n` whose tag is listed.
pub fn family_specs(n: usize, group: GroupType, tags: &[FamilyTag]) -> Vec<ActionSpec> {
    let mut out = Vec::new();
    let mut push = |family: ActionFamily| {
        if tags.contains(&family.tag()) {
            out.push(ActionSpec::Family { n, group, family });
        }
    };
    for m in 1..n {
        if m < n - m {
            push(ActionFamily::Intransitive { m, k: n - m });
        }
    }
    for m in 2..n {
        if n.is_multiple_of(m) && n / m > 1 {
            push(ActionFamily::Imprimitive { m, k: n / m });
        }
    }
    for p in 2..=n as u64 {
        if !is_prime(p) {
            continue;
        }
        let mut q = p as usize;
        let mut k = 1;
        while q < n {
            q *= p as usize;
            k += 1;
        }
        if q == n {
            push(ActionFamily::Affine { k, p });
        }
    }
    for m in 5..n {
        let mut q = m * m;
        let mut k = 2;
        while q < n {
            q *= m;
            k += 1;
        }
        if q == n {
            push(ActionFamily::Wreath { m, k });
        }
    }
    out
}
