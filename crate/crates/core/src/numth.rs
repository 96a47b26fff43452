//! Exact integer arithmetic for the bounding arguments: p-parts, the Legendre
//! bound on `(n!)_p`, primitive prime divisors, and the two r-part
//! inequalities used to exclude diagonal-type stabilizers.
//!
//! Every comparison is done on exponents of a single prime, multiplied
//! through by `r - 1` where a fractional exponent `k / (r - 1)` appears.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_modular::{Montgomery, Reducer};
use num_prime::nt_funcs::{factorize128, factorize64, is_prime64};
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Result};

/// `a^m - 1` must stay below `2^ZSIGMONDY_BIT_CAP`.
pub const ZSIGMONDY_BIT_CAP: u32 = 127;

/// `prime^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PPart {
    pub prime: u64,
    pub exponent: u32,
}

impl PPart {
    pub fn new(prime: u64, exponent: u32) -> Result<Self> {
        require_prime(prime)?;
        Ok(PPart { prime, exponent })
    }

    pub fn value(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.exponent)
    }
}

pub fn is_prime(n: u64) -> bool {
    is_prime64(n)
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// The largest power of `p` dividing `n`.
pub fn p_part(n: u64, p: u64) -> Result<PPart> {
    if n == 0 {
        return Err(Error::Zero);
    }
    require_prime(p)?;
    let mut rest = n;
    let mut exponent = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        exponent += 1;
    }
    Ok(PPart { prime: p, exponent })
}

/// `π(n)`, the set of prime divisors of `n`.
pub fn prime_set(n: u64) -> Result<BTreeSet<u64>> {
    if n == 0 {
        return Err(Error::Zero);
    }
    Ok(factorize64(n).into_keys().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreBound {
    pub part: PPart,
    /// `exponent < n / (p - 1)`, i.e. `(n!)_p < p^{n/(p-1)}`.
    pub bound_holds: bool,
}

/// `(n!)_p` by Legendre's sum `Σ ⌊n / p^i⌋`, with the strict bound check.
pub fn factorial_p_part(n: u64, p: u64) -> Result<LegendreBound> {
    if n == 0 {
        return Err(Error::Zero);
    }
    require_prime(p)?;
    let mut exponent: u64 = 0;
    let mut q = n / p;
    while q > 0 {
        exponent += q;
        q /= p;
    }
    Ok(LegendreBound {
        part: PPart {
            prime: p,
            exponent: exponent as u32,
        },
        bound_holds: exponent * (p - 1) < n,
    })
}

const TRIAL_LIMIT: u128 = 1 << 20;

fn checked_pow(a: u128, e: u32) -> Option<u128> {
    let v = a.checked_pow(e)?;
    (v < (1u128 << ZSIGMONDY_BIT_CAP)).then_some(v)
}

/// Least primitive prime divisor of `a^m - 1`: a prime dividing it that
/// divides no `a^i - 1` with `i < m`. `None` exactly in Zsigmondy's
/// exceptional cases.
pub fn zsigmondy(a: u64, m: u32) -> Result<Option<u128>> {
    if a < 2 || m < 2 {
        return Err(Error::Parameter(format!("zsigmondy needs a, m >= 2, got ({a}, {m})")));
    }
    let a = a as u128;
    let top = checked_pow(a, m)
        .ok_or_else(|| capacity(format!("{a}^{m}"), ZSIGMONDY_BIT_CAP as u64))?;
    let mut rest = top - 1;
    for i in 1..m {
        let d = a.pow(i) - 1;
        loop {
            let g = rest.gcd(&d);
            if g == 1 {
                break;
            }
            rest /= g;
        }
    }
    if rest == 1 {
        return Ok(None);
    }
    // every primitive prime divisor is 1 mod m
    if num_prime::nt_funcs::is_prime(&rest, None).probably() {
        return Ok(Some(rest));
    }
    let m = m as u128;
    let mut q = m + 1;
    while q < TRIAL_LIMIT && q * q <= rest {
        if rest % q == 0 {
            return Ok(Some(q));
        }
        q += m;
    }
    if q * q > rest {
        return Ok(Some(rest));
    }
    Ok(Some(least_prime_factor(rest)))
}

/// The r-parts entering the diagonal-case inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityInstance {
    /// `|T|_r`
    pub t_r: PPart,
    pub r: u64,
    /// `|φ_1(G_uv ∩ M)|_r`
    pub phi_r: PPart,
    /// `|Out(T)|_r`
    pub out_r: PPart,
    pub k: u32,
}

impl InequalityInstance {
    fn check_primes(&self) -> Result<()> {
        for part in [self.t_r, self.phi_r, self.out_r] {
            if part.prime != self.r {
                return Err(Error::PrimeMismatch(part.prime, self.r));
            }
        }
        Ok(())
    }
}

/// `|T|_r < r |φ|_r^2`. A `false` result contradicts 2-arc-transitivity.
pub fn two_arc_inequality_holds(inst: &InequalityInstance) -> Result<bool> {
    inst.check_primes()?;
    Ok((inst.t_r.exponent as u64) < 1 + 2 * inst.phi_r.exponent as u64)
}

/// `|T|_r^{2k} < r^{k/(r-1)} |φ|_r^{3k} |Out(T)|_r`, compared as
/// `2k e_T (r-1) < k + 3k e_φ (r-1) + e_out (r-1)`. A `false` result
/// contradicts 3-arc-transitivity.
pub fn three_arc_inequality_holds(inst: &InequalityInstance) -> Result<bool> {
    inst.check_primes()?;
    if inst.k < 2 {
        return Err(Error::Parameter(format!("k must be at least 2, got {}", inst.k)));
    }
    let k = inst.k as u128;
    let r1 = (inst.r - 1) as u128;
    let lhs = 2 * k * inst.t_r.exponent as u128 * r1;
    let rhs = k + 3 * k * inst.phi_r.exponent as u128 * r1 + inst.out_r.exponent as u128 * r1;
    Ok(lhs < rhs)
}

/// One row of the r-part tables for the simple groups `T` left over in the
/// diagonal case. `phi_exponent` is an upper bound where the source gives one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub row: u32,
    pub group: &'static str,
    pub r: u64,
    pub t_exponent: u32,
    pub out_order: u64,
    pub phi_exponent: u32,
}

impl TableRow {
    pub fn instance(&self, k: u32) -> InequalityInstance {
        InequalityInstance {
            t_r: PPart {
                prime: self.r,
                exponent: self.t_exponent,
            },
            r: self.r,
            phi_r: PPart {
                prime: self.r,
                exponent: self.phi_exponent,
            },
            out_r: p_part(self.out_order, self.r).expect("table primes are prime"),
            k,
        }
    }
}

const fn row(
    row: u32,
    group: &'static str,
    r: u64,
    t_exponent: u32,
    out_order: u64,
    phi_exponent: u32,
) -> TableRow {
    TableRow {
        row,
        group,
        r,
        t_exponent,
        out_order,
        phi_exponent,
    }
}

/// Rows excluded by the 2-arc inequality.
pub const TWO_ARC_TABLE: [TableRow; 14] = [
    row(9, "PSL3(3)", 3, 3, 2, 1),
    row(11, "PSU3(3)", 3, 3, 2, 1),
    row(12, "PSU3(5)", 5, 3, 6, 1),
    row(14, "PSU4(3)", 3, 6, 8, 2),
    row(15, "PSU5(2)", 3, 5, 2, 1),
    row(16, "PSU6(2)", 3, 6, 6, 2),
    row(17, "PSp4(7)", 7, 4, 2, 1),
    row(18, "Sp4(8)", 3, 4, 6, 1),
    row(21, "G2(3)", 3, 6, 3, 2),
    row(22, "2F4(2)'", 3, 3, 2, 1),
    row(26, "HS", 5, 3, 2, 1),
    row(27, "McL", 3, 6, 2, 2),
    row(28, "Co2", 3, 6, 1, 2),
    row(29, "Co3", 3, 7, 1, 2),
];

/// Rows meant to be excluded by the 3-arc inequality.
pub const THREE_ARC_TABLE: [TableRow; 8] = [
    row(8, "PSL2(8)", 3, 2, 3, 1),
    row(10, "PSL6(2)", 3, 4, 2, 2),
    row(13, "PSU4(2)", 3, 4, 2, 2),
    row(19, "Sp6(2)", 3, 4, 1, 2),
    row(20, "POmega8+(2)", 2, 12, 6, 7),
    row(23, "M11", 3, 2, 1, 1),
    row(24, "M12", 3, 3, 2, 2),
    row(25, "M24", 3, 3, 1, 2),
];

/// Least prime factor of an odd `n > 1` with no prime factor below the trial
/// limit.
fn least_prime_factor(n: u128) -> u128 {
    if num_prime::nt_funcs::is_prime(&n, None).probably() {
        return n;
    }
    let root = n.sqrt();
    if root * root == n {
        return least_prime_factor(root);
    }
    match ecm_split(n) {
        Some(d) => least_prime_factor(d).min(least_prime_factor(n / d)),
        None => factorize128(n).into_keys().next().unwrap_or(n),
    }
}

const ECM_B1: u64 = 2_000;
const ECM_B2: u64 = 200_000;
const ECM_D: u64 = 210;
const ECM_CURVES: u128 = 400;

type Point = (u128, u128);

struct Curve<'a> {
    r: &'a Montgomery<u128>,
    a24: u128,
}

impl Curve<'_> {
    fn dbl(&self, (x, z): Point) -> Point {
        let r = self.r;
        let s = r.sqr(r.add(&x, &z));
        let d = r.sqr(r.sub(&x, &z));
        let t = r.sub(&s, &d);
        (r.mul(&s, &d), r.mul(&t, &r.add(&d, &r.mul(&self.a24, &t))))
    }

    /// `p + q` given `p - q`.
    fn add(&self, p: Point, q: Point, diff: Point) -> Point {
        let r = self.r;
        let u = r.mul(&r.sub(&p.0, &p.1), &r.add(&q.0, &q.1));
        let v = r.mul(&r.add(&p.0, &p.1), &r.sub(&q.0, &q.1));
        (r.mul(&diff.1, &r.sqr(r.add(&u, &v))), r.mul(&diff.0, &r.sqr(r.sub(&u, &v))))
    }

    fn mul(&self, p: Point, k: u64) -> Point {
        if k == 1 {
            return p;
        }
        let (mut r0, mut r1) = (p, self.dbl(p));
        for bit in (0..63 - k.leading_zeros()).rev() {
            if k >> bit & 1 == 1 {
                r0 = self.add(r1, r0, p);
                r1 = self.dbl(r1);
            } else {
                r1 = self.add(r0, r1, p);
                r0 = self.dbl(r0);
            }
        }
        r0
    }
}

/// Elliptic curve method on Montgomery curves in `x : z` coordinates, with
/// the standard baby-step giant-step second stage.
fn ecm_split(n: u128) -> Option<u128> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let r = Montgomery::<u128>::new(n);
    let primes = num_prime::nt_funcs::primes(ECM_B2);
    let mut is_p = vec![false; ECM_B2 as usize + 1];
    for &p in &primes {
        is_p[p as usize] = true;
    }
    let found = |g: u128| (g != 1 && g != n).then_some(g);
    for c in 0..ECM_CURVES {
        let curve = Curve {
            r: &r,
            a24: r.transform(c + 3),
        };
        let mut q = (r.transform(2 * c + 5), r.transform(1));
        for &p in primes.iter().take_while(|&&p| p <= ECM_B1) {
            let mut pk = p;
            while pk * p <= ECM_B1 {
                pk *= p;
            }
            q = curve.mul(q, pk);
        }
        let g = r.residue(q.1).gcd(&n);
        if g == n {
            continue;
        }
        if let Some(g) = found(g) {
            return Some(g);
        }

        // baby steps: [j]Q for odd j < D/2
        let q2 = curve.dbl(q);
        let mut baby = vec![(1u64, q), (3, curve.add(q2, q, q))];
        while baby.last().unwrap().0 + 2 < ECM_D / 2 {
            let (j, pj) = baby[baby.len() - 1];
            let prev = baby[baby.len() - 2].1;
            baby.push((j + 2, curve.add(pj, q2, prev)));
        }
        let giant = curve.mul(q, ECM_D);
        let mut k = ECM_B1 / ECM_D;
        let mut prev = curve.mul(q, (k - 1) * ECM_D);
        let mut cur = curve.mul(q, k * ECM_D);
        let mut acc = r.transform(1);
        while k * ECM_D <= ECM_B2 + ECM_D {
            for &(j, pj) in &baby {
                let hit = |m: u64| m > ECM_B1 && m <= ECM_B2 && is_p[m as usize];
                if hit(k * ECM_D + j) || hit(k * ECM_D - j) {
                    let t = r.sub(&r.mul(&cur.0, &pj.1), &r.mul(&pj.0, &cur.1));
                    acc = r.mul(&acc, &t);
                }
            }
            let next = curve.add(cur, giant, prev);
            prev = cur;
            cur = next;
            k += 1;
        }
        if let Some(g) = found(r.residue(acc).gcd(&n)) {
            return Some(g);
        }
    }
    None
}
