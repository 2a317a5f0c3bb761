//! Pruned breadth-first search over residue classes of `z` modulo `p^t`,
//! collecting every achievable set
//! `w_z = { d | a : (f_d(-z), -1)_p = -1 }` with `(n^a - z^(ab), -1)_p = 1`.
//!
//! Node `(t, z)` has the `p` children `z + j·p^t`. A node is not expanded
//! when `G_{t,z} = { d : v_p(f_d(-z)) + 1 ≥ t }` is empty, since every
//! descendant then has the same `w`. It is also not expanded when
//! `G_{t,z} = {g}` and `w_z \ {g}` or `w_z ∪ {g}` is already known: members
//! of the result have even cardinality, so only one of the two can occur.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{integer_nth_root, prime_divisors_u64, valuation};
use crate::cyclotomic::FdFamily;
use crate::error::{contract, domain, Error, Result};
use crate::hilbert::{odd_part_mod4, symbol_at_prime, Prime, Symbol};

pub const DEFAULT_DEPTH_CAP: u32 = 64;

/// A subset of the divisors of `a`, as a bitmask over the ascending list of
/// divisors (bit `i` stands for the `i`-th smallest divisor).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorSubset(u64);

impl DivisorSubset {
    pub const EMPTY: DivisorSubset = DivisorSubset(0);

    pub fn from_bits(bits: u64) -> Self {
        DivisorSubset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// All of the first `count` divisors.
    pub fn full(count: usize) -> Self {
        if count >= 64 {
            DivisorSubset(u64::MAX)
        } else {
            DivisorSubset((1u64 << count) - 1)
        }
    }

    pub fn singleton(index: usize) -> Self {
        DivisorSubset(1 << index)
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn with(self, index: usize) -> Self {
        DivisorSubset(self.0 | 1 << index)
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        DivisorSubset(self.0 | other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        DivisorSubset(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: Self) -> Self {
        DivisorSubset(self.0 ^ other.0)
    }

    /// Builds a subset from explicit divisors, checked against `divisors`.
    pub fn from_divisors(divisors: &[u64], members: &[u64]) -> Result<Self> {
        members.iter().try_fold(DivisorSubset::EMPTY, |acc, d| {
            match divisors.iter().position(|e| e == d) {
                Some(i) => Ok(acc.with(i)),
                None => domain(format!("{d} is not among the divisors {divisors:?}")),
            }
        })
    }

    pub fn to_divisors(self, divisors: &[u64]) -> Vec<u64> {
        divisors
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.contains(i))
            .map(|(_, &d)| d)
            .collect()
    }

    /// Human-readable form such as `{1,3}`.
    pub fn display<'a>(self, divisors: &'a [u64]) -> impl fmt::Display + 'a {
        struct Shown<'a>(DivisorSubset, &'a [u64]);
        impl fmt::Display for Shown<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self
                    .0
                    .to_divisors(self.1)
                    .iter()
                    .map(u64::to_string)
                    .collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
        Shown(self, divisors)
    }
}

/// A node of the residue tree: depth `t` and a representative `0 ≤ z < p^t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchNode {
    pub t: u32,
    pub z: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CombiStats {
    /// Nodes whose `f_d(-z)` values were computed.
    pub nodes_evaluated: u64,
    /// Nodes whose whole subtree was resolved without being walked.
    pub nodes_settled: u64,
    pub max_depth: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombiResult {
    /// Distinct subsets in discovery order.
    pub subsets: Vec<DivisorSubset>,
    pub stats: CombiStats,
}

impl CombiResult {
    pub fn contains(&self, s: DivisorSubset) -> bool {
        self.subsets.contains(&s)
    }

    pub fn as_set(&self) -> BTreeSet<DivisorSubset> {
        self.subsets.iter().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CombiConfig {
    pub depth_cap: u32,
    /// Stop at classes whose every descendant is known to repeat the node's
    /// own outcome (see [`combi_with`]). Disabling walks the full tree.
    pub skip_settled: bool,
}

impl Default for CombiConfig {
    fn default() -> Self {
        CombiConfig {
            depth_cap: DEFAULT_DEPTH_CAP,
            skip_settled: true,
        }
    }
}

/// Local data at one value of `z`.
struct NodeEval {
    w: DivisorSubset,
    valuations: Vec<u32>,
    accepted: bool,
}

fn eval_node(family: &FdFamily, p: u64, n_pow_a: &BigInt, z: &BigInt) -> Result<NodeEval> {
    let values = family.values_at_neg_z(z);
    let mut w = DivisorSubset::EMPTY;
    let mut valuations = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            return contract(format!(
                "f_{}(-{z}) vanishes; n must not be a q-th power for primes q | b",
                family.divisors()[i]
            ));
        }
        valuations.push(valuation(v, p));
        let negative = match p {
            2 => odd_part_mod4(v) != 1,
            _ => p % 4 == 3 && valuations[i] % 2 == 1,
        };
        if negative {
            w = w.with(i);
        }
    }
    let total = n_pow_a - z.pow((family.a() * family.b()) as u32);
    let accepted = symbol_at_prime(&total, p) == Symbol::One;
    // ∏ f_d(-z) = n^a - z^(ab), so the symbols multiply out to the total.
    debug_assert_eq!(accepted, w.len() % 2 == 0);
    Ok(NodeEval {
        w,
        valuations,
        accepted,
    })
}

fn g_from_valuations(valuations: &[u32], t: u32) -> DivisorSubset {
    valuations
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v + 1 >= t)
        .fold(DivisorSubset::EMPTY, |acc, (i, _)| acc.with(i))
}

/// `w_z`: the divisors `d` of `a` with `(f_d(-z), -1)_p = -1`.
pub fn w_of_z(family: &FdFamily, p: Prime, z: &BigInt) -> Result<DivisorSubset> {
    let n_pow_a = family.n().pow(family.a() as u32);
    eval_node(family, p.get(), &n_pow_a, z).map(|e| e.w)
}

/// `G_{t,z}`: the divisors `d` of `a` with `v_p(f_d(-z)) + 1 ≥ t`.
pub fn g_of_tz(family: &FdFamily, p: Prime, t: u32, z: &BigInt) -> Result<DivisorSubset> {
    let n_pow_a = family.n().pow(family.a() as u32);
    eval_node(family, p.get(), &n_pow_a, z).map(|e| g_from_valuations(&e.valuations, t))
}

/// Checks the standing assumptions: odd `a ≥ 1`, odd `b ≥ 3`, `n ≠ 0` and
/// `n` not a `q`-th power for any prime `q | b`.
pub fn check_preconditions(a: u64, b: u64, n: &BigInt) -> Result<()> {
    if a == 0 || a % 2 == 0 {
        return contract(format!("a = {a} must be odd and positive"));
    }
    if b < 3 || b % 2 == 0 {
        return contract(format!("b = {b} must be odd and at least 3"));
    }
    if n.is_zero() {
        return contract("n must be nonzero");
    }
    if a.checked_mul(b).and_then(|k| u32::try_from(k).ok()).is_none() {
        return contract("a*b does not fit in 32 bits");
    }
    for q in prime_divisors_u64(b) {
        if integer_nth_root(n, q as u32).is_some() {
            return contract(format!("n = {n} is a {q}-th power and {q} divides b = {b}"));
        }
    }
    if crate::arith::divisors(a).len() > 64 {
        return contract(format!("a = {a} has more than 64 divisors"));
    }
    Ok(())
}

/// All achievable `w_z` over `z ≥ 0` with `(n^a - z^(ab), -1)_p = 1`.
pub fn combi(a: u64, b: u64, n: &BigInt, p: Prime) -> Result<CombiResult> {
    check_preconditions(a, b, n)?;
    let family = FdFamily::new(a, b, n.clone())?;
    combi_with(&family, p, CombiConfig::default())
}

/// [`combi`] on a prebuilt family.
///
/// With `skip_settled`, a node `(t, z)` is not expanded when every
/// `v_p(f_d(-z'))` for `z' ≡ z (mod p^t)` is provably equal to
/// `v_p(f_d(-z))`, together with the unit part mod 4 when `p = 2`. Every
/// descendant then has the node's own `w` and acceptance, so the subtree adds
/// nothing to the result. The test compares the difference
/// `f(-z') - f(-z)` against the Taylor coefficients of `f` at `-z`. A
/// depth-1 node at an odd prime with `p ∤ n^a - z^(ab)` is settled without
/// evaluating it at all: every value is a unit and `w = ∅` is accepted. For
/// `p | n` that leaves only `z ≡ 0`, so large primes cost nothing extra.
/// The returned set is the same as with the full walk; only the statistics
/// differ.
pub fn combi_with(family: &FdFamily, p: Prime, config: CombiConfig) -> Result<CombiResult> {
    check_preconditions(family.a(), family.b(), family.n())?;
    let p = p.get();
    if p % 4 == 1 {
        return Ok(CombiResult {
            subsets: vec![DivisorSubset::EMPTY],
            stats: CombiStats::default(),
        });
    }

    let n_pow_a = family.n().pow(family.a() as u32);
    let ab = family.a() * family.b();
    let p_big = BigInt::from(p);
    let n_pow_a_mod_p = n_pow_a.mod_floor(&p_big).to_u64().expect("reduced below p");

    let mut found: Vec<DivisorSubset> = Vec::new();
    let mut seen: HashSet<DivisorSubset> = HashSet::new();
    let mut stats = CombiStats::default();

    let mut level: Vec<BigInt> = vec![BigInt::zero()];
    let mut p_pow_t = BigInt::from(1);
    let mut t: u32 = 0;
    while !level.is_empty() {
        if t > config.depth_cap {
            return Err(Error::DepthExceeded {
                depth: t,
                cap: config.depth_cap,
                a: family.a(),
                b: family.b(),
                n: family.n().to_string(),
                p,
            });
        }
        stats.max_depth = t;
        let mut next = Vec::new();
        for z in level {
            stats.nodes_evaluated += 1;
            let node = eval_node(family, p, &n_pow_a, &z)?;
            if node.accepted && seen.insert(node.w) {
                found.push(node.w);
            }
            let g = g_from_valuations(&node.valuations, t);
            let expand = match g.len() {
                0 => false,
                1 => !seen.contains(&node.w.difference(g)) && !seen.contains(&node.w.union(g)),
                _ => true,
            };
            if !expand {
                continue;
            }
            if config.skip_settled && t > 0 && class_is_settled(family, p, t, &z, &node.valuations) {
                stats.nodes_settled += 1;
                continue;
            }
            if config.skip_settled && t == 0 && p != 2 {
                // Residues with p ∤ n^a - z^(ab) are settled: all values are
                // units there, so w = ∅ and it is accepted.
                let roots = roots_mod_p(n_pow_a_mod_p, ab, p);
                if (roots.len() as u64) < p && seen.insert(DivisorSubset::EMPTY) {
                    found.push(DivisorSubset::EMPTY);
                }
                stats.nodes_settled += p - roots.len() as u64;
                next.extend(roots.into_iter().map(BigInt::from));
                continue;
            }
            for j in 0..p {
                next.push(&z + &p_pow_t * j);
            }
        }
        level = next;
        p_pow_t *= &p_big;
        t += 1;
    }

    Ok(CombiResult {
        subsets: found,
        stats,
    })
}

/// Whether `v_p(f_d(-z'))` (and at `p = 2` the unit part mod 4) is the same
/// for every `z' ≡ z (mod p^t)` and every `d`.
fn class_is_settled(family: &FdFamily, p: u64, t: u32, z: &BigInt, valuations: &[u32]) -> bool {
    let margin = if p == 2 { 2 } else { 1 };
    let x0 = -z;
    family.members().iter().zip(valuations).all(|(f, &v)| {
        let needed = v + margin;
        // Quick exit: the linear term alone already has valuation ≥ t.
        if needed <= t {
            return true;
        }
        // f(x0 + h) - f(x0) = Σ_{k≥1} c_k h^k with v_p(h) ≥ t.
        f.taylor_at(&x0)
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .all(|(k, c)| valuation(c, p) as u64 + k as u64 * t as u64 >= needed as u64)
    })
}

/// The `z` in `[0, p)` with `z^e ≡ c (mod p)`, for `c` already reduced.
fn roots_mod_p(c: u64, e: u64, p: u64) -> Vec<u64> {
    if c == 0 {
        return vec![0];
    }
    (1..p).filter(|&z| pow_mod(z, e, p) == c).collect()
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = base as u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}
