//! Brute-force checks that do not share code with the decision procedure:
//! explicit integral solutions, and direct scans of `z` modulo `p^depth`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    divisors, factorize, is_sum_of_two_squares, is_sum_of_two_squares_factored, largest_power_divisor, valuation,
};
use crate::combi::{check_preconditions, DivisorSubset};
use crate::decide::bigint_string;
use crate::error::{contract, Result};
use crate::hilbert::{odd_part_mod4, InvariantValue, Prime};

/// Values of `N` up to which two squares are found by scanning `x`.
const SCAN_LIMIT: u64 = 1_000_000_000_000;

/// `x^2 + y^2 + z^k = m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "bigint_string")]
    pub x: BigInt,
    #[serde(with = "bigint_string")]
    pub y: BigInt,
    #[serde(with = "bigint_string")]
    pub z: BigInt,
}

impl Witness {
    pub fn verify(&self, k: u64, m: &BigInt) -> bool {
        &self.x * &self.x + &self.y * &self.y + self.z.pow(k as u32) == *m
    }
}

/// Searches `z = 0, -1, 1, -2, 2, ...` with `|z| ≤ z_bound` for an integral
/// solution of `x^2 + y^2 + z^k = m`, returning the first one found.
pub fn witness_search(k: u64, m: &BigInt, z_bound: u64) -> Option<Witness> {
    let k32 = u32::try_from(k).ok()?;
    // For m = n^a with a | k, m - z^k = n^a - (z^(k/a))^a splits into the
    // f_d(-z), which makes most values cheap to rule out.
    let split = (m.is_positive() || k % 2 == 1)
        .then(|| largest_power_divisor(m, k).ok())
        .flatten()
        .filter(|&(a, _)| a > 1 && a < k);
    let zs = std::iter::once(0i64).chain((1..=z_bound as i64).flat_map(|z| [-z, z]));
    for z in zs {
        let z = BigInt::from(z);
        let rest = m - z.pow(k32);
        if rest.is_negative() {
            continue;
        }
        let representable = match &split {
            Some((a, n)) if !rest.is_zero() => match fd_values_by_division(*a, k / a, n, &z) {
                Ok(parts) => is_sum_of_two_squares_factored(&parts),
                Err(_) => is_sum_of_two_squares(&rest),
            },
            _ => is_sum_of_two_squares(&rest),
        };
        if !representable {
            continue;
        }
        let (x, y) = two_squares(&rest).expect("sum of two squares has a decomposition");
        let w = Witness { x, y, z };
        debug_assert!(w.verify(k, m));
        return Some(w);
    }
    None
}

/// Some `(x, y)` with `0 ≤ x ≤ y` and `x^2 + y^2 = n`. Small `n` are scanned
/// by ascending `x`; larger ones are assembled from Gaussian prime factors.
pub fn two_squares(n: &BigInt) -> Option<(BigInt, BigInt)> {
    if n.is_negative() {
        return None;
    }
    if let Some(small) = n.to_u64().filter(|&v| v <= SCAN_LIMIT) {
        return two_squares_scan(small).map(|(x, y)| (x.into(), y.into()));
    }
    if !is_sum_of_two_squares(n) {
        return None;
    }
    let f = factorize(n).ok()?;
    let mut re = BigInt::one();
    let mut im = BigInt::zero();
    for (p, e) in f.factors() {
        let p = BigInt::from(p.clone());
        let (u, v, e) = if p == BigInt::from(2) {
            (BigInt::one(), BigInt::one(), *e)
        } else if (&p % 4u32) == BigInt::from(3) {
            (p.pow(e / 2), BigInt::zero(), 1)
        } else {
            let (u, v) = prime_two_squares(&p)?;
            (u, v, *e)
        };
        for _ in 0..e {
            (re, im) = (&re * &u - &im * &v, &re * &v + &im * &u);
        }
    }
    let (x, y) = (re.abs(), im.abs());
    debug_assert_eq!(&x * &x + &y * &y, *n);
    Some(if x <= y { (x, y) } else { (y, x) })
}

fn two_squares_scan(n: u64) -> Option<(u64, u64)> {
    let mut x = 0u64;
    while 2 * x * x <= n {
        let rest = n - x * x;
        let y = rest.sqrt();
        if y * y == rest {
            return Some((x, y));
        }
        x += 1;
    }
    None
}

/// `p = u^2 + v^2` for a prime `p ≡ 1 mod 4`, by running Euclid on `p` and
/// a square root of `-1`.
fn prime_two_squares(p: &BigInt) -> Option<(BigInt, BigInt)> {
    let exp: BigInt = (p - 1u32) / 4u32;
    let minus_one = p - 1u32;
    let t = (2u32..10_000)
        .map(|c| BigInt::from(c).modpow(&exp, p))
        .find(|t| (t * t) % p == minus_one)?;
    let (mut a, mut b) = (p.clone(), t);
    while &b * &b > *p {
        (a, b) = (b.clone(), a % b);
    }
    let rest: BigInt = p - &b * &b;
    let v = rest.sqrt();
    (&v * &v == rest).then_some((b, v))
}

/// Walks residue classes of `z` modulo `p^t`, `t ≤ depth`, and reports the
/// outcome of every class. `classify(z, t)` returns the outcome at `z` and
/// whether it is constant on `z + p^t Z_p`. A class is refined until its
/// outcome is settled or `t = depth`, so the reported outcomes are exactly
/// those of the points of `[0, p^depth)`.
fn scan_classes<T, F>(p: u64, depth: u32, mut classify: F) -> Result<Vec<T>>
where
    F: FnMut(&BigInt, u32) -> Result<(T, bool)>,
{
    let p_big = BigInt::from(p);
    let mut out = Vec::new();
    let mut stack = vec![(0u32, BigInt::zero(), BigInt::one())];
    while let Some((t, z, p_pow_t)) = stack.pop() {
        let (outcome, settled) = classify(&z, t)?;
        if settled || t == depth {
            out.push(outcome);
            continue;
        }
        let next_pow = &p_pow_t * &p_big;
        for j in 0..p {
            stack.push((t + 1, &z + &p_pow_t * j, next_pow.clone()));
        }
    }
    Ok(out)
}

/// Whether `c - z^e` has constant Hilbert symbol at `p` on `z + p^t Z_p`,
/// given its `value` at `z`. Expanding `(z + p^t h)^e` bounds the change
/// from below; it is harmless once it exceeds `v_p(value)` by 1 (by 2 at
/// `p = 2`).
fn binomial_is_settled(value: &BigInt, z: &BigInt, e: u64, t: u32, p: u64) -> bool {
    if value.is_zero() {
        return false;
    }
    let need = valuation(value, p) as u64 + if p == 2 { 2 } else { 1 };
    let t = t as u64;
    if z.is_zero() {
        return t * e >= need;
    }
    let vz = valuation(z, p) as u64;
    (1..=e).all(|j| binomial_valuation(e, j, p) + (e - j) * vz + t * j >= need)
}

/// `v_p` of the binomial coefficient `C(e, j)`.
fn binomial_valuation(e: u64, j: u64, p: u64) -> u64 {
    let vf = |mut x: u64| {
        let mut v = 0;
        while x > 0 {
            x /= p;
            v += x;
        }
        v
    };
    vf(e) - vf(j) - vf(e - j)
}

fn symbol_is_one(v: &BigInt, p: u64) -> bool {
    match p {
        2 => odd_part_mod4(v) == 1,
        _ if p % 4 == 1 => true,
        _ => valuation(v, p) % 2 == 0,
    }
}

/// `f_d(-z)` for every divisor `d` of `a`, ascending, from
/// `n^d - z^(db) = ∏_{d' | d} f_{d'}(-z)`.
pub fn fd_values_by_division(a: u64, b: u64, n: &BigInt, z: &BigInt) -> Result<Vec<BigInt>> {
    let divs = divisors(a);
    let mut values: Vec<BigInt> = Vec::with_capacity(divs.len());
    for (i, &d) in divs.iter().enumerate() {
        let whole = n.pow(d as u32) - z.pow((d * b) as u32);
        let below: BigInt = divs[..i]
            .iter()
            .zip(&values)
            .filter(|(e, _)| d % **e == 0)
            .map(|(_, v)| v.clone())
            .product();
        if below.is_zero() {
            return contract(format!("f_d(-{z}) vanishes for a proper divisor of {d}"));
        }
        let (q, r) = whole.div_rem(&below);
        debug_assert!(r.is_zero());
        values.push(q);
    }
    Ok(values)
}

/// `{ w_z : 0 ≤ z < p^depth, (n^a - z^(ab), -1)_p = 1 }`, a subset of
/// [`crate::combi::combi`] computed without the search tree or cyclotomic
/// polynomials.
pub fn residue_scan_c(a: u64, b: u64, n: &BigInt, p: Prime, depth: u32) -> Result<BTreeSet<DivisorSubset>> {
    check_preconditions(a, b, n)?;
    let p = p.get();
    let n_pow_a = n.pow(a as u32);
    let divs = divisors(a);
    let outcomes = scan_classes(p, depth, |z, t| {
        let values = fd_values_by_division(a, b, n, z)?;
        let total = &n_pow_a - z.pow((a * b) as u32);
        // Each f_d(-z) is a product of powers of the n^e - z^(eb), e | d.
        let settled = divs.iter().all(|&e| {
            let g = n.pow(e as u32) - z.pow((e * b) as u32);
            binomial_is_settled(&g, z, e * b, t, p)
        });
        if total.is_zero() || !symbol_is_one(&total, p) {
            return Ok((None, settled));
        }
        let w = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !symbol_is_one(v, p))
            .fold(DivisorSubset::EMPTY, |acc, (i, _)| acc.with(i));
        Ok((Some(w), settled))
    })?;
    Ok(outcomes.into_iter().flatten().collect())
}

/// The local invariants attained by `z` in `[0, p^depth)`: `0` or `1/2`
/// according to `(n - z^b, -1)_p`, over those `z` with
/// `(n^a - z^(ab), -1)_p = 1`.
pub fn invariant_scan(a: u64, b: u64, n: &BigInt, p: Prime, depth: u32) -> Result<BTreeSet<InvariantValue>> {
    let p = p.get();
    let n_pow_a = n.pow(a as u32);
    let outcomes = scan_classes(p, depth, |z, t| {
        let total = &n_pow_a - z.pow((a * b) as u32);
        let linear = n - z.pow(b as u32);
        let settled = binomial_is_settled(&total, z, a * b, t, p) && binomial_is_settled(&linear, z, b, t, p);
        let outcome = if total.is_zero() || linear.is_zero() || !symbol_is_one(&total, p) {
            None
        } else if symbol_is_one(&linear, p) {
            Some(InvariantValue::Zero)
        } else {
            Some(InvariantValue::Half)
        };
        Ok((outcome, settled))
    })?;
    Ok(outcomes.into_iter().flatten().collect())
}
