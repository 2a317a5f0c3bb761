//! Exact integer primitives: p-adic valuations and unit parts, integer roots,
//! prime factorization and the sum-of-two-squares test.
//!
//! Factorization uses trial division by the primes below 10^6, then
//! Pollard's rho with Brent's cycle detection on whatever cofactor remains.
//! Primality of cofactors is decided by Miller-Rabin, deterministic below
//! 2^64 and with 40 seeded random rounds above.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::error::{domain, Result};

const TRIAL_LIMIT: u32 = 1_000_000;
const MR_ROUNDS_ABOVE_U64: usize = 40;
const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Signed prime factorization of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: BigInt,
    sign: i8,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> + '_ {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Multiplies the factorization back out.
    pub fn product(&self) -> BigInt {
        let magnitude = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        let sign = if self.sign < 0 { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, magnitude)
    }
}

/// `x = p^valuation * unit` with `p` not dividing `unit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicDecomposition {
    pub p: u64,
    pub valuation: u32,
    pub unit: BigInt,
}

/// Splits a nonzero integer into its `p`-adic valuation and unit part.
/// The unit part keeps the sign of `x`, so `r_3(-45) = -5`.
pub fn vp_rp(x: &BigInt, p: u64) -> Result<PAdicDecomposition> {
    if x.is_zero() {
        return domain("valuation of zero undefined");
    }
    if !is_prime_u64(p) {
        return domain(format!("{p} is not prime"));
    }
    let (valuation, unit) = split_valuation(x, p);
    Ok(PAdicDecomposition { p, valuation, unit })
}

/// `v_p(x)` for nonzero `x`; no primality check on `p`.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    debug_assert!(!x.is_zero());
    if p == 2 {
        return x.trailing_zeros().unwrap_or(0) as u32;
    }
    let mut v = 0;
    let mut rest = x.magnitude().clone();
    loop {
        let (q, r) = rest.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            return v;
        }
        rest = q;
        v += 1;
    }
}

pub(crate) fn split_valuation(x: &BigInt, p: u64) -> (u32, BigInt) {
    if p == 2 {
        let v = x.trailing_zeros().unwrap_or(0);
        return (v as u32, x >> v);
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut unit = x.clone();
    loop {
        let (q, r) = unit.div_rem(&pb);
        if !r.is_zero() {
            return (v, unit);
        }
        unit = q;
        v += 1;
    }
}

/// Complete prime factorization of a nonzero integer.
pub fn factorize(x: &BigInt) -> Result<Factorization> {
    if x.is_zero() {
        return domain("cannot factor zero");
    }
    let sign = if x.is_negative() { -1 } else { 1 };
    Ok(Factorization {
        value: x.clone(),
        sign,
        factors: factor_magnitude(x.magnitude()),
    })
}

/// The integer `n` with `n^a = m`, if one exists. For odd `a` it is unique;
/// for even `a` the nonnegative root is returned.
pub fn integer_nth_root(m: &BigInt, a: u32) -> Option<BigInt> {
    if a == 0 {
        return None;
    }
    if m.is_negative() && a % 2 == 0 {
        return None;
    }
    let r = m.nth_root(a);
    (r.pow(a) == *m).then_some(r)
}

/// The largest divisor `a` of `k` such that `m` is an `a`-th power, together
/// with the root `n = m^(1/a)`.
pub fn largest_power_divisor(m: &BigInt, k: u64) -> Result<(u64, BigInt)> {
    if m.is_zero() {
        return domain("m must be nonzero");
    }
    if k == 0 {
        return domain("k must be positive");
    }
    for d in divisors(k).into_iter().rev() {
        let Ok(d32) = u32::try_from(d) else { continue };
        if let Some(n) = integer_nth_root(m, d32) {
            return Ok((d, n));
        }
    }
    unreachable!("every integer is a first power")
}

/// Whether `m = x^2 + y^2` has an integral solution: every prime `≡ 3 mod 4`
/// must divide `m` to an even power.
pub fn is_sum_of_two_squares(m: &BigInt) -> bool {
    if m.is_negative() {
        return false;
    }
    if m.is_zero() {
        return true;
    }
    let mut rest = m.magnitude().clone();
    let twos = rest.trailing_zeros().unwrap_or(0);
    rest >>= twos;

    let mut odd_exponent_3mod4 = false;
    let complete = trial_divide(&mut rest, |p, e| {
        if p % 4 == 3 && e % 2 == 1 {
            odd_exponent_3mod4 = true;
        }
        !odd_exponent_3mod4
    });
    if odd_exponent_3mod4 {
        return false;
    }
    if rest.is_one() {
        return true;
    }
    // A cofactor ≡ 3 mod 4 must contain some prime ≡ 3 mod 4 to an odd power.
    if mod4(&rest) == 3 {
        return false;
    }
    if complete || is_probable_prime(&rest) {
        return true;
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        return true;
    }
    factor_cofactor(rest)
        .into_iter()
        .all(|(p, e)| e % 2 == 0 || mod4(&p) != 3)
}

/// [`is_sum_of_two_squares`] for the product of `parts`, which may be any
/// known (not necessarily prime or coprime) factorization. The parts are
/// first refined to pairwise coprime factors, so a single coprime factor
/// `≡ 3 mod 4` with odd exponent settles the answer without further
/// factoring.
pub fn is_sum_of_two_squares_factored(parts: &[BigInt]) -> bool {
    if parts.iter().any(|p| p.is_zero()) {
        return true;
    }
    let negatives = parts.iter().filter(|p| p.is_negative()).count();
    if negatives % 2 == 1 {
        return false;
    }
    let mut base: Vec<(BigUint, u32)> = Vec::new();
    for part in parts {
        let mut part = part.magnitude().clone();
        let twos = part.trailing_zeros().unwrap_or(0);
        part >>= twos;
        insert_coprime(&mut base, part, 1);
    }
    let odd: Vec<&BigUint> = base.iter().filter(|(_, e)| e % 2 == 1).map(|(q, _)| q).collect();
    if odd.iter().any(|q| mod4(q) == 3) {
        return false;
    }
    odd.into_iter().all(|q| is_sum_of_two_squares(&BigInt::from(q.clone())))
}

/// Adds `q^e` to a list of pairwise coprime odd factors, keeping it coprime.
fn insert_coprime(base: &mut Vec<(BigUint, u32)>, q: BigUint, e: u32) {
    let mut pending = vec![(q, e)];
    while let Some((q, e)) = pending.pop() {
        if q.is_one() {
            continue;
        }
        let shared = base.iter().position(|(r, _)| !r.gcd(&q).is_one());
        let Some(i) = shared else {
            base.push((q, e));
            continue;
        };
        let (r, f) = base.swap_remove(i);
        if r == q {
            base.push((q, e + f));
            continue;
        }
        let g = r.gcd(&q);
        pending.push((&r / &g, f));
        pending.push((&q / &g, e));
        pending.push((g, e + f));
    }
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

/// Distinct prime divisors of a positive integer.
pub fn prime_divisors_u64(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    factor_magnitude(&BigUint::from(n))
        .into_iter()
        .map(|(p, _)| p.to_u64().expect("factor of a u64 fits in u64"))
        .collect()
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_U64 {
        if n % p == 0 {
            return n == p;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    MR_BASES_U64.iter().all(|&a| miller_rabin_u64(n, d, a))
}

fn miller_rabin_u64(n: u64, d: u64, a: u64) -> bool {
    let mut x = pow_mod_u64(a % n, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    let mut e = d;
    while e < n - 1 {
        x = mul_mod_u64(x, x, n);
        e <<= 1;
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin; deterministic for values below 2^64.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let two = BigUint::from(2u32);
    let witness = |a: &BigUint| {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };
    if !witness(&two) {
        return false;
    }
    // Fixed seed keeps every run reproducible.
    let mut rng = StdRng::seed_from_u64(0x5eed_0f4b_1d00);
    (0..MR_ROUNDS_ABOVE_U64).all(|_| witness(&rng.gen_biguint_range(&two, &n_minus_1)))
}

fn mod4(x: &BigUint) -> u32 {
    (x.iter_u32_digits().next().unwrap_or(0)) & 3
}

fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Consecutive runs of trial primes whose product fits in a u64, so a big
/// cofactor is reduced once per run instead of once per prime.
fn prime_runs() -> &'static [(u64, usize, usize)] {
    static RUNS: OnceLock<Vec<(u64, usize, usize)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let primes = small_primes();
        let mut runs = Vec::new();
        let mut start = 0;
        let mut product = 1u64;
        for (i, &p) in primes.iter().enumerate() {
            match product.checked_mul(p as u64) {
                Some(next) => product = next,
                None => {
                    runs.push((product, start, i));
                    start = i;
                    product = p as u64;
                }
            }
        }
        runs.push((product, start, primes.len()));
        runs
    })
}

/// Divides out every trial prime from `rest`, reporting each `(p, e)` to
/// `visit`; stops early when `visit` returns false. Returns true when the
/// remaining cofactor is known to be 1 or prime.
fn trial_divide(rest: &mut BigUint, mut visit: impl FnMut(u64, u32) -> bool) -> bool {
    let primes = small_primes();
    for &(product, lo, hi) in prime_runs() {
        if let Some(small) = rest.to_u64() {
            let mut r = small;
            let done = trial_divide_u64(&mut r, &primes[lo..], &mut visit);
            *rest = BigUint::from(r);
            return done;
        }
        let residue = (&*rest % product).to_u64().unwrap_or(0);
        for &p in &primes[lo..hi] {
            let p = p as u64;
            if residue % p != 0 {
                continue;
            }
            let mut e = 0;
            loop {
                let (q, r) = rest.div_rem(&BigUint::from(p));
                if !r.is_zero() {
                    break;
                }
                *rest = q;
                e += 1;
            }
            if !visit(p, e) {
                return false;
            }
        }
    }
    false
}

fn trial_divide_u64(
    rest: &mut u64,
    primes: &[u32],
    visit: &mut impl FnMut(u64, u32) -> bool,
) -> bool {
    for &p in primes {
        let p = p as u64;
        if p * p > *rest {
            return true;
        }
        if *rest % p == 0 {
            let mut e = 0;
            while *rest % p == 0 {
                *rest /= p;
                e += 1;
            }
            if !visit(p, e) {
                return false;
            }
        }
    }
    // Every prime factor below the trial limit is gone, so anything left
    // under its square is prime.
    *rest < (TRIAL_LIMIT as u64) * (TRIAL_LIMIT as u64)
}

fn factor_magnitude(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();
    let complete = trial_divide(&mut rest, |p, e| {
        *out.entry(BigUint::from(p)).or_default() += e;
        true
    });
    if !rest.is_one() {
        if complete {
            *out.entry(rest).or_default() += 1;
        } else {
            for (p, e) in factor_cofactor(rest) {
                *out.entry(p).or_default() += e;
            }
        }
    }
    out.into_iter().collect()
}

/// Factors a cofactor that has no prime factors below the trial limit.
fn factor_cofactor(n: BigUint) -> Vec<(BigUint, u32)> {
    let mut out: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut stack = vec![n];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            *out.entry(c).or_default() += 1;
            continue;
        }
        let root = c.sqrt();
        if &root * &root == c {
            stack.push(root.clone());
            stack.push(root);
            continue;
        }
        let d = match c.to_u64() {
            Some(small) => BigUint::from(rho_brent_u64(small)),
            None => rho_brent_big(&c),
        };
        stack.push(&c / &d);
        stack.push(d);
    }
    out.into_iter().collect()
}

/// A nontrivial factor of an odd composite `n`.
fn rho_brent_u64(n: u64) -> u64 {
    const BATCH: u64 = 128;
    for c in 1.. {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let (mut y, mut x, mut ys) = (2u64, 2u64, 2u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod_u64(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_brent_big(n: &BigUint) -> BigUint {
    const BATCH: u64 = 128;
    let one = BigUint::one();
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut y, mut x, mut ys) = (BigUint::from(2u32), BigUint::from(2u32), BigUint::from(2u32));
        let (mut g, mut r, mut q) = (one.clone(), 1u64, one.clone());
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = (&q * diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}
