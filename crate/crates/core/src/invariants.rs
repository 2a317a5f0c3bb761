//! Closed-form local invariant sets `I_v(a, b, n)` of the quaternion algebra
//! on `x^2 + y^2 + z^(ab) = n^a`, and the obstruction criteria built on them.
//!
//! `w ∈ I_v` exactly when some `z ∈ Z_v` has `(n^a - z^(ab), -1)_v = 1` and
//! `(n - z^b, -1)_v` equal to `1` for `w = 0` or `-1` for `w = 1/2`. The
//! sets here come from case lemmas and are advisory only: the decision
//! procedure in [`crate::decide`] does not consult them.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, integer_nth_root, is_sum_of_two_squares, prime_divisors_u64, split_valuation};
use crate::error::{domain, Result};
use crate::hilbert::{odd_part_mod4, InvariantValue, Place};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// The set is fully determined.
    Exact,
    /// The listed values are attained; others may be too.
    LowerBound,
    /// No applicable case; the values are empty and carry no information.
    NotCovered,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exact => "exact",
            Status::LowerBound => "lower-bound",
            Status::NotCovered => "not-covered",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub place: Place,
    pub values: BTreeSet<InvariantValue>,
    pub status: Status,
}

impl InvariantSet {
    fn new(place: Place, values: &[InvariantValue], status: Status) -> Self {
        InvariantSet {
            place,
            values: values.iter().copied().collect(),
            status,
        }
    }

    pub fn contains(&self, w: InvariantValue) -> bool {
        self.values.contains(&w)
    }
}

impl fmt::Display for InvariantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}:{{{}}} ({})", self.place, vals.join(","), self.status)
    }
}

use InvariantValue::{Half, Zero as Nil};

/// `I_v(a, b, n)` from the first case that applies.
pub fn invariant_set(a: u64, b: u64, n: &BigInt, v: Place) -> Result<InvariantSet> {
    if a == 0 || b == 0 {
        return domain("a and b must be positive");
    }
    if n.is_zero() {
        return domain("n must be nonzero");
    }
    if n.is_negative() && (a * b) % 2 == 0 {
        return domain("need n > 0 or ab odd");
    }
    let odd_ab = a % 2 == 1 && b % 2 == 1;
    let p = match v {
        Place::Real => return Ok(InvariantSet::new(v, &[Nil], Status::Exact)),
        Place::Prime(p) => p.get(),
    };

    if p == 2 {
        let n_mod8 = n.mod_floor(&BigInt::from(8)).to_u64().expect("reduced mod 8");
        let (v2, _) = split_valuation(n, 2);
        let unit_pow_is_one = a % 2 == 0 || odd_part_mod4(n) == 1;
        let set = if a == 1 && b % 2 == 1 {
            InvariantSet::new(v, &[Nil], Status::Exact)
        } else if odd_ab && a >= 3 && b >= 3 && n_mod8 == 6 {
            InvariantSet::new(v, &[Half], Status::Exact)
        } else if a >= 2 && unit_pow_is_one && (v2 as u64 + 1) % b == 0 {
            InvariantSet::new(v, &[Nil, Half], Status::Exact)
        } else if odd_ab && a >= 3 && n_mod8 == 6 {
            InvariantSet::new(v, &[Half], Status::LowerBound)
        } else if odd_ab && n_mod8 != 6 {
            InvariantSet::new(v, &[Nil], Status::LowerBound)
        } else {
            InvariantSet::new(v, &[], Status::NotCovered)
        };
        return Ok(set);
    }

    // Odd places: z = 0 or z = 1 always gives the invariant 0.
    if p % 4 == 1 {
        return Ok(InvariantSet::new(v, &[Nil], Status::Exact));
    }
    let (vp, _) = split_valuation(n, p);
    if a % 2 == 0 && vp % 2 == 1 {
        return Ok(InvariantSet::new(v, &[Nil, Half], Status::Exact));
    }
    if !odd_ab {
        return Ok(InvariantSet::new(v, &[Nil], Status::LowerBound));
    }
    if a % p != 0 && vp == 0 {
        return Ok(InvariantSet::new(v, &[Nil], Status::Exact));
    }
    if vp as u64 % b != 0 {
        return Ok(InvariantSet::new(v, &[Nil], Status::Exact));
    }
    if (a * b) % p != 0 {
        let half = vp % 2 == 1 && small_root_search(p, a, b, n).is_some();
        let values: &[InvariantValue] = if half { &[Nil, Half] } else { &[Nil] };
        return Ok(InvariantSet::new(v, values, Status::Exact));
    }
    Ok(InvariantSet::new(v, &[Nil], Status::LowerBound))
}

/// The least `z'` in `[0, p)` with
/// `p | r^(a-1) + r^(a-2) z'^b + ... + z'^((a-1)b)` where `r = r_p(n)`.
pub fn small_root_search(p: u64, a: u64, b: u64, n: &BigInt) -> Option<u64> {
    if a == 0 || n.is_zero() {
        return None;
    }
    let (_, unit) = split_valuation(n, p);
    let r = unit.mod_floor(&BigInt::from(p)).to_u64().expect("reduced mod p");
    let m = p as u128;
    let mut r_pows = vec![1u128; a as usize];
    for i in 1..a as usize {
        r_pows[i] = r_pows[i - 1] * r as u128 % m;
    }
    (0..p).find(|&z| {
        let zb = pow_mod(z as u128, b, m);
        let mut acc: u128 = 0;
        let mut zb_pow: u128 = 1;
        for r_pow in r_pows.iter().rev() {
            acc = (acc + r_pow * zb_pow) % m;
            zb_pow = zb_pow * zb % m;
        }
        acc == 0
    })
}

fn pow_mod(mut base: u128, mut exp: u64, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Sufficient condition for `x^2 + y^2 + z^(ab) = n^a` to have local
/// solutions everywhere but no integral ones: `a, b ≥ 3` odd, `n ≡ 6 mod 8`,
/// and `b ∤ v_p(n)` for every prime `p ≡ 3 mod 4` dividing `an`. Outside
/// that range of `a` and `b` the answer is `false`.
pub fn check_jagy_obstruction(a: u64, b: u64, n: &BigInt) -> bool {
    if a < 3 || b < 3 || a % 2 == 0 || b % 2 == 0 || n.is_zero() {
        return false;
    }
    if n.mod_floor(&BigInt::from(8)) != BigInt::from(6) {
        return false;
    }
    let Ok(f) = factorize(n) else { return false };
    let from_n = f.factors().iter().map(|(p, e)| (p.clone(), *e));
    let from_a = prime_divisors_u64(a)
        .into_iter()
        .map(|p| {
            let p = BigUint::from(p);
            let e = f.exponent_of(&p);
            (p, e)
        });
    from_n
        .chain(from_a)
        .filter(|(p, _)| (p % 4u32).to_u32() == Some(3))
        .all(|(_, e)| e as u64 % b != 0)
}

/// Whether strong approximation "at Z" away from the real place provably
/// fails: `a ≥ 2`, `r_2(n)^a ≡ 1 mod 4` and `b | v_2(n) + 1`; or `n > 0`,
/// `a` even and `n` not a sum of two squares.
pub fn check_strong_approx_failure(a: u64, b: u64, n: &BigInt) -> bool {
    if n.is_zero() || b == 0 {
        return false;
    }
    let (v2, _) = split_valuation(n, 2);
    let unit_pow_is_one = a % 2 == 0 || odd_part_mod4(n) == 1;
    let two_adic = a >= 2 && unit_pow_is_one && (v2 as u64 + 1) % b == 0;
    let even_a = n.is_positive() && a % 2 == 0 && !is_sum_of_two_squares(n);
    two_adic || even_a
}

/// For `k = ab` with primes `a, b ≡ 1 mod 4`: whether
/// `x^2 + y^2 + z^k = m` has integral solutions, assuming Schinzel's
/// hypothesis (H) when the answer is `true`.
pub fn check_abthm(a: u64, b: u64, m: &BigInt) -> Result<bool> {
    for q in [a, b] {
        if !crate::arith::is_prime_u64(q) || q % 4 != 1 {
            return domain(format!("{q} is not a prime ≡ 1 mod 4"));
        }
    }
    if m.is_zero() {
        return domain("m must be nonzero");
    }
    Ok(!obstructed_power(a, b, m) && !obstructed_power(b, a, m))
}

/// `m = n^a` with `n ≡ 6 mod 8` and every prime `p ≡ 3 mod 4` dividing `n`
/// failing to give `1/2 ∈ I_p(a, b, n)`.
fn obstructed_power(a: u64, b: u64, m: &BigInt) -> bool {
    let Some(n) = integer_nth_root(m, a as u32) else { return false };
    if n.mod_floor(&BigInt::from(8)) != BigInt::from(6) {
        return false;
    }
    let Ok(f) = factorize(&n) else { return false };
    f.factors()
        .iter()
        .filter(|(p, _)| (p % 4u32).to_u32() == Some(3))
        .all(|(p, e)| {
            let Some(p) = p.to_u64() else {
                // A search over p residues this large is out of reach.
                return false;
            };
            *e as u64 % b != 0 || e % 2 == 0 || small_root_search(p, a, b, &n).is_none()
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn at(p: u64) -> Place {
        Place::prime(p).unwrap()
    }

    fn set(a: u64, b: u64, n: i64, v: Place) -> InvariantSet {
        invariant_set(a, b, &big(n), v).unwrap()
    }

    #[test]
    fn invariant_set_examples() {
        let s = set(3, 3, 6, Place::Real);
        assert_eq!((s.values.len(), s.status), (1, Status::Exact));
        assert!(s.contains(Nil));
        let s = set(3, 3, 6, at(2));
        assert_eq!(s.values, BTreeSet::from([Half]));
        assert_eq!(s.status, Status::Exact);
        assert_eq!(set(3, 3, 6, at(5)).values, BTreeSet::from([Nil]));
        let s = set(2, 1, 3, at(3));
        assert_eq!((s.values, s.status), (BTreeSet::from([Nil, Half]), Status::Exact));
        let s = set(3, 3, 6, at(3));
        assert_eq!((s.values.clone(), s.status), (BTreeSet::from([Nil]), Status::Exact));
        assert_eq!(s.to_string(), "3:{0} (exact)");
    }

    #[test]
    fn invariant_set_rejects_bad_input() {
        assert!(invariant_set(2, 1, &big(-3), at(3)).is_err());
        assert!(invariant_set(3, 3, &big(0), at(3)).is_err());
        assert!(invariant_set(0, 3, &big(6), at(3)).is_err());
        assert!(invariant_set(3, 3, &big(-6), at(3)).is_ok());
    }

    #[test]
    fn small_root_examples() {
        // r = 1: 1 + z^3 + z^6 ≡ 0 mod 3 at z = 1.
        assert_eq!(small_root_search(3, 3, 3, &big(4)), Some(1));
        // 1 + t + t^2 needs t of order 3 mod 7, but cubes mod 7 are 0, ±1.
        assert_eq!(small_root_search(7, 3, 3, &big(1)), None);
        assert_eq!(small_root_search(7, 3, 1, &big(1)), Some(2));
        assert_eq!(small_root_search(7, 1, 3, &big(5)), None);
        assert_eq!(small_root_search(11, 1, 5, &big(33)), None);
    }

    #[test]
    fn jagy_examples() {
        assert!(check_jagy_obstruction(3, 3, &big(6)));
        assert!(check_jagy_obstruction(3, 3, &big(30)));
        assert!(!check_jagy_obstruction(3, 3, &big(14)));
        assert!(!check_jagy_obstruction(3, 3, &big(22)));
        assert!(!check_jagy_obstruction(1, 3, &big(6)));
        // 3 | a but v_3(-2) = 0 is divisible by b.
        assert!(!check_jagy_obstruction(3, 3, &big(-2)));
        assert!(check_jagy_obstruction(3, 3, &big(-42)));
    }

    #[test]
    fn strong_approx_examples() {
        assert!(check_strong_approx_failure(3, 1, &big(5)));
        assert!(check_strong_approx_failure(2, 1, &big(3)));
        for b in [1, 3, 5] {
            for n in [-7, 1, 5, 6, 13] {
                assert!(!check_strong_approx_failure(1, b, &big(n)));
            }
        }
    }

    #[test]
    fn abthm_examples() {
        assert!(!check_abthm(5, 5, &big(7776)).unwrap());
        assert!(check_abthm(5, 5, &big(100_000)).unwrap());
        assert!(check_abthm(5, 13, &big(12)).unwrap());
        assert!(check_abthm(3, 5, &big(12)).is_err());
        assert!(check_abthm(5, 5, &big(0)).is_err());
    }

    #[test]
    fn two_adic_witness_table() {
        // n mod 8 ↦ z with r_2(n^a - z^(ab)) ≡ r_2(n - z^b) ≡ 1 mod 4.
        let table = [(0, -1), (1, 0), (2, 0), (3, 1), (4, -1), (5, 3), (7, 5)];
        for (residue, z) in table {
            for rep in [residue, residue + 8, residue + 64, residue - 64] {
                if rep == 0 {
                    continue;
                }
                for a in [1u32, 3, 5] {
                    for b in [1u32, 3, 5] {
                        let n = big(rep);
                        let z = big(z);
                        let full = n.pow(a) - z.pow(a * b);
                        let linear = &n - z.pow(b);
                        assert_eq!(odd_part_mod4(&full), 1, "n={rep} a={a} b={b}");
                        assert_eq!(odd_part_mod4(&linear), 1, "n={rep} a={a} b={b}");
                    }
                }
            }
        }
    }
}
