//! The Hilbert symbol `(a, -1)_v` over every completion of the rationals and
//! the matching local invariant of the quaternion algebra `(a, -1)`.
//!
//! `(a, -1)_v = 1` exactly when `a` is a sum of two squares in `Q_v`:
//!
//! | place          | symbol is `+1` iff      |
//! |----------------|-------------------------|
//! | real           | `a > 0`                 |
//! | `2`            | `r_2(a) ≡ 1 (mod 4)`    |
//! | `p ≡ 1 mod 4`  | always                  |
//! | `p ≡ 3 mod 4`  | `v_p(a)` even           |

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, valuation};
use crate::error::{domain, Result};

/// A prime number, checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            domain(format!("{p} is not prime"))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Prime {
    type Error = crate::Error;

    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A place of `Q`: the real place or a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Real,
    Prime(Prime),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        Prime::new(p).map(Place::Prime)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Value of a Hilbert symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    One,
    MinusOne,
}

impl Symbol {
    pub fn value(self) -> i8 {
        match self {
            Symbol::One => 1,
            Symbol::MinusOne => -1,
        }
    }

    fn from_bool(is_one: bool) -> Self {
        if is_one {
            Symbol::One
        } else {
            Symbol::MinusOne
        }
    }
}

impl std::ops::Mul for Symbol {
    type Output = Symbol;

    fn mul(self, rhs: Symbol) -> Symbol {
        Symbol::from_bool(self == rhs)
    }
}

/// Local invariant of a quaternion algebra, an element of `{0, 1/2} ⊂ Q/Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InvariantValue {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1/2")]
    Half,
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantValue::Zero => write!(f, "0"),
            InvariantValue::Half => write!(f, "1/2"),
        }
    }
}

/// `(a, -1)_v` for a nonzero rational `a`.
pub fn hilbert_neg_one(a: &BigRational, v: Place) -> Result<Symbol> {
    if a.is_zero() {
        return domain("Hilbert symbol of zero undefined");
    }
    let (num, den) = (a.numer(), a.denom());
    Ok(match v {
        Place::Real => Symbol::from_bool(a.is_positive()),
        Place::Prime(p) => match p.get() {
            // Odd units are their own inverses mod 4, so r_2(num/den) ≡ r_2(num)·r_2(den).
            2 => Symbol::from_bool(
                (odd_part_mod4(num) * odd_part_mod4(den)) % 4 == 1,
            ),
            q if q % 4 == 1 => Symbol::One,
            q => Symbol::from_bool((valuation(num, q) + valuation(den, q)) % 2 == 0),
        },
    })
}

/// `(a, -1)_v` for a nonzero integer `a`.
pub fn hilbert_neg_one_int(a: &BigInt, v: Place) -> Result<Symbol> {
    if a.is_zero() {
        return domain("Hilbert symbol of zero undefined");
    }
    Ok(match v {
        Place::Real => Symbol::from_bool(a.is_positive()),
        Place::Prime(p) => symbol_at_prime(a, p.get()),
    })
}

/// `(a, -1)_p` for nonzero `a` and a prime `p` the caller has already checked.
pub(crate) fn symbol_at_prime(a: &BigInt, p: u64) -> Symbol {
    debug_assert!(!a.is_zero());
    match p {
        2 => Symbol::from_bool(odd_part_mod4(a) == 1),
        _ if p % 4 == 1 => Symbol::One,
        _ => Symbol::from_bool(valuation(a, p) % 2 == 0),
    }
}

/// `r_2(a) mod 4`, in `{1, 3}`.
pub(crate) fn odd_part_mod4(a: &BigInt) -> u32 {
    let v = a.trailing_zeros().unwrap_or(0);
    let unit: BigInt = a >> v;
    let r = unit.mod_floor(&BigInt::from(4));
    if r == BigInt::from(1) {
        1
    } else {
        3
    }
}

pub fn invariant_of_symbol(s: Symbol) -> InvariantValue {
    match s {
        Symbol::One => InvariantValue::Zero,
        Symbol::MinusOne => InvariantValue::Half,
    }
}
