//! Cyclotomic polynomials and the factors `f_d` of `X^(ab) + n^a`.
//!
//! For odd `a` the binomial splits over the divisors of `a` as
//! `X^(ab) + n^a = ∏_{d | a} f_d(X)` with
//! `f_d(X) = (-n)^φ(d) · Φ_d(-X^b / n)`, a monic integer polynomial of
//! degree `b·φ(d)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{divisors, euler_phi};
use crate::error::{contract, domain, Result};

/// Dense integer polynomial; `coefficients()[i]` multiplies `X^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `X^n + c`.
    pub fn binomial(n: usize, c: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] += 1;
        coeffs[0] += c;
        Self::new(coeffs)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.degree();
        if self.is_zero() || self.degree() < dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for shift in (0..quot.len()).rev() {
            let lead = rem[shift + dd].clone();
            if lead.is_zero() {
                continue;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &lead * c;
            }
            quot[shift] = lead;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients of `f(x0 + h)` as a polynomial in `h`, lowest first.
    pub fn taylor_at(&self, x0: &BigInt) -> Vec<BigInt> {
        let mut c = self.coeffs.clone();
        let len = c.len();
        for i in 0..len {
            for j in (i..len - 1).rev() {
                let carry = &c[j + 1] * x0;
                c[j] += carry;
            }
        }
        c
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{abs}*X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "{abs}*X^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// The `d`-th cyclotomic polynomial, by exact division of `Y^d - 1` by the
/// cyclotomic polynomials of the proper divisors of `d`. Results are cached.
pub fn cyclotomic_poly(d: u64) -> IntPolynomial {
    assert!(d >= 1, "cyclotomic index must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPolynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cyclotomic cache poisoned").get(&d) {
        return hit.clone();
    }
    let mut poly = IntPolynomial::binomial(d as usize, BigInt::from(-1));
    for e in divisors(d) {
        if e == d {
            break;
        }
        let (q, r) = poly.div_rem_monic(&cyclotomic_poly(e));
        debug_assert!(r.is_zero());
        poly = q;
    }
    cache
        .lock()
        .expect("cyclotomic cache poisoned")
        .insert(d, poly.clone());
    poly
}

/// `f_d(X) = (-n)^φ(d) Φ_d(-X^b / n)`, expanded.
pub fn build_fd(a: u64, b: u64, n: &BigInt, d: u64) -> Result<IntPolynomial> {
    check_family_args(a, b, n)?;
    if d == 0 || a % d != 0 {
        return contract(format!("{d} does not divide {a}"));
    }
    Ok(expand_in_xb(&fd_in_y(n, d), b))
}

/// `f(-z)`.
pub fn eval_fd_at_neg_z(f: &IntPolynomial, z: &BigInt) -> BigInt {
    f.eval(&-z)
}

fn check_family_args(a: u64, b: u64, n: &BigInt) -> Result<()> {
    if a == 0 || a % 2 == 0 {
        return domain(format!("a = {a} must be odd and positive"));
    }
    if b == 0 || b % 2 == 0 {
        return domain(format!("b = {b} must be odd and positive"));
    }
    if n.is_zero() {
        return domain("n must be nonzero");
    }
    Ok(())
}

/// Coefficients of `f_d` as a polynomial in `Y = X^b`:
/// `Σ_i c_i (-1)^(φ-i) n^(φ-i) Y^i` where `Φ_d = Σ_i c_i Y^i`.
fn fd_in_y(n: &BigInt, d: u64) -> IntPolynomial {
    let phi = cyclotomic_poly(d);
    let deg = euler_phi(d) as usize;
    debug_assert_eq!(phi.degree(), deg);
    let neg_n = -n;
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    let mut scale = BigInt::one();
    for i in (0..=deg).rev() {
        coeffs[i] = &phi.coefficients()[i] * &scale;
        scale *= &neg_n;
    }
    IntPolynomial::new(coeffs)
}

fn expand_in_xb(poly_in_y: &IntPolynomial, b: u64) -> IntPolynomial {
    let b = b as usize;
    let mut coeffs = vec![BigInt::zero(); poly_in_y.degree() * b + 1];
    for (i, c) in poly_in_y.coefficients().iter().enumerate() {
        coeffs[i * b] = c.clone();
    }
    IntPolynomial::new(coeffs)
}

/// The factors `f_d` for every divisor `d` of `a`.
#[derive(Debug, Clone)]
pub struct FdFamily {
    a: u64,
    b: u64,
    n: BigInt,
    divisors: Vec<u64>,
    members: Vec<IntPolynomial>,
    members_in_y: Vec<IntPolynomial>,
}

impl FdFamily {
    /// Requires odd `a, b ≥ 1` and `n ≠ 0`.
    pub fn new(a: u64, b: u64, n: BigInt) -> Result<Self> {
        check_family_args(a, b, &n)?;
        let divisors = divisors(a);
        let members_in_y: Vec<_> = divisors.iter().map(|&d| fd_in_y(&n, d)).collect();
        let members = members_in_y.iter().map(|p| expand_in_xb(p, b)).collect();
        Ok(FdFamily {
            a,
            b,
            n,
            divisors,
            members,
            members_in_y,
        })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// Divisors of `a`, ascending; index `i` pairs with `members()[i]`.
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn members(&self) -> &[IntPolynomial] {
        &self.members
    }

    pub fn fd(&self, d: u64) -> Option<&IntPolynomial> {
        self.divisors
            .iter()
            .position(|&e| e == d)
            .map(|i| &self.members[i])
    }

    /// `[f_d(-z) for d | a]`, sharing the power `(-z)^b` across members.
    pub fn values_at_neg_z(&self, z: &BigInt) -> Vec<BigInt> {
        let y = (-z).pow(self.b as u32);
        self.members_in_y.iter().map(|p| p.eval(&y)).collect()
    }

    /// `∏_{d | a} f_d`, which must equal `X^(ab) + n^a`.
    pub fn product(&self) -> IntPolynomial {
        self.members
            .iter()
            .fold(IntPolynomial::one(), |acc, f| acc.mul(f))
    }
}
