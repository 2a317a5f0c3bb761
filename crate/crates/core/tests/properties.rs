mod common;

use std::collections::BTreeSet;

use common::big;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use obstruction::arith::{
    factorize, integer_nth_root, is_prime_u64, is_sum_of_two_squares, largest_power_divisor, prime_divisors_u64,
    vp_rp,
};
use obstruction::combi::{combi, check_preconditions, DivisorSubset};
use obstruction::cyclotomic::{cyclotomic_poly, FdFamily, IntPolynomial};
use obstruction::decide::ispossible;
use obstruction::hilbert::{hilbert_neg_one, Place, Symbol};
use obstruction::invariants::check_jagy_obstruction;
use obstruction::oracle::{residue_scan_c, witness_search};
use proptest::prelude::*;

const SMALL_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(big(num), big(den))
}

/// Real place, small primes and every prime dividing one of `xs`.
fn places_for(xs: &[&BigRational]) -> Vec<Place> {
    let mut primes: BTreeSet<u64> = SMALL_PRIMES.into_iter().collect();
    for x in xs {
        for part in [x.numer(), x.denom()] {
            for p in factorize(part).unwrap().primes() {
                primes.insert(p.to_u64().unwrap());
            }
        }
    }
    std::iter::once(Place::Real)
        .chain(primes.into_iter().map(|p| Place::prime(p).unwrap()))
        .collect()
}

fn nonzero() -> impl Strategy<Value = i64> {
    (1i64..=1_000_000).prop_flat_map(|x| prop_oneof![Just(x), Just(-x)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hilbert_is_multiplicative(an in nonzero(), ad in 1i64..=100_000, bn in nonzero(), bd in 1i64..=100_000) {
        let (x, y) = (rational(an, ad), rational(bn, bd));
        let xy = &x * &y;
        for v in places_for(&[&x, &y]) {
            let lhs = hilbert_neg_one(&xy, v).unwrap();
            let rhs = hilbert_neg_one(&x, v).unwrap() * hilbert_neg_one(&y, v).unwrap();
            prop_assert_eq!(lhs, rhs, "place {}", v);
        }
    }

    #[test]
    fn hilbert_product_formula(num in nonzero(), den in 1i64..=1_000_000) {
        let x = rational(num, den);
        let bad: BTreeSet<u64> = factorize(&(x.numer() * x.denom()))
            .unwrap()
            .primes()
            .map(|p| p.to_u64().unwrap())
            .chain(std::iter::once(2))
            .collect();
        let mut product = Symbol::One;
        for v in places_for(&[&x]) {
            let s = hilbert_neg_one(&x, v).unwrap();
            if let Place::Prime(p) = v {
                if !bad.contains(&p.get()) {
                    prop_assert_eq!(s, Symbol::One);
                }
            }
            product = product * s;
        }
        prop_assert_eq!(product, Symbol::One);
    }

    #[test]
    fn factorization_round_trips(x in -1_000_000_000_000i64..=1_000_000_000_000) {
        prop_assume!(x != 0);
        let f = factorize(&big(x)).unwrap();
        prop_assert_eq!(f.product(), big(x));
        for (p, e) in f.factors() {
            prop_assert!(is_prime_u64(p.to_u64().unwrap()));
            prop_assert!(*e > 0);
        }
    }

    #[test]
    fn valuation_round_trips(x in nonzero(), i in 0usize..SMALL_PRIMES.len()) {
        let p = SMALL_PRIMES[i];
        let d = vp_rp(&big(x), p).unwrap();
        prop_assert!(!(&d.unit % p).is_zero());
        prop_assert_eq!(BigInt::from(p).pow(d.valuation) * d.unit, big(x));
    }

    #[test]
    fn largest_power_divisor_is_maximal(base in -40i64..=40, e in 1u32..=6, k in prop_oneof![Just(9u64), Just(15), Just(27), Just(45)]) {
        prop_assume!(base != 0);
        let m = big(base).pow(e);
        let (a, n) = largest_power_divisor(&m, k).unwrap();
        prop_assert_eq!(k % a, 0);
        prop_assert_eq!(n.pow(a as u32), m);
        for q in prime_divisors_u64(k / a) {
            prop_assert!(integer_nth_root(&n, q as u32).is_none());
        }
    }

    #[test]
    fn witnesses_never_contradict_the_verdict(m in -100_000i64..=100_000, k in prop_oneof![Just(3u64), Just(5), Just(9), Just(15)]) {
        prop_assume!(m != 0);
        let report = ispossible(k, &big(m)).unwrap();
        prop_assert!(report.aggregate_t.iter().all(|s| s.len() % 2 == 0));
        if let Some(w) = witness_search(k, &big(m), 30) {
            prop_assert!(w.verify(k, &big(m)));
            prop_assert!(report.verdict);
        }
    }
}

#[test]
fn symbols_everywhere_match_two_squares() {
    for a in 1..=10_000i64 {
        let x = rational(a, 1);
        let local = places_for(&[&x])
            .into_iter()
            .all(|v| hilbert_neg_one(&x, v).unwrap() == Symbol::One);
        assert_eq!(local, is_sum_of_two_squares(&big(a)), "a = {a}");
    }
}

#[test]
fn two_squares_matches_exhaustion() {
    let mut sums = vec![false; 10_001];
    for x in 0..=100usize {
        for y in x..=100 {
            if x * x + y * y <= 10_000 {
                sums[x * x + y * y] = true;
            }
        }
    }
    for (m, &expected) in sums.iter().enumerate() {
        assert_eq!(is_sum_of_two_squares(&big(m as i64)), expected, "m = {m}");
    }
}

#[test]
fn fd_product_is_binomial() {
    for a in [1u64, 3, 5, 7, 9, 11, 13, 15] {
        for b in [3u64, 5, 7] {
            for n in (-50i64..=50).filter(|n| n.abs() >= 2) {
                let family = FdFamily::new(a, b, big(n)).unwrap();
                let ab = (a * b) as usize;
                let mut coeffs = vec![BigInt::zero(); ab + 1];
                coeffs[0] = big(n).pow(a as u32);
                coeffs[ab] = BigInt::one();
                assert_eq!(family.product(), IntPolynomial::new(coeffs), "a={a} b={b} n={n}");
                for (&d, f) in family.divisors().iter().zip(family.members()) {
                    assert!(f.is_monic());
                    assert_eq!(f.degree() as u64, b * obstruction::arith::euler_phi(d));
                }
            }
        }
    }
}

#[test]
fn cyclotomic_products() {
    for s in 1..=100u64 {
        let product = obstruction::arith::divisors(s)
            .into_iter()
            .fold(IntPolynomial::one(), |acc, d| acc.mul(&cyclotomic_poly(d)));
        assert_eq!(product, IntPolynomial::binomial(s as usize, -BigInt::one()), "s = {s}");
    }
}

/// `(a, b, n)` with `a ∈ {1,3,5,9}`, `b ∈ {3,5}`, `|n| ≤ 30` accepted by combi.
fn grid() -> Vec<(u64, u64, i64)> {
    let mut out = Vec::new();
    for a in [1u64, 3, 5, 9] {
        for b in [3u64, 5] {
            for n in (-30i64..=30).filter(|&n| n != 0) {
                if check_preconditions(a, b, &big(n)).is_ok() {
                    out.push((a, b, n));
                }
            }
        }
    }
    out
}

#[test]
fn combi_outputs_have_even_cardinality() {
    for (a, b, n) in grid() {
        for p in [2u64, 3, 5, 7, 11, 13, 19] {
            let r = combi(a, b, &big(n), obstruction::hilbert::Prime::new(p).unwrap()).unwrap();
            assert!(
                r.subsets.iter().all(|s: &DivisorSubset| s.len() % 2 == 0),
                "a={a} b={b} n={n} p={p}"
            );
        }
    }
}

#[test]
fn residue_scan_agrees_with_combi() {
    for (a, b, n) in grid() {
        for p in [2u64, 3, 7, 11, 19] {
            let prime = obstruction::hilbert::Prime::new(p).unwrap();
            let c = combi(a, b, &big(n), prime).unwrap();
            let set = c.as_set();
            let shallow = residue_scan_c(a, b, &big(n), prime, 6).unwrap();
            assert!(shallow.is_subset(&set), "a={a} b={b} n={n} p={p}");
            let deep = residue_scan_c(a, b, &big(n), prime, c.stats.max_depth.max(1)).unwrap();
            assert_eq!(deep, set, "a={a} b={b} n={n} p={p}");
        }
    }
}

#[test]
fn kth_powers_are_representable() {
    for k in [3u64, 9, 15] {
        for n in (-20i64..=20).filter(|&n| n != 0) {
            assert!(ispossible(k, &big(n).pow(k as u32)).unwrap().verdict, "k={k} n={n}");
        }
    }
}

#[test]
fn prime_exponents_always_representable() {
    for k in [3u64, 5, 7] {
        for m in 1..=10_000i64 {
            let r = ispossible(k, &big(m)).unwrap();
            assert!(r.verdict, "k={k} m={m}");
        }
    }
}

#[test]
fn jagy_criterion_implies_obstruction() {
    let mut hits = 0;
    for a in [3u64, 5, 7, 9] {
        for b in [3u64, 5, 7] {
            for n in (-60i64..=60).filter(|&n| n != 0) {
                if check_jagy_obstruction(a, b, &big(n)) {
                    hits += 1;
                    let m = big(n).pow(a as u32);
                    assert!(!ispossible(a * b, &m).unwrap().verdict, "a={a} b={b} n={n}");
                }
            }
        }
    }
    assert!(hits > 0);
}

#[test]
fn negative_m_is_supported() {
    for k in [9u64, 15] {
        for m in [-216i64, -1, -7, -1000, -27_000] {
            let r = ispossible(k, &big(m)).unwrap();
            if let Some(w) = witness_search(k, &big(m), 100) {
                assert!(w.verify(k, &big(m)));
                assert!(r.verdict, "k={k} m={m}");
            }
            assert!(r.m.is_negative());
        }
    }
}
