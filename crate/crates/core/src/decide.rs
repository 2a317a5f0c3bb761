//! Deciding whether `m = x^2 + y^2 + z^k` is solvable in integers.
//!
//! Write `m = n^a` with `a` the largest divisor of `k` for which this is
//! possible and put `b = k/a`. For every prime `p | 2an` the set of local
//! classes `combi(a, b, n, p)` is computed, and the classes are combined by
//! symmetric difference. If `∅` cannot be reached there is a Brauer-Manin
//! obstruction and `m` is not representable. Otherwise `m` is representable,
//! assuming Schinzel's hypothesis (H).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, integer_nth_root, largest_power_divisor, prime_divisors_u64};
use crate::combi::{combi_with, CombiConfig, CombiResult, DivisorSubset};
use crate::cyclotomic::FdFamily;
use crate::error::{domain, Result};
use crate::hilbert::Prime;

/// Environment variable overriding the number of worker threads.
pub const THREADS_ENV: &str = "OBSTRUCTION_THREADS";

/// What a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    /// Proven outright: an obstruction, or an explicit `k`-th power.
    #[serde(rename = "unconditional")]
    Unconditional,
    /// Needs the one-polynomial case of (H) (`a = 1`).
    #[serde(rename = "Bunyakovsky")]
    Bunyakovsky,
    #[serde(rename = "Schinzel (H)")]
    Schinzel,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::Unconditional => "unconditional",
            Hypothesis::Bunyakovsky => "Bunyakovsky",
            Hypothesis::Schinzel => "Schinzel (H)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shortcut {
    PerfectKthPower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub k: u64,
    #[serde(with = "bigint_string")]
    pub m: BigInt,
    pub verdict: bool,
    pub hypothesis: Hypothesis,
    pub shortcut: Option<Shortcut>,
    pub a: u64,
    pub b: u64,
    #[serde(with = "bigint_string")]
    pub n: BigInt,
    /// Divisors of `a`, ascending; bit `i` of a subset refers to entry `i`.
    pub divisors: Vec<u64>,
    pub per_prime: BTreeMap<u64, CombiResult>,
    pub aggregate_t: Vec<DivisorSubset>,
}

impl DecisionReport {
    /// Human-readable one-line verdict.
    pub fn summary(&self) -> String {
        match (self.verdict, self.shortcut) {
            (true, Some(Shortcut::PerfectKthPower)) => {
                format!("representable: {} = {}^{}", self.m, self.n, self.k)
            }
            (true, None) => format!("representable (assuming {})", self.hypothesis),
            (false, _) => format!("not representable ({})", self.hypothesis),
        }
    }
}

/// Decides representability of `m` as `x^2 + y^2 + z^k` for odd `k`.
pub fn ispossible(k: u64, m: &BigInt) -> Result<DecisionReport> {
    ispossible_with(k, m, CombiConfig::default())
}

pub fn ispossible_with(k: u64, m: &BigInt, config: CombiConfig) -> Result<DecisionReport> {
    if k == 0 || k % 2 == 0 {
        return domain(format!("k = {k} must be odd and positive"));
    }
    if m.is_zero() {
        return domain("m must be nonzero");
    }
    let k32 = u32::try_from(k).or_else(|_| domain(format!("k = {k} is too large")))?;
    if let Some(root) = integer_nth_root(m, k32) {
        return Ok(DecisionReport {
            k,
            m: m.clone(),
            verdict: true,
            hypothesis: Hypothesis::Unconditional,
            shortcut: Some(Shortcut::PerfectKthPower),
            a: k,
            b: 1,
            n: root,
            divisors: divisors(k),
            per_prime: BTreeMap::new(),
            aggregate_t: Vec::new(),
        });
    }

    let (a, n) = largest_power_divisor(m, k)?;
    let b = k / a;
    let family = FdFamily::new(a, b, n.clone())?;
    let mut per_prime = BTreeMap::new();
    for p in primes_of_2an(a, &n)? {
        per_prime.insert(p.get(), combi_with(&family, p, config)?);
    }
    let t = fold_symmetric_difference(per_prime.values());
    let verdict = t.contains(&DivisorSubset::EMPTY);
    let hypothesis = match (verdict, a) {
        (false, _) => Hypothesis::Unconditional,
        (true, 1) => Hypothesis::Bunyakovsky,
        (true, _) => Hypothesis::Schinzel,
    };
    Ok(DecisionReport {
        k,
        m: m.clone(),
        verdict,
        hypothesis,
        shortcut: None,
        a,
        b,
        n,
        divisors: family.divisors().to_vec(),
        per_prime,
        aggregate_t: t.into_iter().collect(),
    })
}

/// The distinct primes dividing `2an`, ascending.
pub fn primes_of_2an(a: u64, n: &BigInt) -> Result<Vec<Prime>> {
    let f = factorize(&(n * BigInt::from(a) * 2))?;
    f.primes()
        .map(|p| match p.to_u64() {
            Some(p) => Prime::new(p),
            None => domain(format!("prime factor {p} of 2an exceeds 64 bits")),
        })
        .collect()
}

/// `{ t_1 △ ... △ t_r : t_i ∈ S_i }`, starting from `{∅}`.
pub fn fold_symmetric_difference<'a>(
    sets: impl IntoIterator<Item = &'a CombiResult>,
) -> BTreeSet<DivisorSubset> {
    sets.into_iter()
        .fold(BTreeSet::from([DivisorSubset::EMPTY]), |acc, r| {
            acc.iter()
                .flat_map(|t| r.subsets.iter().map(move |w| t.symmetric_difference(*w)))
                .collect()
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableMode {
    /// Only proper powers `n^q` for primes `q | k` are tested; every other
    /// `m` has `a = 1` and is representable.
    #[default]
    Fast,
    /// Every `1 ≤ m ≤ max` is tested.
    Full,
}

/// An obstructed `m = n^a`, with `a` the largest divisor of `k` that works.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableEntry {
    pub m: u64,
    pub n: u64,
    pub a: u64,
}

impl fmt::Display for TableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.n, self.a)
    }
}

/// All `1 ≤ m ≤ max` that are not of the form `x^2 + y^2 + z^k`, ascending.
pub fn table_generate(k: u64, max: u64, mode: TableMode) -> Result<Vec<TableEntry>> {
    if k < 3 || k % 2 == 0 {
        return domain(format!("k = {k} must be odd and at least 3"));
    }
    let candidates: Vec<u64> = match mode {
        TableMode::Fast => proper_power_candidates(k, max),
        TableMode::Full => (1..=max).collect(),
    };
    let decide = |m: u64| -> Result<Option<TableEntry>> {
        let report = ispossible(k, &BigInt::from(m))?;
        if report.verdict {
            return Ok(None);
        }
        let n = report.n.to_u64().expect("root of a positive u64 is a positive u64");
        Ok(Some(TableEntry { m, n, a: report.a }))
    };
    let found: Vec<Option<TableEntry>> =
        with_thread_pool(|| candidates.par_iter().map(|&m| decide(m)).collect::<Result<_>>())?;
    Ok(found.into_iter().flatten().collect())
}

/// Sorted, deduplicated `n^q ≤ max` with `n ≥ 2` and `q` a prime divisor of `k`.
fn proper_power_candidates(k: u64, max: u64) -> Vec<u64> {
    let mut out = BTreeSet::new();
    for q in prime_divisors_u64(k) {
        for n in 2u64.. {
            match n.checked_pow(q as u32) {
                Some(m) if m <= max => {
                    out.insert(m);
                }
                _ => break,
            }
        }
    }
    out.into_iter().collect()
}

/// Runs `f` on a pool sized by `OBSTRUCTION_THREADS` when set, else on the
/// global pool.
pub fn with_thread_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0);
    match threads.and_then(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Serializes big integers as decimal strings.
pub mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}
