//! Arbitrary-precision least common multiples, kept in factored form.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A positive integer together with its prime factorization.
///
/// `factors` holds `(prime, multiplicity)` pairs with strictly increasing
/// primes and multiplicities ≥ 1; it is empty exactly when the value is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PeriodResult {
    #[serde(serialize_with = "decimal")]
    value: BigUint,
    factors: Vec<(u64, u32)>,
}

fn decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

impl PeriodResult {
    pub fn one() -> Self {
        PeriodResult { value: BigUint::one(), factors: Vec::new() }
    }

    /// Assembles the value by iterated multiplication, one prime at a time.
    fn from_factors(factors: Vec<(u64, u32)>) -> Self {
        let mut value = BigUint::one();
        for &(p, m) in &factors {
            for _ in 0..m {
                value *= p;
            }
        }
        PeriodResult { value, factors }
    }

    /// Factors a single positive machine integer.
    pub fn from_u64(mut v: u64) -> Self {
        assert!(v >= 1, "period must be positive");
        let mut factors = Vec::new();
        let mut p = 2u64;
        while p.saturating_mul(p) <= v {
            let mut m = 0;
            while v.is_multiple_of(p) {
                v /= p;
                m += 1;
            }
            if m > 0 {
                factors.push((p, m));
            }
            p += 1;
        }
        if v > 1 {
            factors.push((v, 1));
        }
        Self::from_factors(factors)
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// True iff `k` divides the value.
    pub fn is_multiple_of(&self, k: u64) -> bool {
        k != 0 && (&self.value % k).to_u64() == Some(0)
    }
}

impl fmt::Display for PeriodResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn is_prime(c: u64) -> bool {
    c >= 2 && (2..c).take_while(|d| d * d <= c).all(|d| !c.is_multiple_of(d))
}

/// Least common multiple of `values` (1 for an empty list).
///
/// Walks a counter `c` up to the largest input; whenever `c` is a prime
/// dividing some input, its multiplicity is the largest `m` such that `c^m`
/// divides at least one input. The value is then the product of the
/// resulting prime powers.
pub fn lcm_list(values: &[u64]) -> Result<PeriodResult> {
    if let Some(&bad) = values.iter().find(|&&v| v == 0) {
        return Err(Error::NonPositive(bad));
    }
    let max = values.iter().copied().max().unwrap_or(1);
    let mut factors = Vec::new();
    for c in 2..=max {
        if !is_prime(c) || !values.iter().any(|&v| v % c == 0) {
            continue;
        }
        let mut m = 1u32;
        let mut power = c;
        while let Some(next) = power.checked_mul(c) {
            if !values.iter().any(|&v| v % next == 0) {
                break;
            }
            power = next;
            m += 1;
        }
        factors.push((c, m));
    }
    Ok(PeriodResult::from_factors(factors))
}

/// `"12 = 2^2 * 3"`, or just `"1"` / `"7 = 7"` style for trivial cases.
pub fn format_factored(r: &PeriodResult) -> String {
    if r.is_one() {
        return "1".to_string();
    }
    let parts: Vec<String> = r
        .factors
        .iter()
        .map(|&(p, m)| if m == 1 { p.to_string() } else { format!("{p}^{m}") })
        .collect();
    format!("{} = {}", r.value, parts.join(" * "))
}
