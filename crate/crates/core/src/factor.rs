//! Prime sieve and integer factorization.
//!
//! Every arithmetic function in this crate depends only on the set of primes
//! dividing its argument, so factorization is the one primitive they share.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Upper end of the cached smallest-prime-factor table.
pub const SIEVE_LIMIT: usize = 1_000_000;

fn spf_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut spf = vec![0u32; SIEVE_LIMIT + 1];
        for i in 2..=SIEVE_LIMIT {
            if spf[i] == 0 {
                let mut j = i;
                while j <= SIEVE_LIMIT {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        spf
    })
}

/// A positive integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    pub value: u64,
    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn new(value: u64) -> Result<Self> {
        if value == 0 {
            return Err(Error::NonPositive("0".into()));
        }
        Ok(FactoredInteger {
            value,
            factors: factorize_raw(value),
        })
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn radical(&self) -> u64 {
        self.primes().product()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }
}

fn factorize_raw(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => out.push((p, 1)),
    };
    if n as usize <= SIEVE_LIMIT {
        let spf = spf_table();
        while n > 1 {
            let p = spf[n as usize] as u64;
            push(p, &mut out);
            n /= p;
        }
        return out;
    }
    let mut d = 2u64;
    while d * d <= n {
        while n % d == 0 {
            push(d, &mut out);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
        if n as usize <= SIEVE_LIMIT {
            let spf = spf_table();
            while n > 1 {
                let p = spf[n as usize] as u64;
                push(p, &mut out);
                n /= p;
            }
            return out;
        }
    }
    if n > 1 {
        push(n, &mut out);
    }
    out
}

/// Distinct primes dividing `n` (empty for `n = 1`), increasing.
pub fn distinct_primes(n: u64) -> Vec<u64> {
    debug_assert!(n > 0);
    factorize_raw(n).into_iter().map(|(p, _)| p).collect()
}

/// Distinct primes dividing the product of `ns`, without forming the product.
pub fn distinct_primes_of(ns: &[u64]) -> Vec<u64> {
    let mut ps: Vec<u64> = ns.iter().flat_map(|&n| distinct_primes(n)).collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n as usize <= SIEVE_LIMIT {
        return spf_table()[n as usize] as u64 == n;
    }
    factorize_raw(n).len() == 1 && factorize_raw(n)[0].1 == 1
}

/// All primes `p <= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_and_large() {
        assert_eq!(
            FactoredInteger::new(360).unwrap().factors,
            vec![(2, 3), (3, 2), (5, 1)]
        );
        let big = 1_000_003u64 * 999_983;
        assert_eq!(distinct_primes(big), vec![999_983, 1_000_003]);
        assert_eq!(distinct_primes(2 * 1_000_003), vec![2, 1_000_003]);
        assert!(FactoredInteger::new(0).is_err());
        assert!(FactoredInteger::new(1).unwrap().factors.is_empty());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(97) && is_prime(1_000_003));
        assert!(!is_prime(1) && !is_prime(91) && !is_prime(1_000_001));
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn product_factorization_matches() {
        for a in 1..40u64 {
            for b in 1..40u64 {
                assert_eq!(distinct_primes_of(&[a, b]), distinct_primes(a * b));
            }
        }
    }
}
