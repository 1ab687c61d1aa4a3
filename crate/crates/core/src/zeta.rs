//! Euler-product survivors on the real axis.
//!
//! Multiplying `zeta(z)` by `(1 - 2^-z)(1 - 3^-z)...(1 - p_k^-z)` leaves
//! `1 + sum n^-z` over the integers `n > 1` with no prime factor `<= p_k`.
//! The smallest such survivors are exactly the primes of the next standard
//! pocket, up to `p_k (p_k + 4) + 3`; the first composite survivor is
//! `p_{k+1}^2`.
//!
//! Survivors are found by trial division against the first `k` primes, which
//! keeps this module independent of the segmented sieve.

use crate::error::{Error, Result};
use crate::verify::OracleTable;

/// The first `k` primes by trial division.
pub fn first_primes(k: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(k);
    let mut n = 2u64;
    while out.len() < k {
        if out.iter().take_while(|&&p| p * p <= n).all(|&p| n % p != 0) {
            out.push(n);
        }
        n += 1;
    }
    out
}

fn is_prime_trial(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Integers in `[2, limit]` with no prime factor among the first `k` primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivorSeries {
    pub k: usize,
    pub limit: u64,
    /// Ascending; 1 is the implicit constant term and is not listed.
    pub survivors: Vec<u64>,
}

pub fn coprime_survivors(k: usize, limit: u64) -> SurvivorSeries {
    let factors = first_primes(k);
    let survivors = (2..=limit)
        .filter(|n| factors.iter().all(|p| n % p != 0))
        .collect();
    SurvivorSeries { k, limit, survivors }
}

/// `p_k (p_k + 4) + 3`, the top of the window following the `k`-th prime.
pub fn window_top(k: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::Domain("prime ordinals start at 1".into()));
    }
    let p = first_primes(k)[k - 1];
    p.checked_mul(p + 4)
        .and_then(|v| v.checked_add(3))
        .ok_or(Error::ArithmeticOverflow { mpp: p })
}

/// Whether the survivors up to `p_k (p_k + 4) + 3` are exactly the primes
/// in `(p_k, p_k (p_k + 4) + 3]`.
pub fn leading_survivors_are_next_pocket(k: usize) -> Result<bool> {
    let top = window_top(k)?;
    let p_k = first_primes(k)[k - 1];
    let oracle = OracleTable::new(top).map_err(|_| Error::OracleTooShort { needed: top })?;
    Ok(coprime_survivors(k, top).survivors == oracle.between(p_k, top))
}

/// Smallest survivor of the first `k` primes that is composite.
pub fn first_composite_survivor(k: usize) -> u64 {
    let factors = first_primes(k);
    let start = factors.last().map_or(2, |&p| p + 1);
    (start..)
        .find(|&n| factors.iter().all(|p| n % p != 0) && !is_prime_trial(n))
        .expect("composite survivors exist for every k")
}

/// Both sides of the truncated Euler-product identity at real `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerResidual {
    /// `prod_{i<=k} (1 - p_i^-z) * sum_{n<=N} n^-z`.
    pub product_side: f64,
    /// `1 + sum of n^-z over survivors n <= N`.
    pub survivor_side: f64,
    /// `|product_side - survivor_side|`.
    pub gap: f64,
    /// `2 N^(1-z) / (z - 1)`.
    pub tail_bound: f64,
}

impl EulerResidual {
    pub fn within_bound(&self) -> bool {
        self.gap <= self.tail_bound
    }
}

/// Evaluates both sides with `truncation` series terms. Sums run from the
/// largest `n` down so the small terms accumulate first.
pub fn euler_residual(z: f64, k: usize, truncation: u64) -> Result<EulerResidual> {
    if !z.is_finite() || z <= 1.0 {
        return Err(Error::Domain(format!("the series diverges for z = {z}")));
    }
    if truncation == 0 {
        return Err(Error::Domain("truncation must be at least 1".into()));
    }
    let factors = first_primes(k);
    let euler: f64 = factors.iter().map(|&p| 1.0 - (p as f64).powf(-z)).product();
    let mut zeta_partial = 0.0;
    let mut survivor_sum = 0.0;
    for n in (2..=truncation).rev() {
        let term = (n as f64).powf(-z);
        zeta_partial += term;
        if factors.iter().all(|p| n % p != 0) {
            survivor_sum += term;
        }
    }
    zeta_partial += 1.0;
    let product_side = euler * zeta_partial;
    let survivor_side = 1.0 + survivor_sum;
    Ok(EulerResidual {
        product_side,
        survivor_side,
        gap: (product_side - survivor_side).abs(),
        tail_bound: 2.0 * (truncation as f64).powf(1.0 - z) / (z - 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes_small() {
        assert_eq!(first_primes(0), Vec::<u64>::new());
        assert_eq!(first_primes(9), vec![2, 3, 5, 7, 11, 13, 17, 19, 23]);
    }

    #[test]
    fn survivor_examples() {
        assert_eq!(coprime_survivors(1, 10).survivors, vec![3, 5, 7, 9]);
        assert_eq!(coprime_survivors(2, 24).survivors, vec![5, 7, 11, 13, 17, 19, 23]);
        assert_eq!(
            coprime_survivors(3, 48).survivors,
            vec![7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        );
        assert_eq!(coprime_survivors(0, 5).survivors, vec![2, 3, 4, 5]);
    }

    #[test]
    fn leading_survivors() {
        assert!(!leading_survivors_are_next_pocket(1).unwrap());
        assert_eq!(coprime_survivors(1, 15).survivors, vec![3, 5, 7, 9, 11, 13, 15]);
        assert!(leading_survivors_are_next_pocket(2).unwrap());
        assert!(leading_survivors_are_next_pocket(9).unwrap());
        assert!(leading_survivors_are_next_pocket(0).is_err());
    }

    #[test]
    fn composite_survivors() {
        assert_eq!(first_composite_survivor(1), 9);
        assert_eq!(first_composite_survivor(2), 25);
        assert_eq!(first_composite_survivor(9), 29 * 29);
    }

    #[test]
    fn residual_examples() {
        let r = euler_residual(2.0, 0, 1_000_000).unwrap();
        assert!((r.product_side - std::f64::consts::PI.powi(2) / 6.0).abs() < 2e-6);
        let r = euler_residual(2.0, 1, 1_000_000).unwrap();
        assert!((r.product_side - 0.75 * 1.644_934_066_848_226_4).abs() < 2e-6);
        assert!(r.gap < 2e-6 && r.within_bound());
        let r = euler_residual(3.0, 3, 100_000).unwrap();
        assert!(r.gap < 1e-10);
        assert!(euler_residual(1.0, 1, 1000).is_err());
        assert!(euler_residual(f64::NAN, 1, 1000).is_err());
    }
}
