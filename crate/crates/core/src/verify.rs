//! Independent checks on generated pockets.
//!
//! [`oracle_sieve`] is a flat, unsegmented sieve that shares no code with
//! [`crate::sieve`]. Everything else here compares generated output against
//! it or inspects pockets directly.

use crate::domain::{GeneratorState, Interval, Pocket};
use crate::error::{Error, Result};
use crate::sieve::{Layout, Marking, Segment};

/// Largest limit [`oracle_sieve`] accepts.
pub const ORACLE_GUARD: u64 = 1_000_000_000;

/// All primes `<= limit`, by a plain byte-per-integer sieve.
pub fn oracle_sieve(limit: u64) -> Result<Vec<u64>> {
    if limit > ORACLE_GUARD {
        return Err(Error::LimitTooLarge {
            limit,
            guard: ORACLE_GUARD,
        });
    }
    if limit < 2 {
        return Ok(Vec::new());
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    Ok((2..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect())
}

/// Oracle primes together with the limit they were sieved to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTable {
    limit: u64,
    primes: Vec<u64>,
}

impl OracleTable {
    pub fn new(limit: u64) -> Result<Self> {
        Ok(OracleTable {
            limit,
            primes: oracle_sieve(limit)?,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `pi(x)`, or `None` past the table's limit.
    pub fn pi(&self, x: u64) -> Option<u64> {
        (x <= self.limit).then(|| prime_count(&self.primes, x))
    }

    /// The `k`-th prime, 1-based.
    pub fn nth(&self, k: u64) -> Option<u64> {
        k.checked_sub(1).and_then(|i| self.primes.get(i as usize).copied())
    }

    /// Primes in `(lo, hi]`.
    pub fn between(&self, lo: u64, hi: u64) -> &[u64] {
        let a = self.primes.partition_point(|&p| p <= lo);
        let b = self.primes.partition_point(|&p| p <= hi);
        &self.primes[a..b.max(a)]
    }
}

/// Number of primes `<= x` in a sorted prime list that reaches at least `x`.
pub fn prime_count(primes: &[u64], x: u64) -> u64 {
    primes.partition_point(|&p| p <= x) as u64
}

/// Both sides of `pi((p_k, p_k (p_k + 4) + 3]) = pi(p_k (p_k + 4) + 3) - k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountIdentity {
    pub k: u64,
    pub p_k: u64,
    pub top: u64,
    /// Primes counted directly inside the window.
    pub lhs: u64,
    /// Prime count at the window top minus `k`.
    pub rhs: u64,
}

impl CountIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Evaluates the window count identity for the `k`-th prime (1-based).
pub fn count_identity(k: u64, oracle: &OracleTable) -> Result<CountIdentity> {
    if k == 0 {
        return Err(Error::Domain("prime ordinals start at 1".into()));
    }
    let p_k = oracle.nth(k).ok_or(Error::OracleTooShort { needed: k })?;
    let top = p_k
        .checked_mul(p_k + 4)
        .and_then(|v| v.checked_add(3))
        .ok_or(Error::ArithmeticOverflow { mpp: p_k })?;
    let pi_top = oracle.pi(top).ok_or(Error::OracleTooShort { needed: top })?;
    let lhs = oracle.between(p_k, top).len() as u64;
    Ok(CountIdentity {
        k,
        p_k,
        top,
        lhs,
        rhs: pi_top - k,
    })
}

/// Twin pairs found in one pocket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinCensus {
    pub pocket_index: u64,
    /// Pairs `(p, p + 2)` with both members in the pocket.
    pub pairs: Vec<(u64, u64)>,
    /// `(max, max + 2)` when `max + 2` opens the next pocket.
    pub boundary_pair: Option<(u64, u64)>,
}

impl TwinCensus {
    pub fn count(&self) -> usize {
        self.pairs.len()
    }
}

/// Twin pairs inside `pocket`, plus the pair straddling into the next pocket
/// when `next_pocket_first` is given.
pub fn twin_census(pocket: &Pocket, next_pocket_first: Option<u64>) -> TwinCensus {
    let pairs = pocket
        .primes
        .windows(2)
        .filter(|w| w[1] - w[0] == 2)
        .map(|w| (w[0], w[1]))
        .collect();
    let boundary_pair = match (pocket.max_prime(), next_pocket_first) {
        (Some(max), Some(first)) if first == max + 2 => Some((max, first)),
        _ => None,
    };
    TwinCensus {
        pocket_index: pocket.index,
        pairs,
        boundary_pair,
    }
}

/// Census for every pocket of a run, each paired with its successor's first prime.
pub fn twin_census_run(pockets: &[Pocket]) -> Vec<TwinCensus> {
    pockets
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let next_first = pockets.get(i + 1).and_then(|n| n.primes.first().copied());
            twin_census(p, next_first)
        })
        .collect()
}

/// Result of sieving one widened interval beyond the frontier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tightness {
    /// Every survivor up to `top` was prime.
    Works { top: u64 },
    /// `fails_at` survived the base primes but is composite.
    FailsAt { fails_at: u64, top: u64 },
}

/// Sieves `[MIpP + 1, MpP^2 + 4 MpP + extra]` with the state's primes, without
/// the usual coverage check, and reports the first survivor that the oracle
/// says is composite.
///
/// `extra = 3` is the standard width. With `extra = 4` the top becomes
/// `(MpP + 2)^2`, which survives exactly when `MpP + 2` is prime.
pub fn tightness_demo(state: &GeneratorState, extra: u64) -> Result<Tightness> {
    if !(extra == 3 || extra == 4) {
        return Err(Error::Domain(format!("width offset must be 3 or 4, got {extra}")));
    }
    let mpp = state.frontier_max_prime();
    let top = mpp
        .checked_mul(mpp)
        .and_then(|v| v.checked_add(4 * mpp + extra))
        .ok_or(Error::ArithmeticOverflow { mpp })?;
    let interval = Interval::new(state.frontier_interval_hi() + 1, top)?;
    let oracle = oracle_sieve(top).map_err(|_| Error::OracleTooShort { needed: top })?;

    let mut segment = Segment::new(interval, Layout::Full);
    segment.mark_unchecked(state.base_primes(), Marking::FullBase);
    let start = oracle.partition_point(|&p| p < interval.lo());
    let truth = &oracle[start..];
    let survivors = segment.survivors();
    let false_survivor = survivors.iter().find(|n| truth.binary_search(n).is_err());
    Ok(match false_survivor {
        Some(&fails_at) => Tightness::FailsAt { fails_at, top },
        None => {
            // Survivors are a superset of the truth whenever the base is a prefix of the primes.
            debug_assert_eq!(survivors.as_slice(), truth);
            Tightness::Works { top }
        }
    })
}

/// First value at which two ascending prime lists disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub position: usize,
    pub expected: Option<u64>,
    pub found: Option<u64>,
}

/// Compares generated primes with the oracle's, position by position.
pub fn first_mismatch(expected: &[u64], found: &[u64]) -> Option<Mismatch> {
    let n = expected.len().max(found.len());
    (0..n)
        .find(|&i| expected.get(i) != found.get(i))
        .map(|position| Mismatch {
            position,
            expected: expected.get(position).copied(),
            found: found.get(position).copied(),
        })
}

/// Structural problem in a pocket sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionDefect {
    Gap { after: u64, next_lo: u64 },
    PrimeOutsideInterval { pocket: u64, prime: u64 },
    NotIncreasing { pocket: u64 },
    Empty { pocket: u64 },
    OrdinalDrift { pocket: u64, expected: u64, found: u64 },
    IndexDrift { expected: u64, found: u64 },
}

/// Checks that pockets tile their range without gaps or overlap, keep their
/// primes inside their intervals in increasing order, are non-empty unless
/// truncated, and carry consistent ordinals.
pub fn check_partition(pockets: &[Pocket]) -> std::result::Result<(), PartitionDefect> {
    let mut ordinal = pockets.first().map_or(1, |p| p.first_ordinal);
    let mut prev_hi: Option<u64> = None;
    let mut prev_index: Option<u64> = None;
    for p in pockets {
        if let Some(i) = prev_index {
            if p.index != i + 1 {
                return Err(PartitionDefect::IndexDrift {
                    expected: i + 1,
                    found: p.index,
                });
            }
        }
        if let Some(hi) = prev_hi {
            if p.interval.lo() != hi + 1 {
                return Err(PartitionDefect::Gap {
                    after: hi,
                    next_lo: p.interval.lo(),
                });
            }
        }
        if let Some(&q) = p.primes.iter().find(|&&q| !p.interval.contains(q)) {
            return Err(PartitionDefect::PrimeOutsideInterval { pocket: p.index, prime: q });
        }
        if p.primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PartitionDefect::NotIncreasing { pocket: p.index });
        }
        if p.primes.is_empty() && !p.truncated {
            return Err(PartitionDefect::Empty { pocket: p.index });
        }
        if p.first_ordinal != ordinal {
            return Err(PartitionDefect::OrdinalDrift {
                pocket: p.index,
                expected: ordinal,
                found: p.first_ordinal,
            });
        }
        ordinal += p.order();
        prev_hi = Some(p.interval.hi());
        prev_index = Some(p.index);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{seed_state, seed_state_custom, MethodKind};

    fn pocket(index: u64, lo: u64, hi: u64, primes: &[u64]) -> Pocket {
        Pocket {
            index,
            interval: Interval::new(lo, hi).unwrap(),
            primes: primes.to_vec(),
            first_ordinal: 1,
            truncated: false,
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_sieve(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(oracle_sieve(30).unwrap(), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let to_2209 = oracle_sieve(2209).unwrap();
        assert_eq!((to_2209.len(), *to_2209.last().unwrap()), (329, 2207));
        assert!(oracle_sieve(1).unwrap().is_empty());
        assert!(matches!(oracle_sieve(ORACLE_GUARD + 1), Err(Error::LimitTooLarge { .. })));
    }

    #[test]
    fn count_identity_examples() {
        let oracle = OracleTable::new(1000).unwrap();
        let c = count_identity(2, &oracle).unwrap();
        assert_eq!((c.lhs, c.rhs, c.top), (7, 7, 24));
        let c = count_identity(9, &oracle).unwrap();
        assert_eq!((c.lhs, c.rhs, c.top), (105, 105, 624));
        let c = count_identity(1, &oracle).unwrap();
        assert_eq!((c.lhs, c.rhs), (5, 5));
        assert!(c.holds());
        assert!(matches!(count_identity(30, &oracle), Err(Error::OracleTooShort { .. })));
    }

    #[test]
    fn twin_examples() {
        let p2 = pocket(2, 4, 24, &[5, 7, 11, 13, 17, 19, 23]);
        assert_eq!(twin_census(&p2, Some(29)).pairs, vec![(5, 7), (11, 13), (17, 19)]);
        assert_eq!(twin_census(&p2, Some(29)).boundary_pair, None);
        let seed = pocket(1, 2, 3, &[2, 3]);
        let c = twin_census(&seed, Some(5));
        assert_eq!(c.count(), 0);
        assert_eq!(c.boundary_pair, Some((3, 5)));
        let m1 = pocket(5, 11, 14, &[11, 13]);
        assert_eq!(twin_census(&m1, Some(17)).pairs, vec![(11, 13)]);
        let m1_3 = pocket(3, 5, 6, &[5]);
        assert_eq!(twin_census(&m1_3, Some(7)).boundary_pair, Some((5, 7)));
    }

    #[test]
    fn tightness_examples() {
        let seed = seed_state(MethodKind::SquarePlus);
        assert_eq!(tightness_demo(&seed, 4).unwrap(), Tightness::FailsAt { fails_at: 25, top: 25 });
        assert_eq!(tightness_demo(&seed, 3).unwrap(), Tightness::Works { top: 24 });

        // Frontier after the second standard pocket: MIpP = 24, MpP = 23.
        let base = oracle_sieve(23).unwrap();
        let state = GeneratorState::from_parts(MethodKind::SquarePlus, base, 24).unwrap();
        assert_eq!(tightness_demo(&state, 4).unwrap(), Tightness::Works { top: 625 });

        let twin_frontier = seed_state_custom(&oracle_sieve(17).unwrap()).unwrap();
        assert_eq!(
            tightness_demo(&twin_frontier, 4).unwrap(),
            Tightness::FailsAt { fails_at: 361, top: 361 }
        );
        assert!(tightness_demo(&seed, 5).is_err());
    }

    #[test]
    fn partition_checks() {
        let ok = [pocket(1, 2, 3, &[2, 3]), {
            let mut p = pocket(2, 4, 24, &[5, 7, 11, 13, 17, 19, 23]);
            p.first_ordinal = 3;
            p
        }];
        assert_eq!(check_partition(&ok), Ok(()));
        let mut gap = ok.clone();
        gap[1].interval = Interval::new(5, 24).unwrap();
        assert_eq!(check_partition(&gap), Err(PartitionDefect::Gap { after: 3, next_lo: 5 }));
        let mut drift = ok.clone();
        drift[1].first_ordinal = 4;
        assert!(matches!(check_partition(&drift), Err(PartitionDefect::OrdinalDrift { .. })));
    }

    #[test]
    fn mismatch() {
        assert_eq!(first_mismatch(&[2, 3, 5], &[2, 3, 5]), None);
        assert_eq!(
            first_mismatch(&[2, 3, 5], &[2, 3, 7]),
            Some(Mismatch {
                position: 2,
                expected: Some(5),
                found: Some(7)
            })
        );
        assert_eq!(first_mismatch(&[2, 3], &[2]).unwrap().expected, Some(3));
    }
}
