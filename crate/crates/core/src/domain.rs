//! Domain types and interval recurrences shared by every generation method.
//!
//! A run starts from a seed (one or two pockets holding the first primes) and
//! then repeatedly derives the next interval from the current frontier: the
//! largest integer covered so far (`MIpP`) and the largest prime found so far
//! (`MpP`). Nothing in here sieves; see [`crate::sieve`] for that.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::verify;

/// Closed integer range `[lo, hi]` with `2 <= lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: u64,
    hi: u64,
}

impl Interval {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo < 2 || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Number of integers covered.
    pub fn width(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, n: u64) -> bool {
        self.lo <= n && n <= self.hi
    }

    /// Same interval with `hi` lowered to `cap`, or `None` when `cap < lo`.
    pub fn clamp_hi(&self, cap: u64) -> Option<Interval> {
        (cap >= self.lo).then(|| Interval {
            lo: self.lo,
            hi: self.hi.min(cap),
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Which interval rule a run follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    /// Method 1: `[MIpP + 1, 2 MpP]`.
    Bertrand,
    /// Method 2: `[MIpP + 1, MpP^2]`.
    Square,
    /// Method 3 (the standard pockets): `[MIpP + 1, MpP^2 + 4 MpP + 3]`.
    SquarePlus,
}

impl MethodKind {
    pub const ALL: [MethodKind; 3] = [MethodKind::Bertrand, MethodKind::Square, MethodKind::SquarePlus];

    pub fn number(self) -> u8 {
        match self {
            MethodKind::Bertrand => 1,
            MethodKind::Square => 2,
            MethodKind::SquarePlus => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(MethodKind::Bertrand),
            2 => Some(MethodKind::Square),
            3 => Some(MethodKind::SquarePlus),
            _ => None,
        }
    }

    /// Upper bound of the next interval for a frontier prime `mpp`.
    pub fn upper_bound(self, mpp: u64) -> Option<u64> {
        let hi = match self {
            MethodKind::Bertrand => mpp.checked_mul(2)?,
            MethodKind::Square => mpp.checked_mul(mpp)?,
            MethodKind::SquarePlus => mpp
                .checked_mul(mpp)?
                .checked_add(mpp.checked_mul(4)?)?
                .checked_add(3)?,
        };
        // `hi + 1` opens the following interval, so it must be representable too.
        (hi < u64::MAX).then_some(hi)
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for MethodKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "bertrand" => Ok(MethodKind::Bertrand),
            "2" | "square" => Ok(MethodKind::Square),
            "3" | "square-plus" | "squareplus" | "standard" => Ok(MethodKind::SquarePlus),
            other => Err(format!("unknown method `{other}` (expected 1, 2 or 3)")),
        }
    }
}

/// The primes found in one interval of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pocket {
    /// 1-based position of the pocket in the run, seed pockets included.
    pub index: u64,
    pub interval: Interval,
    /// Strictly increasing, all inside `interval`.
    pub primes: Vec<u64>,
    /// 1-based ordinal of `primes[0]` in the sequence of all primes.
    pub first_ordinal: u64,
    /// Set when a prime limit cut the interval short.
    pub truncated: bool,
}

impl Pocket {
    /// Number of primes in the pocket.
    pub fn order(&self) -> u64 {
        self.primes.len() as u64
    }

    pub fn max_prime(&self) -> Option<u64> {
        self.primes.last().copied()
    }

    /// Ordinal of the last prime, i.e. the cumulative count after this pocket.
    pub fn last_ordinal(&self) -> u64 {
        self.first_ordinal + self.order() - 1
    }
}

/// Everything a run needs to produce its next pocket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorState {
    method: MethodKind,
    base_primes: Vec<u64>,
    frontier_interval_hi: u64,
}

impl GeneratorState {
    /// Rebuilds a state from parts, checking the frontier invariants.
    ///
    /// `base_primes` is trusted to be the complete list of primes up to its
    /// last element; use [`seed_state_custom`] for an untrusted list.
    pub fn from_parts(method: MethodKind, base_primes: Vec<u64>, frontier_interval_hi: u64) -> Result<Self> {
        let max = *base_primes.last().ok_or(Error::MalformedSeed)?;
        if base_primes[0] != 2 || base_primes.windows(2).any(|w| w[0] >= w[1]) || max > frontier_interval_hi {
            return Err(Error::MalformedSeed);
        }
        Ok(GeneratorState {
            method,
            base_primes,
            frontier_interval_hi,
        })
    }

    pub fn method(&self) -> MethodKind {
        self.method
    }

    /// Same primes and frontier, continued with a different interval rule.
    pub fn with_method(mut self, method: MethodKind) -> Self {
        self.method = method;
        self
    }

    pub fn base_primes(&self) -> &[u64] {
        &self.base_primes
    }

    pub fn into_base_primes(self) -> Vec<u64> {
        self.base_primes
    }

    /// Number of primes generated so far.
    pub fn cumulative(&self) -> u64 {
        self.base_primes.len() as u64
    }

    /// `MIpP` of the latest pocket.
    pub fn frontier_interval_hi(&self) -> u64 {
        self.frontier_interval_hi
    }

    /// `MpP` of the latest pocket.
    pub fn frontier_max_prime(&self) -> u64 {
        *self.base_primes.last().expect("state always holds at least one prime")
    }

    /// Interval the method would sieve next.
    pub fn next_interval(&self) -> Result<Interval> {
        next_interval(self.method, self.frontier_interval_hi, self.frontier_max_prime())
    }

    /// Records a sieved interval. `primes` must be exactly the primes of `interval`.
    pub(crate) fn advance(&mut self, interval: Interval, primes: &[u64]) {
        debug_assert_eq!(interval.lo(), self.frontier_interval_hi + 1);
        self.base_primes.extend_from_slice(primes);
        self.frontier_interval_hi = interval.hi();
    }
}

/// Interval following a frontier with interval maximum `mipp` and prime maximum `mpp`.
pub fn next_interval(method: MethodKind, mipp: u64, mpp: u64) -> Result<Interval> {
    if mpp < 2 || mipp < mpp {
        return Err(Error::Domain(format!(
            "frontier needs mpp >= 2 and mipp >= mpp, got mipp={mipp} mpp={mpp}"
        )));
    }
    let hi = method.upper_bound(mpp).ok_or(Error::ArithmeticOverflow { mpp })?;
    let lo = mipp.checked_add(1).ok_or(Error::ArithmeticOverflow { mpp })?;
    Interval::new(lo, hi)
}

/// Initial state of a run after its seed pockets.
pub fn seed_state(method: MethodKind) -> GeneratorState {
    let (base_primes, frontier_interval_hi) = match method {
        MethodKind::Bertrand => (vec![2], 2),
        MethodKind::Square | MethodKind::SquarePlus => (vec![2, 3], 3),
    };
    GeneratorState {
        method,
        base_primes,
        frontier_interval_hi,
    }
}

/// Seed pockets emitted before the first sieved interval.
///
/// Method 2 emits `{2}` and `{3}` as two pockets; methods 1 and 3 emit one.
pub fn seed_pockets(method: MethodKind) -> Vec<Pocket> {
    let single = |index, lo, hi, primes: Vec<u64>, first_ordinal| Pocket {
        index,
        interval: Interval { lo, hi },
        primes,
        first_ordinal,
        truncated: false,
    };
    match method {
        MethodKind::Bertrand => vec![single(1, 2, 2, vec![2], 1)],
        MethodKind::Square => vec![single(1, 2, 2, vec![2], 1), single(2, 3, 3, vec![3], 2)],
        MethodKind::SquarePlus => vec![single(1, 2, 3, vec![2, 3], 1)],
    }
}

/// State continuing from a caller-supplied list of the first primes.
///
/// The list must start at 2, be strictly increasing, hold at least three
/// primes and contain every prime up to its maximum. Completeness is checked
/// against [`verify::oracle_sieve`]. The resulting state uses the standard
/// (method 3) interval rule.
pub fn seed_state_custom(primes: &[u64]) -> Result<GeneratorState> {
    if primes.len() < 3 || primes[0] != 2 || primes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::MalformedSeed);
    }
    let max = *primes.last().unwrap();
    let oracle = verify::oracle_sieve(max)?;
    if let Some(&p) = primes.iter().find(|p| oracle.binary_search(p).is_err()) {
        return Err(Error::NotPrime { value: p });
    }
    // Every entry is prime and the list is increasing, so the first
    // disagreement with the oracle is a missing prime.
    if let Some(q) = oracle.iter().zip(primes).find(|(q, p)| q != p).map(|(q, _)| *q) {
        return Err(Error::IncompleteSeed { missing: q });
    }
    Ok(GeneratorState {
        method: MethodKind::SquarePlus,
        base_primes: primes.to_vec(),
        frontier_interval_hi: max,
    })
}

/// The single pocket standing for a custom seed list.
pub fn custom_seed_pocket(state: &GeneratorState) -> Pocket {
    Pocket {
        index: 1,
        interval: Interval {
            lo: 2,
            hi: state.frontier_interval_hi,
        },
        primes: state.base_primes.clone(),
        first_ordinal: 1,
        truncated: false,
    }
}
