//! Pocket-by-pocket prime generation.
//!
//! A [`PocketStream`] holds every prime produced so far. Each call to
//! [`PocketStream::next_pocket`] derives the next interval from the frontier,
//! sieves it against the held primes and appends the result, so pocket `j`
//! can only be produced after pockets `1..j`.

use crate::domain::{custom_seed_pocket, seed_pockets, seed_state, GeneratorState, Interval, MethodKind, Pocket};
use crate::error::{Error, Result};
use crate::sieve::{Sieve, SieveConfig};

/// Interval upper bounds above this need [`StreamConfig::allow_huge`].
pub const HUGE_THRESHOLD: u64 = 1 << 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StreamConfig {
    pub sieve: SieveConfig,
    /// Permit intervals whose upper bound exceeds [`HUGE_THRESHOLD`].
    pub allow_huge: bool,
}

/// When a run stops. Whichever bound is hit first wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stop {
    /// Total pocket count, seed pockets included.
    pub pockets: Option<u64>,
    /// No prime above this is produced; the last interval is cut here.
    pub limit: Option<u64>,
}

impl Stop {
    pub fn pockets(n: u64) -> Self {
        Stop {
            pockets: Some(n),
            limit: None,
        }
    }

    pub fn limit(l: u64) -> Self {
        Stop {
            pockets: None,
            limit: Some(l),
        }
    }

    fn validate(&self) -> Result<()> {
        match (self.pockets, self.limit) {
            (None, None) => Err(Error::Domain("a run needs a pocket count or a prime limit".into())),
            (Some(0), _) => Err(Error::Domain("pocket count must be at least 1".into())),
            (_, Some(l)) if l < 2 => Err(Error::Domain("prime limit must be at least 2".into())),
            _ => Ok(()),
        }
    }
}

/// Resumable generator of successive pockets.
#[derive(Debug)]
pub struct PocketStream {
    state: GeneratorState,
    seeds: Vec<Pocket>,
    limit: Option<u64>,
    next_index: u64,
    sieve: Sieve,
    allow_huge: bool,
    exhausted: bool,
}

impl PocketStream {
    pub fn new(method: MethodKind) -> Self {
        Self::with_config(method, StreamConfig::default())
    }

    pub fn with_config(method: MethodKind, config: StreamConfig) -> Self {
        let seeds = seed_pockets(method);
        let next_index = seeds.len() as u64 + 1;
        Self::build(seed_state(method), seeds, next_index, config)
    }

    /// Continues from an existing state. `next_index` is the index the next
    /// emitted pocket will carry.
    pub fn from_state(state: GeneratorState, next_index: u64, config: StreamConfig) -> Self {
        Self::build(state, Vec::new(), next_index, config)
    }

    /// Continues from a custom seed list, which counts as pocket 1.
    pub fn from_custom_seed(state: GeneratorState, config: StreamConfig) -> Self {
        let seeds = vec![custom_seed_pocket(&state)];
        Self::build(state, seeds, 2, config)
    }

    fn build(state: GeneratorState, seeds: Vec<Pocket>, next_index: u64, config: StreamConfig) -> Self {
        PocketStream {
            state,
            seeds,
            limit: None,
            next_index,
            sieve: Sieve::new(config.sieve),
            allow_huge: config.allow_huge,
            exhausted: false,
        }
    }

    /// Caps every emitted prime at `limit`. Seed pockets reaching past the
    /// limit are cut as well.
    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = Some(limit);
        if self.state.frontier_interval_hi() <= limit || self.seeds.is_empty() {
            return self;
        }
        let mut kept = Vec::new();
        for mut p in std::mem::take(&mut self.seeds) {
            let Some(cut) = p.interval.clamp_hi(limit) else { break };
            if cut != p.interval {
                p.primes.retain(|&q| q <= limit);
                p.interval = cut;
                p.truncated = true;
            }
            kept.push(p);
        }
        let primes: Vec<u64> = kept.iter().flat_map(|p| p.primes.iter().copied()).collect();
        self.state = GeneratorState::from_parts(self.state.method(), primes, limit)
            .expect("a prime limit >= 2 keeps the seed prime 2");
        self.seeds = kept;
        self.exhausted = true;
        self
    }

    /// Seed pockets of the run, before any sieving.
    pub fn seed_pockets(&self) -> &[Pocket] {
        &self.seeds
    }

    pub fn state(&self) -> &GeneratorState {
        &self.state
    }

    pub fn into_state(self) -> GeneratorState {
        self.state
    }

    pub fn method(&self) -> MethodKind {
        self.state.method()
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    /// Index the next emitted pocket will carry.
    pub fn next_index(&self) -> u64 {
        self.next_index
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted || self.limit.is_some_and(|l| self.state.frontier_interval_hi() >= l)
    }

    /// Interval of the next pocket before any limit is applied. Computing it
    /// never sieves, so it works for intervals far too large to generate.
    pub fn peek_interval(&self) -> Result<Interval> {
        self.state.next_interval()
    }

    /// Sieves the next interval and returns its pocket.
    pub fn next_pocket(&mut self) -> Result<Pocket> {
        if self.is_exhausted() {
            self.exhausted = true;
            return Err(Error::Exhausted);
        }
        let full = match self.state.next_interval() {
            Ok(i) => i,
            Err(e) => {
                self.exhausted = true;
                return Err(e);
            }
        };
        let (interval, truncated) = match self.limit {
            Some(l) if full.hi() > l => (full.clamp_hi(l).expect("frontier is below the limit"), true),
            _ => (full, false),
        };
        if interval.hi() > HUGE_THRESHOLD && !self.allow_huge {
            return Err(Error::HugeInterval { hi: interval.hi() });
        }
        let primes = self.sieve.sieve_interval(interval, self.state.base_primes())?;
        let pocket = Pocket {
            index: self.next_index,
            interval,
            first_ordinal: self.state.cumulative() + 1,
            primes,
            truncated,
        };
        self.state.advance(interval, &pocket.primes);
        self.next_index += 1;
        if truncated {
            self.exhausted = true;
        }
        Ok(pocket)
    }
}

impl Iterator for PocketStream {
    type Item = Result<Pocket>;

    /// Yields sieved pockets until the limit or the 64-bit range runs out.
    /// Overflow ends the iteration without an error item.
    fn next(&mut self) -> Option<Self::Item> {
        match self.next_pocket() {
            Err(Error::Exhausted) | Err(Error::ArithmeticOverflow { .. }) => None,
            other => Some(other),
        }
    }
}

/// Pockets of a run from its seed onward.
pub fn generate(method: MethodKind, stop: Stop) -> Result<Vec<Pocket>> {
    generate_with(method, stop, StreamConfig::default())
}

pub fn generate_with(method: MethodKind, stop: Stop, config: StreamConfig) -> Result<Vec<Pocket>> {
    stop.validate()?;
    let mut stream = PocketStream::with_config(method, config);
    if let Some(l) = stop.limit {
        stream = stream.with_limit(l);
    }
    collect_run(stream, stop.pockets)
}

/// Seed pockets of `stream` followed by sieved pockets until `max_pockets`
/// (seeds included) or exhaustion.
pub fn collect_run(mut stream: PocketStream, max_pockets: Option<u64>) -> Result<Vec<Pocket>> {
    let cap = max_pockets.unwrap_or(u64::MAX) as usize;
    let mut out: Vec<Pocket> = stream.seed_pockets().iter().take(cap).cloned().collect();
    while out.len() < cap {
        match stream.next_pocket() {
            Ok(p) => out.push(p),
            Err(Error::Exhausted) => break,
            Err(Error::ArithmeticOverflow { .. }) if max_pockets.is_none() => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Orders of the first `n` pockets of a run.
pub fn order_sequence(method: MethodKind, n: u64) -> Result<Vec<u64>> {
    Ok(generate(method, Stop::pockets(n))?.iter().map(Pocket::order).collect())
}

/// Slow set-algebra generation kept for differential testing.
///
/// Each pocket is the interval minus the union of the multiple sets
/// `p * {Q + 1, ..., Q_hi}` of every prime generated so far, with
/// `BTreeSet`s standing in for the sets. Only practical for small bounds.
pub mod reference {
    use std::collections::BTreeSet;

    use crate::domain::{seed_pockets, seed_state, Interval, MethodKind, Pocket};
    use crate::error::Result;
    use crate::sieve::multiples_in;

    /// Primes of `interval` given every prime generated before it.
    pub fn set_union_pocket(interval: Interval, base_primes: &[u64]) -> Vec<u64> {
        let composites: BTreeSet<u64> = base_primes
            .iter()
            .flat_map(|&p| multiples_in(p, interval))
            .collect();
        (interval.lo()..=interval.hi())
            .filter(|n| !composites.contains(n))
            .collect()
    }

    /// First `n` pockets of a run, seed pockets included.
    pub fn generate(method: MethodKind, n: u64) -> Result<Vec<Pocket>> {
        let mut pockets: Vec<Pocket> = seed_pockets(method).into_iter().take(n as usize).collect();
        let mut state = seed_state(method);
        while (pockets.len() as u64) < n {
            let interval = state.next_interval()?;
            let primes = set_union_pocket(interval, state.base_primes());
            let pocket = Pocket {
                index: pockets.len() as u64 + 1,
                interval,
                first_ordinal: state.cumulative() + 1,
                primes,
                truncated: false,
            };
            state.advance(interval, &pocket.primes);
            pockets.push(pocket);
        }
        Ok(pockets)
    }
}
