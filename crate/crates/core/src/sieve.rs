//! Segmented extraction of the primes of an interval from a complete list of
//! smaller primes.
//!
//! Every composite in a pocket's interval has a prime factor among the primes
//! already generated, so the pocket is what is left of the interval after
//! striking their multiples. The multiples of `p` inside `[lo, hi]` run from
//! `p * (floor((lo - 1) / p) + 1)` to `p * floor(hi / p)` ([`QuotientBounds`]).
//! Striking happens on fixed-capacity bit segments so memory stays bounded
//! regardless of the interval width.

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::domain::Interval;
use crate::error::{Error, Result};

/// Default segment capacity in integers.
pub const DEFAULT_SEGMENT_CAPACITY: usize = 1 << 20;

/// First and last quotient of the multiples of `p` inside an interval.
///
/// `q * p <= lo - 1 < (q + 1) * p` and `q_hi * p <= hi < (q_hi + 1) * p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientBounds {
    pub q: u64,
    pub q_hi: u64,
}

impl QuotientBounds {
    pub fn new(p: u64, interval: Interval) -> Self {
        assert!(p >= 2, "quotient bounds need p >= 2");
        QuotientBounds {
            q: (interval.lo() - 1) / p,
            q_hi: interval.hi() / p,
        }
    }

    /// Number of multiples of `p` inside the interval.
    pub fn count(&self) -> u64 {
        self.q_hi - self.q
    }

    pub fn is_empty(&self) -> bool {
        self.q_hi == self.q
    }
}

/// All multiples of `p` inside `interval`, ascending.
pub fn multiples_in(p: u64, interval: Interval) -> Vec<u64> {
    let b = QuotientBounds::new(p, interval);
    (b.q + 1..=b.q_hi).map(|k| k * p).collect()
}

/// Largest integer that a complete prime list ending at `max_base` can sieve.
///
/// Every composite below the square of the next prime has a factor in the
/// list. For odd `max_base` the next prime is at least `max_base + 2`, which
/// gives `max_base^2 + 4 max_base + 3`; after 2 the next prime is 3.
pub fn coverage_limit(max_base: u64) -> u64 {
    match max_base {
        0 | 1 => 3,
        2 => 8,
        m => m
            .checked_add(2)
            .and_then(|n| n.checked_mul(n))
            .map_or(u64::MAX, |sq| sq - 1),
    }
}

/// Slot layout of a [`Segment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    /// One bit per integer.
    Full,
    /// One bit per odd integer; 2 is handled outside the bit array.
    #[default]
    OddOnly,
}

/// Which base primes strike a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Marking {
    /// Only primes with `p^2 <= end`, striking from `max(p^2, first multiple)`.
    #[default]
    Pruned,
    /// Every base prime, striking each multiple other than `p` itself.
    FullBase,
}

/// Bit flags over `[base, end]`; a set bit means "possibly prime".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    base: u64,
    end: u64,
    layout: Layout,
    first_slot: u64,
    slots: u64,
    words: Vec<u64>,
}

impl Segment {
    pub fn new(interval: Interval, layout: Layout) -> Self {
        let (base, end) = (interval.lo(), interval.hi());
        let (first_slot, slots) = match layout {
            Layout::Full => (base, end - base + 1),
            Layout::OddOnly => {
                let first = base | 1;
                (first, if first > end { 0 } else { (end - first) / 2 + 1 })
            }
        };
        let n_words = usize::try_from(slots.div_ceil(64)).expect("segment too large for memory");
        let mut words = vec![u64::MAX; n_words];
        if slots % 64 != 0 {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (slots % 64)) - 1;
            }
        }
        Segment {
            base,
            end,
            layout,
            first_slot,
            slots,
            words,
        }
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.base, self.end).expect("segment bounds were validated")
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    /// Number of stored flags.
    pub fn slots(&self) -> u64 {
        self.slots
    }

    /// Strikes composites after checking that `base_primes` reaches far enough.
    pub fn mark(&mut self, base_primes: &[u64], marking: Marking) -> Result<()> {
        let max_base = base_primes.last().copied().unwrap_or(0);
        if coverage_limit(max_base) < self.end {
            return Err(Error::InsufficientBase {
                max_base,
                end: self.end,
            });
        }
        self.mark_unchecked(base_primes, marking);
        Ok(())
    }

    /// Strikes composites without the coverage check. Survivors are then
    /// only guaranteed free of factors in `base_primes`.
    pub(crate) fn mark_unchecked(&mut self, base_primes: &[u64], marking: Marking) {
        for &p in base_primes {
            let square = p.checked_mul(p);
            if marking == Marking::Pruned && square.is_none_or(|sq| sq > self.end) {
                break;
            }
            if self.layout == Layout::OddOnly && p == 2 {
                continue;
            }
            let Some(first) = ((self.base - 1) / p + 1).max(2).checked_mul(p) else {
                continue;
            };
            let start = match marking {
                Marking::Pruned => first.max(square.unwrap_or(u64::MAX)),
                Marking::FullBase => first,
            };
            self.strike_from(start, p);
        }
    }

    fn strike_from(&mut self, mut m: u64, p: u64) {
        let step = match self.layout {
            Layout::Full => p,
            Layout::OddOnly => {
                if m % 2 == 0 {
                    match m.checked_add(p) {
                        Some(odd) => m = odd,
                        None => return,
                    }
                }
                2 * p
            }
        };
        let slot_step = step / self.layout_stride();
        if m > self.end {
            return;
        }
        let mut idx = (m - self.first_slot) / self.layout_stride();
        while idx < self.slots {
            self.words[(idx >> 6) as usize] &= !(1u64 << (idx & 63));
            idx += slot_step;
        }
    }

    fn layout_stride(&self) -> u64 {
        match self.layout {
            Layout::Full => 1,
            Layout::OddOnly => 2,
        }
    }

    /// Values whose flag is still set, ascending.
    pub fn survivors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        if self.layout == Layout::OddOnly && self.base <= 2 && 2 <= self.end {
            out.push(2);
        }
        let stride = self.layout_stride();
        for (w, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let idx = (w as u64) * 64 + bits.trailing_zeros() as u64;
                out.push(self.first_slot + idx * stride);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// Strikes the multiples of `base_primes` from `segment` and hands it back.
pub fn mark_composites(mut segment: Segment, base_primes: &[u64]) -> Result<Segment> {
    segment.mark(base_primes, Marking::default())?;
    Ok(segment)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Integers per segment.
    pub segment_capacity: usize,
    pub layout: Layout,
    pub marking: Marking,
    /// Worker threads for segment marking; 1 runs inline.
    pub threads: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_capacity: DEFAULT_SEGMENT_CAPACITY,
            layout: Layout::default(),
            marking: Marking::default(),
            threads: 1,
        }
    }
}

impl SieveConfig {
    pub fn with_capacity(segment_capacity: usize) -> Self {
        SieveConfig {
            segment_capacity,
            ..Self::default()
        }
    }

    /// Capacity in integers for a bit budget of `bytes` per segment.
    pub fn capacity_for_bytes(bytes: usize, layout: Layout) -> usize {
        let per_bit = match layout {
            Layout::Full => 1,
            Layout::OddOnly => 2,
        };
        bytes.saturating_mul(8 * per_bit).max(1)
    }
}

/// A configured segmented sieve, owning its worker pool.
pub struct Sieve {
    config: SieveConfig,
    pool: Option<ThreadPool>,
}

impl std::fmt::Debug for Sieve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Sieve").field("config", &self.config).finish()
    }
}

impl Default for Sieve {
    fn default() -> Self {
        Sieve::new(SieveConfig::default())
    }
}

impl Sieve {
    pub fn new(config: SieveConfig) -> Self {
        assert!(config.segment_capacity >= 1, "segment capacity must be at least 1");
        let pool = (config.threads > 1).then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.threads)
                .build()
                .expect("failed to build sieve worker pool")
        });
        Sieve { config, pool }
    }

    pub fn config(&self) -> &SieveConfig {
        &self.config
    }

    /// All primes in `interval`, given every prime up to `sqrt(interval.hi())`
    /// (and, for the coverage check, a list whose maximum certifies `hi`).
    pub fn sieve_interval(&self, interval: Interval, base_primes: &[u64]) -> Result<Vec<u64>> {
        let max_base = base_primes.last().copied().unwrap_or(0);
        if coverage_limit(max_base) < interval.hi() {
            return Err(Error::InsufficientBase {
                max_base,
                end: interval.hi(),
            });
        }
        let needed = match self.config.marking {
            Marking::Pruned => {
                let root = interval.hi().isqrt();
                &base_primes[..base_primes.partition_point(|&p| p <= root)]
            }
            Marking::FullBase => base_primes,
        };
        let cap = self.config.segment_capacity as u64;
        let segments: Vec<Interval> = std::iter::successors(Some(interval.lo()), |&lo| {
            lo.checked_add(cap).filter(|&next| next <= interval.hi())
        })
        .map(|lo| {
            let hi = lo.saturating_add(cap - 1).min(interval.hi());
            Interval::new(lo, hi).expect("segment inside a valid interval")
        })
        .collect();

        let run = |seg: &Interval| {
            let mut s = Segment::new(*seg, self.config.layout);
            s.mark_unchecked(needed, self.config.marking);
            s.survivors()
        };
        let mut out = Vec::new();
        match &self.pool {
            None => segments.iter().for_each(|seg| out.extend(run(seg))),
            Some(pool) => {
                // Batches keep at most a few segments' survivors in flight per worker.
                for batch in segments.chunks(self.config.threads * 4) {
                    let parts: Vec<Vec<u64>> = pool.install(|| batch.par_iter().map(run).collect());
                    parts.into_iter().for_each(|p| out.extend(p));
                }
            }
        }
        Ok(out)
    }
}

/// All primes in `interval` using the default layout and `segment_capacity`
/// integers per segment.
pub fn sieve_interval(interval: Interval, base_primes: &[u64], segment_capacity: usize) -> Result<Vec<u64>> {
    Sieve::new(SieveConfig::with_capacity(segment_capacity)).sieve_interval(interval, base_primes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: u64, hi: u64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn small_primes(n: u64) -> Vec<u64> {
        (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
    }

    #[test]
    fn multiples_examples() {
        assert_eq!(multiples_in(2, iv(8, 14)), vec![8, 10, 12, 14]);
        assert_eq!(multiples_in(5, iv(24, 48)), vec![25, 30, 35, 40, 45]);
        let sevens = multiples_in(7, iv(50, 2209));
        let brute: Vec<u64> = (50..=2209).filter(|n| n % 7 == 0).collect();
        assert_eq!(sevens, brute);
        assert_eq!((sevens[0], *sevens.last().unwrap()), (7 * 8, 7 * 315));
        assert!(multiples_in(11, iv(12, 21)).is_empty());
    }

    #[test]
    fn quotient_bounds() {
        let b = QuotientBounds::new(7, iv(50, 2209));
        assert_eq!((b.q, b.q_hi, b.count()), (7, 315, 308));
        assert!(QuotientBounds::new(11, iv(12, 21)).is_empty());
    }

    #[test]
    fn coverage() {
        assert_eq!(coverage_limit(2), 8);
        assert_eq!(coverage_limit(3), 24);
        assert_eq!(coverage_limit(23), 624);
        assert_eq!(coverage_limit(u64::MAX - 1), u64::MAX);
    }

    #[test]
    fn mark_examples() {
        for layout in [Layout::Full, Layout::OddOnly] {
            let s = mark_composites(Segment::new(iv(4, 24), layout), &[2, 3]).unwrap();
            assert_eq!(s.survivors(), vec![5, 7, 11, 13, 17, 19, 23]);
            let s = mark_composites(Segment::new(iv(3, 4), layout), &[2]).unwrap();
            assert_eq!(s.survivors(), vec![3]);
        }
        let base = small_primes(23);
        let s = mark_composites(Segment::new(iv(26, 623), Layout::OddOnly), &base).unwrap();
        let surv = s.survivors();
        assert_eq!((surv.len(), *surv.last().unwrap()), (105, 619));
    }

    #[test]
    fn insufficient_base() {
        let err = mark_composites(Segment::new(iv(4, 25), Layout::Full), &[2, 3]).unwrap_err();
        assert_eq!(err, Error::InsufficientBase { max_base: 3, end: 25 });
        assert!(sieve_interval(iv(3, 9), &[2], 4).is_err());
    }

    #[test]
    fn full_base_marking_matches_pruned() {
        let base = small_primes(619);
        for layout in [Layout::Full, Layout::OddOnly] {
            let pruned = Sieve::new(SieveConfig {
                segment_capacity: 1000,
                layout,
                marking: Marking::Pruned,
                threads: 1,
            });
            let full = Sieve::new(SieveConfig {
                segment_capacity: 1000,
                layout,
                marking: Marking::FullBase,
                threads: 1,
            });
            let i = iv(625, 60_000);
            assert_eq!(pruned.sieve_interval(i, &base).unwrap(), full.sieve_interval(i, &base).unwrap());
        }
    }

    #[test]
    fn interval_containing_base_primes() {
        // Base primes inside the interval are primes, not composites.
        let base = small_primes(11);
        let got = sieve_interval(iv(2, 120), &base, 7).unwrap();
        assert_eq!(got, small_primes(120));
    }

    #[test]
    fn small_capacities_and_threads() {
        let base = [2, 3];
        for cap in [1, 2, 3, 8] {
            assert_eq!(sieve_interval(iv(4, 24), &base, cap).unwrap(), vec![5, 7, 11, 13, 17, 19, 23]);
        }
        let threaded = Sieve::new(SieveConfig {
            segment_capacity: 17,
            threads: 4,
            ..SieveConfig::default()
        });
        let base = small_primes(619);
        assert_eq!(
            threaded.sieve_interval(iv(625, 385_640), &base).unwrap(),
            sieve_interval(iv(625, 385_640), &base, 1 << 20).unwrap()
        );
    }

    #[test]
    fn pocket_four_of_standard_run() {
        let base = small_primes(619);
        let got = sieve_interval(iv(626, 385_639), &base, 1 << 20).unwrap();
        assert_eq!((got.len(), *got.last().unwrap()), (32622, 385_639));
    }

    #[test]
    fn near_u64_max() {
        // Odd-only striking must not overflow close to the top of the range.
        let hi = u64::MAX - 1;
        let lo = hi - 200;
        let s = Segment::new(iv(lo, hi), Layout::OddOnly);
        assert_eq!(s.slots(), 100);
        let mut s2 = s.clone();
        s2.mark_unchecked(&[3, 5, 7], Marking::FullBase);
        assert!(s2.survivors().iter().all(|n| n % 3 != 0 && n % 5 != 0 && n % 7 != 0));
    }
}
