use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The next interval bound does not fit in 64 bits, so the generation
    /// frontier has passed the representable limit.
    #[error("arithmetic overflow computing the interval bound after {mpp}")]
    ArithmeticOverflow { mpp: u64 },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: u64, hi: u64 },

    #[error("seed list is missing the prime {missing}")]
    IncompleteSeed { missing: u64 },

    #[error("seed list contains the non-prime {value}")]
    NotPrime { value: u64 },

    #[error("seed list must be strictly increasing, start at 2 and hold at least 3 primes")]
    MalformedSeed,

    /// The base primes cannot certify every survivor up to `end`.
    #[error("base primes up to {max_base} cannot sieve up to {end}")]
    InsufficientBase { max_base: u64, end: u64 },

    #[error("the stream is exhausted")]
    Exhausted,

    #[error("interval upper bound {hi} exceeds 2^38; pass the huge acknowledgment to sieve it")]
    HugeInterval { hi: u64 },

    #[error("oracle limit {limit} exceeds the guard of {guard}")]
    LimitTooLarge { limit: u64, guard: u64 },

    #[error("oracle does not reach {needed}")]
    OracleTooShort { needed: u64 },

    #[error("domain error: {0}")]
    Domain(String),
}
