//! Prime generation by successive pockets.
//!
//! A run starts from a seed pocket and repeatedly sieves the interval that
//! follows the current frontier with the primes found so far. Each
//! interval's primes form the next pocket, and the concatenation of all
//! pockets is the ordered list of primes.
//!
//! ```
//! use pocketprimes::{generate, MethodKind, Stop};
//!
//! let pockets = generate(MethodKind::SquarePlus, Stop::pockets(3)).unwrap();
//! let orders: Vec<u64> = pockets.iter().map(|p| p.order()).collect();
//! assert_eq!(orders, [2, 7, 105]);
//! assert_eq!(pockets[2].max_prime(), Some(619));
//! ```

pub mod checkpoint;
pub mod cli;
pub mod domain;
pub mod error;
pub mod format;
pub mod pockets;
pub mod sieve;
pub mod verify;
pub mod zeta;

pub use domain::{next_interval, seed_state, seed_state_custom, GeneratorState, Interval, MethodKind, Pocket};
pub use error::{Error, Result};
pub use format::Format;
pub use pockets::{generate, generate_with, order_sequence, PocketStream, Stop, StreamConfig};
pub use sieve::{mark_composites, sieve_interval, Layout, Marking, Segment, Sieve, SieveConfig};
