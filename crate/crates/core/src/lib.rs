//! gapwise: coincidence counting for arithmetic functions.
//!
//! For an arithmetic function f and a fixed gap l > 0, the library counts
//! how often consecutive-at-distance-l values coincide below x (in left,
//! right, and two-sided senses), profiles the worst growth of the ratio
//! f(n+1)/f(n) against reference envelopes, evaluates the matching
//! lower-bound formulas on (x, l) grids, and checks classical exact and
//! extremal-order inequalities. All values are exact 64-bit integers from
//! a segmented sieve that is continuously tested against a trial-division
//! oracle.
//!
//! Every scan decomposes into independent windows and merges with exact
//! (integer or max/argmin) operations, so results are bit-identical for
//! any window size or worker count.

pub mod bounds;
pub mod counter;
pub mod error;
pub mod extremal;
pub mod func;
pub mod profiler;
pub mod report;
pub mod sieve;

pub use error::{Error, Result};
pub use func::{CustomTable, Func, BUILTIN_NAMES};

/// Euler-Mascheroni constant; e^{±γ} enter the φ and σ extremal constants.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Shared limits for sieving and scanning.
#[derive(Clone, Debug)]
pub struct Config {
    /// Largest argument any function is evaluated at. The default keeps
    /// σ(n) < 2^63, so 64-bit accumulation cannot overflow.
    pub domain_cap: u64,
    /// Largest single sieve window, and the chunk size for scans.
    pub window_size: usize,
    /// Witness lists are capped at this many entries per query.
    pub witness_cap: usize,
}

pub const DEFAULT_DOMAIN_CAP: u64 = 1_000_000_000_000;
pub const DEFAULT_WINDOW_SIZE: usize = 1 << 22;
pub const DEFAULT_WITNESS_CAP: usize = 32;

impl Default for Config {
    fn default() -> Self {
        Config {
            domain_cap: DEFAULT_DOMAIN_CAP,
            window_size: DEFAULT_WINDOW_SIZE,
            witness_cap: DEFAULT_WITNESS_CAP,
        }
    }
}

impl Config {
    pub fn with_window_size(mut self, window_size: usize) -> Self {
        self.window_size = window_size;
        self
    }
}
