//! Coincidence counts: how often f(n) recurs at a fixed gap l.
//!
//! The primary quantities are
//!   plus:  #{1 <= n <= x     : f(n) = f(n+l)}
//!   minus: #{l+1 <= n <= x   : f(n-l) = f(n)}
//!   full:  #{l+1 <= n <= x   : f(n-l) = f(n) = f(n+l)}
//! plus two diagnostic modes the reduction arguments pass through:
//!   reduced:        #{1 <= m <= floor(x/l) : f(m) = f(m+1)}
//!   div_restricted: #{1 <= n <= x : l | n and f(n) = f(n+l)}
//!
//! Counts are exact. Values beyond x (up to x+l) are sieved as needed;
//! the scan never truncates at x. Each count decomposes into disjoint
//! windows whose partial counts merge by addition and whose witnesses
//! merge in range order, so any partition gives identical results.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::func::Func;
use crate::sieve::{chunk_range, primes_for, window_values, PrimeTable};
use crate::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Plus,
    Minus,
    Full,
    Reduced,
    DivRestricted,
}

pub const ALL_MODES: [Mode; 5] = [
    Mode::Plus,
    Mode::Minus,
    Mode::Full,
    Mode::Reduced,
    Mode::DivRestricted,
];

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Plus => "plus",
            Mode::Minus => "minus",
            Mode::Full => "full",
            Mode::Reduced => "reduced",
            Mode::DivRestricted => "div_restricted",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "plus" => Some(Mode::Plus),
            "minus" => Some(Mode::Minus),
            "full" => Some(Mode::Full),
            "reduced" => Some(Mode::Reduced),
            "div_restricted" => Some(Mode::DivRestricted),
            _ => None,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct GapQuery {
    pub func: Func,
    pub x: u64,
    pub l: u64,
    pub mode: Mode,
}

/// A query with its exact count and the first few qualifying n.
#[derive(Clone, Debug)]
pub struct CoincidenceCount {
    pub query: GapQuery,
    pub count: u64,
    pub witnesses: Vec<u64>,
}

pub fn count_plus(func: &Func, x: u64, l: u64, config: &Config) -> Result<CoincidenceCount> {
    count(
        GapQuery { func: func.clone(), x, l, mode: Mode::Plus },
        config,
    )
}

pub fn count_minus(func: &Func, x: u64, l: u64, config: &Config) -> Result<CoincidenceCount> {
    count(
        GapQuery { func: func.clone(), x, l, mode: Mode::Minus },
        config,
    )
}

pub fn count_full(func: &Func, x: u64, l: u64, config: &Config) -> Result<CoincidenceCount> {
    count(
        GapQuery { func: func.clone(), x, l, mode: Mode::Full },
        config,
    )
}

pub fn count_reduced(func: &Func, x: u64, l: u64, config: &Config) -> Result<CoincidenceCount> {
    count(
        GapQuery { func: func.clone(), x, l, mode: Mode::Reduced },
        config,
    )
}

pub fn count_div_restricted(
    func: &Func,
    x: u64,
    l: u64,
    config: &Config,
) -> Result<CoincidenceCount> {
    count(
        GapQuery { func: func.clone(), x, l, mode: Mode::DivRestricted },
        config,
    )
}

// The scan shape shared by all modes: indices run over [lo, hi], each index
// n is tested by comparing f at n + offsets[0..], optionally only at
// multiples of `stride`.
struct Plan {
    lo: u64,
    hi: u64,
    offsets: Vec<u64>, // relative to n - back (all nonnegative after shifting)
    back: u64,         // how far below n the leftmost offset reaches
    stride: u64,       // 1 = every n
}

fn plan(query: &GapQuery, config: &Config) -> Result<Plan> {
    let GapQuery { x, l, mode, .. } = *query;
    if l == 0 {
        return Err(Error::domain("gap l must be >= 1"));
    }
    if x == 0 {
        return Err(Error::domain("x must be >= 1"));
    }
    let needs_above = match mode {
        Mode::Plus | Mode::Full | Mode::DivRestricted => l,
        Mode::Reduced => 1,
        Mode::Minus => 0,
    };
    let top = match mode {
        Mode::Reduced => x / l,
        _ => x,
    };
    if top.checked_add(needs_above).is_none_or(|v| v > config.domain_cap) {
        return Err(Error::domain(format!(
            "query needs values up to {top}+{needs_above}, above domain cap {}",
            config.domain_cap
        )));
    }
    // Offsets are stored shifted up by `back` so window starts stay >= 1.
    Ok(match mode {
        Mode::Plus => Plan { lo: 1, hi: x, offsets: vec![0, l], back: 0, stride: 1 },
        Mode::Minus => Plan { lo: l + 1, hi: x, offsets: vec![0, l], back: l, stride: 1 },
        Mode::Full => Plan { lo: l + 1, hi: x, offsets: vec![0, l, 2 * l], back: l, stride: 1 },
        Mode::Reduced => Plan { lo: 1, hi: x / l, offsets: vec![0, 1], back: 0, stride: 1 },
        Mode::DivRestricted => Plan { lo: 1, hi: x, offsets: vec![0, l], back: 0, stride: l },
    })
}

pub fn count(query: GapQuery, config: &Config) -> Result<CoincidenceCount> {
    let plan = plan(&query, config)?;
    if plan.lo > plan.hi {
        // e.g. minus with l >= x, or reduced with x < l
        return Ok(CoincidenceCount { query, count: 0, witnesses: Vec::new() });
    }

    let max_arg = plan.hi - plan.back + plan.offsets.iter().max().copied().unwrap_or(0);
    let primes = primes_for(&query.func, max_arg);

    let chunks = chunk_range(plan.lo, plan.hi, config.window_size);
    let parts: Vec<Result<(u64, Vec<u64>)>> = chunks
        .par_iter()
        .map(|&(a, len)| scan_chunk(&query.func, &plan, a, len, &primes, config.witness_cap))
        .collect();

    let mut total = 0u64;
    let mut witnesses = Vec::new();
    for part in parts {
        let (c, ws) = part?;
        total += c;
        for w in ws {
            if witnesses.len() >= config.witness_cap {
                break;
            }
            witnesses.push(w);
        }
    }
    Ok(CoincidenceCount { query, count: total, witnesses })
}

fn scan_chunk(
    func: &Func,
    plan: &Plan,
    a: u64,
    len: usize,
    primes: &PrimeTable,
    witness_cap: usize,
) -> Result<(u64, Vec<u64>)> {
    let base = a - plan.back;
    let windows: Vec<Vec<u64>> = plan
        .offsets
        .iter()
        .map(|&off| window_values(func, base + off, len, primes))
        .collect::<Result<_>>()?;

    let mut count = 0u64;
    let mut witnesses = Vec::new();
    let mut n = a;
    if plan.stride > 1 {
        // jump to the first multiple of the stride
        n = a.div_ceil(plan.stride) * plan.stride;
    }
    let hi = a + len as u64 - 1;
    while n <= hi {
        let i = (n - a) as usize;
        let first = windows[0][i];
        if windows[1..].iter().all(|w| w[i] == first) {
            count += 1;
            if witnesses.len() < witness_cap {
                witnesses.push(n);
            }
        }
        n += plan.stride;
    }
    Ok((count, witnesses))
}
