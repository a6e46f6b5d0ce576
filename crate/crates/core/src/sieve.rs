//! Exact values of the built-in arithmetic functions over windows.
//!
//! Two independent code paths produce the same numbers: `eval_naive` factors
//! one integer by trial division, and `sieve_window` runs a segmented
//! prime-list sieve over a whole window. Tests hold the two equal; the fast
//! path never feeds its own verification.
//!
//! The segmented pass keeps a `rem` array of unfactored cofactors. For each
//! prime p <= sqrt(hi) it walks the multiples of p inside the window,
//! strips the full power p^e out of `rem`, and reports (p, e) to a sink.
//! Whatever is left in `rem` afterwards is either 1 or a single prime
//! above sqrt(hi).

use crate::error::{Error, Result};
use crate::func::Func;
use crate::Config;

/// A contiguous block of exact function values f(start..start+len-1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueWindow {
    pub func: Func,
    pub start: u64,
    pub values: Vec<u64>,
}

impl ValueWindow {
    /// Value at absolute argument n.
    pub fn value(&self, n: u64) -> u64 {
        self.values[(n - self.start) as usize]
    }
}

/// Read-only prime list shared by all windows of a scan, built once before
/// any parallel work starts. sqrt(domain cap) = 1e6, so u32 holds every
/// prime we ever need.
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
}

impl PrimeTable {
    /// All primes up to `limit` inclusive, by a plain sieve of Eratosthenes.
    pub fn up_to(limit: u64) -> PrimeTable {
        assert!(limit <= u32::MAX as u64, "prime table limit {limit} too large");
        let mut primes = Vec::new();
        if limit >= 2 {
            let n = limit as usize;
            let mut composite = vec![false; n + 1];
            for p in 2..=n {
                if !composite[p] {
                    primes.push(p as u32);
                    let mut m = p * p;
                    while m <= n {
                        composite[m] = true;
                        m += p;
                    }
                }
            }
        }
        PrimeTable { limit, primes }
    }

    /// Sized to factor anything in a window with top element `hi`.
    pub fn for_hi(hi: u64) -> PrimeTable {
        PrimeTable::up_to(hi.isqrt())
    }

    /// Placeholder for code paths that never factor (custom tables).
    pub(crate) fn empty() -> PrimeTable {
        PrimeTable { limit: 0, primes: Vec::new() }
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }
}

/// Prime table sized for sieving any window with hi <= `hi`.
pub(crate) fn primes_for(func: &Func, hi: u64) -> PrimeTable {
    if func.is_builtin() {
        PrimeTable::for_hi(hi)
    } else {
        PrimeTable::empty()
    }
}

/// Receives the full factorization of every element in a window.
/// `visit` fires once per prime power p^e || n with p <= sqrt(hi);
/// `tail` fires for the one remaining prime factor above sqrt(hi), if any.
trait FactorSink {
    fn visit(&mut self, idx: usize, p: u64, e: u32);
    fn tail(&mut self, idx: usize, p: u64);
}

/// One pass over [start, start+len-1], factoring every element.
fn factor_window<S: FactorSink>(start: u64, len: usize, table: &PrimeTable, sink: &mut S) {
    debug_assert!(start >= 1 && len >= 1);
    let hi = start + len as u64 - 1;
    debug_assert!(table.limit >= hi.isqrt(), "prime table does not cover sqrt({hi})");
    let mut rem: Vec<u64> = (start..=hi).collect();
    for &p in &table.primes {
        let p = p as u64;
        if p * p > hi {
            break;
        }
        let mut m = start.div_ceil(p) * p;
        while m <= hi {
            let idx = (m - start) as usize;
            let mut e = 0u32;
            while rem[idx].is_multiple_of(p) {
                rem[idx] /= p;
                e += 1;
            }
            sink.visit(idx, p, e);
            m += p;
        }
    }
    for (idx, &r) in rem.iter().enumerate() {
        if r > 1 {
            sink.tail(idx, r);
        }
    }
}

// u64 power by repeated multiplication; exponents here are <= 40.
fn pow_u64(p: u64, e: u32) -> u64 {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc.checked_mul(p).expect("prime power overflow");
    }
    acc
}

// sigma(p^e) = 1 + p + ... + p^e, accumulated so every partial stays below
// sigma(n); never forms p^(e+1), which can overflow for tail primes.
fn sigma_prime_power(p: u64, e: u32) -> u64 {
    let mut power = 1u64;
    let mut acc = 1u64;
    for _ in 0..e {
        power = power.checked_mul(p).expect("sigma accumulation overflow");
        acc = acc.checked_add(power).expect("sigma accumulation overflow");
    }
    acc
}

/// Contribution of the prime power p^e to f, for a built-in f.
/// Multiplicative built-ins combine contributions by product, additive by sum.
fn prime_power_term(func: &Func, p: u64, e: u32) -> u64 {
    match func {
        // phi(p^e) = p^(e-1) (p-1)
        Func::Phi => pow_u64(p, e - 1) * (p - 1),
        Func::Sigma => sigma_prime_power(p, e),
        Func::Tau => e as u64 + 1,
        Func::Omega => 1,
        Func::BigOmega => e as u64,
        Func::Custom(_) => unreachable!("custom functions are table lookups"),
    }
}

struct SingleFuncSink<'a> {
    func: &'a Func,
    multiplicative: bool,
    values: Vec<u64>,
}

impl FactorSink for SingleFuncSink<'_> {
    #[inline]
    fn visit(&mut self, idx: usize, p: u64, e: u32) {
        let term = prime_power_term(self.func, p, e);
        let v = &mut self.values[idx];
        if self.multiplicative {
            *v = v.checked_mul(term).expect("sieve accumulation overflow");
        } else {
            *v += term;
        }
    }

    #[inline]
    fn tail(&mut self, idx: usize, p: u64) {
        self.visit(idx, p, 1);
    }
}

/// Check window bounds against the configured caps.
fn check_window(start: u64, len: usize, config: &Config) -> Result<u64> {
    if start == 0 {
        return Err(Error::domain("window start must be >= 1"));
    }
    if len == 0 {
        return Err(Error::domain("window length must be >= 1"));
    }
    if len > config.window_size {
        return Err(Error::config(format!(
            "window length {len} exceeds capacity {}",
            config.window_size
        )));
    }
    let end = start
        .checked_add(len as u64 - 1)
        .filter(|&e| e <= config.domain_cap)
        .ok_or_else(|| {
            Error::domain(format!(
                "window [{start}, {start}+{len}-1] exceeds domain cap {}",
                config.domain_cap
            ))
        })?;
    Ok(end)
}

/// Internal entry used by the scanning modules: the caller owns a prime
/// table covering sqrt of the largest hi it will ask for, built once
/// before any parallel work starts.
pub(crate) fn window_values(
    func: &Func,
    start: u64,
    len: usize,
    primes: &PrimeTable,
) -> Result<Vec<u64>> {
    if let Func::Custom(table) = func {
        return Ok(table.slice(start, len)?.to_vec());
    }
    let multiplicative = matches!(func, Func::Phi | Func::Sigma | Func::Tau);
    let init = if multiplicative { 1 } else { 0 };
    let mut sink = SingleFuncSink {
        func,
        multiplicative,
        values: vec![init; len],
    };
    factor_window(start, len, primes, &mut sink);
    Ok(sink.values)
}

/// Exact values f(start..start+len-1) by segmented sieve (built-ins) or
/// table lookup (custom functions).
pub fn sieve_window(func: &Func, start: u64, len: usize, config: &Config) -> Result<ValueWindow> {
    let end = check_window(start, len, config)?;
    let primes = primes_for(func, end);
    let values = window_values(func, start, len, &primes)?;
    Ok(ValueWindow {
        func: func.clone(),
        start,
        values,
    })
}

/// All five built-in functions over one window, from a single factor pass.
pub struct AllValues {
    pub start: u64,
    pub phi: Vec<u64>,
    pub sigma: Vec<u64>,
    pub tau: Vec<u64>,
    pub omega: Vec<u64>,
    pub big_omega: Vec<u64>,
}

struct AllFuncSink {
    phi: Vec<u64>,
    sigma: Vec<u64>,
    tau: Vec<u64>,
    omega: Vec<u64>,
    big_omega: Vec<u64>,
}

impl FactorSink for AllFuncSink {
    #[inline]
    fn visit(&mut self, idx: usize, p: u64, e: u32) {
        self.phi[idx] *= pow_u64(p, e - 1) * (p - 1);
        self.sigma[idx] = self
            .sigma[idx]
            .checked_mul(sigma_prime_power(p, e))
            .expect("sigma accumulation overflow");
        self.tau[idx] *= e as u64 + 1;
        self.omega[idx] += 1;
        self.big_omega[idx] += e as u64;
    }

    #[inline]
    fn tail(&mut self, idx: usize, p: u64) {
        self.visit(idx, p, 1);
    }
}

pub(crate) fn window_all(start: u64, len: usize, primes: &PrimeTable) -> AllValues {
    let mut sink = AllFuncSink {
        phi: vec![1; len],
        sigma: vec![1; len],
        tau: vec![1; len],
        omega: vec![0; len],
        big_omega: vec![0; len],
    };
    factor_window(start, len, primes, &mut sink);
    AllValues {
        start,
        phi: sink.phi,
        sigma: sink.sigma,
        tau: sink.tau,
        omega: sink.omega,
        big_omega: sink.big_omega,
    }
}

/// f(n) by trial-division factorization only. Independent of the sieve
/// path; this is the oracle every sieve result is tested against.
pub fn eval_naive(func: &Func, n: u64) -> Result<u64> {
    eval_naive_capped(func, n, Config::default().domain_cap)
}

pub fn eval_naive_capped(func: &Func, n: u64, domain_cap: u64) -> Result<u64> {
    if let Func::Custom(table) = func {
        return table.value(n);
    }
    if n == 0 || n > domain_cap {
        return Err(Error::domain(format!(
            "argument {n} outside domain [1, {domain_cap}]"
        )));
    }
    let multiplicative = matches!(func, Func::Phi | Func::Sigma | Func::Tau);
    let mut acc: u64 = if multiplicative { 1 } else { 0 };
    let mut apply = |p: u64, e: u32| {
        let term = prime_power_term(func, p, e);
        if multiplicative {
            acc = acc.checked_mul(term).expect("naive accumulation overflow");
        } else {
            acc += term;
        }
    };
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            apply(p, e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        apply(m, 1);
    }
    Ok(acc)
}

/// Split [lo, hi] into (start, len) chunks of at most `window` elements.
pub(crate) fn chunk_range(lo: u64, hi: u64, window: usize) -> Vec<(u64, usize)> {
    debug_assert!(window >= 1);
    let mut chunks = Vec::new();
    if lo > hi {
        return chunks;
    }
    let mut start = lo;
    while start <= hi {
        let len = ((hi - start + 1).min(window as u64)) as usize;
        chunks.push((start, len));
        start += len as u64;
    }
    chunks
}
