//! Exact inequalities and extremal-order scans for the built-ins.
//!
//! `check_exact` asserts the pointwise inequalities that hold for every
//! n >= 2 and returns violations (there must be none). `scan_extremal`
//! measures the asymptotic-order ratios: those come with hidden constants,
//! so they are reported as extremes over the scanned range, never asserted.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sieve::{chunk_range, window_all, PrimeTable};
use crate::{Config, EULER_GAMMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Statistic {
    /// min phi(n) loglog(n) / n, to compare against e^{-gamma}
    MinPhiRatio,
    /// max sigma(n) / (n loglog n), to compare against e^{gamma}
    MaxSigmaRatio,
    /// max log(tau(n)) loglog(n) / log(n), to compare against log 2
    MaxTauExponent,
    /// max omega(n) loglog(n) / log(n)
    MaxOmegaRatio,
}

pub const ALL_STATISTICS: [Statistic; 4] = [
    Statistic::MinPhiRatio,
    Statistic::MaxSigmaRatio,
    Statistic::MaxTauExponent,
    Statistic::MaxOmegaRatio,
];

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::MinPhiRatio => "min_phi_ratio",
            Statistic::MaxSigmaRatio => "max_sigma_ratio",
            Statistic::MaxTauExponent => "max_tau_exponent",
            Statistic::MaxOmegaRatio => "max_omega_ratio",
        }
    }

    pub fn parse(s: &str) -> Option<Statistic> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "min_phi_ratio" => Some(Statistic::MinPhiRatio),
            "max_sigma_ratio" => Some(Statistic::MaxSigmaRatio),
            "max_tau_exponent" => Some(Statistic::MaxTauExponent),
            "max_omega_ratio" => Some(Statistic::MaxOmegaRatio),
            _ => None,
        }
    }

    fn is_min(self) -> bool {
        matches!(self, Statistic::MinPhiRatio)
    }
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct ExtremalScan {
    pub statistic: Statistic,
    pub n0: u64,
    pub x: u64,
    pub extreme: f64,
    /// smallest n attaining the extreme
    pub arg_n: u64,
    /// for MaxSigmaRatio: all n in range with sigma(n) >= e^gamma n loglog n
    pub violations: Vec<u64>,
}

/// Scan 2..=x for violations of the exact inequalities:
/// phi(n) < n, sigma(n) >= n, tau(n) >= 2, omega(n) >= 1, big_omega(n) >= 1,
/// 2^big_omega(n) <= n, omega(n) <= big_omega(n),
/// 2^omega(n) <= tau(n) <= 2^big_omega(n).
/// All power-of-two comparisons are exact integer arithmetic.
pub fn check_exact(x: u64, config: &Config) -> Result<Vec<u64>> {
    if x < 2 {
        return Err(Error::domain("check_exact needs x >= 2"));
    }
    if x > config.domain_cap {
        return Err(Error::domain(format!("x above domain cap {}", config.domain_cap)));
    }
    let primes = PrimeTable::for_hi(x);
    let chunks = chunk_range(2, x, config.window_size);
    let parts: Vec<Vec<u64>> = chunks
        .par_iter()
        .map(|&(a, len)| {
            let w = window_all(a, len, &primes);
            let mut bad = Vec::new();
            for i in 0..len {
                let n = a + i as u64;
                let (phi, sigma, tau) = (w.phi[i], w.sigma[i], w.tau[i]);
                let (omega, big_omega) = (w.omega[i], w.big_omega[i]);
                let ok = phi < n
                    && sigma >= n
                    && tau >= 2
                    && omega >= 1
                    && big_omega >= 1
                    && (1u64 << big_omega) <= n
                    && omega <= big_omega
                    && (1u64 << omega) <= tau
                    && tau <= (1u64 << big_omega);
                if !ok {
                    bad.push(n);
                }
            }
            bad
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

struct Part {
    extreme: f64,
    arg: u64,
    violations: Vec<u64>,
}

/// Exhaustive extremal-ratio scan over [n0, x], with the sigma scan also
/// collecting every n where sigma(n) >= e^gamma n loglog n (known to be
/// confined to n <= 5040).
pub fn scan_extremal(statistic: Statistic, n0: u64, x: u64, config: &Config) -> Result<ExtremalScan> {
    if n0 < 16 {
        return Err(Error::domain("scan needs n0 >= 16 so loglog n stays positive"));
    }
    if x <= n0 {
        return Err(Error::domain(format!("empty scan range: need x > n0, got [{n0}, {x}]")));
    }
    if x > config.domain_cap {
        return Err(Error::domain(format!("x above domain cap {}", config.domain_cap)));
    }

    let e_gamma = EULER_GAMMA.exp();
    let primes = PrimeTable::for_hi(x);
    let chunks = chunk_range(n0, x, config.window_size);
    let parts: Vec<Part> = chunks
        .par_iter()
        .map(|&(a, len)| {
            let w = window_all(a, len, &primes);
            let mut best = f64::NAN;
            let mut arg = 0u64;
            let mut violations = Vec::new();
            for i in 0..len {
                let n = a + i as u64;
                let nf = n as f64;
                let loglog = nf.ln().ln();
                let value = match statistic {
                    Statistic::MinPhiRatio => w.phi[i] as f64 * loglog / nf,
                    Statistic::MaxSigmaRatio => {
                        let sigma = w.sigma[i] as f64;
                        if sigma >= e_gamma * nf * loglog {
                            violations.push(n);
                        }
                        sigma / (nf * loglog)
                    }
                    Statistic::MaxTauExponent => (w.tau[i] as f64).ln() * loglog / nf.ln(),
                    Statistic::MaxOmegaRatio => w.omega[i] as f64 * loglog / nf.ln(),
                };
                let better = if statistic.is_min() { value < best } else { value > best };
                if arg == 0 || better {
                    best = value;
                    arg = n;
                }
            }
            Part { extreme: best, arg, violations }
        })
        .collect();

    let mut best: Option<(f64, u64)> = None;
    let mut violations = Vec::new();
    for part in parts {
        let better = match best {
            None => true,
            Some((b, _)) => {
                if statistic.is_min() {
                    part.extreme < b
                } else {
                    part.extreme > b
                }
            }
        };
        if better {
            best = Some((part.extreme, part.arg));
        }
        violations.extend(part.violations);
    }
    let (extreme, arg_n) = best.expect("range is nonempty");
    Ok(ExtremalScan { statistic, n0, x, extreme, arg_n, violations })
}
