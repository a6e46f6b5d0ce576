//! Empirical worst growth of consecutive-value ratios.
//!
//! Each lower-bound theorem hypothesizes f(n+1)/f(n) << C * h(n) for one of
//! five envelopes h. `profile` measures the constant that actually holds on
//! a finite range: the maximum of (f(n+1)/f(n)) / h(n), with the smallest
//! attaining n. That empirical constant is what the bound formulas consume.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::func::Func;
use crate::sieve::{chunk_range, eval_naive, primes_for, window_values};
use crate::Config;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Envelope {
    /// h(n) = 1
    One,
    /// h(n) = log n
    Log,
    /// h(n) = log log n
    LogLog,
    /// h(n) = log n / (log log n)^c
    LogOverLogLogPow { c: f64 },
    /// h(n) = n
    Linear,
}

impl Envelope {
    /// Smallest n the envelope is evaluated at. The loglog family starts
    /// at 16 so log log n stays clear of its sign change.
    pub fn n_min(&self) -> u64 {
        match self {
            Envelope::One | Envelope::Linear => 2,
            Envelope::Log => 3,
            Envelope::LogLog | Envelope::LogOverLogLogPow { .. } => 16,
        }
    }

    pub fn eval(&self, n: u64) -> Result<f64> {
        if n < self.n_min() {
            return Err(Error::domain(format!(
                "envelope {} needs n >= {}, got {n}",
                self.name(),
                self.n_min()
            )));
        }
        let nf = n as f64;
        Ok(match *self {
            Envelope::One => 1.0,
            Envelope::Log => nf.ln(),
            Envelope::LogLog => nf.ln().ln(),
            Envelope::LogOverLogLogPow { c } => nf.ln() / nf.ln().ln().powf(c),
            Envelope::Linear => nf,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Envelope::One => "one",
            Envelope::Log => "log",
            Envelope::LogLog => "loglog",
            Envelope::LogOverLogLogPow { .. } => "log_over_loglog_pow",
            Envelope::Linear => "linear",
        }
    }

    /// The exponent parameter, for the one envelope that has it.
    pub fn c_param(&self) -> Option<f64> {
        match *self {
            Envelope::LogOverLogLogPow { c } => Some(c),
            _ => None,
        }
    }

    /// Parse a tag; `c` is required for log_over_loglog_pow and rejected
    /// elsewhere.
    pub fn parse(s: &str, c: Option<f64>) -> Result<Envelope> {
        let tag = s.to_ascii_lowercase().replace('-', "_");
        let env = match tag.as_str() {
            "one" => Envelope::One,
            "log" => Envelope::Log,
            "loglog" => Envelope::LogLog,
            "log_over_loglog_pow" => {
                let c = c.ok_or_else(|| {
                    Error::config("envelope log_over_loglog_pow needs a positive c parameter")
                })?;
                if !c.is_finite() || c <= 0.0 {
                    return Err(Error::config(format!("envelope exponent c must be > 0, got {c}")));
                }
                return Ok(Envelope::LogOverLogLogPow { c });
            }
            "linear" => Envelope::Linear,
            _ => {
                return Err(Error::config(format!(
                    "unknown envelope {s:?}; valid: one, log, loglog, log_over_loglog_pow, linear"
                )))
            }
        };
        if c.is_some() {
            return Err(Error::config(format!("envelope {tag} takes no c parameter")));
        }
        Ok(env)
    }

    /// The envelope the matching theorem hypothesizes for each built-in.
    pub fn natural_for(func: &Func) -> Option<Envelope> {
        match func {
            Func::Phi | Func::Sigma => Some(Envelope::LogLog),
            Func::Tau => Some(Envelope::One),
            Func::Omega => Some(Envelope::LogOverLogLogPow { c: 1.0 }),
            Func::BigOmega => Some(Envelope::Log),
            Func::Custom(_) => None,
        }
    }
}

impl std::fmt::Display for Envelope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Empirical worst-ratio constant for (func, envelope) on [n0, x].
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthProfile {
    pub func: Func,
    pub envelope: Envelope,
    pub n0: u64,
    pub x: u64,
    /// max over n0 <= n <= x of (f(n+1)/f(n)) / envelope(n)
    pub c_emp: f64,
    /// smallest n attaining the max
    pub argmax_n: u64,
}

/// f(n+1)/f(n) as a double from the exact integer values.
pub fn ratio(func: &Func, n: u64) -> Result<f64> {
    let denom = eval_naive(func, n)?;
    if denom == 0 {
        return Err(Error::domain(format!(
            "{}({n}) = 0, consecutive ratio undefined (start at n >= {})",
            func.name(),
            func.min_nonzero_arg()
        )));
    }
    let numer = eval_naive(func, n + 1)?;
    Ok(numer as f64 / denom as f64)
}

struct Part {
    best: f64,
    arg: u64,
}

fn merge_max(acc: Option<Part>, next: Part) -> Option<Part> {
    match acc {
        None => Some(next),
        // ties break toward the smaller n, which arrives first
        Some(cur) if next.best > cur.best => Some(next),
        Some(cur) => Some(cur),
    }
}

/// Exhaustive scan of (f(n+1)/f(n)) / envelope(n) over [n0, x].
pub fn profile(
    func: &Func,
    envelope: Envelope,
    n0: u64,
    x: u64,
    config: &Config,
) -> Result<GrowthProfile> {
    if n0 < envelope.n_min() {
        return Err(Error::domain(format!(
            "n0 = {n0} below envelope {} minimum {}",
            envelope.name(),
            envelope.n_min()
        )));
    }
    if n0 < func.min_nonzero_arg() {
        return Err(Error::domain(format!(
            "{}(n) = 0 below n = {}; start n0 there",
            func.name(),
            func.min_nonzero_arg()
        )));
    }
    if x <= n0 {
        return Err(Error::domain(format!("empty scan range: need x > n0, got [{n0}, {x}]")));
    }
    if x.checked_add(1).is_none_or(|v| v > config.domain_cap) {
        return Err(Error::domain(format!(
            "scan needs f({x}+1), above domain cap {}",
            config.domain_cap
        )));
    }

    let primes = primes_for(func, x + 1);
    // each chunk reads one extra value for the n+1 lookahead
    let chunk_len = config.window_size.saturating_sub(1).max(1);
    let chunks = chunk_range(n0, x, chunk_len);
    let parts: Vec<Result<Part>> = chunks
        .par_iter()
        .map(|&(a, len)| {
            let values = window_values(func, a, len + 1, &primes)?;
            let mut best: Option<Part> = None;
            for i in 0..len {
                let n = a + i as u64;
                let denom = values[i];
                if denom == 0 {
                    return Err(Error::domain(format!(
                        "{}({n}) = 0 inside scan range, ratio undefined",
                        func.name()
                    )));
                }
                let r = values[i + 1] as f64 / denom as f64;
                let c = r / envelope.eval(n)?;
                best = merge_max(best, Part { best: c, arg: n });
            }
            Ok(best.expect("chunk is nonempty"))
        })
        .collect();

    let mut best: Option<Part> = None;
    for part in parts {
        best = merge_max(best, part?);
    }
    let best = best.expect("range is nonempty");
    Ok(GrowthProfile {
        func: func.clone(),
        envelope,
        n0,
        x,
        c_emp: best.best,
        argmax_n: best.arg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::CustomTable;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn ratio_pinned() {
        // sigma(3)/sigma(2) = 4/3
        assert_eq!(ratio(&Func::Sigma, 2).unwrap(), 4.0 / 3.0);
        // phi(2)/phi(1) = 1
        assert_eq!(ratio(&Func::Phi, 1).unwrap(), 1.0);
        // tau(60)/tau(59) = 12/2
        assert_eq!(ratio(&Func::Tau, 59).unwrap(), 6.0);
        // omega(1) = 0
        assert!(ratio(&Func::Omega, 1).is_err());
        assert!(ratio(&Func::BigOmega, 1).is_err());
    }

    #[test]
    fn profile_pinned() {
        let p = profile(&Func::Tau, Envelope::One, 2, 100, &cfg()).unwrap();
        assert_eq!((p.c_emp, p.argmax_n), (6.0, 59));
        // ties at 0.5 for n = 2 and n = 3 break to the smaller n
        let p = profile(&Func::Tau, Envelope::Linear, 2, 10, &cfg()).unwrap();
        assert_eq!((p.c_emp, p.argmax_n), (0.5, 2));
    }

    #[test]
    fn profile_guards() {
        assert!(profile(&Func::Phi, Envelope::LogLog, 15, 100, &cfg()).is_err());
        assert!(profile(&Func::Omega, Envelope::One, 1, 100, &cfg()).is_err());
        assert!(profile(&Func::Tau, Envelope::One, 5, 5, &cfg()).is_err());
        assert!(profile(&Func::Tau, Envelope::One, 5, 4, &cfg()).is_err());
    }

    #[test]
    fn constant_custom_function() {
        let rows: Vec<(u64, u64)> = (1..=100).map(|n| (n, 7)).collect();
        let f = Func::custom(CustomTable::from_rows("const7", &rows).unwrap());
        // ratios are all 1, so c_emp = 1 / min envelope = 1 / log(3)
        let p = profile(&f, Envelope::Log, 3, 99, &cfg()).unwrap();
        assert_eq!(p.c_emp, 1.0 / 3f64.ln());
        assert_eq!(p.argmax_n, 3);
        // linear envelope is minimized at the left end too
        let p = profile(&f, Envelope::Linear, 2, 99, &cfg()).unwrap();
        assert_eq!((p.c_emp, p.argmax_n), (0.5, 2));
    }

    #[test]
    fn zero_value_rejected_mid_range() {
        let t = CustomTable::from_rows("z", &[(1, 1), (2, 1), (3, 0), (4, 1), (5, 1)]).unwrap();
        let f = Func::custom(t);
        assert!(profile(&f, Envelope::One, 2, 4, &cfg()).is_err());
    }

    #[test]
    fn partition_invariance() {
        let coarse = profile(&Func::Sigma, Envelope::LogLog, 16, 5000, &cfg()).unwrap();
        let fine_cfg = Config { window_size: 17, ..cfg() };
        let fine = profile(&Func::Sigma, Envelope::LogLog, 16, 5000, &fine_cfg).unwrap();
        assert_eq!(coarse.c_emp.to_bits(), fine.c_emp.to_bits());
        assert_eq!(coarse.argmax_n, fine.argmax_n);
    }

    #[test]
    fn envelope_parse_round_trip() {
        for (name, c) in [("one", None), ("log", None), ("loglog", None), ("linear", None)] {
            let e = Envelope::parse(name, c).unwrap();
            assert_eq!(e.name(), name);
        }
        let e = Envelope::parse("log_over_loglog_pow", Some(2.0)).unwrap();
        assert_eq!(e.c_param(), Some(2.0));
        assert!(Envelope::parse("log_over_loglog_pow", None).is_err());
        assert!(Envelope::parse("one", Some(1.0)).is_err());
        assert!(Envelope::parse("nosuch", None).is_err());
    }
}
