//! Lower-bound formulas and their comparison against measured counts.
//!
//! Each formula is the closed form a theorem asserts `>>` against the
//! right-coincidence count, given a hypothesis on the consecutive-value
//! ratio. The report emits raw count/bound ratios and never asserts
//! pass/fail: at desk scale the phi and sigma presets are violated by
//! orders of magnitude, and measuring that is the point.

use rayon::prelude::*;

use crate::counter::count_plus;
use crate::error::{Error, Result};
use crate::func::Func;
use crate::sieve::{chunk_range, primes_for, window_values, PrimeTable};
use crate::{Config, EULER_GAMMA};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Formula {
    /// (1/C) (x/l) / loglog(x/l)
    LogLog { big_c: f64 },
    /// x/l
    Const,
    /// (x/l) (loglog(x/l))^c / log(x/l)
    PolyLog { c: f64 },
    /// (1/C) (x/l) / log(x/l)
    Log { big_c: f64 },
    /// (1/C) log(x/l)
    Linear { big_c: f64 },
}

impl Formula {
    pub fn name(&self) -> &'static str {
        match self {
            Formula::LogLog { .. } => "t_loglog",
            Formula::Const => "t_const",
            Formula::PolyLog { .. } => "t_polylog",
            Formula::Log { .. } => "t_log",
            Formula::Linear { .. } => "t_linear",
        }
    }

    /// The constant parameter as it appears in CSV: C for the 1/C forms,
    /// the exponent c for t_polylog, nothing for t_const.
    pub fn c_param(&self) -> Option<f64> {
        match *self {
            Formula::LogLog { big_c } | Formula::Log { big_c } | Formula::Linear { big_c } => {
                Some(big_c)
            }
            Formula::PolyLog { c } => Some(c),
            Formula::Const => None,
        }
    }

    /// Parse a tag with its parameter; the 1/C forms and t_polylog require
    /// `c`, t_const rejects it.
    pub fn parse(s: &str, c: Option<f64>) -> Result<Formula> {
        let tag = s.to_ascii_lowercase().replace('-', "_");
        let need = |what: &str| {
            c.filter(|v| *v > 0.0).ok_or_else(|| {
                Error::config(format!("formula {tag} needs a positive {what} parameter"))
            })
        };
        match tag.as_str() {
            "t_loglog" => Ok(Formula::LogLog { big_c: need("C")? }),
            "t_const" => {
                if c.is_some() {
                    return Err(Error::config("formula t_const takes no parameter"));
                }
                Ok(Formula::Const)
            }
            "t_polylog" => Ok(Formula::PolyLog { c: need("c")? }),
            "t_log" => Ok(Formula::Log { big_c: need("C")? }),
            "t_linear" => Ok(Formula::Linear { big_c: need("C")? }),
            _ => Err(Error::config(format!(
                "unknown formula {s:?}; valid: t_loglog, t_const, t_polylog, t_log, t_linear"
            ))),
        }
    }

    /// Smallest x/l the formula's logarithms tolerate.
    pub fn min_ratio(&self) -> f64 {
        match self {
            Formula::LogLog { .. } | Formula::PolyLog { .. } => 16.0,
            _ => 3.0,
        }
    }
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The corollary constant for each built-in: phi and sigma get the loglog
/// form with 1/C = e^{-gamma}, tau the constant form, omega the polylog
/// form with c = 1, big_omega the log form with 1/C = log 2.
pub fn preset(func: &Func) -> Option<Formula> {
    match func {
        Func::Phi | Func::Sigma => Some(Formula::LogLog { big_c: EULER_GAMMA.exp() }),
        Func::Tau => Some(Formula::Const),
        Func::Omega => Some(Formula::PolyLog { c: 1.0 }),
        Func::BigOmega => Some(Formula::Log { big_c: 1.0 / std::f64::consts::LN_2 }),
        Func::Custom(_) => None,
    }
}

/// Hypothesis fine print carried alongside a preset, where the theorem the
/// corollary leans on states stronger conditions than the function meets.
pub fn preset_note(func: &Func) -> Option<&'static str> {
    match func {
        Func::Tau => Some(
            "tau preset: the constant-form bound is stated for completely multiplicative g \
             with g(st) <= g(s)g(t); tau is multiplicative and submultiplicative but not \
             completely multiplicative",
        ),
        _ => None,
    }
}

/// Evaluate the closed form at a grid point. x/l uses true real division.
pub fn bound_value(formula: Formula, x: u64, l: u64) -> Result<f64> {
    if l == 0 || x == 0 {
        return Err(Error::domain("x and l must be >= 1"));
    }
    let r = x as f64 / l as f64;
    if r < formula.min_ratio() {
        return Err(Error::domain(format!(
            "formula {} needs x/l >= {}, got {r}",
            formula.name(),
            formula.min_ratio()
        )));
    }
    Ok(match formula {
        Formula::LogLog { big_c } => (1.0 / big_c) * r / r.ln().ln(),
        Formula::Const => r,
        Formula::PolyLog { c } => r * r.ln().ln().powf(c) / r.ln(),
        Formula::Log { big_c } => (1.0 / big_c) * r / r.ln(),
        Formula::Linear { big_c } => (1.0 / big_c) * r.ln(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Ok { count: u64, bound: f64, ratio: f64 },
    /// Error marker kind: the row failed, nothing was skipped silently.
    Error { kind: &'static str },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub x: u64,
    pub l: u64,
    pub status: RowStatus,
}

/// Grid of (x, l) points comparing measured counts to a formula.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub func: Func,
    pub formula: Formula,
    pub rows: Vec<BoundRow>,
    pub note: Option<&'static str>,
}

pub(crate) fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain_error",
        Error::Format(_) => "format_error",
        Error::Config(_) => "config_error",
        Error::Overflow { .. } => "overflow",
        Error::Io(_) => "io_error",
    }
}

/// One row per grid point, sorted by (x, l); count comes from the plus
/// counter. Failed rows carry an error marker instead of values.
pub fn bound_report(
    func: &Func,
    formula: Formula,
    grid: &[(u64, u64)],
    config: &Config,
) -> BoundReport {
    // one row per grid point, even for repeated points
    let mut points: Vec<(u64, u64)> = grid.to_vec();
    points.sort_unstable();
    let rows = points
        .into_iter()
        .map(|(x, l)| {
            let status = match bound_value(formula, x, l)
                .and_then(|bound| Ok((bound, count_plus(func, x, l, config)?)))
            {
                Ok((bound, counted)) => RowStatus::Ok {
                    count: counted.count,
                    bound,
                    ratio: counted.count as f64 / bound,
                },
                Err(e) => RowStatus::Error { kind: error_kind(&e) },
            };
            BoundRow { x, l, status }
        })
        .collect();
    BoundReport {
        func: func.clone(),
        formula,
        rows,
        note: preset_note(func).filter(|_| preset(func) == Some(formula)),
    }
}

/// Shifted correlation sum against the corresponding square sum:
/// S1 = sum_{n<=x} f(n) f(n+l), S2 = sum_{n<=x} f(n)^2, ratio = S1/S2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Correlation {
    pub s1: u128,
    pub s2: u128,
}

impl Correlation {
    pub fn ratio(&self) -> f64 {
        self.s1 as f64 / self.s2 as f64
    }
}

pub fn correlation_ratio(func: &Func, x: u64, l: u64, config: &Config) -> Result<Correlation> {
    if l == 0 || x == 0 {
        return Err(Error::domain("x and l must be >= 1"));
    }
    if x.checked_add(l).is_none_or(|v| v > config.domain_cap) {
        return Err(Error::domain(format!(
            "correlation needs f({x}+{l}), above domain cap {}",
            config.domain_cap
        )));
    }
    let primes = primes_for(func, x + l);
    let chunks = chunk_range(1, x, config.window_size);
    let parts: Vec<Result<Correlation>> = chunks
        .par_iter()
        .map(|&(a, len)| correlate_chunk(func, a, len, l, &primes))
        .collect();

    let mut total = Correlation { s1: 0, s2: 0 };
    for (i, part) in parts.into_iter().enumerate() {
        let part = part?;
        match (total.s1.checked_add(part.s1), total.s2.checked_add(part.s2)) {
            (Some(s1), Some(s2)) => total = Correlation { s1, s2 },
            _ => {
                // locate the exact term by replaying this chunk on top of
                // the running totals
                let (a, len) = chunks[i];
                let w0 = window_values(func, a, len, &primes)?;
                let wl = window_values(func, a + l, len, &primes)?;
                for j in 0..len {
                    let n = a + j as u64;
                    total.s1 = total
                        .s1
                        .checked_add(w0[j] as u128 * wl[j] as u128)
                        .ok_or(Error::Overflow { n })?;
                    total.s2 = total
                        .s2
                        .checked_add(w0[j] as u128 * w0[j] as u128)
                        .ok_or(Error::Overflow { n })?;
                }
                unreachable!("chunk replay must reproduce the merge overflow");
            }
        }
    }
    Ok(total)
}

fn correlate_chunk(func: &Func, a: u64, len: usize, l: u64, primes: &PrimeTable) -> Result<Correlation> {
    let w0 = window_values(func, a, len, primes)?;
    let wl = window_values(func, a + l, len, primes)?;
    let mut s1: u128 = 0;
    let mut s2: u128 = 0;
    for i in 0..len {
        let n = a + i as u64;
        s1 = s1
            .checked_add(w0[i] as u128 * wl[i] as u128)
            .ok_or(Error::Overflow { n })?;
        s2 = s2
            .checked_add(w0[i] as u128 * w0[i] as u128)
            .ok_or(Error::Overflow { n })?;
    }
    Ok(Correlation { s1, s2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::CustomTable;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn bound_value_pinned() {
        assert_eq!(bound_value(Formula::Const, 100, 5).unwrap(), 20.0);
        // x/l = e^3 gives log(x/l) = 3 exactly up to rounding
        let x = (20.085536923187668_f64 * 1000.0).round() as u64;
        let v = bound_value(Formula::Linear { big_c: 1.0 }, x, 1000).unwrap();
        assert!((v - 3.0).abs() < 1e-4, "{v}");
        // e^{-gamma} * 1619 / loglog(1619)
        let v = bound_value(Formula::LogLog { big_c: EULER_GAMMA.exp() }, 1619, 1).unwrap();
        let expect = (-EULER_GAMMA).exp() * 1619.0 / (1619f64.ln().ln());
        assert_eq!(v.to_bits(), expect.to_bits());
        assert!((v - 454.5).abs() < 1.0, "{v}");
    }

    #[test]
    fn bound_value_guards() {
        assert!(bound_value(Formula::LogLog { big_c: 1.0 }, 15, 1).is_err());
        assert!(bound_value(Formula::LogLog { big_c: 1.0 }, 16, 1).is_ok());
        assert!(bound_value(Formula::PolyLog { c: 1.0 }, 100, 10).is_err());
        assert!(bound_value(Formula::Const, 5, 2).is_err());
        assert!(bound_value(Formula::Const, 6, 2).is_ok());
        assert!(bound_value(Formula::Const, 0, 1).is_err());
        assert!(bound_value(Formula::Const, 1, 0).is_err());
    }

    #[test]
    fn report_rows_sorted_and_marked() {
        let grid = [(100, 10), (10, 1), (100, 1)];
        let report = bound_report(&Func::Omega, Formula::PolyLog { c: 1.0 }, &grid, &cfg());
        assert_eq!(report.rows.len(), 3);
        assert_eq!(
            report.rows.iter().map(|r| (r.x, r.l)).collect::<Vec<_>>(),
            vec![(10, 1), (100, 1), (100, 10)]
        );
        // x/l = 10 < 16 rows are error-marked, not skipped
        assert!(matches!(report.rows[0].status, RowStatus::Error { kind: "domain_error" }));
        assert!(matches!(report.rows[2].status, RowStatus::Error { kind: "domain_error" }));
        let oracle: u64 = (1..=100)
            .filter(|&n| {
                crate::sieve::eval_naive(&Func::Omega, n).unwrap()
                    == crate::sieve::eval_naive(&Func::Omega, n + 1).unwrap()
            })
            .count() as u64;
        match &report.rows[1].status {
            RowStatus::Ok { count, bound, ratio } => {
                assert_eq!(*count, oracle);
                let expect = 100.0 * (100f64.ln().ln()) / 100f64.ln();
                assert_eq!(bound.to_bits(), expect.to_bits());
                assert_eq!(*ratio, *count as f64 / bound);
            }
            s => panic!("expected ok row, got {s:?}"),
        }
    }

    #[test]
    fn report_complete_even_with_repeated_points() {
        let grid = [(100, 1), (50, 1), (100, 1)];
        let report = bound_report(&Func::Tau, Formula::Const, &grid, &cfg());
        assert_eq!(report.rows.len(), grid.len());
        assert_eq!(report.rows[1], report.rows[2]);
    }

    #[test]
    fn tau_preset_carries_note() {
        let report = bound_report(&Func::Tau, preset(&Func::Tau).unwrap(), &[(100, 1)], &cfg());
        assert!(report.note.is_some());
        let report = bound_report(&Func::Phi, preset(&Func::Phi).unwrap(), &[(100, 1)], &cfg());
        assert!(report.note.is_none());
    }

    #[test]
    fn correlation_pinned() {
        let c = correlation_ratio(&Func::Tau, 3, 1, &cfg()).unwrap();
        assert_eq!((c.s1, c.s2), (12, 9));
        assert_eq!(c.ratio(), 12.0 / 9.0);
    }

    #[test]
    fn correlation_constant_table() {
        let rows: Vec<(u64, u64)> = (1..=50).map(|n| (n, 1)).collect();
        let f = Func::custom(CustomTable::from_rows("ones", &rows).unwrap());
        for (x, l) in [(10, 1), (40, 10), (49, 1)] {
            let c = correlation_ratio(&f, x, l, &cfg()).unwrap();
            assert_eq!((c.s1, c.s2), (x as u128, x as u128));
            assert_eq!(c.ratio(), 1.0);
        }
    }

    #[test]
    fn correlation_overflow_reports_n() {
        let rows: Vec<(u64, u64)> = (1..=8).map(|n| (n, u64::MAX)).collect();
        let f = Func::custom(CustomTable::from_rows("huge", &rows).unwrap());
        // one term nearly fills the accumulator, so the second one tips it
        let err = correlation_ratio(&f, 6, 1, &cfg()).unwrap_err();
        match err {
            Error::Overflow { n } => assert_eq!(n, 2),
            e => panic!("expected overflow, got {e}"),
        }
    }

    #[test]
    fn correlation_partition_invariance() {
        let coarse = correlation_ratio(&Func::Sigma, 2000, 7, &cfg()).unwrap();
        let fine = correlation_ratio(
            &Func::Sigma,
            2000,
            7,
            &Config { window_size: 64, ..cfg() },
        )
        .unwrap();
        assert_eq!(coarse, fine);
    }

    #[test]
    fn presets_match_corollaries() {
        assert_eq!(
            preset(&Func::Phi).unwrap(),
            Formula::LogLog { big_c: EULER_GAMMA.exp() }
        );
        assert_eq!(preset(&Func::Sigma), preset(&Func::Phi));
        assert_eq!(preset(&Func::Tau).unwrap(), Formula::Const);
        assert_eq!(preset(&Func::Omega).unwrap(), Formula::PolyLog { c: 1.0 });
        let f = preset(&Func::BigOmega).unwrap();
        match f {
            Formula::Log { big_c } => assert_eq!(1.0 / big_c, std::f64::consts::LN_2),
            _ => panic!("expected log form"),
        }
    }

    #[test]
    fn formula_parse_round_trip() {
        let f = Formula::parse("t_loglog", Some(2.0)).unwrap();
        assert_eq!(f, Formula::LogLog { big_c: 2.0 });
        assert!(Formula::parse("t_loglog", None).is_err());
        assert!(Formula::parse("t_const", Some(1.0)).is_err());
        assert_eq!(Formula::parse("t_const", None).unwrap(), Formula::Const);
        assert!(Formula::parse("nosuch", None).is_err());
        assert!(Formula::parse("t_polylog", Some(-1.0)).is_err());
    }
}
