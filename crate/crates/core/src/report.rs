//! Sweep orchestration and deterministic CSV/plot-data emission.
//!
//! Every file has a fixed column order, `.` decimals, no thousands
//! separators, LF line endings, and reals at 12 significant digits, so
//! identical configs produce byte-identical files at any worker count or
//! window size. Each format has a parser; re-emitting a parsed file
//! reproduces it byte for byte.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::bounds::{self, BoundReport, Formula, RowStatus};
use crate::counter::{self, GapQuery, Mode};
use crate::error::{Error, Result};
use crate::extremal::{self, ALL_STATISTICS};
use crate::func::Func;
use crate::profiler::{self, Envelope};
use crate::sieve;
use crate::Config;

pub const COUNTS_FILE: &str = "counts.csv";
pub const WITNESSES_FILE: &str = "witnesses.csv";
pub const PROFILES_FILE: &str = "profiles.csv";
pub const BOUNDS_FILE: &str = "bounds.csv";
pub const BOUNDS_PLOT_FILE: &str = "bounds_plot.tsv";
pub const CORRELATIONS_FILE: &str = "correlations.csv";
pub const CHECK_FILE: &str = "check.csv";
pub const SIEVE_FILE: &str = "sieve.csv";

/// Reals at 12 significant digits, scientific, `.` decimal separator.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.11e}")
}

fn fmt_opt_real(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

fn fmt_opt_u64(v: Option<u64>) -> String {
    v.map(|u| u.to_string()).unwrap_or_default()
}

fn parse_field<T: std::str::FromStr>(s: &str, what: &str, line: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::format(format!("line {line}: bad {what} {s:?}")))
}

fn parse_opt_real(s: &str, line: usize) -> Result<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_field(s, "real", line).map(Some)
    }
}

fn parse_opt_u64(s: &str, line: usize) -> Result<Option<u64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_field(s, "integer", line).map(Some)
    }
}

// Split a CSV body into rows of exactly `arity` fields, checking the header.
fn csv_rows<'a>(text: &'a str, header: &str, arity: usize) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == header => {}
        Some((_, h)) => {
            return Err(Error::format(format!("expected header {header:?}, got {h:?}")))
        }
        None => return Err(Error::format("empty file")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != arity {
            return Err(Error::format(format!(
                "line {}: expected {arity} fields, got {}",
                i + 1,
                fields.len()
            )));
        }
        rows.push((i + 1, fields));
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// counts.csv / witnesses.csv

pub const COUNTS_HEADER: &str = "func,mode,x,l,count";
pub const WITNESSES_HEADER: &str = "func,mode,x,l,n";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRow {
    pub func: String,
    pub mode: Mode,
    pub x: u64,
    pub l: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRow {
    pub func: String,
    pub mode: Mode,
    pub x: u64,
    pub l: u64,
    pub n: u64,
}

pub fn count_rows(
    funcs: &[Func],
    modes: &[Mode],
    x_grid: &[u64],
    l_grid: &[u64],
    config: &Config,
) -> Result<(Vec<CountRow>, Vec<WitnessRow>)> {
    let mut rows = Vec::new();
    let mut witness_rows = Vec::new();
    for func in funcs {
        for &mode in modes {
            for &x in x_grid {
                for &l in l_grid {
                    let r = counter::count(
                        GapQuery { func: func.clone(), x, l, mode },
                        config,
                    )?;
                    rows.push(CountRow {
                        func: func.name().to_string(),
                        mode,
                        x,
                        l,
                        count: r.count,
                    });
                    witness_rows.extend(r.witnesses.iter().map(|&n| WitnessRow {
                        func: func.name().to_string(),
                        mode,
                        x,
                        l,
                        n,
                    }));
                }
            }
        }
    }
    Ok((rows, witness_rows))
}

pub fn counts_to_csv(rows: &[CountRow]) -> String {
    let mut out = String::from(COUNTS_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.func, r.mode, r.x, r.l, r.count));
    }
    out
}

pub fn counts_from_csv(text: &str) -> Result<Vec<CountRow>> {
    csv_rows(text, COUNTS_HEADER, 5)?
        .into_iter()
        .map(|(ln, f)| {
            Ok(CountRow {
                func: f[0].to_string(),
                mode: Mode::parse(f[1])
                    .ok_or_else(|| Error::format(format!("line {ln}: unknown mode {:?}", f[1])))?,
                x: parse_field(f[2], "x", ln)?,
                l: parse_field(f[3], "l", ln)?,
                count: parse_field(f[4], "count", ln)?,
            })
        })
        .collect()
}

pub fn witnesses_to_csv(rows: &[WitnessRow]) -> String {
    let mut out = String::from(WITNESSES_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.func, r.mode, r.x, r.l, r.n));
    }
    out
}

pub fn witnesses_from_csv(text: &str) -> Result<Vec<WitnessRow>> {
    csv_rows(text, WITNESSES_HEADER, 5)?
        .into_iter()
        .map(|(ln, f)| {
            Ok(WitnessRow {
                func: f[0].to_string(),
                mode: Mode::parse(f[1])
                    .ok_or_else(|| Error::format(format!("line {ln}: unknown mode {:?}", f[1])))?,
                x: parse_field(f[2], "x", ln)?,
                l: parse_field(f[3], "l", ln)?,
                n: parse_field(f[4], "n", ln)?,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// profiles.csv

pub const PROFILES_HEADER: &str = "func,envelope,c_param,n0,x,c_emp,argmax_n";

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRow {
    pub func: String,
    pub envelope: String,
    pub c_param: Option<f64>,
    pub n0: u64,
    pub x: u64,
    pub c_emp: f64,
    pub argmax_n: u64,
}

/// Default scan start for a (func, envelope) pair: the envelope's domain
/// floor, or 2 where the additive built-ins vanish at 1.
pub fn default_profile_n0(func: &Func, envelope: Envelope) -> u64 {
    envelope.n_min().max(func.min_nonzero_arg())
}

pub fn profile_rows(
    funcs: &[Func],
    envelopes: &[Envelope],
    n0: Option<u64>,
    x: u64,
    config: &Config,
) -> Result<Vec<ProfileRow>> {
    let mut rows = Vec::new();
    for func in funcs {
        let envs: Vec<Envelope> = if envelopes.is_empty() {
            vec![Envelope::natural_for(func).ok_or_else(|| {
                Error::config(format!(
                    "no default envelope for custom function '{}'; pass one explicitly",
                    func.name()
                ))
            })?]
        } else {
            envelopes.to_vec()
        };
        for envelope in envs {
            let start = n0.unwrap_or_else(|| default_profile_n0(func, envelope));
            let p = profiler::profile(func, envelope, start, x, config)?;
            rows.push(ProfileRow {
                func: func.name().to_string(),
                envelope: envelope.name().to_string(),
                c_param: envelope.c_param(),
                n0: p.n0,
                x: p.x,
                c_emp: p.c_emp,
                argmax_n: p.argmax_n,
            });
        }
    }
    Ok(rows)
}

pub fn profiles_to_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from(PROFILES_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.func,
            r.envelope,
            fmt_opt_real(r.c_param),
            r.n0,
            r.x,
            fmt_real(r.c_emp),
            r.argmax_n
        ));
    }
    out
}

pub fn profiles_from_csv(text: &str) -> Result<Vec<ProfileRow>> {
    csv_rows(text, PROFILES_HEADER, 7)?
        .into_iter()
        .map(|(ln, f)| {
            Ok(ProfileRow {
                func: f[0].to_string(),
                envelope: f[1].to_string(),
                c_param: parse_opt_real(f[2], ln)?,
                n0: parse_field(f[3], "n0", ln)?,
                x: parse_field(f[4], "x", ln)?,
                c_emp: parse_field(f[5], "c_emp", ln)?,
                argmax_n: parse_field(f[6], "argmax_n", ln)?,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// bounds.csv / bounds_plot.tsv

pub const BOUNDS_HEADER: &str = "func,formula,c_param,x,l,count,bound,ratio,status";

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCsvRow {
    pub func: String,
    pub formula: String,
    pub c_param: Option<f64>,
    pub x: u64,
    pub l: u64,
    pub count: Option<u64>,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    pub status: String,
}

fn flatten_report(report: &BoundReport) -> Vec<BoundCsvRow> {
    report
        .rows
        .iter()
        .map(|row| {
            let (count, bound, ratio, status) = match row.status {
                RowStatus::Ok { count, bound, ratio } => {
                    (Some(count), Some(bound), Some(ratio), "ok")
                }
                RowStatus::Error { kind } => (None, None, None, kind),
            };
            BoundCsvRow {
                func: report.func.name().to_string(),
                formula: report.formula.name().to_string(),
                c_param: report.formula.c_param(),
                x: row.x,
                l: row.l,
                count,
                bound,
                ratio,
                status: status.to_string(),
            }
        })
        .collect()
}

/// Bound reports for each function. An empty formula list means each
/// built-in uses its corollary preset. Returns the rows plus any
/// hypothesis notes the presets carry.
pub fn bound_rows(
    funcs: &[Func],
    formulas: &[Formula],
    x_grid: &[u64],
    l_grid: &[u64],
    config: &Config,
) -> Result<(Vec<BoundCsvRow>, Vec<String>)> {
    let grid: Vec<(u64, u64)> = x_grid
        .iter()
        .flat_map(|&x| l_grid.iter().map(move |&l| (x, l)))
        .collect();
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for func in funcs {
        let fs: Vec<Formula> = if formulas.is_empty() {
            vec![bounds::preset(func).ok_or_else(|| {
                Error::config(format!(
                    "no preset formula for custom function '{}'; pass one explicitly",
                    func.name()
                ))
            })?]
        } else {
            formulas.to_vec()
        };
        for formula in fs {
            let report = bounds::bound_report(func, formula, &grid, config);
            if let Some(note) = report.note {
                notes.push(note.to_string());
            }
            rows.extend(flatten_report(&report));
        }
    }
    Ok((rows, notes))
}

fn bound_row_fields(r: &BoundCsvRow) -> [String; 9] {
    [
        r.func.clone(),
        r.formula.clone(),
        fmt_opt_real(r.c_param),
        r.x.to_string(),
        r.l.to_string(),
        fmt_opt_u64(r.count),
        fmt_opt_real(r.bound),
        fmt_opt_real(r.ratio),
        r.status.clone(),
    ]
}

pub fn bounds_to_csv(rows: &[BoundCsvRow]) -> String {
    let mut out = String::from(BOUNDS_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&bound_row_fields(r).join(","));
        out.push('\n');
    }
    out
}

/// Plot-data form: the ok rows only, tab-separated, `#`-commented header.
pub fn bounds_to_plot(rows: &[BoundCsvRow]) -> String {
    let mut out = String::from("# ");
    out.push_str(&BOUNDS_HEADER.replace(',', "\t"));
    out.push('\n');
    for r in rows.iter().filter(|r| r.status == "ok") {
        out.push_str(&bound_row_fields(r).join("\t"));
        out.push('\n');
    }
    out
}

pub fn bounds_from_csv(text: &str) -> Result<Vec<BoundCsvRow>> {
    csv_rows(text, BOUNDS_HEADER, 9)?
        .into_iter()
        .map(|(ln, f)| {
            Ok(BoundCsvRow {
                func: f[0].to_string(),
                formula: f[1].to_string(),
                c_param: parse_opt_real(f[2], ln)?,
                x: parse_field(f[3], "x", ln)?,
                l: parse_field(f[4], "l", ln)?,
                count: parse_opt_u64(f[5], ln)?,
                bound: parse_opt_real(f[6], ln)?,
                ratio: parse_opt_real(f[7], ln)?,
                status: f[8].to_string(),
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// correlations.csv

pub const CORRELATIONS_HEADER: &str = "func,x,l,s1,s2,ratio";

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationRow {
    pub func: String,
    pub x: u64,
    pub l: u64,
    pub s1: u128,
    pub s2: u128,
    pub ratio: f64,
}

pub fn correlation_rows(
    funcs: &[Func],
    x_grid: &[u64],
    l_grid: &[u64],
    config: &Config,
) -> Result<Vec<CorrelationRow>> {
    let mut rows = Vec::new();
    for func in funcs {
        for &x in x_grid {
            for &l in l_grid {
                let c = bounds::correlation_ratio(func, x, l, config)?;
                rows.push(CorrelationRow {
                    func: func.name().to_string(),
                    x,
                    l,
                    s1: c.s1,
                    s2: c.s2,
                    ratio: c.ratio(),
                });
            }
        }
    }
    Ok(rows)
}

pub fn correlations_to_csv(rows: &[CorrelationRow]) -> String {
    let mut out = String::from(CORRELATIONS_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.func,
            r.x,
            r.l,
            r.s1,
            r.s2,
            fmt_real(r.ratio)
        ));
    }
    out
}

pub fn correlations_from_csv(text: &str) -> Result<Vec<CorrelationRow>> {
    csv_rows(text, CORRELATIONS_HEADER, 6)?
        .into_iter()
        .map(|(ln, f)| {
            Ok(CorrelationRow {
                func: f[0].to_string(),
                x: parse_field(f[1], "x", ln)?,
                l: parse_field(f[2], "l", ln)?,
                s1: parse_field(f[3], "s1", ln)?,
                s2: parse_field(f[4], "s2", ln)?,
                ratio: parse_field(f[5], "ratio", ln)?,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// check.csv

pub const CHECK_HEADER: &str = "statistic,n0,x,extreme,arg_n,violation_count";

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub statistic: String,
    pub n0: u64,
    pub x: u64,
    pub extreme: f64,
    pub arg_n: u64,
    pub violation_count: u64,
}

/// The exact-inequality suite over [2, x] plus the four extremal scans
/// over [n0, x]. Scans need x > n0; below that only the exact row is
/// emitted.
pub fn check_rows(n0: u64, x: u64, config: &Config) -> Result<Vec<CheckRow>> {
    let violations = extremal::check_exact(x, config)?;
    let mut rows = vec![CheckRow {
        statistic: "exact".to_string(),
        n0: 2,
        x,
        extreme: 0.0,
        arg_n: 0,
        violation_count: violations.len() as u64,
    }];
    if x > n0 {
        for stat in ALL_STATISTICS {
            let scan = extremal::scan_extremal(stat, n0, x, config)?;
            rows.push(CheckRow {
                statistic: stat.name().to_string(),
                n0: scan.n0,
                x: scan.x,
                extreme: scan.extreme,
                arg_n: scan.arg_n,
                violation_count: scan.violations.len() as u64,
            });
        }
    }
    Ok(rows)
}

pub fn check_to_csv(rows: &[CheckRow]) -> String {
    let mut out = String::from(CHECK_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.statistic,
            r.n0,
            r.x,
            fmt_real(r.extreme),
            r.arg_n,
            r.violation_count
        ));
    }
    out
}

pub fn check_from_csv(text: &str) -> Result<Vec<CheckRow>> {
    csv_rows(text, CHECK_HEADER, 6)?
        .into_iter()
        .map(|(ln, f)| {
            Ok(CheckRow {
                statistic: f[0].to_string(),
                n0: parse_field(f[1], "n0", ln)?,
                x: parse_field(f[2], "x", ln)?,
                extreme: parse_field(f[3], "extreme", ln)?,
                arg_n: parse_field(f[4], "arg_n", ln)?,
                violation_count: parse_field(f[5], "violation_count", ln)?,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// sieve.csv

pub const SIEVE_HEADER: &str = "n,value";

/// Stream exact values f(n0..=x) as `n,value` rows. Streamed window by
/// window so the range never has to fit in memory.
pub fn write_sieve_csv(
    func: &Func,
    n0: u64,
    x: u64,
    config: &Config,
    out: impl Write,
) -> Result<u64> {
    if n0 == 0 || x < n0 {
        return Err(Error::domain("need 1 <= n0 <= x"));
    }
    let mut w = BufWriter::new(out);
    writeln!(w, "{SIEVE_HEADER}")?;
    let mut rows = 0u64;
    for (start, len) in sieve::chunk_range(n0, x, config.window_size) {
        let window = sieve::sieve_window(func, start, len, config)?;
        for (i, &v) in window.values.iter().enumerate() {
            writeln!(w, "{},{}", start + i as u64, v)?;
        }
        rows += len as u64;
    }
    w.flush()?;
    Ok(rows)
}

pub fn sieve_from_csv(text: &str) -> Result<Vec<(u64, u64)>> {
    csv_rows(text, SIEVE_HEADER, 2)?
        .into_iter()
        .map(|(ln, f)| Ok((parse_field(f[0], "n", ln)?, parse_field(f[1], "value", ln)?)))
        .collect()
}

// ---------------------------------------------------------------------------
// sweep

/// Everything one `sweep` run needs. Grids must be nonempty and ascending;
/// empty envelope/formula lists mean "each function's natural choice".
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub funcs: Vec<Func>,
    pub modes: Vec<Mode>,
    pub x_grid: Vec<u64>,
    pub l_grid: Vec<u64>,
    pub envelopes: Vec<Envelope>,
    pub formulas: Vec<Formula>,
    pub workers: usize,
    pub window_size: usize,
    pub witnesses: bool,
    pub out_dir: PathBuf,
}

pub const SWEEP_DEFAULT_X_GRID: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];
pub const SWEEP_DEFAULT_L_GRID: [u64; 2] = [1, 10];

/// Default grid for the bound reports: geometric in x by factors of 10
/// across desk scale, with a small spread of gaps.
pub fn default_bound_grid() -> (Vec<u64>, Vec<u64>) {
    (
        vec![1_000, 10_000, 100_000, 1_000_000, 10_000_000, 100_000_000],
        vec![1, 2, 3, 5, 10, 100],
    )
}

impl SweepConfig {
    pub fn new(out_dir: PathBuf) -> SweepConfig {
        SweepConfig {
            funcs: vec![Func::Phi, Func::Sigma, Func::Tau, Func::Omega, Func::BigOmega],
            modes: vec![Mode::Plus],
            x_grid: SWEEP_DEFAULT_X_GRID.to_vec(),
            l_grid: SWEEP_DEFAULT_L_GRID.to_vec(),
            envelopes: Vec::new(),
            formulas: Vec::new(),
            workers: 1,
            window_size: crate::DEFAULT_WINDOW_SIZE,
            witnesses: false,
            out_dir,
        }
    }

    pub fn config(&self) -> Config {
        Config {
            window_size: self.window_size,
            witness_cap: if self.witnesses { crate::DEFAULT_WITNESS_CAP } else { 0 },
            ..Config::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.funcs.is_empty() {
            return Err(Error::config("no functions selected"));
        }
        if self.modes.is_empty() {
            return Err(Error::config("no counting modes selected"));
        }
        if self.x_grid.is_empty() || self.l_grid.is_empty() {
            return Err(Error::config("grids must be nonempty"));
        }
        for grid in [&self.x_grid, &self.l_grid] {
            if grid.contains(&0) {
                return Err(Error::config("grid values must be >= 1"));
            }
            if grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::config("grids must be strictly ascending"));
            }
        }
        let cap = self.config().domain_cap;
        let max_x = *self.x_grid.last().expect("nonempty");
        let max_l = *self.l_grid.last().expect("nonempty");
        if max_x.checked_add(max_l).is_none_or(|v| v > cap) {
            return Err(Error::config(format!(
                "x + l reaches {max_x} + {max_l}, above domain cap {cap}"
            )));
        }
        // profiles and extremal scans start at the loglog floor 16
        if max_x < 17 {
            return Err(Error::config("the full sweep needs max x >= 17"));
        }
        if self.workers < 1 {
            return Err(Error::config("workers must be >= 1"));
        }
        if self.window_size < 1 {
            return Err(Error::config("window size must be >= 1"));
        }
        Ok(())
    }
}

/// Paths written by a sweep, with row counts and any preset notes.
#[derive(Debug)]
pub struct SweepOutput {
    pub files: Vec<(PathBuf, usize)>,
    pub notes: Vec<String>,
}

/// Run the full pipeline: counts, profiles, bounds, correlations, checks.
/// Output files are created (and writability proven) before any
/// computation starts.
pub fn run_sweep(sweep: &SweepConfig) -> Result<SweepOutput> {
    sweep.validate()?;
    let config = sweep.config();

    fs::create_dir_all(&sweep.out_dir)?;
    let path = |name: &str| sweep.out_dir.join(name);
    let mut out_files = vec![
        (path(COUNTS_FILE), File::create(path(COUNTS_FILE))?),
        (path(PROFILES_FILE), File::create(path(PROFILES_FILE))?),
        (path(BOUNDS_FILE), File::create(path(BOUNDS_FILE))?),
        (path(BOUNDS_PLOT_FILE), File::create(path(BOUNDS_PLOT_FILE))?),
        (path(CORRELATIONS_FILE), File::create(path(CORRELATIONS_FILE))?),
        (path(CHECK_FILE), File::create(path(CHECK_FILE))?),
    ];
    if sweep.witnesses {
        out_files.push((path(WITNESSES_FILE), File::create(path(WITNESSES_FILE))?));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep.workers)
        .build()
        .map_err(|e| Error::config(format!("worker pool: {e}")))?;

    let max_x = *sweep.x_grid.last().expect("validated nonempty");
    let (counts, witnesses, profiles, bound_result, correlations, checks) = pool.install(|| {
        let (counts, witnesses) =
            count_rows(&sweep.funcs, &sweep.modes, &sweep.x_grid, &sweep.l_grid, &config)?;
        let profiles = profile_rows(&sweep.funcs, &sweep.envelopes, None, max_x, &config)?;
        let bound_result =
            bound_rows(&sweep.funcs, &sweep.formulas, &sweep.x_grid, &sweep.l_grid, &config)?;
        let correlations =
            correlation_rows(&sweep.funcs, &sweep.x_grid, &sweep.l_grid, &config)?;
        let checks = check_rows(16, max_x, &config)?;
        Ok::<_, Error>((counts, witnesses, profiles, bound_result, correlations, checks))
    })?;
    let (bound_csv_rows, notes) = bound_result;

    let mut contents: Vec<(usize, String)> = vec![
        (counts.len(), counts_to_csv(&counts)),
        (profiles.len(), profiles_to_csv(&profiles)),
        (bound_csv_rows.len(), bounds_to_csv(&bound_csv_rows)),
        (
            bound_csv_rows.iter().filter(|r| r.status == "ok").count(),
            bounds_to_plot(&bound_csv_rows),
        ),
        (correlations.len(), correlations_to_csv(&correlations)),
        (checks.len(), check_to_csv(&checks)),
    ];
    if sweep.witnesses {
        contents.push((witnesses.len(), witnesses_to_csv(&witnesses)));
    }

    let mut files = Vec::new();
    for ((path, mut file), (rows, content)) in out_files.into_iter().zip(contents) {
        file.write_all(content.as_bytes())?;
        file.flush()?;
        files.push((path, rows));
    }
    Ok(SweepOutput { files, notes })
}

/// Write one emitted CSV/TSV body to a freshly created file.
pub fn write_report(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut file = File::create(&path)?;
    file.write_all(content.as_bytes())?;
    file.flush()?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn real_formatting_is_12_digits() {
        assert_eq!(fmt_real(20.0), "2.00000000000e1");
        assert_eq!(fmt_real(0.5), "5.00000000000e-1");
        assert_eq!(fmt_real(0.0), "0.00000000000e0");
        assert_eq!(fmt_real(4.0 / 3.0), "1.33333333333e0");
    }

    #[test]
    fn counts_round_trip() {
        let (rows, wits) = count_rows(
            &[Func::Tau, Func::Omega],
            &[Mode::Plus, Mode::Minus],
            &[100, 1000],
            &[1, 2],
            &cfg(),
        )
        .unwrap();
        assert_eq!(rows.len(), 16);
        let csv = counts_to_csv(&rows);
        assert_eq!(counts_from_csv(&csv).unwrap(), rows);
        assert_eq!(counts_to_csv(&counts_from_csv(&csv).unwrap()), csv);
        let wcsv = witnesses_to_csv(&wits);
        assert_eq!(witnesses_from_csv(&wcsv).unwrap(), wits);
    }

    #[test]
    fn profiles_round_trip() {
        let rows = profile_rows(
            &[Func::Tau, Func::Omega],
            &[],
            None,
            2000,
            &cfg(),
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].c_param, Some(1.0));
        let csv = profiles_to_csv(&rows);
        let parsed = profiles_from_csv(&csv).unwrap();
        assert_eq!(profiles_to_csv(&parsed), csv);
    }

    #[test]
    fn bounds_round_trip_with_error_rows() {
        let (rows, notes) = bound_rows(&[Func::Tau], &[], &[10, 1000], &[1], &cfg()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(notes.len(), 1);
        assert_eq!(rows[0].status, "ok");
        let csv = bounds_to_csv(&rows);
        let parsed = bounds_from_csv(&csv).unwrap();
        assert_eq!(parsed, rows);
        assert_eq!(bounds_to_csv(&parsed), csv);
        // plot form keeps only ok rows
        let plot = bounds_to_plot(&rows);
        assert_eq!(plot.lines().count(), 1 + rows.iter().filter(|r| r.status == "ok").count());
    }

    #[test]
    fn check_round_trip() {
        let rows = check_rows(16, 1000, &cfg()).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].statistic, "exact");
        assert_eq!(rows[0].violation_count, 0);
        let csv = check_to_csv(&rows);
        let parsed = check_from_csv(&csv).unwrap();
        assert_eq!(check_to_csv(&parsed), csv);
        // below the scan floor only the exact row appears
        assert_eq!(check_rows(16, 10, &cfg()).unwrap().len(), 1);
    }

    #[test]
    fn correlations_round_trip() {
        let rows = correlation_rows(&[Func::Tau], &[100], &[1, 5], &cfg()).unwrap();
        let csv = correlations_to_csv(&rows);
        let parsed = correlations_from_csv(&csv).unwrap();
        assert_eq!(correlations_to_csv(&parsed), csv);
    }

    #[test]
    fn sieve_csv_round_trip() {
        let mut buf = Vec::new();
        let rows = write_sieve_csv(&Func::Tau, 5, 12, &cfg(), &mut buf).unwrap();
        assert_eq!(rows, 8);
        let text = String::from_utf8(buf).unwrap();
        let parsed = sieve_from_csv(&text).unwrap();
        assert_eq!(parsed[0], (5, 2));
        assert_eq!(parsed.len(), 8);
    }

    #[test]
    fn sweep_validation_catches_bad_configs() {
        let mut s = SweepConfig::new(PathBuf::from("/tmp/unused"));
        s.x_grid = vec![];
        assert!(s.validate().is_err());
        let mut s = SweepConfig::new(PathBuf::from("/tmp/unused"));
        s.l_grid = vec![5, 5];
        assert!(s.validate().is_err());
        let mut s = SweepConfig::new(PathBuf::from("/tmp/unused"));
        s.x_grid = vec![crate::DEFAULT_DOMAIN_CAP];
        assert!(s.validate().is_err());
        let mut s = SweepConfig::new(PathBuf::from("/tmp/unused"));
        s.workers = 0;
        assert!(s.validate().is_err());
    }
}
