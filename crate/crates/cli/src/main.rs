//! gapwise CLI: sieve values, count coincidences, profile growth ratios,
//! evaluate bound formulas, and run full sweeps, emitting deterministic
//! CSV/plot files.
//!
//! Flag values beat `GAPWISE_*` environment variables, which beat the
//! built-in defaults. Exit codes: 0 success, 1 computational error,
//! 2 usage error.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gapwise::bounds::Formula;
use gapwise::counter::Mode;
use gapwise::error::Error;
use gapwise::func::CustomTable;
use gapwise::profiler::Envelope;
use gapwise::report::{self, SweepConfig};
use gapwise::{Config, Func, BUILTIN_NAMES, DEFAULT_WINDOW_SIZE, DEFAULT_WITNESS_CAP};

#[derive(Parser)]
#[command(name = "gapwise", version, about = "Coincidence counting and bound measurement for arithmetic functions")]
struct Cli {
    /// Worker threads for range-partitioned scans [env: GAPWISE_WORKERS] [default: 1]
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Sieve window capacity in elements [env: GAPWISE_WINDOW_SIZE] [default: 4194304]
    #[arg(long, global = true)]
    window_size: Option<usize>,

    /// Output directory for CSV/plot files [env: GAPWISE_OUT] [default: .]
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags beat GAPWISE_* environment variables, which beat defaults. The
/// environment is only consulted (and only then validated) when the flag
/// is absent.
fn env_fallback<T>(flag: Option<T>, var: &str, default: T) -> Result<T, AppError>
where
    T: std::str::FromStr,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(var) {
        Ok(s) => s
            .parse()
            .map_err(|_| usage(format!("invalid value {s:?} in environment variable {var}"))),
        Err(std::env::VarError::NotPresent) => Ok(default),
        Err(e) => Err(usage(format!("environment variable {var}: {e}"))),
    }
}

#[derive(Args)]
struct GridArgs {
    /// Single count limit x (alternative to --x-grid)
    #[arg(long)]
    x: Option<u64>,

    /// Single gap l (alternative to --l-grid)
    #[arg(long)]
    l: Option<u64>,

    /// Comma-separated ascending x values
    #[arg(long, value_delimiter = ',')]
    x_grid: Vec<u64>,

    /// Comma-separated ascending l values
    #[arg(long, value_delimiter = ',')]
    l_grid: Vec<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit exact function values as n,value rows over [n0, x]
    Sieve {
        /// Built-in tag or path to an n,value CSV table
        #[arg(long)]
        func: String,
        #[arg(long, default_value_t = 1)]
        n0: u64,
        #[arg(long)]
        x: u64,
    },
    /// Count gap coincidences over a (x, l) grid
    Count {
        #[arg(long, value_delimiter = ',', required = true)]
        func: Vec<String>,
        /// plus, minus, full, reduced, div_restricted
        #[arg(long, value_delimiter = ',', default_value = "plus")]
        mode: Vec<String>,
        #[command(flatten)]
        grid: GridArgs,
        /// Also write the first qualifying n per query to witnesses.csv
        #[arg(long)]
        witnesses: bool,
    },
    /// Empirical worst constant of f(n+1)/f(n) against an envelope
    Profile {
        #[arg(long)]
        func: String,
        /// one, log, loglog, log_over_loglog_pow, linear
        #[arg(long)]
        envelope: String,
        /// Envelope exponent (log_over_loglog_pow only)
        #[arg(long)]
        c: Option<f64>,
        /// Scan start; defaults to the envelope's domain floor
        #[arg(long)]
        n0: Option<u64>,
        #[arg(long)]
        x: u64,
    },
    /// Compare measured counts against a lower-bound formula on a grid
    Bounds {
        #[arg(long, value_delimiter = ',', required = true)]
        func: Vec<String>,
        /// t_loglog, t_const, t_polylog, t_log, t_linear; default: each
        /// function's corollary preset
        #[arg(long)]
        formula: Option<String>,
        /// Formula constant (C for the 1/C forms, exponent for t_polylog)
        #[arg(long)]
        c: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Shifted correlation sum S1 against the square sum S2
    Correlate {
        #[arg(long)]
        func: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Exact inequality suite plus the extremal-order scans
    Check {
        #[arg(long)]
        x: u64,
        /// Scan start for the extremal statistics
        #[arg(long, default_value_t = 16)]
        n0: u64,
    },
    /// Full pipeline: counts, profiles, bounds, correlations, checks
    Sweep {
        #[arg(long, value_delimiter = ',')]
        func: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        mode: Vec<String>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        witnesses: bool,
    },
}

#[derive(Debug)]
enum AppError {
    /// Bad invocation: exit 2.
    Usage(String),
    /// Failure while computing or writing: exit 1.
    Run(Error),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Run(e)
    }
}

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn resolve_func(arg: &str) -> Result<Func, AppError> {
    if let Some(f) = Func::parse_builtin(arg) {
        return Ok(f);
    }
    let path = Path::new(arg);
    if path.is_file() {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| usage(format!("cannot derive a table name from path {arg:?}")))?;
        let file = File::open(path)
            .map_err(|e| usage(format!("cannot open table {arg:?}: {e}")))?;
        let table = CustomTable::from_csv(name, BufReader::new(file))
            .map_err(|e| usage(format!("table {arg:?}: {e}")))?;
        return Ok(Func::custom(table));
    }
    Err(usage(format!(
        "unknown function {arg:?}: valid tags are {}, or a path to an n,value CSV table",
        BUILTIN_NAMES.join(", ")
    )))
}

fn resolve_funcs(specs: &[String]) -> Result<Vec<Func>, AppError> {
    specs.iter().map(|s| resolve_func(s)).collect()
}

fn resolve_modes(specs: &[String]) -> Result<Vec<Mode>, AppError> {
    specs
        .iter()
        .map(|s| {
            Mode::parse(s).ok_or_else(|| {
                usage(format!(
                    "unknown mode {s:?}: valid modes are plus, minus, full, reduced, div_restricted"
                ))
            })
        })
        .collect()
}

// Merge --x/--x-grid into one ascending deduplicated grid.
fn resolve_grid(
    single: Option<u64>,
    grid: &[u64],
    name: &str,
    default: &[u64],
) -> Result<Vec<u64>, AppError> {
    let mut values = match (single, grid.is_empty()) {
        (Some(_), false) => {
            return Err(usage(format!("pass either --{name} or --{name}-grid, not both")))
        }
        (Some(v), true) => vec![v],
        (None, false) => grid.to_vec(),
        (None, true) => default.to_vec(),
    };
    if values.is_empty() {
        return Err(usage(format!("--{name} or --{name}-grid is required")));
    }
    if values.contains(&0) {
        return Err(usage(format!("{name} values must be >= 1")));
    }
    values.sort_unstable();
    values.dedup();
    Ok(values)
}

fn check_cap(x_grid: &[u64], l_grid: &[u64], config: &Config) -> Result<(), AppError> {
    let max_x = *x_grid.last().expect("nonempty");
    let max_l = *l_grid.last().expect("nonempty");
    if max_x.checked_add(max_l).is_none_or(|v| v > config.domain_cap) {
        return Err(usage(format!(
            "x + l reaches {max_x} + {max_l}, above domain cap {}",
            config.domain_cap
        )));
    }
    Ok(())
}

/// Create (and truncate) the output files up front so an unwritable
/// directory fails before any computation starts.
fn create_outputs(dir: &Path, names: &[&str]) -> Result<Vec<(PathBuf, File)>, AppError> {
    std::fs::create_dir_all(dir).map_err(|e| AppError::Run(e.into()))?;
    names
        .iter()
        .map(|name| {
            let path = dir.join(name);
            let file = File::create(&path).map_err(|e| AppError::Run(e.into()))?;
            Ok((path, file))
        })
        .collect()
}

fn write_outputs(outputs: Vec<(PathBuf, File)>, contents: &[(usize, String)]) -> Result<(), AppError> {
    for ((path, mut file), (rows, content)) in outputs.into_iter().zip(contents) {
        file.write_all(content.as_bytes())
            .and_then(|_| file.flush())
            .map_err(|e| AppError::Run(e.into()))?;
        println!("wrote {} ({rows} rows)", path.display());
    }
    Ok(())
}

struct Globals {
    workers: usize,
    window_size: usize,
    out: PathBuf,
}

fn resolve_globals(cli: &Cli) -> Result<Globals, AppError> {
    let workers = env_fallback(cli.workers, "GAPWISE_WORKERS", 1)?;
    let window_size = env_fallback(cli.window_size, "GAPWISE_WINDOW_SIZE", DEFAULT_WINDOW_SIZE)?;
    let out = env_fallback(cli.out.clone(), "GAPWISE_OUT", PathBuf::from("."))?;
    if workers < 1 {
        return Err(usage("--workers must be >= 1"));
    }
    if window_size < 1 {
        return Err(usage("--window-size must be >= 1"));
    }
    Ok(Globals { workers, window_size, out })
}

fn run(cli: Cli) -> Result<(), AppError> {
    let globals = resolve_globals(&cli)?;
    let config = Config {
        window_size: globals.window_size,
        ..Config::default()
    };

    // Sweep manages its own pool; everything else shares one here.
    if let Cmd::Sweep { func, mode, grid, witnesses } = &cli.cmd {
        return run_sweep_cmd(&globals, func, mode, grid, *witnesses);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(globals.workers)
        .build()
        .map_err(|e| usage(format!("worker pool: {e}")))?;

    match &cli.cmd {
        Cmd::Sieve { func, n0, x } => {
            let func = resolve_func(func)?;
            if *n0 == 0 || x < n0 {
                return Err(usage("need 1 <= n0 <= x"));
            }
            if *x > config.domain_cap {
                return Err(usage(format!("x above domain cap {}", config.domain_cap)));
            }
            let mut outputs = create_outputs(&globals.out, &[report::SIEVE_FILE])?;
            let (path, file) = outputs.pop().expect("one output");
            let rows =
                pool.install(|| report::write_sieve_csv(&func, *n0, *x, &config, file))?;
            println!("wrote {} ({rows} rows)", path.display());
        }
        Cmd::Count { func, mode, grid, witnesses } => {
            let funcs = resolve_funcs(func)?;
            let modes = resolve_modes(mode)?;
            let x_grid = resolve_grid(grid.x, &grid.x_grid, "x", &[])?;
            let l_grid = resolve_grid(grid.l, &grid.l_grid, "l", &[1])?;
            check_cap(&x_grid, &l_grid, &config)?;
            let config = Config {
                witness_cap: if *witnesses { DEFAULT_WITNESS_CAP } else { 0 },
                ..config
            };
            let mut names = vec![report::COUNTS_FILE];
            if *witnesses {
                names.push(report::WITNESSES_FILE);
            }
            let outputs = create_outputs(&globals.out, &names)?;
            let (rows, witness_rows) =
                pool.install(|| report::count_rows(&funcs, &modes, &x_grid, &l_grid, &config))?;
            let mut contents = vec![(rows.len(), report::counts_to_csv(&rows))];
            if *witnesses {
                contents.push((witness_rows.len(), report::witnesses_to_csv(&witness_rows)));
            }
            write_outputs(outputs, &contents)?;
        }
        Cmd::Profile { func, envelope, c, n0, x } => {
            let func = resolve_func(func)?;
            let envelope = Envelope::parse(envelope, *c).map_err(|e| usage(e.to_string()))?;
            let start = n0.unwrap_or_else(|| report::default_profile_n0(&func, envelope));
            if start < envelope.n_min() || start < func.min_nonzero_arg() {
                return Err(usage(format!(
                    "n0 = {start} below the scan floor {} for {} against {}",
                    envelope.n_min().max(func.min_nonzero_arg()),
                    func.name(),
                    envelope.name()
                )));
            }
            if *x <= start {
                return Err(usage(format!("need x > n0, got x = {x}, n0 = {start}")));
            }
            if x.checked_add(1).is_none_or(|v| v > config.domain_cap) {
                return Err(usage(format!("x above domain cap {}", config.domain_cap)));
            }
            let outputs = create_outputs(&globals.out, &[report::PROFILES_FILE])?;
            let rows = pool.install(|| {
                report::profile_rows(&[func], &[envelope], Some(start), *x, &config)
            })?;
            write_outputs(outputs, &[(rows.len(), report::profiles_to_csv(&rows))])?;
        }
        Cmd::Bounds { func, formula, c, grid } => {
            let funcs = resolve_funcs(func)?;
            let formulas: Vec<Formula> = match formula {
                Some(tag) => vec![Formula::parse(tag, *c).map_err(|e| usage(e.to_string()))?],
                None => {
                    if c.is_some() {
                        return Err(usage("--c without --formula has no meaning"));
                    }
                    Vec::new() // preset per function
                }
            };
            let (dx, dl) = report::default_bound_grid();
            let x_grid = resolve_grid(grid.x, &grid.x_grid, "x", &dx)?;
            let l_grid = resolve_grid(grid.l, &grid.l_grid, "l", &dl)?;
            check_cap(&x_grid, &l_grid, &config)?;
            if formulas.is_empty() {
                if let Some(f) = funcs.iter().find(|f| gapwise::bounds::preset(f).is_none()) {
                    return Err(usage(format!(
                        "no preset formula for custom function '{}'; pass --formula",
                        f.name()
                    )));
                }
            }
            let outputs =
                create_outputs(&globals.out, &[report::BOUNDS_FILE, report::BOUNDS_PLOT_FILE])?;
            let (rows, notes) = pool.install(|| {
                report::bound_rows(&funcs, &formulas, &x_grid, &l_grid, &config)
            })?;
            for note in notes {
                eprintln!("note: {note}");
            }
            let ok_rows = rows.iter().filter(|r| r.status == "ok").count();
            write_outputs(
                outputs,
                &[
                    (rows.len(), report::bounds_to_csv(&rows)),
                    (ok_rows, report::bounds_to_plot(&rows)),
                ],
            )?;
        }
        Cmd::Correlate { func, grid } => {
            let func = resolve_func(func)?;
            let x_grid = resolve_grid(grid.x, &grid.x_grid, "x", &[])?;
            let l_grid = resolve_grid(grid.l, &grid.l_grid, "l", &[1])?;
            check_cap(&x_grid, &l_grid, &config)?;
            let outputs = create_outputs(&globals.out, &[report::CORRELATIONS_FILE])?;
            let rows =
                pool.install(|| report::correlation_rows(&[func], &x_grid, &l_grid, &config))?;
            write_outputs(outputs, &[(rows.len(), report::correlations_to_csv(&rows))])?;
        }
        Cmd::Check { x, n0 } => {
            if *x < 2 {
                return Err(usage("need x >= 2"));
            }
            if *n0 < 16 {
                return Err(usage("scans need n0 >= 16 so loglog n stays positive"));
            }
            if *x > config.domain_cap {
                return Err(usage(format!("x above domain cap {}", config.domain_cap)));
            }
            let outputs = create_outputs(&globals.out, &[report::CHECK_FILE])?;
            let rows = pool.install(|| report::check_rows(*n0, *x, &config))?;
            write_outputs(outputs, &[(rows.len(), report::check_to_csv(&rows))])?;
        }
        Cmd::Sweep { .. } => unreachable!("handled above"),
    }
    Ok(())
}

fn run_sweep_cmd(
    globals: &Globals,
    func: &[String],
    mode: &[String],
    grid: &GridArgs,
    witnesses: bool,
) -> Result<(), AppError> {
    let mut sweep = SweepConfig::new(globals.out.clone());
    sweep.workers = globals.workers;
    sweep.window_size = globals.window_size;
    sweep.witnesses = witnesses;
    if !func.is_empty() {
        sweep.funcs = resolve_funcs(func)?;
    }
    if !mode.is_empty() {
        sweep.modes = resolve_modes(mode)?;
    }
    sweep.x_grid = resolve_grid(grid.x, &grid.x_grid, "x", &report::SWEEP_DEFAULT_X_GRID)?;
    sweep.l_grid = resolve_grid(grid.l, &grid.l_grid, "l", &report::SWEEP_DEFAULT_L_GRID)?;
    sweep.validate().map_err(|e| usage(e.to_string()))?;

    let out = report::run_sweep(&sweep)?;
    for note in &out.notes {
        eprintln!("note: {note}");
    }
    for (path, rows) in &out.files {
        println!("wrote {} ({rows} rows)", path.display());
    }
    Ok(())
}
