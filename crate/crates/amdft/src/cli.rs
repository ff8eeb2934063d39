//! The `amdft` command line. [`run`] returns the process exit code:
//! 0 success, 2 usage or capability, 3 verification failure, 4 I/O.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use amdft_core::atlas::{enumerate_family_with, fig1_ascii, fig1_frontier, fig1_map, nmax_series_with, FamilyClass};
use amdft_core::engine::{execute_inverse, random_signal, verify, verify_signal};
use amdft_core::opcount::{count, table1_report, theorem1_bound, TABLE_I};
use amdft_core::planner::{build_plan, Plan, Policy};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cache::{default_cache_dir, PrimalityCache};
use crate::document::{parse_plan, serialize_plan, DocError};
use crate::parallel::execute_parallel;
use crate::report;
use crate::signal::{read_signal, write_signal, SignalError};

/// Relative L2 error above which `verify` fails.
pub const VERIFY_THRESHOLD: f64 = 1e-9;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] amdft_core::Error),
    #[error("plan document: {0}")]
    Doc(#[from] DocError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Signal { path: String, source: SignalError },
    #[error("{0}")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Signal { source: SignalError::Io(_), .. } => EXIT_IO,
            CliError::Verify(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), source }
}

fn csv_err(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io { path: "<csv>".into(), source },
        k => CliError::Usage(format!("{k:?}")),
    }
}

fn parse_policy(s: &str) -> Result<Policy, String> {
    Policy::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Policy::ALL.iter().map(|p| p.name()).collect();
        format!("unknown policy `{s}`; one of {}", names.join(", "))
    })
}

fn parse_class(s: &str) -> Result<FamilyClass, String> {
    FamilyClass::from_name(s).ok_or_else(|| format!("unknown class `{s}`; one of q2, q23, q235, q2357"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "amdft", version, about = "Almost multiplierless DFT plans, counts and prime families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a plan and write its document.
    Plan {
        n: u64,
        #[arg(long, default_value = "auto", value_parser = parse_policy)]
        policy: Policy,
        /// Document path; without it the document goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transform a signal file or a seeded random signal.
    #[command(group(ArgGroup::new("size").required(true).args(["n", "plan"])))]
    #[command(group(ArgGroup::new("source").required(true).args(["input", "seed"])))]
    Run {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value = "auto", value_parser = parse_policy)]
        policy: Policy,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Inverse transform (conjugate, forward, conjugate, scale).
        #[arg(long)]
        inverse: bool,
    },
    /// Compare a plan with the naive DFT; JSON report on stdout.
    #[command(group(ArgGroup::new("size").required(true).args(["n", "plan"])))]
    Verify {
        n: Option<u64>,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value = "auto", value_parser = parse_policy)]
        policy: Policy,
        #[arg(long, default_value_t = 50, conflicts_with = "input")]
        trials: usize,
        #[arg(long, default_value_t = 0, conflicts_with = "input")]
        seed: u64,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Operation counts against the split-radix yardstick.
    Count {
        sizes: Vec<u64>,
        /// Fill the reference columns; with no sizes, use the reference sizes up to 5040.
        #[arg(long)]
        table1: bool,
        #[arg(long, default_value = "auto", value_parser = parse_policy)]
        policy: Policy,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Lower bound on real multiplications.
    Bound {
        #[arg(required = true)]
        sizes: Vec<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Family primes up to a rank, or the `2^i 3^j + 1` map.
    Primes {
        #[arg(long, default_value = "q23", value_parser = parse_class)]
        class: FamilyClass,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        /// ASCII map for i <= rank + 1, j <= rank, plus the rank frontier.
        #[arg(long)]
        fig1: bool,
        /// Write CSV files here instead of printing them.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
    },
    /// log2 N_max per rank.
    Nmax {
        #[arg(long, default_value = "q23", value_parser = parse_class)]
        class: FamilyClass,
        #[arg(long, default_value_t = 64)]
        rank: u32,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
    },
}

/// Rank cap for the atlas commands.
pub const MAX_RANK: u32 = 64;

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_plan(n: Option<u64>, path: Option<&Path>, policy: Policy) -> Result<Plan, CliError> {
    match (n, path) {
        (_, Some(p)) => {
            let text = fs::read_to_string(p).map_err(io_err(p))?;
            Ok(parse_plan(&text)?)
        }
        (Some(n), None) => Ok(build_plan(n, policy)?),
        (None, None) => Err(CliError::Usage("give a size or --plan".into())),
    }
}

fn read_signal_file(p: &Path) -> Result<Vec<num_complex::Complex64>, CliError> {
    let f = fs::File::open(p).map_err(io_err(p))?;
    read_signal(BufReader::new(f)).map_err(|source| CliError::Signal { path: p.display().to_string(), source })
}

fn check_parent(p: &Path) -> Result<(), CliError> {
    match p.parent() {
        Some(d) if !d.as_os_str().is_empty() && !d.is_dir() => {
            Err(CliError::Io { path: d.display().to_string(), source: io::Error::from(io::ErrorKind::NotFound) })
        }
        _ => Ok(()),
    }
}

fn check_rank(rank: u32) -> Result<(), CliError> {
    if rank > MAX_RANK {
        return Err(CliError::Usage(format!("rank {rank} is above the cap of {MAX_RANK}")));
    }
    Ok(())
}

fn open_cache(no_cache: bool, err: &mut dyn Write) -> PrimalityCache {
    if no_cache {
        return PrimalityCache::memory();
    }
    match default_cache_dir().map(|d| PrimalityCache::open(&d)) {
        Some(Ok(c)) => c,
        Some(Err(e)) => {
            let _ = writeln!(err, "warning: primality cache unavailable: {e}");
            PrimalityCache::memory()
        }
        None => PrimalityCache::memory(),
    }
}

fn close_cache(mut c: PrimalityCache, err: &mut dyn Write) {
    if let Err(e) = c.save() {
        let _ = writeln!(err, "warning: primality cache not saved: {e}");
    }
}

fn write_file(dir: &Path, name: &str, f: impl FnOnce(&mut fs::File) -> Result<(), CliError>) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(name);
    let mut file = fs::File::create(&path).map_err(io_err(&path))?;
    f(&mut file)?;
    Ok(path)
}

fn summary(plan: &Plan) -> String {
    let c = count(plan);
    let factors: Vec<String> = plan.factors().iter().map(|q| q.to_string()).collect();
    format!(
        "N={} factors={} blocks={} M_max={} policy={} mults={} adds={}",
        plan.size(),
        if factors.is_empty() { "1".into() } else { factors.join("x") },
        plan.blocks().len(),
        plan.m_max(),
        plan.policy().name(),
        c.real_mults,
        c.real_adds
    )
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Plan { n, policy, out: path } => {
            if let Some(p) = &path {
                check_parent(p)?;
            }
            let plan = build_plan(n, policy)?;
            let doc = serialize_plan(&plan);
            match path {
                Some(p) => {
                    fs::write(&p, doc).map_err(io_err(&p))?;
                    writeln!(out, "{}", summary(&plan)).map_err(stdout_err)?;
                }
                None => {
                    out.write_all(doc.as_bytes()).map_err(stdout_err)?;
                    let _ = writeln!(err, "{}", summary(&plan));
                }
            }
        }
        Command::Run { n, plan, policy, input, seed, output, threads, inverse } => {
            if let Some(p) = &input {
                if !p.is_file() {
                    return Err(CliError::Io { path: p.display().to_string(), source: io::Error::from(io::ErrorKind::NotFound) });
                }
            }
            if let Some(p) = &output {
                check_parent(p)?;
            }
            let plan = load_plan(n, plan.as_deref(), policy)?;
            let x = match (&input, seed) {
                (Some(p), _) => read_signal_file(p)?,
                (None, Some(s)) => random_signal(plan.size(), &mut ChaCha8Rng::seed_from_u64(s)),
                (None, None) => return Err(CliError::Usage("give --input or --seed".into())),
            };
            let y = if inverse { execute_inverse(&plan, &x)? } else { execute_parallel(&plan, &x, threads)? };
            match output {
                Some(p) => {
                    let mut f = io::BufWriter::new(fs::File::create(&p).map_err(io_err(&p))?);
                    write_signal(&mut f, &y).and_then(|_| f.flush()).map_err(io_err(&p))?;
                }
                None => write_signal(out, &y).map_err(stdout_err)?,
            }
        }
        Command::Verify { n, plan, policy, trials, seed, input } => {
            let plan = load_plan(n, plan.as_deref(), policy)?;
            let rep = match &input {
                Some(p) => verify_signal(&plan, &read_signal_file(p)?, &p.display().to_string())?,
                None => verify(&plan, trials, seed),
            };
            writeln!(out, "{}", report::accuracy_json(&rep, VERIFY_THRESHOLD)).map_err(stdout_err)?;
            if rep.rel_l2.is_nan() || rep.rel_l2 >= VERIFY_THRESHOLD {
                return Err(CliError::Verify(format!("relative L2 error {:e} is not below {VERIFY_THRESHOLD:e}", rep.rel_l2)));
            }
        }
        Command::Count { sizes, table1, policy, format } => {
            let sizes = if sizes.is_empty() && table1 {
                let mut v: Vec<u64> = TABLE_I.iter().map(|r| r.0).filter(|&n| n <= 5040 && n % 17 != 0).collect();
                v.sort_unstable();
                v
            } else {
                sizes
            };
            if sizes.is_empty() {
                return Err(CliError::Usage("give sizes or --table1".into()));
            }
            let mut rows = table1_report(&sizes, policy);
            if !table1 {
                for (_, r) in &mut rows {
                    if r.row.is_some() {
                        r.reference = None;
                        r.deviation.clear();
                    }
                }
            }
            match format {
                Format::Csv => report::write_count_csv(&mut *out, &rows).map_err(csv_err)?,
                Format::Json => writeln!(out, "{}", report::count_json(&rows)).map_err(stdout_err)?,
            }
            if rows.iter().all(|(_, r)| r.row.is_none()) {
                return Ok(EXIT_USAGE);
            }
        }
        Command::Bound { sizes, format } => {
            let mut vals = Vec::new();
            for n in sizes {
                vals.push((n, theorem1_bound(n)?));
            }
            match format {
                TextFormat::Text => {
                    for (_, b) in &vals {
                        writeln!(out, "{b}").map_err(stdout_err)?;
                    }
                }
                TextFormat::Json => {
                    let v: Vec<serde_json::Value> = vals.iter().map(|(n, b)| serde_json::json!({"N": n, "bound": b})).collect();
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap()).map_err(stdout_err)?;
                }
            }
        }
        Command::Primes { class, rank, fig1, out_dir, no_cache } => {
            check_rank(rank)?;
            if fig1 {
                let cells = fig1_map(rank + 1, rank);
                let frontier = fig1_frontier(rank);
                let values: Vec<String> = frontier.iter().map(|c| c.value.to_string()).collect();
                write!(out, "{}", fig1_ascii(&cells)).map_err(stdout_err)?;
                writeln!(out, "frontier u={rank}: {} primes: {}", frontier.len(), values.join(" ")).map_err(stdout_err)?;
                if let Some(d) = &out_dir {
                    let p = write_file(d, "fig1.csv", |f| report::write_fig1_csv(f, &cells).map_err(csv_err))?;
                    let _ = writeln!(err, "wrote {}", p.display());
                }
            } else {
                let mut cache = open_cache(no_cache, err);
                let recs = enumerate_family_with(class, rank, &mut |v| cache.is_prime(v));
                close_cache(cache, err);
                match &out_dir {
                    Some(d) => {
                        let name = format!("primes_{}.csv", class.name());
                        let p = write_file(d, &name, |f| report::write_family_csv(f, &recs).map_err(csv_err))?;
                        writeln!(out, "{} primes of class {} up to rank {rank} in {}", recs.len(), class.name(), p.display()).map_err(stdout_err)?;
                    }
                    None => report::write_family_csv(&mut *out, &recs).map_err(csv_err)?,
                }
            }
        }
        Command::Nmax { class, rank, out_dir, no_cache } => {
            check_rank(rank)?;
            let mut cache = open_cache(no_cache, err);
            let series = nmax_series_with(class, rank, &mut |v| cache.is_prime(v));
            close_cache(cache, err);
            match &out_dir {
                Some(d) => {
                    let name = format!("nmax_{}.csv", class.name());
                    let p = write_file(d, &name, |f| report::write_nmax_csv(f, &series).map_err(csv_err))?;
                    let last = series.last().map(|s| s.log2_nmax).unwrap_or(0.0);
                    writeln!(out, "log2 N_max at u={rank}: {last:.3} ({})", p.display()).map_err(stdout_err)?;
                }
                None => report::write_nmax_csv(&mut *out, &series).map_err(csv_err)?,
            }
        }
    }
    Ok(EXIT_OK)
}
