//! Command-line front end. [`dispatch`] parses arguments, runs one
//! subcommand and returns the process exit code:
//! 0 success, 1 failed verification, 2 usage or input error, 3 budget
//! exhausted.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::compiler::{build_sn, compile_to_system, dioph, parse_poly, CompileError};
use crate::enumerator::{beta, EnumError, LimitStream, Mode, ScanConfig};
use crate::solver::{
    bound_conditional_within, find_all_conditional_within, solve_in_box, BoundedSearchOracle,
    SolveBudget, SolveError,
};
use crate::system::{parse_system, System};
use crate::verifier::{family_witness, lucas_lehmer, pell_minimal, pell_next, Family, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "singlefold",
    version,
    about = "Systems of atomic equations over the naturals"
)]
pub struct Cli {
    /// Worker threads for box scans; never changes output.
    #[arg(long, global = true, env = "SINGLEFOLD_WORKERS", default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ModeArgs {
    /// Systems with fewer than K solutions in the box (default 2).
    #[arg(long, conflicts_with = "omega1")]
    pub kappa: Option<u32>,
    /// Systems with any number of solutions.
    #[arg(long)]
    pub omega1: bool,
}

impl ModeArgs {
    fn mode(self) -> Result<Mode, EnumError> {
        if self.omega1 {
            Ok(Mode::Omega1)
        } else {
            Mode::Kappa(self.kappa.unwrap_or(2)).validate()
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// One value beta(n, m).
    Beta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Stream beta(n, m) for m = 0, 1, 2, ...
    Limit {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        mode: ModeArgs,
        /// Stop after this m; without it the stream does not end.
        #[arg(long)]
        max_m: Option<u64>,
        /// JSON-lines cache to resume from and append to.
        #[arg(long, env = "SINGLEFOLD_CACHE")]
        cache: Option<PathBuf>,
        /// Discard cached records for this (n, mode) first.
        #[arg(long, requires = "cache")]
        restart: bool,
    },
    /// All solutions of a system inside [0, bound]^n.
    Solve {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Check the closed-form solution of an explicit family.
    Verify {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        param: u32,
        /// Also search the box [0, max]^n and require a single solution.
        #[arg(long)]
        unique_check: bool,
        #[arg(long, default_value_t = 5_000_000)]
        node_limit: u64,
    },
    /// Compile `EXPR = 0` into a system.
    Compile {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The polynomial whose roots are the solutions of a system.
    Dioph {
        #[arg(long)]
        system: PathBuf,
    },
    /// Pad a graph system to exactly n variables.
    BuildSn {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Lucas-Lehmer test of 2^p - 1.
    LucasLehmer {
        #[arg(long)]
        p: u64,
    },
    /// Minimal and further solutions of x^2 + 1 = 5^(2k+1) y^2.
    Pell {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        steps: u32,
    },
    /// All roots, using a bounded-search oracle.
    FindAll {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        oracle_bound: u64,
        #[arg(long, default_value_t = 64)]
        max_m: u64,
    },
    /// A strict upper bound on root heights, using a bounded-search oracle.
    BoundCond {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        oracle_bound: u64,
        #[arg(long, default_value_t = 64)]
        max_m: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::BoxTooLarge { .. } | EnumError::TooManySubsets { .. } => {
                CliError::Budget(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::BudgetExhausted { .. } | SolveError::UnboundedBranch(_) => {
                CliError::Budget(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CompileError> for CliError {
    fn from(e: CompileError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Mismatch { .. } | VerifyError::InvalidPell(_) => {
                CliError::Verification(e.to_string())
            }
            VerifyError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type CliResult = Result<i32, CliError>;

/// Parses `argv` (including the program name), runs the subcommand writing
/// its report to `out` and diagnostics to stderr, and returns the exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn read_system(path: &Path) -> Result<System, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_system(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn tuple_text(values: &[BigUint]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    let config = ScanConfig::default().with_workers(cli.workers as usize);
    match cli.command {
        Command::Beta { n, m, mode } => {
            let mode = mode.mode()?;
            let value = beta(n, m, mode, &config)?;
            writeln!(out, "n={n} mode={mode} m={m} value={value}")?;
            Ok(EXIT_OK)
        }
        Command::Limit {
            n,
            mode,
            max_m,
            cache,
            restart,
        } => {
            let mode = mode.mode()?;
            let stream = match &cache {
                Some(path) => LimitStream::with_cache(n, mode, config, path, restart)?,
                None => LimitStream::new(n, mode, config, None)?,
            };
            for item in stream {
                let item = item?;
                let r = item.record;
                writeln!(
                    out,
                    "m={} value={} stable_for={}",
                    r.m, r.value, item.stable_for
                )?;
                out.flush()?;
                if max_m.is_some_and(|limit| r.m >= limit) {
                    break;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Solve {
            system,
            bound,
            cap,
            node_limit,
        } => {
            let s = read_system(&system)?;
            let mut budget = SolveBudget::new(bound);
            if let Some(c) = cap {
                budget = budget.with_cap(c);
            }
            if let Some(l) = node_limit {
                budget = budget.with_node_limit(l);
            }
            let sols = solve_in_box(&s, &budget)?;
            for a in &sols {
                writeln!(out, "{}", tuple_text(a.values()))?;
            }
            writeln!(out, "count={}", sols.len())?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            family,
            param,
            unique_check,
            node_limit,
        } => verify(family, param, unique_check, node_limit, out),
        Command::Compile { poly, out: path } => {
            let d = parse_poly(&poly)?;
            let r = compile_to_system(&d)?;
            let text = r.system.to_string();
            match path {
                Some(p) => {
                    fs::write(&p, &text)?;
                    writeln!(
                        out,
                        "vars={} atoms={} base_vars={}",
                        r.system.n(),
                        r.system.len(),
                        r.p
                    )?;
                }
                None => write!(out, "{text}")?,
            }
            Ok(EXIT_OK)
        }
        Command::Dioph { system } => {
            let s = read_system(&system)?;
            writeln!(out, "{}", dioph(&s)?)?;
            Ok(EXIT_OK)
        }
        Command::BuildSn { phi, n } => {
            let s = build_sn(&read_system(&phi)?, n)?;
            write!(out, "{s}")?;
            Ok(EXIT_OK)
        }
        Command::LucasLehmer { p } => {
            let prime = lucas_lehmer(p)?.is_prime();
            writeln!(out, "p={p} prime={prime}")?;
            Ok(EXIT_OK)
        }
        Command::Pell { k, steps } => {
            let mut sol = pell_minimal(k)?;
            for step in 0..=steps {
                if step > 0 {
                    sol = pell_next(&sol)?;
                }
                writeln!(
                    out,
                    "k={k} step={step} x={} y={} ok={}",
                    sol.x,
                    sol.y,
                    sol.is_valid()
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::FindAll {
            poly,
            oracle_bound,
            max_m,
        } => {
            let d = parse_poly(&poly)?;
            let oracle = BoundedSearchOracle::new(oracle_bound);
            match find_all_conditional_within(&d, &oracle, max_m)? {
                Some(roots) => {
                    for a in &roots {
                        writeln!(out, "{}", tuple_text(a.values()))?;
                    }
                    writeln!(out, "count={}", roots.len())?;
                    Ok(EXIT_OK)
                }
                None => Err(CliError::Budget(format!(
                    "oracle still answers YES at m={max_m}"
                ))),
            }
        }
        Command::BoundCond {
            poly,
            oracle_bound,
            max_m,
        } => {
            let d = parse_poly(&poly)?;
            let oracle = BoundedSearchOracle::new(oracle_bound);
            match bound_conditional_within(&d, &oracle, max_m)? {
                Some(b) => {
                    writeln!(out, "bound={b}")?;
                    Ok(EXIT_OK)
                }
                None => Err(CliError::Budget(format!(
                    "oracle still answers YES at m={max_m}"
                ))),
            }
        }
    }
}

fn verify(
    family: Family,
    param: u32,
    unique_check: bool,
    node_limit: u64,
    out: &mut dyn Write,
) -> CliResult {
    let w = match family_witness(family, param) {
        Ok(w) => w,
        Err(e @ VerifyError::Mismatch { .. }) => {
            writeln!(out, "family={family} param={param} ok=false")?;
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };
    write!(
        out,
        "family={family} param={param} ok=true max={}",
        w.claimed_max
    )?;
    if !unique_check {
        writeln!(out)?;
        return Ok(EXIT_OK);
    }
    let bound = w.claimed_max.to_u64().ok_or_else(|| {
        CliError::Budget(format!("box edge {} does not fit a search", w.claimed_max))
    })?;
    let sols = match solve_in_box(
        &w.system,
        &SolveBudget::new(bound)
            .with_cap(2)
            .with_node_limit(node_limit),
    ) {
        Ok(s) => s,
        Err(e) => {
            writeln!(out)?;
            return Err(e.into());
        }
    };
    let unique = sols.len() == 1 && sols[0] == w.solution;
    writeln!(out, " unique={unique}")?;
    Ok(if unique { EXIT_OK } else { EXIT_VERIFY })
}
