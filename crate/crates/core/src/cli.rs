//! The `frames` command-line tool.
//!
//! Exit codes: 0 on success, 1 on a domain error (for example a non-tight
//! input or an infeasible construction), 2 on a usage error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::divisibility::{
    find_divisor_with, is_prime_bruteforce_with, minimal_factor_size_multisets,
    prime_factorization_with, SearchOptions,
};
use crate::error::FrameError;
use crate::frame::{
    check_equiangular, check_tight, coherence, prime_parseval_extension, random_tight_frame,
    welch_bound, FrameMatrix, DEFAULT_TOL,
};
use crate::grid::grid_report;
use crate::harmonic::{divisor_sets, htf, HtfParams};
use crate::io::{self, Format};
use crate::tetris::{stf, stf_low_redundancy};
use crate::transform::{analyze_fast, benchmark, plan, synthesize_fast};

#[derive(Debug, Parser)]
#[command(name = "frames", version, about = "Prime and divisible finite tight frames")]
pub struct Cli {
    /// Tightness tolerance (relative Frobenius residual).
    #[arg(long, global = true, env = "FRAMES_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Output format for matrices, vectors and tables.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Allow exhaustive searches beyond the default cap of 26 vectors.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Harmonic tight frame HTF(n, m, s).
    Htf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
    },
    /// Spectral tetris frame STF(n, m).
    Stf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Build STF(n, m) for n < m < 2n.
        #[arg(long)]
        low_redundancy: bool,
    },
    /// Parseval frame from orthonormalized Gaussian rows.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Prime Parseval frame of m non-zero vectors in dimension n.
    Extendprime {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Tightness, angles and primality of a frame file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Also report a prime factorization.
        #[arg(long)]
        factor: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Greedy prime factorization of a frame file.
    Factor {
        #[arg(long)]
        input: PathBuf,
        /// Also list every multiset of prime factor sizes.
        #[arg(long)]
        all_minimal: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// The divisor sets D, P, S of HTF(n, m).
    Sets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Fast harmonic analysis or synthesis of a vector file.
    Transform {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, conflicts_with = "synthesize", required_unless_present = "synthesize")]
        analyze: bool,
        #[arg(long)]
        synthesize: bool,
        #[arg(long)]
        input: PathBuf,
    },
    /// Time fast against naive analysis.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 21)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closed-form against brute-force verdicts for all small (n, m).
    Grid {
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        mmax: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(FrameError),
}

impl From<FrameError> for CliError {
    fn from(e: FrameError) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Domain(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn json_out<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(FrameError::from)?;
    s.push('\n');
    Ok(s)
}

fn json_only(cli: &Cli, what: &str) -> CliResult<()> {
    if cli.format == OutputFormat::Csv {
        return Err(CliError::Usage(format!("{what} output is JSON only")));
    }
    Ok(())
}

fn search_options(tol: f64, search: &SearchArgs) -> SearchOptions {
    let opts = SearchOptions::new(tol);
    if search.allow_large {
        opts.allow_large()
    } else {
        opts
    }
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> CliResult<(String, Option<Format>)> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        stdin.read_to_string(&mut text)?;
        Ok((text, None))
    } else {
        Ok((std::fs::read_to_string(path)?, Some(Format::from_path(path))))
    }
}

fn load_frame(path: &PathBuf, stdin: &mut dyn Read) -> CliResult<FrameMatrix> {
    let (text, format) = read_input(path, stdin)?;
    let format = format.unwrap_or_else(|| Format::sniff(&text));
    Ok(io::read_frame(&text, format)?)
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> CliResult<String> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    let format: Format = cli.format.into();
    match &cli.command {
        Command::Htf { n, m, s } => {
            Ok(io::write_frame(&htf(&HtfParams::new(*n, *m, *s)?)?, format)?)
        }
        Command::Stf { n, m, low_redundancy } => {
            let phi = if *low_redundancy {
                stf_low_redundancy(*n, *m)?
            } else {
                stf(*n, *m)?
            };
            Ok(io::write_frame(&phi, format)?)
        }
        Command::Random { n, m, seed } => {
            Ok(io::write_frame(&random_tight_frame(*n, *m, *seed)?, format)?)
        }
        Command::Extendprime { n, m } => {
            Ok(io::write_frame(&prime_parseval_extension(*n, *m)?, format)?)
        }
        Command::Analyze { input, factor, search } => {
            json_only(cli, "analyze")?;
            let phi = load_frame(input, stdin)?;
            let opts = search_options(tol, search);
            let tightness = check_tight(&phi, tol);
            if !tightness.is_tight {
                return Err(FrameError::NotTight {
                    residual: tightness.residual,
                    bound: tightness.bound_a,
                }
                .into());
            }
            let (n, m) = (phi.n(), phi.m());
            let mut report = json!({
                "n": n,
                "m": m,
                "field": phi.field(),
                "tightness": tightness,
            });
            if m >= 2 {
                report["coherence"] = json!(coherence(&phi));
                report["welch_bound"] = json!(welch_bound(n, m));
                report["equiangularity"] = json!(check_equiangular(&phi, tol));
            }
            report["prime"] = json!(is_prime_bruteforce_with(&phi, &opts)?);
            report["divisor"] = json!(find_divisor_with(&phi, None, &opts)?);
            if *factor {
                report["factorization"] = json!(prime_factorization_with(&phi, &opts)?);
            }
            json_out(&report)
        }
        Command::Factor { input, all_minimal, search } => {
            json_only(cli, "factor")?;
            let phi = load_frame(input, stdin)?;
            let opts = search_options(tol, search);
            let factorization = prime_factorization_with(&phi, &opts)?;
            if *all_minimal {
                let multisets = minimal_factor_size_multisets(&phi, &opts)?;
                json_out(&json!({
                    "factors": factorization.factors,
                    "bounds": factorization.bounds,
                    "size_multisets": multisets,
                }))
            } else {
                json_out(&factorization)
            }
        }
        Command::Sets { n, m } => {
            json_only(cli, "sets")?;
            if *n == 0 || *m == 0 {
                return Err(FrameError::invalid("n and m must be at least 1").into());
            }
            json_out(&divisor_sets(*n, *m))
        }
        Command::Transform { n, m, p, analyze, input, .. } => {
            let (text, in_format) = read_input(input, stdin)?;
            let in_format = in_format.unwrap_or_else(|| Format::sniff(&text));
            let x = io::read_vector(&text, in_format)?;
            let plan = plan(*n, *m, *p)?;
            let out = if *analyze {
                analyze_fast(&plan, &x)?
            } else {
                synthesize_fast(&plan, &x)?
            };
            Ok(io::write_vector(&out, format)?)
        }
        Command::Bench { n, m, p, trials, seed } => {
            json_only(cli, "bench")?;
            json_out(&benchmark(*n, *m, *p, *trials, *seed)?)
        }
        Command::Grid { nmax, mmax, search } => {
            let rows = grid_report(*nmax, *mmax, &search_options(tol, search))?;
            match format {
                Format::Json => json_out(&rows),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for row in &rows {
                        w.serialize(row).map_err(FrameError::from)?;
                    }
                    let bytes = w
                        .into_inner()
                        .map_err(|e| FrameError::Parse(e.to_string()))?;
                    Ok(String::from_utf8_lossy(&bytes).into_owned())
                }
            }
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Machine output goes to `stdout` (or `--output`), messages to
/// `stderr`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let result = execute(&cli, stdin).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(CliError::from),
        None => stdout.write_all(text.as_bytes()).map_err(CliError::from),
    });
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
