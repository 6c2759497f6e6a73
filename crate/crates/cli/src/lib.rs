//! The `skewgentle` command-line driver.
//!
//! Exit codes: 0 success, 1 verdict failure, 2 input error, 3 cap exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use skewgentle::FieldSpec;

pub mod commands;
pub mod corpus_dir;
pub mod report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Environment variable naming the directory where verify reports are
/// cached by content hash.
pub const CACHE_ENV: &str = "SKEWGENTLE_CACHE_DIR";

/// Extension of the quiver files read from directories and written by
/// `corpus`.
pub const QUIVER_EXT: &str = "quiver";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: skewgentle::Error },
    #[error(transparent)]
    Core(#[from] skewgentle::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(skewgentle::Error::CapExceeded { .. }) => EXIT_CAP,
            CliError::Core(skewgentle::Error::Witness { .. }) => EXIT_VERDICT,
            _ => EXIT_INPUT,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "skewgentle", version, about = "Construct and verify skew-gentle algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a file describes a skew-gentle triple.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the quiver with relations of the skew-gentle algebra.
    Split {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Exchange the roles of the two copies of each special vertex.
        #[arg(long)]
        swap: bool,
    },
    /// Print the gentle pair with the involution whose skew group algebra
    /// recovers the input.
    Gamma {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Peirce decomposition at the minus idempotent and presentations of
    /// the corner algebras.
    Corners {
        file: PathBuf,
        #[arg(long, default_value = "q")]
        field: FieldSpec,
        #[arg(long)]
        json: bool,
    },
    /// Run the verification pipeline on files or directories of files.
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Generate a deterministic corpus of skew-gentle triples.
    Corpus(CorpusArgs),
    /// Per-instance homological summary as JSON lines or a table.
    Report {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Fields to compute over, as a comma-separated list of q, f2, f3.
    #[arg(long, value_delimiter = ',', default_value = "q")]
    pub field: Vec<FieldSpec>,
    #[arg(long, default_value = "full")]
    pub level: skewgentle::pipeline::Level,
    /// Instances verified in parallel.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = skewgentle::resolution::DEFAULT_RESOLUTION_CAP)]
    pub resolution_cap: usize,
    #[arg(long, default_value_t = skewgentle::homology::DEFAULT_EXT_DEGREE)]
    pub ext_degree: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Inclusive range such as `1..5`.
    #[arg(long, default_value = "1..5")]
    pub vertices: String,
    #[arg(long, default_value = "0..6")]
    pub arrows: String,
    #[arg(long, default_value = "1/2")]
    pub relation_density: skewgentle::corpus::Density,
    #[arg(long, default_value = "1/2")]
    pub special_density: skewgentle::corpus::Density,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

/// Parses arguments and runs a command, writing normal output to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match commands::dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub(crate) fn read_spec(path: &Path) -> CliResult<(String, skewgentle::QuiverSpec)> {
    let text = read_file(path)?;
    let spec = skewgentle::dsl::parse(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })?;
    Ok((text, spec))
}

pub(crate) fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Files named on the command line, with directories expanded to their
/// `.quiver` files in name order.
pub fn expand_paths(paths: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let entries = fs::read_dir(p).map_err(|source| CliError::Io { path: p.clone(), source })?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == QUIVER_EXT))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

/// `1..5`, `1..=5` or `1-5` as an inclusive range; a bare number is a
/// one-point range.
pub fn parse_range(s: &str) -> CliResult<std::ops::RangeInclusive<usize>> {
    let bad = || CliError::Usage(format!("cannot read range {s:?}"));
    let t = s.trim();
    let (lo, hi) = if let Some((a, b)) = t.split_once("..") {
        (a, b.trim_start_matches('='))
    } else if let Some((a, b)) = t.split_once('-') {
        (a, b)
    } else {
        (t, t)
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}
