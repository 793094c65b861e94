//! The `lsg` command line: GDF documents in, deterministic text reports out.

pub mod error;
pub mod gdf;
pub mod gen;
pub mod report;
pub mod search;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{CliError, Result};
pub use gdf::{parse_gdf, GdfDocument};
use report::{Options, Report};

#[derive(Debug, Parser)]
#[command(
    name = "lsg",
    version,
    about = "Local subgroupoids of finite topological groupoids"
)]
pub struct Cli {
    /// Worker threads; 0 uses the default pool.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Limits {
    /// Largest space whose open sets are enumerated.
    #[arg(long, default_value_t = lsg_core::finspace::DEFAULT_MAX_POINTS)]
    pub max_points: usize,
    /// Largest number of free arrows enumerated over one open set.
    #[arg(long, default_value_t = lsg_core::groupoid::DEFAULT_MAX_ARROWS)]
    pub max_arrows: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a document.
    Check { file: PathBuf },
    /// Compute a report on a document.
    Report {
        kind: ReportKind,
        file: PathBuf,
        #[command(flatten)]
        limits: Limits,
        /// Compute glob by intersecting all wide subgroupoids.
        #[arg(long)]
        oracle: bool,
        /// Print germs and other detail.
        #[arg(long)]
        witness: bool,
    },
    /// Search for a counterexample.
    Search {
        kind: SearchKind,
        /// Search only this document's groupoid.
        file: Option<PathBuf>,
        /// Largest space tried when no file is given.
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, default_value_t = lsg_core::groupoid::DEFAULT_MAX_ARROWS)]
        max_arrows: usize,
    },
    /// Print a bundled example as a document.
    Gen {
        example: gen::Example,
        /// Base space for pair and z2bundle: d2, s2, v3, c4 or c8.
        #[arg(long)]
        on: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    C1,
    Coherence,
    Connection,
    Transfer,
    Sheaf,
    StarConnectivity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    GlobalCoherenceFailure,
}

/// Reads a document from a file, or from stdin when the path is `-`.
pub fn load(path: &Path) -> Result<GdfDocument> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(io)?
    } else {
        std::fs::read_to_string(path).map_err(io)?
    };
    parse_gdf(&text)
}

/// Runs a command to its report text. `holds` is false when the property
/// the command is about fails.
pub fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::Check { file } => report::check(&load(file)?),
        Command::Report {
            kind,
            file,
            limits,
            oracle,
            witness,
        } => {
            let doc = load(file)?;
            let opts = Options {
                max_points: limits.max_points,
                max_arrows: limits.max_arrows,
                oracle: *oracle,
                witness: *witness,
            };
            match kind {
                ReportKind::C1 => report::c1(&doc, &opts),
                ReportKind::Coherence => report::coherence(&doc, &opts),
                ReportKind::Connection => report::connection(&doc, &opts),
                ReportKind::Transfer => report::transfer(&doc, &opts),
                ReportKind::Sheaf => report::sheaf(&doc, &opts),
                ReportKind::StarConnectivity => report::star_connectivity(&doc, &opts),
            }
        }
        Command::Search {
            kind: SearchKind::GlobalCoherenceFailure,
            file,
            max_points,
            max_arrows,
        } => {
            let (found, tried) = match file {
                Some(f) => (search::search_document(&load(f)?, *max_arrows)?, 1),
                None => search::search_all(*max_points, *max_arrows)?,
            };
            Ok(match found {
                None => Report {
                    text: format!(
                        "no section fails global coherence ({tried} groupoids searched)\n"
                    ),
                    holds: true,
                },
                Some(f) => Report {
                    text: format!("# not globally coherent {}\n{}", f.witness, f.doc),
                    holds: false,
                },
            })
        }
        Command::Gen { example, on } => Ok(Report {
            text: gen::generate(*example, on.as_deref())?.to_string(),
            holds: true,
        }),
    }
}
