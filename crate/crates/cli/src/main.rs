use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coxdec::catalog::{self, CatalogFile, Selection};
use coxdec::engine::{EngineError, SearchConfig};
use coxdec::oracle::verify_catalog;
use coxdec::oracle::volume::seed_from_env;

/// Coxeter decompositions of hyperbolic tetrahedra, pyramids and prisms.
///
/// The Monte Carlo seed defaults to a fixed value and can be overridden
/// with the COXDEC_SEED environment variable.
#[derive(Parser)]
#[command(name = "coxdec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate decompositions and write a catalog.
    Enumerate(EnumerateArgs),
    /// Re-check every entry of a catalog.
    Verify {
        path: PathBuf,
        /// Monte Carlo samples per volume estimate.
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
    /// Print a catalog as tables.
    Tables { path: PathBuf },
}

#[derive(clap::Args)]
struct EnumerateArgs {
    /// tetra, pyr4..pyr7, prism-into-prism, prism-into-tetra or all.
    #[arg(long, default_value = "all", value_parser = parse_selection)]
    shape: Selection,
    /// Fundamental tetrahedron index, or "all".
    #[arg(long, default_value = "all", value_parser = parse_fundamental)]
    fundamental: Fundamental,
    #[arg(long, default_value_t = SearchConfig::default().max_tiles)]
    max_tiles: usize,
    #[arg(long, default_value_t = SearchConfig::default().max_level)]
    max_level: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy)]
enum Fundamental {
    All,
    Index(usize),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

fn parse_selection(s: &str) -> Result<Selection, String> {
    s.parse().map_err(|e: catalog::CatalogError| e.to_string())
}

fn parse_fundamental(s: &str) -> Result<Fundamental, String> {
    if s == "all" {
        return Ok(Fundamental::All);
    }
    s.parse()
        .map(Fundamental::Index)
        .map_err(|_| format!("expected an index or \"all\", got {s:?}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Enumerate(args) => enumerate(args),
        Command::Verify { path, samples } => verify(&path, samples),
        Command::Tables { path } => tables(&path),
    }
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })
}

fn enumerate(args: EnumerateArgs) -> ExitCode {
    let config = SearchConfig {
        max_tiles: args.max_tiles,
        max_level: args.max_level,
        ..SearchConfig::default()
    };
    let fundamental = match args.fundamental {
        Fundamental::All => None,
        Fundamental::Index(i) => Some(i),
    };
    let cat = match catalog::build(&config, args.shape, fundamental, seed_from_env()) {
        Ok(c) => c,
        Err(e @ EngineError::LevelBoundExceeded { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match args.format {
        Format::Json => cat.to_json(),
        Format::Table => cat.to_table(),
        Format::Csv => match cat.to_csv() {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        },
    };
    match args.out {
        Some(path) => {
            if let Err(e) = fs::write(&path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
            eprintln!(
                "{} entries, {} prism schemes written to {}",
                cat.entries.len(),
                cat.schemes.len(),
                path.display()
            );
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}

fn verify(path: &PathBuf, samples: usize) -> ExitCode {
    let text = match read(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let cat = match CatalogFile::from_json_unchecked(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let seed = std::env::var("COXDEC_SEED").map_or(cat.header.seed, |_| seed_from_env());
    let report = verify_catalog(&cat, samples, seed);
    if !report.checksum_ok {
        eprintln!("checksum mismatch: file says {}, contents hash to {}", cat.checksum, cat.compute_checksum());
    }
    let passed = report.entries.iter().filter(|e| e.pass).count();
    println!("{passed}/{} entries pass", report.entries.len());
    for bad in report.entries.iter().filter(|e| !e.pass) {
        let who = bad
            .fundamental
            .map(|f| format!("fundamental {f} "))
            .unwrap_or_default();
        eprintln!("FAIL {who}{}", bad.reason());
    }
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn tables(path: &PathBuf) -> ExitCode {
    let text = match read(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    match CatalogFile::from_json_unchecked(&text) {
        Ok(c) => {
            print!("{}", c.to_table());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
