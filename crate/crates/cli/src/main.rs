mod build;
mod error;
mod normalize;
mod query;
mod stats;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::{CliError, ExitStatus};

/// Opioid drug knowledge graph toolkit.
#[derive(Debug, Parser)]
#[command(name = "odkg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the knowledge graph from terminology files and write it as JSON.
    Build(build::BuildArgs),
    /// Query a built graph.
    Query(query::QueryArgs),
    /// Normalize raw drug strings, one per line, to JSONL.
    Normalize(normalize::NormalizeArgs),
    /// Aggregate EMR prescriptions by ingredient, place and year.
    Stats(stats::StatsArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ExitStatus::Usage as u8)
            } else {
                ExitCode::from(ExitStatus::Success as u8)
            };
        }
    };
    let result = match cli.command {
        Command::Build(a) => build::run(a),
        Command::Query(a) => query::run(a),
        Command::Normalize(a) => normalize::run(a),
        Command::Stats(a) => stats::run(a),
    };
    match result {
        Ok(()) => ExitCode::from(ExitStatus::Success as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status as u8)
        }
    }
}

/// An output sink: the named file, or stdout when no path is given.
pub(crate) struct Output {
    path: Option<PathBuf>,
    inner: Box<dyn Write>,
}

impl Output {
    pub(crate) fn open(path: Option<&Path>) -> Result<Self, CliError> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| CliError::io(p, e))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Output {
            path: path.map(Path::to_path_buf),
            inner,
        })
    }

    fn fail(&self, e: io::Error) -> CliError {
        CliError::io(self.path.as_deref().unwrap_or(Path::new("<stdout>")), e)
    }

    pub(crate) fn write_all(&mut self, bytes: &[u8]) -> Result<(), CliError> {
        self.inner.write_all(bytes).map_err(|e| self.fail(e))
    }

    pub(crate) fn finish(mut self) -> Result<(), CliError> {
        self.inner.flush().map_err(|e| self.fail(e))
    }
}

pub(crate) fn load_graph(path: &Path) -> Result<odkg::OdkgGraph, CliError> {
    Ok(odkg::graph::import_graph(path)?)
}
