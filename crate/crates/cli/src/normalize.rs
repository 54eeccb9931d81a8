use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};

use clap::Args;
use odkg::par::Execution;
use odkg::parser::{lexicon_from_graph, Normalizer};
use odkg::Vocabularies;

use crate::error::CliError;
use crate::{load_graph, Output};

/// Lines normalized per batch. Output for one batch is written before the
/// next is read.
const CHUNK_LINES: usize = 8192;

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    /// Graph JSON written by `odkg build`.
    #[arg(long)]
    graph: PathBuf,
    /// Drug strings, one per line. Reads stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// JSONL output, one result per input line. Writes stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parse on the current thread only.
    #[arg(long)]
    sequential: bool,
}

fn open_input(path: Option<&Path>) -> Result<Box<dyn BufRead>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(
            File::open(p).map_err(|e| CliError::io(p, e))?,
        )),
        None => Box::new(BufReader::new(io::stdin())),
    })
}

/// Reads up to `CHUNK_LINES` lines. Bytes that are not UTF-8 are replaced
/// rather than rejected, so a bad line still yields one result.
fn read_chunk(
    input: &mut dyn BufRead,
    path: &Path,
    chunk: &mut Vec<String>,
) -> Result<bool, CliError> {
    chunk.clear();
    let mut buf = Vec::new();
    while chunk.len() < CHUNK_LINES {
        buf.clear();
        let n = input
            .read_until(b'\n', &mut buf)
            .map_err(|e| CliError::io(path, e))?;
        if n == 0 {
            return Ok(false);
        }
        if buf.last() == Some(&b'\n') {
            buf.pop();
            if buf.last() == Some(&b'\r') {
                buf.pop();
            }
        }
        chunk.push(String::from_utf8_lossy(&buf).into_owned());
    }
    Ok(true)
}

pub fn run(args: NormalizeArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    let vocab = Vocabularies::from_env()?;
    let lexicon = lexicon_from_graph(&graph);
    let normalizer = Normalizer::new(&graph, &lexicon, &vocab);
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let in_path = args
        .input
        .clone()
        .unwrap_or_else(|| PathBuf::from("<stdin>"));
    let mut input = open_input(args.input.as_deref())?;
    let mut out = Output::open(args.out.as_deref())?;
    let mut chunk = Vec::with_capacity(CHUNK_LINES);
    loop {
        let more = read_chunk(&mut *input, &in_path, &mut chunk)?;
        let mut text = String::new();
        for line in normalizer.run_batch(&chunk, exec) {
            text.push_str(&line.to_json());
            text.push('\n');
        }
        out.write_all(text.as_bytes())?;
        if !more {
            break;
        }
    }
    out.finish()
}
