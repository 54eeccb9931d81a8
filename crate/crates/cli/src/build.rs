use std::path::PathBuf;

use clap::Args;
use odkg::graph::export_graph;
use odkg::{build_odkg, BuildConfig, EdgeKind, TerminologyStore};

use crate::error::CliError;

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// ATC hierarchy TSV (code, parent, label).
    #[arg(long, requires_all = ["concepts", "relations"], conflicts_with_all = ["rrf_conso", "rrf_rel"])]
    atc: Option<PathBuf>,
    /// Concepts TSV (source, code, cui, tty, label).
    #[arg(long, requires = "atc")]
    concepts: Option<PathBuf>,
    /// Relations TSV (src_source, src_code, rel, dst_source, dst_code).
    #[arg(long, requires = "atc")]
    relations: Option<PathBuf>,
    /// MRCONSO-style pipe-delimited concept file.
    #[arg(long, requires = "rrf_rel")]
    rrf_conso: Option<PathBuf>,
    /// MRREL-style pipe-delimited relation file.
    #[arg(long, requires = "rrf_conso")]
    rrf_rel: Option<PathBuf>,
    /// TOML build configuration. Flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed ATC code. Repeat to give several; replaces the configured seeds.
    #[arg(long = "seed", value_name = "ATC_CODE")]
    seeds: Vec<String>,
    /// Comma-separated relation kinds to expand over.
    #[arg(long, value_delimiter = ',', value_name = "KINDS")]
    relation_whitelist: Option<Vec<EdgeKind>>,
    /// Keep going when the subclass hierarchy has cycles.
    #[arg(long)]
    allow_cycles: bool,
    /// Maximum number of expansion rounds.
    #[arg(long, value_name = "N")]
    max_expansion_rounds: Option<u32>,
    /// Where to write the graph JSON.
    #[arg(long)]
    out: PathBuf,
}

fn config(args: &BuildArgs) -> Result<BuildConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            toml::from_str(&text)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
        }
        None => BuildConfig::default(),
    };
    if !args.seeds.is_empty() {
        config.seed_atc_codes = args.seeds.clone();
    }
    if let Some(kinds) = &args.relation_whitelist {
        config.relation_whitelist = kinds.iter().copied().collect();
    }
    if args.allow_cycles {
        config.allow_cycles = true;
    }
    if let Some(n) = args.max_expansion_rounds {
        config.max_expansion_rounds = n;
    }
    Ok(config)
}

pub fn run(args: BuildArgs) -> Result<(), CliError> {
    let config = config(&args)?;
    let store = match (
        &args.atc,
        &args.concepts,
        &args.relations,
        &args.rrf_conso,
        &args.rrf_rel,
    ) {
        (Some(atc), Some(concepts), Some(relations), None, None) => {
            TerminologyStore::from_tsv(atc, concepts, relations)?
        }
        (None, None, None, Some(conso), Some(rel)) => TerminologyStore::from_rrf(conso, rel)?,
        _ => {
            return Err(CliError::usage(
                "give either --atc/--concepts/--relations or --rrf-conso/--rrf-rel",
            ))
        }
    };
    let (graph, report) = build_odkg(&store, &config)?;
    export_graph(&graph, &args.out)?;
    eprintln!("{report}");
    Ok(())
}
