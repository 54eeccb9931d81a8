use std::path::PathBuf;

use clap::Args;
use odkg::analytics::{
    aggregate, filter_threshold, parse_group_by, render_aggregates, trend_series, ExportFormat,
    Exportable,
};
use odkg::emr::{coverage_report, instantiate, load_emr};
use odkg::par::Execution;
use odkg::parser::{lexicon_from_graph, Normalizer};
use odkg::Vocabularies;

use crate::error::CliError;
use crate::{load_graph, Output};

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Graph JSON written by `odkg build`.
    #[arg(long)]
    graph: PathBuf,
    /// EMR extract with header record_id,drug_string,state,subregion,year.
    #[arg(long)]
    emr: PathBuf,
    /// Comma-separated keys from ingredient, state, subregion, census_region, year.
    #[arg(long, default_value = "ingredient,state,year", value_name = "KEYS")]
    group_by: String,
    /// Keep only rows whose count is strictly greater than N.
    #[arg(long, value_name = "N")]
    min_count: Option<usize>,
    /// Emit year-over-year series instead of cells. Needs year in --group-by.
    #[arg(long)]
    trend: bool,
    /// Output format.
    #[arg(long, default_value = "csv", value_name = "csv|json")]
    format: ExportFormat,
    /// Output file. Writes stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parse on the current thread only.
    #[arg(long)]
    sequential: bool,
}

pub fn run(args: StatsArgs) -> Result<(), CliError> {
    let group_by = parse_group_by(&args.group_by)?;
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let graph = load_graph(&args.graph)?;
    let records = load_emr(&args.emr)?;
    let vocab = Vocabularies::from_env()?;
    let lexicon = lexicon_from_graph(&graph);
    let normalizer = Normalizer::new(&graph, &lexicon, &vocab);
    let inst = instantiate(&records, &normalizer, exec);
    let agg = aggregate(&records, &inst.record_ingredients, &group_by, exec)?;

    let text = if args.trend {
        let mut points = trend_series(&agg)?;
        if let Some(min) = args.min_count {
            points.retain(|p| p.count > min);
        }
        let data = Exportable::Trend {
            group_by: &agg.group_by,
            points: &points,
        };
        render_aggregates(&data, &graph, args.format)
    } else {
        let cells = match args.min_count {
            Some(min) => filter_threshold(&agg.cells, min),
            None => agg.cells.clone(),
        };
        let data = Exportable::Cells {
            group_by: &agg.group_by,
            cells: &cells,
        };
        render_aggregates(&data, &graph, args.format)
    };

    let mut out = Output::open(args.out.as_deref())?;
    out.write_all(text.as_bytes())?;
    if args.out.is_none() && args.format == ExportFormat::Json {
        out.write_all(b"\n")?;
    }
    out.finish()?;
    eprintln!("{}", coverage_report(&inst, &graph));
    Ok(())
}
