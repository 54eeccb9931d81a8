use std::path::PathBuf;

use clap::{Args, Subcommand};
use odkg::graph::graph_stats;
use odkg::terminology::Source;
use odkg::{EdgeKind, Node, NodeId, NodeKind, OdkgGraph, SourceCode};
use serde::Serialize;

use crate::error::CliError;
use crate::{load_graph, Output};

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(subcommand)]
    query: Query,
}

#[derive(Debug, Subcommand)]
enum Query {
    /// All transitive ATC subclasses of a class, excluding the class itself.
    Descendants(NodeQuery),
    /// Direct outgoing relations of a node.
    Hops {
        #[command(flatten)]
        q: NodeQuery,
        /// Only relations of this kind, e.g. has_tradename.
        #[arg(long)]
        rel: Option<EdgeKind>,
    },
    /// Generic ingredients an RxNorm node rolls up to.
    Rollup(NodeQuery),
    /// Node and edge counts.
    Stats(GraphArg),
}

#[derive(Debug, Args)]
struct GraphArg {
    /// Graph JSON written by `odkg build`.
    #[arg(long)]
    graph: PathBuf,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "selector")]
struct Selector {
    /// Node label. Exact match first, then case-insensitive.
    #[arg(long)]
    node: Option<String>,
    /// Source code such as ATC:N02A or RXNORM:7052. A bare code is tried in
    /// ATC and then RxNorm.
    #[arg(long)]
    code: Option<String>,
}

#[derive(Debug, Args)]
struct NodeQuery {
    #[command(flatten)]
    graph: GraphArg,
    #[command(flatten)]
    selector: Selector,
}

#[derive(Serialize)]
struct Hop<'a> {
    rel: EdgeKind,
    node: &'a Node,
}

fn resolve(
    graph: &OdkgGraph,
    sel: &Selector,
    fits: impl Fn(NodeKind) -> bool,
) -> Result<NodeId, CliError> {
    let candidates: Vec<NodeId> = if let Some(label) = &sel.node {
        graph.nodes_by_label(label)
    } else {
        let code = sel.code.as_deref().unwrap_or_default();
        if code.contains(':') {
            let code: SourceCode = code.parse().map_err(CliError::input)?;
            graph.node_by_code(&code).into_iter().collect()
        } else {
            [Source::Atc, Source::RxNorm]
                .into_iter()
                .filter_map(|s| SourceCode::new(s, code).ok())
                .filter_map(|c| graph.node_by_code(&c))
                .collect()
        }
    };
    let wanted = sel
        .node
        .as_deref()
        .or(sel.code.as_deref())
        .unwrap_or_default();
    let fitting: Vec<NodeId> = candidates
        .iter()
        .copied()
        .filter(|&id| graph.node(id).is_ok_and(|n| fits(n.kind)))
        .collect();
    match (fitting.as_slice(), candidates.as_slice()) {
        ([one], _) => Ok(*one),
        ([], []) => Err(CliError::input(format!("no node matches {wanted:?}"))),
        ([], [first, ..]) => {
            let n = graph.node(*first)?;
            Err(CliError::input(format!(
                "{wanted:?} is a {} node, which this query does not accept",
                n.kind
            )))
        }
        (many, _) => {
            let list: Vec<String> = many.iter().map(|&id| describe(graph, id)).collect();
            Err(CliError::input(format!(
                "{wanted:?} is ambiguous; use --code with one of: {}",
                list.join(", ")
            )))
        }
    }
}

fn describe(graph: &OdkgGraph, id: NodeId) -> String {
    let n = &graph.nodes()[id.index()];
    match n.codes.first() {
        Some(c) => c.to_string(),
        None => n.cui.clone().unwrap_or_else(|| id.to_string()),
    }
}

fn node_line(graph: &OdkgGraph, id: NodeId) -> String {
    let n = &graph.nodes()[id.index()];
    format!("{}\t{}\t{}", describe(graph, id), n.kind, n.label)
}

fn json_lines<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("query output serializes");
    s.push('\n');
    s
}

fn render_nodes(graph: &OdkgGraph, ids: &[NodeId], json: bool) -> String {
    if json {
        let nodes: Vec<&Node> = ids.iter().map(|&id| &graph.nodes()[id.index()]).collect();
        return json_lines(&nodes);
    }
    ids.iter().map(|&id| node_line(graph, id) + "\n").collect()
}

fn by_label(graph: &OdkgGraph, ids: impl IntoIterator<Item = NodeId>) -> Vec<NodeId> {
    let mut v: Vec<NodeId> = ids.into_iter().collect();
    v.sort_by(|a, b| {
        let (na, nb) = (&graph.nodes()[a.index()], &graph.nodes()[b.index()]);
        (&na.label, a).cmp(&(&nb.label, b))
    });
    v
}

pub fn run(args: QueryArgs) -> Result<(), CliError> {
    let text = match &args.query {
        Query::Descendants(q) => {
            let graph = load_graph(&q.graph.graph)?;
            let root = resolve(&graph, &q.selector, |k| k == NodeKind::AtcClass)?;
            let ids = by_label(&graph, graph.descendants(root)?);
            render_nodes(&graph, &ids, q.graph.json)
        }
        Query::Rollup(q) => {
            let graph = load_graph(&q.graph.graph)?;
            let node = resolve(&graph, &q.selector, NodeKind::is_rxnorm)?;
            let ids = by_label(&graph, graph.roll_up_to_ingredients(node)?);
            render_nodes(&graph, &ids, q.graph.json)
        }
        Query::Hops { q, rel } => {
            let graph = load_graph(&q.graph.graph)?;
            let node = resolve(&graph, &q.selector, |k| k != NodeKind::CuiHub)?;
            let hops = graph.first_degree_hops(node, *rel)?;
            let text = if q.graph.json {
                let hops: Vec<Hop> = hops
                    .iter()
                    .map(|&(rel, id)| Hop {
                        rel,
                        node: &graph.nodes()[id.index()],
                    })
                    .collect();
                json_lines(&hops)
            } else {
                hops.iter()
                    .map(|&(rel, id)| format!("{rel}\t{}\n", node_line(&graph, id)))
                    .collect()
            };
            text
        }
        Query::Stats(g) => {
            let graph = load_graph(&g.graph)?;
            let stats = graph_stats(&graph);
            if g.json {
                json_lines(&stats)
            } else {
                format!("{stats}\n")
            }
        }
    };
    let mut out = Output::open(None)?;
    out.write_all(text.as_bytes())?;
    out.finish()
}
