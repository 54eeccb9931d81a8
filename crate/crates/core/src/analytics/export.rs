use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::Value;

use super::{AggregateCell, AnalyticsError, CellKey, GroupKey, TrendPoint};
use crate::graph::OdkgGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// Rows that can be exported, with the grouping they came from.
#[derive(Debug, Clone, Copy)]
pub enum Exportable<'a> {
    Cells {
        group_by: &'a BTreeSet<GroupKey>,
        cells: &'a [AggregateCell],
    },
    Trend {
        group_by: &'a BTreeSet<GroupKey>,
        points: &'a [TrendPoint],
    },
}

struct Row(Vec<(&'static str, Value)>);

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn key_fields(
    key: &CellKey,
    group_by: &BTreeSet<GroupKey>,
    graph: &OdkgGraph,
) -> Vec<(&'static str, Value)> {
    group_by
        .iter()
        .map(|&k| {
            let v = match k {
                GroupKey::Ingredient => key
                    .ingredient
                    .and_then(|id| graph.node(id).ok())
                    .map_or(Value::Null, |n| Value::from(n.label.clone())),
                GroupKey::State => key.state.clone().map_or(Value::Null, Value::from),
                GroupKey::Subregion => key.subregion.clone().map_or(Value::Null, Value::from),
                GroupKey::CensusRegion => key
                    .census_region
                    .map_or(Value::Null, |r| Value::from(r.to_string())),
                GroupKey::Year => key.year.map_or(Value::Null, Value::from),
            };
            (k.as_str(), v)
        })
        .collect()
}

impl Exportable<'_> {
    fn header(&self) -> Vec<&'static str> {
        match self {
            Exportable::Cells { group_by, .. } => group_by
                .iter()
                .map(|k| k.as_str())
                .chain(["unique_prescriptions"])
                .collect(),
            Exportable::Trend { group_by, .. } => group_by
                .iter()
                .map(|k| k.as_str())
                .chain(["count", "delta"])
                .collect(),
        }
    }

    fn rows(&self, graph: &OdkgGraph) -> Vec<Row> {
        match self {
            Exportable::Cells { group_by, cells } => cells
                .iter()
                .map(|c| {
                    let mut f = key_fields(&c.key, group_by, graph);
                    f.push(("unique_prescriptions", Value::from(c.unique_prescriptions)));
                    Row(f)
                })
                .collect(),
            Exportable::Trend { group_by, points } => points
                .iter()
                .map(|p| {
                    let mut f = key_fields(&p.key, group_by, graph);
                    f.push(("count", Value::from(p.count)));
                    f.push(("delta", p.delta.map_or(Value::Null, Value::from)));
                    Row(f)
                })
                .collect(),
        }
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders rows as CSV (header included) or as a JSON array, in input order.
pub fn render_aggregates(data: &Exportable, graph: &OdkgGraph, format: ExportFormat) -> String {
    let rows = data.rows(graph);
    match format {
        ExportFormat::Json => serde_json::to_string(&rows).expect("rows serialize"),
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(data.header()).expect("in-memory write");
            for r in &rows {
                w.write_record(r.0.iter().map(|(_, v)| csv_field(v)))
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
        }
    }
}

pub fn export_aggregates(
    data: &Exportable,
    graph: &OdkgGraph,
    path: impl AsRef<Path>,
    format: ExportFormat,
) -> Result<(), AnalyticsError> {
    let path = path.as_ref();
    std::fs::write(path, render_aggregates(data, graph, format)).map_err(|source| {
        AnalyticsError::Io {
            path: path.to_path_buf(),
            source,
        }
    })
}
