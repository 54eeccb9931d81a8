//! Grouped prescription counts, year-over-year trends and threshold filters.
//!
//! A record counts toward a cell once, identified by its `record_id`. When
//! `ingredient` is among the grouping keys a record contributes to each of its
//! ingredients. Records whose string rolls up to no ingredient are not
//! counted at all.

mod census;
mod export;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::emr::EmrRecord;
use crate::graph::NodeId;
use crate::par::Execution;

pub use census::{census_region, CensusRegion, STATE_REGIONS};
pub use export::{export_aggregates, render_aggregates, ExportFormat, Exportable};

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("group-by needs at least one key")]
    EmptyGroupBy,
    #[error(
        "unknown group-by key {0:?} (expected ingredient, state, subregion, census_region or year)"
    )]
    UnknownKey(String),
    #[error("trends need year among the group-by keys")]
    YearNotGrouped,
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A grouping key. The declaration order is the canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKey {
    Ingredient,
    State,
    Subregion,
    CensusRegion,
    Year,
}

impl GroupKey {
    pub const ALL: [GroupKey; 5] = [
        GroupKey::Ingredient,
        GroupKey::State,
        GroupKey::Subregion,
        GroupKey::CensusRegion,
        GroupKey::Year,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupKey::Ingredient => "ingredient",
            GroupKey::State => "state",
            GroupKey::Subregion => "subregion",
            GroupKey::CensusRegion => "census_region",
            GroupKey::Year => "year",
        }
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupKey {
    type Err = AnalyticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupKey::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| AnalyticsError::UnknownKey(s.to_string()))
    }
}

/// Parses a comma-separated key list such as `ingredient,state,year`.
pub fn parse_group_by(s: &str) -> Result<BTreeSet<GroupKey>, AnalyticsError> {
    let keys = s
        .split(',')
        .map(str::trim)
        .filter(|k| !k.is_empty())
        .map(str::parse)
        .collect::<Result<BTreeSet<_>, _>>()?;
    if keys.is_empty() {
        return Err(AnalyticsError::EmptyGroupBy);
    }
    Ok(keys)
}

/// The grouping fields of a cell. Fields outside the grouping are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellKey {
    pub ingredient: Option<NodeId>,
    pub state: Option<String>,
    pub subregion: Option<String>,
    pub census_region: Option<CensusRegion>,
    pub year: Option<i32>,
}

impl CellKey {
    fn of(record: &EmrRecord, ingredient: Option<NodeId>, group_by: &BTreeSet<GroupKey>) -> Self {
        let has = |k| group_by.contains(&k);
        CellKey {
            ingredient: ingredient.filter(|_| has(GroupKey::Ingredient)),
            state: has(GroupKey::State).then(|| record.state.clone()),
            subregion: has(GroupKey::Subregion).then(|| record.subregion.clone()),
            census_region: if has(GroupKey::CensusRegion) {
                census_region(&record.state)
            } else {
                None
            },
            year: has(GroupKey::Year).then_some(record.year),
        }
    }

    fn without_year(&self) -> CellKey {
        CellKey {
            year: None,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateCell {
    pub key: CellKey,
    pub unique_prescriptions: usize,
}

/// The cells of one aggregation, sorted by key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregate {
    pub group_by: BTreeSet<GroupKey>,
    pub cells: Vec<AggregateCell>,
}

/// Counts distinct records per key combination.
///
/// `record_ingredients` maps a record id to its ingredient nodes; records
/// missing from it have no ingredients.
pub fn aggregate(
    records: &[EmrRecord],
    record_ingredients: &BTreeMap<String, BTreeSet<NodeId>>,
    group_by: &BTreeSet<GroupKey>,
    exec: Execution,
) -> Result<Aggregate, AnalyticsError> {
    if group_by.is_empty() {
        return Err(AnalyticsError::EmptyGroupBy);
    }
    let empty = BTreeSet::new();
    let by_ingredient = group_by.contains(&GroupKey::Ingredient);
    let keys: Vec<Vec<CellKey>> = exec.map(records, |r| {
        let ingredients = record_ingredients.get(&r.record_id).unwrap_or(&empty);
        if ingredients.is_empty() {
            Vec::new()
        } else if by_ingredient {
            ingredients
                .iter()
                .map(|&g| CellKey::of(r, Some(g), group_by))
                .collect()
        } else {
            vec![CellKey::of(r, None, group_by)]
        }
    });
    let mut ids: BTreeMap<CellKey, BTreeSet<&str>> = BTreeMap::new();
    for (r, ks) in records.iter().zip(keys) {
        for k in ks {
            ids.entry(k).or_default().insert(r.record_id.as_str());
        }
    }
    Ok(Aggregate {
        group_by: group_by.clone(),
        cells: ids
            .into_iter()
            .map(|(key, set)| AggregateCell {
                key,
                unique_prescriptions: set.len(),
            })
            .collect(),
    })
}

/// Cells with a count strictly above `min_count`, order preserved.
pub fn filter_threshold(cells: &[AggregateCell], min_count: usize) -> Vec<AggregateCell> {
    cells
        .iter()
        .filter(|c| c.unique_prescriptions > min_count)
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub key: CellKey,
    pub count: usize,
    /// Change from the previous year present in the series, if any.
    pub delta: Option<i64>,
}

/// One series per key without the year, each sorted by year.
///
/// Missing years are not filled in. The delta after a gap compares against
/// the last year that is present.
pub fn trend_series(agg: &Aggregate) -> Result<Vec<TrendPoint>, AnalyticsError> {
    if !agg.group_by.contains(&GroupKey::Year) {
        return Err(AnalyticsError::YearNotGrouped);
    }
    let mut series: BTreeMap<CellKey, BTreeMap<i32, usize>> = BTreeMap::new();
    for c in &agg.cells {
        let year = c.key.year.expect("year is grouped");
        *series
            .entry(c.key.without_year())
            .or_default()
            .entry(year)
            .or_default() += c.unique_prescriptions;
    }
    let mut out = Vec::new();
    for (key, years) in series {
        let mut prev: Option<usize> = None;
        for (year, count) in years {
            out.push(TrendPoint {
                key: CellKey {
                    year: Some(year),
                    ..key.clone()
                },
                count,
                delta: prev.map(|p| count as i64 - p as i64),
            });
            prev = Some(count);
        }
    }
    Ok(out)
}
