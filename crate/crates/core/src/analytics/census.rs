use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CensusRegion {
    Northeast,
    Midwest,
    South,
    West,
}

impl fmt::Display for CensusRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

use CensusRegion::*;

/// The 50 states and DC with their census region.
pub const STATE_REGIONS: [(&str, CensusRegion); 51] = [
    ("AK", West),
    ("AL", South),
    ("AR", South),
    ("AZ", West),
    ("CA", West),
    ("CO", West),
    ("CT", Northeast),
    ("DC", South),
    ("DE", South),
    ("FL", South),
    ("GA", South),
    ("HI", West),
    ("IA", Midwest),
    ("ID", West),
    ("IL", Midwest),
    ("IN", Midwest),
    ("KS", Midwest),
    ("KY", South),
    ("LA", South),
    ("MA", Northeast),
    ("MD", South),
    ("ME", Northeast),
    ("MI", Midwest),
    ("MN", Midwest),
    ("MO", Midwest),
    ("MS", South),
    ("MT", West),
    ("NC", South),
    ("ND", Midwest),
    ("NE", Midwest),
    ("NH", Northeast),
    ("NJ", Northeast),
    ("NM", West),
    ("NV", West),
    ("NY", Northeast),
    ("OH", Midwest),
    ("OK", South),
    ("OR", West),
    ("PA", Northeast),
    ("RI", Northeast),
    ("SC", South),
    ("SD", Midwest),
    ("TN", South),
    ("TX", South),
    ("UT", West),
    ("VA", South),
    ("VT", Northeast),
    ("WA", West),
    ("WI", Midwest),
    ("WV", South),
    ("WY", West),
];

pub fn census_region(state: &str) -> Option<CensusRegion> {
    STATE_REGIONS
        .binary_search_by(|(s, _)| (*s).cmp(state))
        .ok()
        .map(|i| STATE_REGIONS[i].1)
}
