//! JSON catalog interchange format.
//!
//! A catalog is a JSON array of ring records. Structure constants are nested
//! `N[a-1][b-1][c-1] = N_{ab}^c` and the dual map is 1-based, matching the
//! in-memory convention.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::ring::FusionRing;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingRecord {
    pub rank: usize,
    pub dual: Vec<usize>,
    #[serde(rename = "N")]
    pub n: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl RingRecord {
    pub fn from_ring(ring: &FusionRing, name: Option<String>) -> RingRecord {
        let r = ring.rank();
        RingRecord {
            rank: r,
            dual: ring.dual_map().to_vec(),
            n: (1..=r)
                .map(|a| (1..=r).map(|b| (1..=r).map(|c| ring.n(a, b, c)).collect()).collect())
                .collect(),
            name,
        }
    }

    pub fn to_ring(&self) -> Result<FusionRing> {
        FusionRing::new(self.rank, &self.n, &self.dual)
    }
}

pub fn read_catalog(reader: impl Read) -> Result<Vec<RingRecord>> {
    serde_json::from_reader(reader)
        .map_err(|e| FusionError::Shape(format!("catalog parse error: {e}")))
}

/// Serialise deterministically (pretty, stable field order, trailing
/// newline) so identical catalogs are byte-identical.
pub fn write_catalog(mut writer: impl Write, records: &[RingRecord]) -> Result<()> {
    let body = serde_json::to_string_pretty(records)
        .map_err(|e| FusionError::Shape(format!("catalog serialise error: {e}")))?;
    writer
        .write_all(body.as_bytes())
        .and_then(|_| writer.write_all(b"\n"))
        .map_err(|e| FusionError::Shape(format!("catalog write error: {e}")))
}
