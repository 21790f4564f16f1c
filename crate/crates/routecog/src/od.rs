//! Origin-destination demand matrices and their text format.
//!
//! The format is line-oriented and diff-friendly: lines starting with `*`
//! are comments, the first data line is the zone count `Z`, the second the
//! `Z` zone ids, followed by `Z` rows of `Z` whitespace-separated
//! non-negative demand values (vehicles per hour). [`write_od`] emits a
//! canonical form that parses back to the identical matrix.

use std::fmt::Write as _;

use thiserror::Error;

use crate::network::Network;

/// A square demand matrix over an ordered zone list, vehicles per hour.
#[derive(Clone, Debug, PartialEq)]
pub struct OdMatrix {
    zone_ids: Vec<String>,
    demand: Vec<Vec<f64>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum OdError {
    #[error("od line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("od matrix: duplicate zone id {0}")]
    DuplicateZone(String),
    #[error("od matrix: negative entry at row {row}, column {col}")]
    NegativeEntry { row: String, col: String },
    #[error("od matrix: non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: String, col: String },
    #[error("od matrix: nonzero diagonal entry for zone {0}")]
    NonzeroDiagonal(String),
    #[error("od matrix: zone {0} is not part of the network")]
    UnknownZone(String),
}

impl OdMatrix {
    /// Builds a matrix, enforcing squareness, a zero diagonal and
    /// non-negative finite entries.
    pub fn new(zone_ids: Vec<String>, demand: Vec<Vec<f64>>) -> Result<OdMatrix, OdError> {
        let n = zone_ids.len();
        for (i, id) in zone_ids.iter().enumerate() {
            if zone_ids[..i].contains(id) {
                return Err(OdError::DuplicateZone(id.clone()));
            }
        }
        assert_eq!(demand.len(), n, "demand must have one row per zone");
        for (r, row) in demand.iter().enumerate() {
            assert_eq!(row.len(), n, "demand row {r} must have one entry per zone");
            for (c, &value) in row.iter().enumerate() {
                if !value.is_finite() {
                    return Err(OdError::NonFiniteEntry {
                        row: zone_ids[r].clone(),
                        col: zone_ids[c].clone(),
                    });
                }
                if value < 0.0 {
                    return Err(OdError::NegativeEntry {
                        row: zone_ids[r].clone(),
                        col: zone_ids[c].clone(),
                    });
                }
                if r == c && value != 0.0 {
                    return Err(OdError::NonzeroDiagonal(zone_ids[r].clone()));
                }
            }
        }
        Ok(OdMatrix { zone_ids, demand })
    }

    pub fn zone_ids(&self) -> &[String] {
        &self.zone_ids
    }

    pub fn len(&self) -> usize {
        self.zone_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zone_ids.is_empty()
    }

    /// Demand by zone positions in `zone_ids` order.
    pub fn demand_at(&self, origin: usize, dest: usize) -> f64 {
        self.demand[origin][dest]
    }

    /// Demand between two zone ids, if both are known.
    pub fn demand_between(&self, origin: &str, dest: &str) -> Option<f64> {
        let o = self.zone_ids.iter().position(|z| z == origin)?;
        let d = self.zone_ids.iter().position(|z| z == dest)?;
        Some(self.demand[o][d])
    }

    /// All ordered zone pairs with their demand, in matrix order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str, f64)> + '_ {
        self.zone_ids.iter().enumerate().flat_map(move |(o, oid)| {
            self.zone_ids
                .iter()
                .enumerate()
                .filter(move |(d, _)| o != *d)
                .map(move |(d, did)| (oid.as_str(), did.as_str(), self.demand[o][d]))
        })
    }

    pub fn total_demand(&self) -> f64 {
        self.demand.iter().flatten().sum()
    }

    /// Checks that every zone id resolves in the network.
    pub fn cross_check(&self, network: &Network) -> Result<(), OdError> {
        for id in &self.zone_ids {
            if network.zone(id).is_none() {
                return Err(OdError::UnknownZone(id.clone()));
            }
        }
        Ok(())
    }
}

/// Parses the OD text format described in the module docs.
pub fn parse_od(source: &str) -> Result<OdMatrix, OdError> {
    let mut data_lines = source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('*'));

    let (line_no, count_line) = data_lines.next().ok_or_else(|| OdError::Parse {
        line: 0,
        message: "empty document".to_string(),
    })?;
    let n: usize = count_line.parse().map_err(|_| OdError::Parse {
        line: line_no,
        message: format!("expected zone count, found {count_line:?}"),
    })?;
    if n == 0 {
        return Err(OdError::Parse {
            line: line_no,
            message: "zone count must be positive".to_string(),
        });
    }

    let (line_no, id_line) = data_lines.next().ok_or_else(|| OdError::Parse {
        line: line_no,
        message: "missing zone id line".to_string(),
    })?;
    let zone_ids: Vec<String> = id_line.split_whitespace().map(str::to_string).collect();
    if zone_ids.len() != n {
        return Err(OdError::Parse {
            line: line_no,
            message: format!("expected {n} zone ids, found {}", zone_ids.len()),
        });
    }

    let mut demand = Vec::with_capacity(n);
    for zone_id in &zone_ids {
        let (line_no, row_line) = data_lines.next().ok_or_else(|| OdError::Parse {
            line: 0,
            message: format!("missing demand row for zone {zone_id}"),
        })?;
        let mut values = Vec::with_capacity(n);
        for field in row_line.split_whitespace() {
            let value: f64 = field.parse().map_err(|_| OdError::Parse {
                line: line_no,
                message: format!("expected a number, found {field:?}"),
            })?;
            values.push(value);
        }
        if values.len() != n {
            return Err(OdError::Parse {
                line: line_no,
                message: format!("expected {n} entries, found {}", values.len()),
            });
        }
        demand.push(values);
    }
    if let Some((line_no, extra)) = data_lines.next() {
        return Err(OdError::Parse {
            line: line_no,
            message: format!("unexpected trailing data {extra:?}"),
        });
    }

    OdMatrix::new(zone_ids, demand)
}

/// Canonical text form; `parse_od(write_od(m)) == m` exactly.
pub fn write_od(matrix: &OdMatrix) -> String {
    let mut out = String::new();
    out.push_str("* od matrix (vehicles per hour)\n");
    let _ = writeln!(out, "{}", matrix.len());
    out.push_str(&matrix.zone_ids.join(" "));
    out.push('\n');
    for row in &matrix.demand {
        let fields: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

/// Raw text of the bundled flat-period demand table.
pub const FIXTURE_OD_TEXT: &str = include_str!("../data/fixture_od_flat.fma");

/// The bundled flat-period demand table for the fixture network.
pub fn fixture_od() -> OdMatrix {
    parse_od(FIXTURE_OD_TEXT).expect("bundled od table is valid")
}
