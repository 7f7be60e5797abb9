//! Trajectory CSV files.
//!
//! One row per recorded sample. Floats are written with 17 significant digits
//! so a file reloads bit-identically. A row starting with `#` marks an aborted
//! run and is skipped by the reader.

use std::io::{Read, Write};

use thiserror::Error;

use crate::dynamics::Trajectory;

pub const AGENT_FIELDS: [&str; 11] = [
    "theta", "x", "y", "mu1", "mu2", "mu3", "alpha1", "alpha2", "alpha3", "u1", "u2",
];
pub const TRAILING_FIELDS: [&str; 3] = ["h", "min_pair_dist", "min_obs_clearance"];

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
}

/// A trajectory as a numeric table.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryTable {
    pub agent_ids: Vec<u32>,
    pub rows: Vec<Vec<f64>>,
    /// Text of the abort marker row, if one was present.
    pub abort_note: Option<String>,
}

pub fn header(ids: &[u32]) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for id in ids {
        h.extend(AGENT_FIELDS.iter().map(|f| format!("{f}_{id}")));
    }
    h.extend(TRAILING_FIELDS.iter().map(|f| f.to_string()));
    h
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl TrajectoryTable {
    pub fn from_trajectory(ids: &[u32], traj: &Trajectory) -> Self {
        let rows = traj
            .samples
            .iter()
            .map(|s| {
                let mut row = vec![s.t];
                for (a, u) in s.agents.iter().zip(&s.controls) {
                    row.extend([a.g.theta(), a.g.x, a.g.y]);
                    row.extend(a.mu.to_array());
                    row.extend(a.alpha.to_array());
                    row.extend([u.a, u.v1]);
                }
                row.extend([s.hamiltonian, s.min_pair_dist, s.min_obs_clearance]);
                row
            })
            .collect();
        Self {
            agent_ids: ids.to_vec(),
            rows,
            abort_note: None,
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = header(&self.agent_ids).iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// `(x, y)` path of the `k`-th agent in column order.
    pub fn path(&self, k: usize) -> Vec<(f64, f64)> {
        let base = 1 + k * AGENT_FIELDS.len();
        self.rows.iter().map(|r| (r[base + 1], r[base + 2])).collect()
    }

    pub fn write<W: Write>(&self, out: W) -> Result<(), RecordError> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        w.write_record(header(&self.agent_ids))?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_float(*v)))?;
        }
        if let Some(note) = &self.abort_note {
            w.write_record([format!("# aborted: {note}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(input: R) -> Result<Self, RecordError> {
        let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(input);
        let head: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let agent_ids = parse_header(&head)?;
        let width = head.len();
        let mut rows = Vec::new();
        let mut abort_note = None;
        for rec in r.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.get(0).is_some_and(|f| f.starts_with('#')) {
                let text = rec.iter().collect::<Vec<_>>().join(",");
                let text = text.trim_start_matches('#').trim();
                abort_note = Some(text.strip_prefix("aborted:").unwrap_or(text).trim().to_string());
                continue;
            }
            if rec.len() != width {
                return Err(RecordError::Parse {
                    line,
                    message: format!("expected {width} fields, found {}", rec.len()),
                });
            }
            let row = rec
                .iter()
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|_| RecordError::Parse {
                        line,
                        message: format!("not a number: '{f}'"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Self {
            agent_ids,
            rows,
            abort_note,
        })
    }
}

fn parse_header(head: &[String]) -> Result<Vec<u32>, RecordError> {
    let bad = |message: String| RecordError::Parse { line: 1, message };
    let n_agent_cols = head
        .len()
        .checked_sub(1 + TRAILING_FIELDS.len())
        .filter(|n| n % AGENT_FIELDS.len() == 0 && head[0] == "t")
        .ok_or_else(|| bad("unrecognised trajectory header".into()))?;
    let mut ids = Vec::new();
    for chunk in head[1..1 + n_agent_cols].chunks(AGENT_FIELDS.len()) {
        let id: u32 = chunk[0]
            .strip_prefix("theta_")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(format!("unexpected column '{}'", chunk[0])))?;
        for (name, field) in chunk.iter().zip(AGENT_FIELDS) {
            if *name != format!("{field}_{id}") {
                return Err(bad(format!("unexpected column '{name}'")));
            }
        }
        ids.push(id);
    }
    if head[1 + n_agent_cols..] != TRAILING_FIELDS {
        return Err(bad("missing trailing diagnostic columns".into()));
    }
    Ok(ids)
}

pub fn write_trajectory<W: Write>(
    out: W,
    ids: &[u32],
    traj: &Trajectory,
    abort_note: Option<&str>,
) -> Result<(), RecordError> {
    let mut table = TrajectoryTable::from_trajectory(ids, traj);
    table.abort_note = abort_note.map(str::to_string);
    table.write(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(ids: Vec<u32>, rows: Vec<Vec<f64>>) -> TrajectoryTable {
        TrajectoryTable {
            agent_ids: ids,
            rows,
            abort_note: None,
        }
    }

    #[test]
    fn header_layout() {
        let h = header(&[1, 2]);
        assert_eq!(h.len(), 1 + 22 + 3);
        assert_eq!(h[1], "theta_1");
        assert_eq!(h[12], "theta_2");
        assert_eq!(h[25], "min_obs_clearance");
    }

    #[test]
    fn abort_marker_is_skipped() {
        let mut t = table(vec![7], vec![vec![0.5; 15]]);
        t.abort_note = Some("singularity (pair) at t=0.5".into());
        let mut buf = Vec::new();
        t.write(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().last().unwrap().starts_with("# aborted"));
        assert_eq!(TrajectoryTable::read(&buf[..]).unwrap(), t);
    }

    #[test]
    fn infinite_distance_round_trips() {
        let mut row = vec![0.0; 15];
        row[13] = f64::INFINITY;
        let t = table(vec![1], vec![row]);
        let mut buf = Vec::new();
        t.write(&mut buf).unwrap();
        assert_eq!(TrajectoryTable::read(&buf[..]).unwrap(), t);
    }

    #[test]
    fn bad_number_reports_line() {
        let mut text = header(&[1]).join(",");
        text.push('\n');
        text.push_str(&vec!["1.0"; 15].join(","));
        text.push('\n');
        text.push_str(&["x"; 15].join(","));
        match TrajectoryTable::read(text.as_bytes()) {
            Err(RecordError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(
            agents in 1usize..4,
            data in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 0..200),
        ) {
            let width = 1 + 11 * agents + 3;
            let rows: Vec<Vec<f64>> = data.chunks_exact(width).map(|c| c.to_vec()).collect();
            let t = table((1..=agents as u32).collect(), rows);
            let mut buf = Vec::new();
            t.write(&mut buf).unwrap();
            let back = TrajectoryTable::read(&buf[..]).unwrap();
            prop_assert_eq!(back.agent_ids, t.agent_ids);
            prop_assert_eq!(back.rows.len(), t.rows.len());
            for (a, b) in back.rows.iter().flatten().zip(t.rows.iter().flatten()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
