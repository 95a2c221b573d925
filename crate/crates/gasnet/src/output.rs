//! CSV and JSON writers. Both are deterministic: identical records give
//! identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::records::{RunOutput, SnapshotRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub const SNAPSHOTS_CSV: &str = "snapshots.csv";
pub const SNAPSHOTS_JSON: &str = "snapshots.json";
pub const SUMMARY_JSON: &str = "summary.json";

#[derive(Serialize)]
struct Row<'a> {
    t: f64,
    pipe: &'a str,
    x: f64,
    rho: f64,
    q: f64,
    #[serde(rename = "E")]
    energy: Option<f64>,
    p: f64,
    u: f64,
    s: f64,
    h: f64,
    c: f64,
}

const HEADER: [&str; 11] = ["t", "pipe", "x", "rho", "q", "E", "p", "u", "s", "h", "c"];

/// One row per (time, pipe, grid point); `E` is empty for isentropic pipes.
pub fn write_csv<W: std::io::Write>(records: &[SnapshotRecord], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        for p in &r.pipes {
            for s in &p.samples {
                w.serialize(Row {
                    t: r.time,
                    pipe: &p.pipe,
                    x: s.x,
                    rho: s.rho,
                    q: s.q,
                    energy: s.energy,
                    p: s.p,
                    u: s.u,
                    s: s.s,
                    h: s.h,
                    c: s.c,
                })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn to_json(records: &[SnapshotRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn from_json(text: &str) -> serde_json::Result<Vec<SnapshotRecord>> {
    serde_json::from_str(text)
}

fn write_file(path: PathBuf, bytes: &[u8]) -> Result<PathBuf> {
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes the snapshots in `format` and the summary as JSON into `dir`,
/// returning the paths written.
pub fn write_outputs(dir: &Path, output: &RunOutput, format: Format) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let snapshots = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&output.records, &mut buf).map_err(|e| Error::Format {
                path: dir.join(SNAPSHOTS_CSV),
                message: e.to_string(),
            })?;
            write_file(dir.join(SNAPSHOTS_CSV), &buf)?
        }
        Format::Json => write_file(
            dir.join(SNAPSHOTS_JSON),
            to_json(&output.records).as_bytes(),
        )?,
    };
    let summary = serde_json::to_string_pretty(&output.summary).expect("summary serializes");
    let summary = write_file(dir.join(SUMMARY_JSON), summary.as_bytes())?;
    Ok(vec![snapshots, summary])
}

pub fn read_records(path: &Path) -> Result<Vec<SnapshotRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::{Diagnostics, PipeSnapshot, Sample};

    fn sample(x: f64, energy: Option<f64>) -> Sample {
        Sample {
            x,
            rho: 1.0,
            q: 0.25,
            energy,
            p: 1.0 / 3.0,
            u: 0.25,
            s: 0.1,
            h: 3.5,
            c: 1.1,
        }
    }

    fn record(points: usize) -> SnapshotRecord {
        let pipe = |id: &str, energy| PipeSnapshot {
            pipe: id.into(),
            trace: sample(0.0, energy),
            samples: (0..points).map(|k| sample(k as f64 / 9.0, energy)).collect(),
        };
        SnapshotRecord {
            time: 0.5,
            pipes: vec![pipe("a", Some(2.5)), pipe("b", None)],
            diagnostics: Diagnostics {
                glimm: Some(0.125),
                fronts: Some(4),
                ..Diagnostics::default()
            },
        }
    }

    fn csv_text(records: &[SnapshotRecord]) -> String {
        let mut buf = Vec::new();
        write_csv(records, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_stream_gives_header_only() {
        assert_eq!(csv_text(&[]), "t,pipe,x,rho,q,E,p,u,s,h,c\n");
    }

    #[test]
    fn one_row_per_pipe_and_grid_point() {
        let text = csv_text(&[record(10)]);
        assert_eq!(text.lines().count(), 21);
        let iso_row = text.lines().last().unwrap();
        assert!(iso_row.contains(",b,") && iso_row.contains(",,"), "{iso_row}");
    }

    #[test]
    fn json_round_trip_is_exact() {
        let records = vec![record(3), record(1)];
        assert_eq!(from_json(&to_json(&records)).unwrap(), records);
    }
}
